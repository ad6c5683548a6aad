#ifndef CSITLAB_TESTUTIL_HPP
#define CSITLAB_TESTUTIL_HPP

#include <string>
#include <vector>

#include "csitlab/dmc_state.hpp"
#include "csitlab/rng.hpp"

namespace testutil {

// Dirichlet-ish positive probability vector with entries floored away from
// zero so divergences stay finite.
inline std::vector<double> random_simplex(csitlab::RngStream& rng,
                                          std::size_t size,
                                          double floor = 1e-3) {
    std::vector<double> v(size);
    double sum = 0.0;
    for (auto& x : v) {
        x = rng.next_exponential() + floor;
        sum += x;
    }
    for (auto& x : v) x /= sum;
    // Exact renormalization so the Distribution invariant holds.
    double s2 = 0.0;
    for (std::size_t i = 0; i + 1 < v.size(); ++i) s2 += v[i];
    v.back() = 1.0 - s2;
    return v;
}

inline csitlab::DiscreteChannelSpec random_channel(csitlab::RngStream& rng,
                                                   std::size_t ns, std::size_t nx,
                                                   std::size_t ny) {
    std::vector<std::string> states, inputs, outputs;
    for (std::size_t i = 0; i < ns; ++i) states.push_back("s" + std::to_string(i));
    for (std::size_t i = 0; i < nx; ++i) inputs.push_back("x" + std::to_string(i));
    for (std::size_t i = 0; i < ny; ++i) outputs.push_back("y" + std::to_string(i));

    csitlab::Distribution p_s{random_simplex(rng, ns)};
    std::vector<csitlab::Distribution> kernel;
    for (std::size_t r = 0; r < nx * ns; ++r)
        kernel.emplace_back(random_simplex(rng, ny));
    std::vector<double> cost(nx, 0.0);
    for (std::size_t x = 1; x < nx; ++x) cost[x] = 0.1 + 2.0 * rng.next_unit();
    return csitlab::DiscreteChannelSpec(states, inputs, outputs, p_s, kernel,
                                        cost, 0);
}

inline csitlab::DiscreteChannelSpec fading_demo() {
    using csitlab::Distribution;
    return csitlab::DiscreteChannelSpec(
        {"G", "B"}, {"0", "1"}, {"0", "1"}, Distribution({0.5, 0.5}),
        {Distribution({0.9, 0.1}), Distribution({0.9, 0.1}),
         Distribution({0.1, 0.9}), Distribution({0.9, 0.1})},
        {0.0, 1.0}, 0);
}

} // namespace testutil

#endif
