#ifndef CSITLAB_ORACLES_HPP
#define CSITLAB_ORACLES_HPP

#include <cstdint>
#include <vector>

#include "csitlab/dmc_ppm.hpp"
#include "csitlab/dmc_state.hpp"

namespace csitlab {

// Independent brute-force / numerical checks for the main code paths. None
// of them samples: caps are hard errors, because an oracle that falls back
// to Monte Carlo cannot adjudicate Monte Carlo.

struct ExactErrorBreakdown {
    double p_correct = 0.0;
    double p_no_interval = 0.0;
    double p_multi_interval = 0.0;
    double p_cost_overflow = 0.0;
};

// Exact outcome probabilities of the interval code by full enumeration of
// every state and output sequence (|S|^(Mn) * |Y|^(Mn) weighted terms).
ExactErrorBreakdown exact_ppm_error(const DiscreteChannelSpec& chan,
                                    const PpmCodeParams& params,
                                    double cost_cap,
                                    std::uint64_t term_cap = 100000000ull);

struct CostSlopeResult {
    double slope = 0.0;  // extrapolated C(nu)/nu at nu -> 0
    bool divergent = false;
    std::vector<std::pair<double, double>> curve; // (nu, C) points, nu ascending
};

// Cost-constrained Blahut-Arimoto on the equivalent strategy-input channel:
// the Lagrange multiplier is swept geometrically (32 values per decade) to
// trace C(nu); the slope at zero comes from Richardson extrapolation over
// the two smallest-cost points. When cost_grid is nonempty, C(nu) is instead
// evaluated at those costs (multiplier found by bisection).
CostSlopeResult ba_cost_slope(const DiscreteChannelSpec& chan,
                              const std::vector<double>& cost_grid = {},
                              std::uint64_t strategy_cap = 4096,
                              double tol = 1e-10,
                              std::int64_t max_iterations = 100000);

struct WidebandExact {
    double p1_exact = 0.0;   // closed form (1 - 2 ln w / w)^w
    double p2_numeric = 0.0; // quadrature over the chi-square structure
};

// Small-instance reference for the band-energy decoder. The received-energy
// sums collapse onto Gamma laws: noise-only slots are Gamma(w,1), and the
// signal slot is (sqrt(lambda H) + a)^2 + Q with H = Phi + Exp(1),
// a ~ N(0, 1/2), Q ~ Gamma(w - 1/2). Three nested Gauss rules (Laguerre,
// Hermite, generalized Laguerre) evaluate the type-II probability exactly up
// to quadrature error. Rayleigh tail, perfect transmitter knowledge only.
WidebandExact wideband_small_exact(std::int64_t w, std::int64_t T,
                                   double lambda, int nodes = 64);

// Quadrature helpers (Golub-Welsch): nodes and weights for expectations
// under Gamma(alpha+1, 1) and under N(0, 1/2) respectively.
std::vector<std::pair<double, double>> gauss_gen_laguerre(int nodes, double alpha);
std::vector<std::pair<double, double>> gauss_hermite(int nodes);

} // namespace csitlab

#endif
