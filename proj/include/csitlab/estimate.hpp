#ifndef CSITLAB_ESTIMATE_HPP
#define CSITLAB_ESTIMATE_HPP

#include <cstdint>

namespace csitlab {

struct WilsonInterval {
    double value = 0.0;
    double lo = 0.0;
    double hi = 0.0;

    bool contains(double p) const { return lo <= p && p <= hi; }
};

// 95% Wilson score interval for a binomial proportion.
WilsonInterval wilson_interval(std::int64_t successes, std::int64_t trials,
                               double z = 1.96);

} // namespace csitlab

#endif
