#include "csitlab/estimate.hpp"

#include <algorithm>
#include <cmath>

#include "csitlab/errors.hpp"

namespace csitlab {

WilsonInterval wilson_interval(std::int64_t successes, std::int64_t trials,
                               double z) {
    if (trials <= 0) throw DomainError("wilson interval needs trials >= 1");
    if (successes < 0 || successes > trials)
        throw DomainError("successes outside [0, trials]");
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half =
        z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    WilsonInterval w;
    w.value = p;
    w.lo = std::max(0.0, center - half);
    w.hi = std::min(1.0, center + half);
    return w;
}

} // namespace csitlab
