#ifndef CSITLAB_CHANNEL_HPP
#define CSITLAB_CHANNEL_HPP

#include <complex>

#include "csitlab/rng.hpp"

namespace csitlab {

using ComplexSample = std::complex<double>;

// Tail family of the squared fading gain |h|^2.
//   RayleighUnit:        |h|^2 ~ Exponential(mean 1)
//   ExponentialMean(m):  |h|^2 ~ Exponential(mean m)
//   Polynomial(n):       P(|h|^2 >= x) = x^-n for x >= 1 (Pareto)
struct FadingTail {
    enum class Kind { RayleighUnit, ExponentialMean, Polynomial };

    Kind kind = Kind::RayleighUnit;
    double mean = 1.0;          // ExponentialMean only
    double tail_exponent = 1.0; // Polynomial only

    static FadingTail rayleigh() { return {}; }
    static FadingTail exponential_mean(double m);
    static FadingTail polynomial(double tail_exponent);
};

// Quality of the transmitter's gain knowledge. The known component g and the
// error f are independent complex Gaussians with variances beta and 1 - beta;
// beta = 1 is perfect knowledge.
struct CsitQuality {
    double beta = 1.0;
    void validate() const;
};

// Inverse-CDF map from a uniform u in (0,1] to a squared-gain draw, so that
// every tail family consumes exactly one uniform per band.
double gain_squared_from_unit(const FadingTail& tail, double u);

double sample_gain_squared(const FadingTail& tail, RngStream& rng);

// P(gain^2 >= x) for the family; the inverse of gain_squared_from_unit.
double tail_exceedance(const FadingTail& tail, double x);

// Circularly symmetric complex Gaussian of unit variance (1/2 per part).
ComplexSample sample_noise(RngStream& rng);

inline ComplexSample apply_channel(ComplexSample x, ComplexSample h,
                                   ComplexSample n) {
    return h * x + n;
}

} // namespace csitlab

#endif
