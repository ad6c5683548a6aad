#include "csitlab/channel.hpp"

#include <cmath>

#include "csitlab/errors.hpp"

namespace csitlab {

FadingTail FadingTail::exponential_mean(double m) {
    if (!(m > 0.0)) throw DomainError("exponential tail mean must be > 0");
    FadingTail t;
    t.kind = Kind::ExponentialMean;
    t.mean = m;
    return t;
}

FadingTail FadingTail::polynomial(double tail_exponent) {
    if (!(tail_exponent > 0.0)) throw DomainError("tail exponent must be > 0");
    FadingTail t;
    t.kind = Kind::Polynomial;
    t.tail_exponent = tail_exponent;
    return t;
}

void CsitQuality::validate() const {
    if (!(beta > 0.0) || beta > 1.0)
        throw DomainError("csit beta must lie in (0, 1]");
}

double gain_squared_from_unit(const FadingTail& tail, double u) {
    switch (tail.kind) {
    case FadingTail::Kind::RayleighUnit:
        return -std::log(u);
    case FadingTail::Kind::ExponentialMean:
        return -tail.mean * std::log(u);
    case FadingTail::Kind::Polynomial:
        return std::pow(u, -1.0 / tail.tail_exponent);
    }
    throw DomainError("unknown tail kind");
}

double sample_gain_squared(const FadingTail& tail, RngStream& rng) {
    return gain_squared_from_unit(tail, rng.next_unit());
}

double tail_exceedance(const FadingTail& tail, double x) {
    switch (tail.kind) {
    case FadingTail::Kind::RayleighUnit:
        return x <= 0.0 ? 1.0 : std::exp(-x);
    case FadingTail::Kind::ExponentialMean:
        return x <= 0.0 ? 1.0 : std::exp(-x / tail.mean);
    case FadingTail::Kind::Polynomial:
        return x <= 1.0 ? 1.0 : std::pow(x, -tail.tail_exponent);
    }
    throw DomainError("unknown tail kind");
}

ComplexSample sample_noise(RngStream& rng) { return rng.next_cnormal(1.0); }

} // namespace csitlab
