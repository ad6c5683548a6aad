#include "csitlab/distribution.hpp"

#include <cmath>
#include <limits>
#include <utility>

#include "csitlab/errors.hpp"

namespace csitlab {

namespace {
constexpr double kNormTol = 1e-12;
}

Distribution::Distribution(std::vector<double> probs) : p_(std::move(probs)) {
    if (p_.empty()) throw EmptyError("distribution over empty alphabet");
    double sum = 0.0;
    for (double v : p_) {
        if (!(v >= 0.0)) throw DomainError("negative or NaN probability");
        sum += v;
    }
    if (std::fabs(sum - 1.0) > kNormTol)
        throw DomainError("probabilities sum to " + std::to_string(sum) +
                          ", not 1");
}

Distribution Distribution::from_counts(std::span<const std::int64_t> counts) {
    if (counts.empty()) throw EmptyError("empty count vector");
    std::int64_t total = 0;
    for (std::int64_t c : counts) {
        if (c < 0) throw DomainError("negative count");
        total += c;
    }
    if (total == 0) throw EmptyError("all counts zero");
    std::vector<double> p(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i)
        p[i] = static_cast<double>(counts[i]) / static_cast<double>(total);
    return Distribution(std::move(p));
}

Distribution Distribution::uniform(std::size_t size) {
    if (size == 0) throw EmptyError("empty alphabet");
    return Distribution(std::vector<double>(size, 1.0 / static_cast<double>(size)));
}

double Distribution::entropy() const {
    double h = 0.0;
    for (double v : p_)
        if (v > 0.0) h -= v * std::log(v);
    return h;
}

double Distribution::l1_distance(const Distribution& other) const {
    if (other.size() != size()) throw ShapeError("alphabet size mismatch");
    double d = 0.0;
    for (std::size_t i = 0; i < p_.size(); ++i) d += std::fabs(p_[i] - other.p_[i]);
    return d;
}

double relative_entropy(const Distribution& p, const Distribution& q) {
    if (p.size() != q.size()) throw ShapeError("alphabet size mismatch");
    double d = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] == 0.0) continue;
        if (q[i] == 0.0) return std::numeric_limits<double>::infinity();
        d += p[i] * std::log(p[i] / q[i]);
    }
    // Tiny negative values can appear when p == q up to rounding.
    return d < 0.0 && d > -1e-15 ? 0.0 : d;
}

double binary_entropy(double theta) {
    if (theta < 0.0 || theta > 1.0) throw DomainError("theta outside [0,1]");
    if (theta == 0.0 || theta == 1.0) return 0.0;
    return -theta * std::log(theta) - (1.0 - theta) * std::log(1.0 - theta);
}

} // namespace csitlab
