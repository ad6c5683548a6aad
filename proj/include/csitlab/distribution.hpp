#ifndef CSITLAB_DISTRIBUTION_HPP
#define CSITLAB_DISTRIBUTION_HPP

#include <cstdint>
#include <span>
#include <vector>

namespace csitlab {

// Probability vector over a finite alphabet. Construction validates
// nonnegativity and normalization to 1e-12; built from counts it doubles as
// an empirical type.
class Distribution {
public:
    explicit Distribution(std::vector<double> probs);

    static Distribution from_counts(std::span<const std::int64_t> counts);

    // Uniform over an alphabet of the given size.
    static Distribution uniform(std::size_t size);

    std::size_t size() const { return p_.size(); }
    double operator[](std::size_t i) const { return p_[i]; }
    const std::vector<double>& probs() const { return p_; }

    bool operator==(const Distribution& other) const = default;

    // Entropy in nats, with 0 ln 0 = 0.
    double entropy() const;

    double l1_distance(const Distribution& other) const;

private:
    std::vector<double> p_;
};

// D(p || q) in nats. Terms with p(y) = 0 contribute nothing; any y with
// p(y) > 0 and q(y) = 0 makes the divergence +infinity.
double relative_entropy(const Distribution& p, const Distribution& q);

// Binary entropy in nats; H_b(0) = H_b(1) = 0.
double binary_entropy(double theta);

} // namespace csitlab

#endif
