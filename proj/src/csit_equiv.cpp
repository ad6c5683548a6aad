#include "csitlab/csit_equiv.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "csitlab/errors.hpp"
#include "csitlab/rng.hpp"

namespace csitlab {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSupportTol = 1e-12;
}

void TiltedDesign::validate(const DiscreteChannelSpec& chan) const {
    chan.check_mapping(u);
    if (p_hat.size() != chan.state_count())
        throw ShapeError("p_hat must live on the state alphabet");
    if (!(theta > 0.0) || theta > 1.0)
        throw DomainError("theta must lie in (0, 1]");
    const double tmax = theta_max(p_hat, chan.state_dist());
    if (theta > tmax + 1e-12)
        throw ThetaInfeasibleError("theta " + std::to_string(theta) +
                                   " exceeds min P_S/p_hat = " +
                                   std::to_string(tmax));
}

Distribution tilted_output_dist(const DiscreteChannelSpec& chan,
                                const Distribution& p_hat,
                                const StrategyMapping& u) {
    chan.check_mapping(u);
    if (p_hat.size() != chan.state_count())
        throw ShapeError("p_hat must live on the state alphabet");
    std::vector<double> out(chan.output_count(), 0.0);
    for (std::size_t s = 0; s < chan.state_count(); ++s) {
        const double ps = p_hat[s];
        if (ps == 0.0) continue;
        const Distribution& row = chan.row(static_cast<std::size_t>(u.map[s]), s);
        for (std::size_t y = 0; y < out.size(); ++y) out[y] += ps * row[y];
    }
    return Distribution(std::move(out));
}

namespace {

double tilted_cost(const DiscreteChannelSpec& chan, const Distribution& p_hat,
                   const StrategyMapping& u) {
    double c = 0.0;
    for (std::size_t s = 0; s < chan.state_count(); ++s)
        c += p_hat[s] * chan.cost(static_cast<std::size_t>(u.map[s]));
    return c;
}

} // namespace

double noncausal_rate_per_cost(const DiscreteChannelSpec& chan,
                               const Distribution& p_hat,
                               const StrategyMapping& u) {
    const double cost = tilted_cost(chan, p_hat, u);
    if (!(cost > 0.0)) throw ZeroCostError("tilted design has zero expected cost");
    const Distribution base =
        induced_output_dist(chan, chan.all_zero_mapping());
    const double gain = relative_entropy(tilted_output_dist(chan, p_hat, u), base);
    const double penalty = relative_entropy(p_hat, chan.state_dist());
    if (std::isinf(penalty)) return -kInf; // tilt impossible under the true law
    if (std::isinf(gain)) return kInf;
    return (gain - penalty) / cost;
}

double subinterval_count(double n, const Distribution& p_hat,
                         const Distribution& p_s) {
    if (n < 0.0) throw DomainError("n must be >= 0");
    const double d = relative_entropy(p_hat, p_s);
    return std::exp(n * d); // overflows to +inf naturally
}

double theta_max(const Distribution& p_hat, const Distribution& p_s) {
    if (p_hat.size() != p_s.size()) throw ShapeError("alphabet size mismatch");
    double t = kInf;
    for (std::size_t s = 0; s < p_hat.size(); ++s)
        if (p_hat[s] > kSupportTol) t = std::min(t, p_s[s] / p_hat[s]);
    return std::min(t, 1.0);
}

double causal_rate_per_cost(const DiscreteChannelSpec& chan,
                            const TiltedDesign& design) {
    design.validate(chan);
    const double cost = tilted_cost(chan, design.p_hat, design.u);
    if (!(cost > 0.0)) throw ZeroCostError("tilted design has zero expected cost");
    const Distribution base =
        induced_output_dist(chan, chan.all_zero_mapping());
    const double gain = relative_entropy(
        tilted_output_dist(chan, design.p_hat, design.u), base);
    if (std::isinf(gain)) return kInf;
    return (gain - binary_entropy(design.theta) / design.theta) / cost;
}

namespace {

// All compositions of `resolution` into `parts` nonnegative integers, as
// probability vectors k/resolution.
void enumerate_simplex(std::size_t parts, int resolution,
                       const std::function<void(const std::vector<double>&)>& visit) {
    std::vector<int> comp(parts, 0);
    std::vector<double> point(parts, 0.0);
    const double inv = 1.0 / static_cast<double>(resolution);
    // Odometer over compositions.
    std::function<void(std::size_t, int)> rec = [&](std::size_t idx, int left) {
        if (idx + 1 == parts) {
            comp[idx] = left;
            for (std::size_t i = 0; i < parts; ++i)
                point[i] = static_cast<double>(comp[i]) * inv;
            visit(point);
            return;
        }
        for (int k = 0; k <= left; ++k) {
            comp[idx] = k;
            rec(idx + 1, left - k);
        }
    };
    rec(0, resolution);
}

struct Candidate {
    std::vector<double> p_hat;
    double value = -kInf;
};

double objective(const DiscreteChannelSpec& chan, const StrategyMapping& u,
                 const Distribution& base, const std::vector<double>& p_hat_raw) {
    double cost = 0.0;
    for (std::size_t s = 0; s < chan.state_count(); ++s)
        cost += p_hat_raw[s] * chan.cost(static_cast<std::size_t>(u.map[s]));
    if (!(cost > 0.0)) return -kInf;

    std::vector<double> out(chan.output_count(), 0.0);
    for (std::size_t s = 0; s < chan.state_count(); ++s) {
        if (p_hat_raw[s] == 0.0) continue;
        const Distribution& row = chan.row(static_cast<std::size_t>(u.map[s]), s);
        for (std::size_t y = 0; y < out.size(); ++y)
            out[y] += p_hat_raw[s] * row[y];
    }
    double gain = 0.0;
    for (std::size_t y = 0; y < out.size(); ++y) {
        if (out[y] == 0.0) continue;
        if (base[y] == 0.0) return kInf;
        gain += out[y] * std::log(out[y] / base[y]);
    }
    double penalty = 0.0;
    for (std::size_t s = 0; s < chan.state_count(); ++s) {
        if (p_hat_raw[s] == 0.0) continue;
        if (chan.state_dist()[s] == 0.0) return -kInf;
        penalty += p_hat_raw[s] * std::log(p_hat_raw[s] / chan.state_dist()[s]);
    }
    return (gain - penalty) / cost;
}

// Coordinate-pair hill climb on the simplex, halving the step until 1e-6.
Candidate refine(const DiscreteChannelSpec& chan, const StrategyMapping& u,
                 const Distribution& base, Candidate c, double step) {
    const std::size_t parts = c.p_hat.size();
    while (step >= 1e-6) {
        bool improved = false;
        for (std::size_t i = 0; i < parts; ++i) {
            for (std::size_t j = 0; j < parts; ++j) {
                if (i == j || c.p_hat[j] < step) continue;
                std::vector<double> trial = c.p_hat;
                trial[i] += step;
                trial[j] -= step;
                const double v = objective(chan, u, base, trial);
                if (v > c.value) {
                    c.p_hat = std::move(trial);
                    c.value = v;
                    improved = true;
                }
            }
        }
        if (!improved) step *= 0.5;
    }
    return c;
}

double l1(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d += std::fabs(a[i] - b[i]);
    return d;
}

} // namespace

NoncausalOptimum optimize_noncausal(const DiscreteChannelSpec& chan,
                                    int grid_resolution,
                                    std::uint64_t enumeration_cap) {
    if (grid_resolution < 10)
        throw DomainError("grid resolution must be >= 10");
    const std::uint64_t total = chan.mapping_count();
    if (total > enumeration_cap)
        throw CapExceededError("mapping space " + std::to_string(total) +
                               " exceeds enumeration cap");

    const Distribution base = induced_output_dist(chan, chan.all_zero_mapping());
    const double step0 = 1.0 / static_cast<double>(grid_resolution);
    const double far = 4.0 * step0; // L1 separation defining "distinct" tilts

    struct Refined {
        Candidate c;
        StrategyMapping u;
    };
    std::vector<Refined> finalists;

    for (std::uint64_t idx = 0; idx < total; ++idx) {
        const StrategyMapping u = chan.mapping_from_index(idx);
        bool any_cost = false;
        for (std::size_t s = 0; s < chan.state_count(); ++s)
            if (chan.cost(static_cast<std::size_t>(u.map[s])) > 0.0)
                any_cost = true;
        if (!any_cost) continue; // zero cost under every tilt

        Candidate local;
        std::vector<std::pair<std::vector<double>, double>> grid;
        auto consider = [&](const std::vector<double>& p) {
            const double v = objective(chan, u, base, p);
            if (v > local.value) {
                local.value = v;
                local.p_hat = p;
            }
            if (std::isfinite(v)) grid.emplace_back(p, v);
        };
        enumerate_simplex(chan.state_count(), grid_resolution, consider);
        consider(chan.state_dist().probs()); // the untilted point, exactly
        if (local.p_hat.empty()) continue;

        auto polish = [&](Candidate c) {
            return std::isinf(c.value) ? c : refine(chan, u, base, c, step0);
        };
        finalists.push_back({polish(local), u});

        // Also polish the best grid point far from the local winner, so a
        // genuinely distinct second optimum is compared after refinement,
        // not at its coarse grid value.
        Candidate rival;
        for (auto& [p, v] : grid)
            if (v > rival.value && l1(p, local.p_hat) > far) {
                rival.value = v;
                rival.p_hat = p;
            }
        if (!rival.p_hat.empty()) finalists.push_back({polish(rival), u});
    }

    if (finalists.empty())
        throw ZeroCostError("every mapping has zero cost; rate per cost undefined");

    std::size_t win = 0;
    for (std::size_t i = 1; i < finalists.size(); ++i)
        if (finalists[i].c.value > finalists[win].c.value) win = i;

    // The refined point can carry tiny negative rounding dust; clip and
    // renormalize before constructing the Distribution.
    std::vector<double> p_best = finalists[win].c.p_hat;
    double sum = 0.0;
    for (double& v : p_best) {
        if (v < 0.0) v = 0.0;
        sum += v;
    }
    for (double& v : p_best) v /= sum;

    NoncausalOptimum opt{Distribution(p_best), finalists[win].u,
                         finalists[win].c.value, 0};
    const double tie_tol = 1e-6 * std::max(1.0, std::fabs(opt.value));
    for (std::size_t i = 0; i < finalists.size(); ++i) {
        if (i == win || !std::isfinite(finalists[i].c.value)) continue;
        if (finalists[i].c.value >= opt.value - tie_tol &&
            l1(finalists[i].c.p_hat, p_best) > far)
            ++opt.rival_optima;
    }
    return opt;
}

const char* to_string(EquivalenceVerdict v) {
    switch (v) {
    case EquivalenceVerdict::EquivalentMuOne: return "EquivalentMuOne";
    case EquivalenceVerdict::EquivalentMuVanishing: return "EquivalentMuVanishing";
    case EquivalenceVerdict::NotEquivalentByCriterion: return "NotEquivalentByCriterion";
    case EquivalenceVerdict::Inconclusive: return "Inconclusive";
    }
    return "?";
}

EquivalenceReport equivalence_check(const DiscreteChannelSpec& chan,
                                    int grid_resolution,
                                    std::uint64_t enumeration_cap) {
    const NoncausalOptimum opt =
        optimize_noncausal(chan, grid_resolution, enumeration_cap);
    const CapacityPerUnitCost causal =
        capacity_per_unit_cost(chan, enumeration_cap);

    EquivalenceReport rep{1.0, opt.p_hat, opt.u, opt.value, causal.value,
                          EquivalenceVerdict::Inconclusive};

    double mu = kInf, ratio_max = 0.0;
    for (std::size_t s = 0; s < chan.state_count(); ++s) {
        if (opt.p_hat[s] <= kSupportTol) continue;
        const double r = chan.state_dist()[s] / opt.p_hat[s];
        mu = std::min(mu, r);
        ratio_max = std::max(ratio_max, r);
    }
    rep.mu = mu;

    if (!std::isfinite(opt.value) || opt.rival_optima > 0) {
        rep.verdict = EquivalenceVerdict::Inconclusive;
        return rep;
    }

    // Slack for the refined optimizer: steps stop at 1e-6, leave two orders
    // of margin.
    const double tol = 1e-4;
    const bool ratio_constant = (ratio_max - mu) <= tol * std::max(1.0, ratio_max);
    if (mu >= 1.0 - tol && ratio_constant) {
        rep.verdict = EquivalenceVerdict::EquivalentMuOne;
    } else if (mu <= 0.01) {
        const double d = relative_entropy(opt.p_hat, chan.state_dist());
        const double hb = binary_entropy(mu) / mu;
        rep.verdict = (std::fabs(hb - d) <= 0.05 * d)
                          ? EquivalenceVerdict::EquivalentMuVanishing
                          : EquivalenceVerdict::NotEquivalentByCriterion;
    } else {
        rep.verdict = EquivalenceVerdict::NotEquivalentByCriterion;
    }
    return rep;
}

std::vector<std::int64_t> state_quotas(const Distribution& p_hat, std::int64_t m) {
    if (m < 0) throw DomainError("quota total must be >= 0");
    const std::size_t n = p_hat.size();
    std::vector<std::int64_t> q(n);
    std::vector<std::pair<double, std::size_t>> rem(n);
    std::int64_t assigned = 0;
    for (std::size_t s = 0; s < n; ++s) {
        const double share = static_cast<double>(m) * p_hat[s];
        q[s] = static_cast<std::int64_t>(std::floor(share));
        assigned += q[s];
        rem[s] = {share - std::floor(share), s};
    }
    std::sort(rem.begin(), rem.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second; // deterministic tie order
    });
    for (std::int64_t i = 0; i < m - assigned; ++i)
        ++q[rem[static_cast<std::size_t>(i)].second];
    return q;
}

CausalCodeword causal_encode(std::int64_t msg,
                             std::span<const std::int32_t> states,
                             const DiscreteChannelSpec& chan,
                             const TiltedDesign& design, std::int64_t n,
                             std::int64_t M) {
    design.validate(chan);
    if (msg < 0 || msg >= M) throw DomainError("message index out of range");
    if (states.size() != static_cast<std::size_t>(n * M))
        throw ShapeError("state stream must have M*n entries");

    const std::int64_t m = std::llround(design.theta * static_cast<double>(n));
    std::vector<std::int64_t> remaining = state_quotas(design.p_hat, m);

    CausalCodeword cw;
    cw.inputs.assign(states.size(), chan.zero_input());
    cw.tilted_mask.assign(states.size(), 0);
    const std::size_t lo = static_cast<std::size_t>(msg * n);
    for (std::size_t i = lo; i < lo + static_cast<std::size_t>(n); ++i) {
        const auto s = static_cast<std::size_t>(states[i]);
        if (s >= chan.state_count()) throw ShapeError("state symbol out of range");
        if (remaining[s] > 0) {
            --remaining[s];
            cw.inputs[i] = design.u.map[s];
            cw.tilted_mask[i] = 1;
        }
    }
    return cw;
}

namespace {

// Binomial coefficient, saturating well above any usable cap.
double binom_approx(std::int64_t n, std::int64_t k) {
    if (k < 0 || k > n) return 0.0;
    return std::exp(std::lgamma(static_cast<double>(n) + 1.0) -
                    std::lgamma(static_cast<double>(k) + 1.0) -
                    std::lgamma(static_cast<double>(n - k) + 1.0));
}

} // namespace

CausalSimStats causal_scheme_simulate(const DiscreteChannelSpec& chan,
                                      const TiltedDesign& design,
                                      std::int64_t n, std::int64_t M,
                                      std::int64_t trials, std::uint64_t seed) {
    design.validate(chan);
    if (n < 1 || M < 1) throw DomainError("n and M must be >= 1");
    if (trials < 1) throw DomainError("trials must be >= 1");
    const std::int64_t m = std::llround(design.theta * static_cast<double>(n));
    if (m < 1) throw DomainError("round(n theta) must be >= 1");
    if (binom_approx(n, m) > 1e6)
        throw CapExceededError("binom(n, round(n theta)) exceeds the 1e6 "
                               "subsequence-enumeration cap");

    const Distribution target = tilted_output_dist(chan, design.p_hat, design.u);
    const double tau = static_cast<double>(chan.output_count()) *
                       std::sqrt(std::log(static_cast<double>(trials)) /
                                 (2.0 * static_cast<double>(m)));

    std::vector<double> state_cdf(chan.state_count());
    double acc = 0.0;
    for (std::size_t s = 0; s < chan.state_count(); ++s) {
        acc += chan.state_dist()[s];
        state_cdf[s] = acc;
    }
    state_cdf.back() = 1.0;

    const std::size_t len = static_cast<std::size_t>(n * M);
    const std::int64_t msg = 0;
    CausalSimStats stats;
    std::vector<std::int32_t> states(len), outputs(len);
    std::vector<std::int64_t> quota = state_quotas(design.p_hat, m);

    // Subsequence scratch: combination indices into one interval.
    std::vector<std::int64_t> comb(static_cast<std::size_t>(m));
    std::vector<std::int64_t> counts(chan.output_count());

    auto interval_qualifies = [&](std::size_t lo) {
        // Lexicographic walk over all m-subsets of {0..n-1}.
        for (std::int64_t i = 0; i < m; ++i) comb[static_cast<std::size_t>(i)] = i;
        while (true) {
            std::fill(counts.begin(), counts.end(), 0);
            for (std::int64_t i = 0; i < m; ++i)
                ++counts[static_cast<std::size_t>(
                    outputs[lo + static_cast<std::size_t>(comb[static_cast<std::size_t>(i)])])];
            double dist = 0.0;
            for (std::size_t y = 0; y < counts.size(); ++y)
                dist += std::fabs(static_cast<double>(counts[y]) /
                                      static_cast<double>(m) -
                                  target[y]);
            if (dist <= tau) return true;
            // next combination
            std::int64_t i = m - 1;
            while (i >= 0 && comb[static_cast<std::size_t>(i)] == n - m + i) --i;
            if (i < 0) return false;
            ++comb[static_cast<std::size_t>(i)];
            for (std::int64_t j = i + 1; j < m; ++j)
                comb[static_cast<std::size_t>(j)] = comb[static_cast<std::size_t>(j - 1)] + 1;
        }
    };

    for (std::int64_t t = 0; t < trials; ++t) {
        RngStream rng(seed, static_cast<std::uint64_t>(t));
        for (std::size_t i = 0; i < len; ++i) {
            const double u = rng.next_unit();
            std::size_t s = 0;
            while (u > state_cdf[s]) ++s;
            states[i] = static_cast<std::int32_t>(s);
        }
        const CausalCodeword cw = causal_encode(msg, states, chan, design, n, M);

        // Shortfall audit: did the interval hold every quota?
        std::int64_t used = 0;
        for (std::size_t i = 0; i < len; ++i) used += cw.tilted_mask[i];
        if (used < m) ++stats.quota_shortfalls;

        for (std::size_t i = 0; i < len; ++i) {
            const Distribution& row =
                chan.row(static_cast<std::size_t>(cw.inputs[i]),
                         static_cast<std::size_t>(states[i]));
            const double u = rng.next_unit();
            double c = 0.0;
            std::size_t y = 0;
            for (; y + 1 < chan.output_count(); ++y) {
                c += row[y];
                if (u <= c) break;
            }
            outputs[i] = static_cast<std::int32_t>(y);
        }

        int qualifying = 0;
        std::int64_t decoded = -1;
        for (std::int64_t k = 0; k < M; ++k) {
            if (interval_qualifies(static_cast<std::size_t>(k * n))) {
                ++qualifying;
                decoded = k;
                if (qualifying > 1) break;
            }
        }
        ++stats.trials;
        if (qualifying == 0)
            ++stats.no_interval;
        else if (qualifying > 1)
            ++stats.multi_interval;
        else if (decoded == msg)
            ++stats.correct;
        else
            ++stats.multi_interval; // unique but wrong interval
    }
    return stats;
}

} // namespace csitlab
