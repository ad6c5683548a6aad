#ifndef CSITLAB_CSIT_EQUIV_HPP
#define CSITLAB_CSIT_EQUIV_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "csitlab/dmc_state.hpp"
#include "csitlab/estimate.hpp"

namespace csitlab {

// Tilted operating point: transmit according to u on positions whose state
// multiset follows p_hat instead of the true state law, using a duty
// fraction theta of each message interval.
struct TiltedDesign {
    Distribution p_hat;
    StrategyMapping u;
    double theta = 1.0;

    void validate(const DiscreteChannelSpec& chan) const;
};

// Output law on tilted positions: sum_s p_hat(s) P(y | u(s), s).
Distribution tilted_output_dist(const DiscreteChannelSpec& chan,
                                const Distribution& p_hat,
                                const StrategyMapping& u);

// (D(P_hat_Y || P_{Y|U=0}) - D(p_hat || P_S)) / E_{p_hat}[b(u(S))].
// May be -infinity when the tilt is impossible under the true state law.
double noncausal_rate_per_cost(const DiscreteChannelSpec& chan,
                               const Distribution& p_hat,
                               const StrategyMapping& u);

// exp(n D(p_hat || p_s)): subintervals needed before one matching the tilt
// shows up. Computed in the log domain; +infinity on overflow.
double subinterval_count(double n, const Distribution& p_hat,
                         const Distribution& p_s);

// Largest feasible duty fraction, min_s P_S(s)/p_hat(s) over p_hat's support.
double theta_max(const Distribution& p_hat, const Distribution& p_s);

// (D(P_hat_Y || P_{Y|U=0}) - H_b(theta)/theta) / E_{p_hat}[b(u(S))].
double causal_rate_per_cost(const DiscreteChannelSpec& chan,
                            const TiltedDesign& design);

struct NoncausalOptimum {
    Distribution p_hat;
    StrategyMapping u;
    double value;
    // Distinct near-optimal tilts found after refinement (beyond the winner's
    // own neighborhood); nonzero means the supremum's location is ambiguous.
    int rival_optima;
};

// Exhaustive mapping enumeration crossed with a simplex grid over p_hat
// (all compositions of grid_resolution, plus the untilted point p_s exactly),
// refined by coordinate hill-climbing with step halving down to 1e-6.
NoncausalOptimum optimize_noncausal(const DiscreteChannelSpec& chan,
                                    int grid_resolution,
                                    std::uint64_t enumeration_cap = 1000000);

enum class EquivalenceVerdict {
    EquivalentMuOne,
    EquivalentMuVanishing,
    NotEquivalentByCriterion,
    Inconclusive,
};

struct EquivalenceReport {
    double mu; // inf over support of P_S(s) / p_hat_star(s)
    Distribution p_hat_star;
    StrategyMapping u_star;
    double noncausal_value;
    double causal_value;
    EquivalenceVerdict verdict;
};

const char* to_string(EquivalenceVerdict v);

EquivalenceReport equivalence_check(const DiscreteChannelSpec& chan,
                                    int grid_resolution,
                                    std::uint64_t enumeration_cap = 1000000);

// Largest-remainder apportionment of m slots to p_hat; sums to m exactly and
// each share is within one slot of m * p_hat(s).
std::vector<std::int64_t> state_quotas(const Distribution& p_hat, std::int64_t m);

struct CausalCodeword {
    std::vector<std::int32_t> inputs;
    std::vector<std::uint8_t> tilted_mask; // 1 where a quota slot was consumed
};

// Quota encoder: within the message interval, the first quota(s) occurrences
// of each state s transmit u(s); everything else sends the zero input.
CausalCodeword causal_encode(std::int64_t msg,
                             std::span<const std::int32_t> states,
                             const DiscreteChannelSpec& chan,
                             const TiltedDesign& design, std::int64_t n,
                             std::int64_t M);

struct CausalSimStats {
    std::int64_t trials = 0;
    std::int64_t correct = 0;
    std::int64_t no_interval = 0;
    std::int64_t multi_interval = 0;
    std::int64_t quota_shortfalls = 0; // intervals lacking some state count

    WilsonInterval rate_error() const {
        return wilson_interval(trials - correct, trials);
    }
};

// Monte Carlo of the quota scheme. The decoder enumerates every length-m
// subsequence of each interval (m = round(n theta), binom(n, m) capped at
// 1e6) and accepts those whose output type lies within L1 radius
// |Y| sqrt(ln(trials) / (2 m)) of the tilted output law; exactly one interval
// holding accepted subsequences decodes to that message.
CausalSimStats causal_scheme_simulate(const DiscreteChannelSpec& chan,
                                      const TiltedDesign& design,
                                      std::int64_t n, std::int64_t M,
                                      std::int64_t trials, std::uint64_t seed);

} // namespace csitlab

#endif
