#ifndef CSITLAB_DMC_PPM_HPP
#define CSITLAB_DMC_PPM_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "csitlab/dmc_state.hpp"
#include "csitlab/estimate.hpp"
#include "csitlab/rng.hpp"

namespace csitlab {

// Orthogonal code over a state channel: M messages, one length-n interval
// each. The signal interval transmits u(S_i) symbol by symbol (causal state
// knowledge only); everywhere else the zero-cost input is sent. The decoder
// scores each interval by the divergence of its empirical output type from
// the all-quiet output law and picks the unique interval above threshold.
struct PpmCodeParams {
    std::int64_t n = 0;  // interval length
    std::int64_t M = 0;  // message count
    double delta = 0.0;  // threshold slack
    StrategyMapping u;

    // D(P_{Y|U=u} || P_{Y|U=0}) - delta; must be > 0 for a usable code.
    double decode_threshold(const DiscreteChannelSpec& chan) const;

    // exp(n (threshold - delta)): the message count at which the code rate
    // meets the divergence budget. Returned as a double since it explodes
    // long before it fits a practical simulation.
    double operating_point_messages(const DiscreteChannelSpec& chan) const;

    void validate(const DiscreteChannelSpec& chan) const;
};

// Inputs for message `msg`: zero outside its interval, u(state) inside.
std::vector<std::int32_t> ppm_encode(std::int64_t msg,
                                     std::span<const std::int32_t> states,
                                     const DiscreteChannelSpec& chan,
                                     const PpmCodeParams& params);

Distribution empirical_dist(std::span<const std::int32_t> symbols,
                            std::size_t alphabet_size);

// D(interval type || P_{Y|U=0}) for each of the M intervals; the discrete
// analogue of a per-slot received-energy profile.
std::vector<double> interval_divergences(std::span<const std::int32_t> outputs,
                                         const DiscreteChannelSpec& chan,
                                         const PpmCodeParams& params);

enum class PpmOutcomeKind : int { Correct, NoInterval, MultiInterval, CostOverflow };

struct PpmDecodeResult {
    enum class Kind { Decoded, NoInterval, MultiInterval } kind =
        Kind::NoInterval;
    std::int64_t message = -1; // valid when kind == Decoded
};

// Strictly-greater threshold comparison: a type sitting exactly on the
// threshold does not cross. Intervals whose type leaves the support of the
// quiet output law have infinite divergence and always cross.
PpmDecodeResult ppm_decode(std::span<const std::int32_t> outputs,
                           const DiscreteChannelSpec& chan,
                           const PpmCodeParams& params);

struct PpmTrialOutcome {
    PpmOutcomeKind kind = PpmOutcomeKind::Correct;
};

// Deterministic outcome bookkeeping shared by the simulator and the exact
// enumeration: cost overflow trumps everything; otherwise the transmitted
// interval must be the only one above threshold.
PpmOutcomeKind classify_ppm_trial(std::span<const double> divergences,
                                  double threshold, std::int64_t message,
                                  double cost, double cost_cap);

struct PpmSimStats {
    std::int64_t trials = 0;
    std::int64_t correct = 0;
    std::int64_t no_interval = 0;
    std::int64_t multi_interval = 0; // a wrong interval misled the decoder
    std::int64_t cost_overflow = 0;
    std::int64_t wrong_interval_crossings = 0; // over all wrong intervals

    WilsonInterval rate_correct() const { return wilson_interval(correct, trials); }
    WilsonInterval rate_no_interval() const { return wilson_interval(no_interval, trials); }
    WilsonInterval rate_multi_interval() const { return wilson_interval(multi_interval, trials); }
    WilsonInterval rate_cost_overflow() const { return wilson_interval(cost_overflow, trials); }
    WilsonInterval rate_error() const {
        return wilson_interval(trials - correct, trials);
    }
    // Per wrong interval, the frequency of crossing the threshold.
    double wrong_crossing_frequency(std::int64_t message_count) const;
};

// n (E[b | U=u] + delta): the total-cost budget beyond which a trial is
// charged as a third-kind error.
double default_cost_cap(const DiscreteChannelSpec& chan, const PpmCodeParams& params);

// Monte Carlo of encode -> memoryless channel -> decode with the message
// fixed to 0. Cost overflow is classified before the decoder's verdict; a
// decoded-but-wrong interval counts under multi_interval (some wrong
// interval crossed while the right one did not).
PpmSimStats ppm_simulate(const DiscreteChannelSpec& chan,
                         const PpmCodeParams& params, std::int64_t trials,
                         double cost_cap, std::uint64_t seed);

// D(target || base): the exponential decay rate of observing type `target`
// from i.i.d. draws of `base`.
double sanov_exponent(const Distribution& target, const Distribution& base);

} // namespace csitlab

#endif
