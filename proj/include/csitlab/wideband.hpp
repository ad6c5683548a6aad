#ifndef CSITLAB_WIDEBAND_HPP
#define CSITLAB_WIDEBAND_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "csitlab/channel.hpp"
#include "csitlab/estimate.hpp"
#include "csitlab/rng.hpp"

namespace csitlab {

// One bandwidth piece of the peaky orthogonal code: w parallel bands, T time
// slots per codeword, one message per slot. The transmitter places the whole
// energy budget lambda on a single (band, slot) cell, choosing the first band
// whose gain clears the threshold; the receiver picks the slot with the
// largest band-averaged energy and needs no channel knowledge at all.
struct WidebandParams {
    std::int64_t w = 0;     // bands per piece
    std::int64_t T = 0;     // time slots per codeword
    std::int64_t K = 0;     // number of pieces sharing total power
    double P = 1.0;         // total average power
    double epsilon = 0.1;   // peakiness knob
    double delta = 0.0;     // duty-cycle fraction
    double lambda = 0.0;    // energy budget per codeword
    FadingTail tail;
    CsitQuality csit;

    // K = round(ln w), delta = eps*T/w, lambda = T*(P/K)/delta.
    static WidebandParams with_defaults(std::int64_t w, std::int64_t T,
                                        double P, double epsilon,
                                        FadingTail tail = FadingTail::rayleigh(),
                                        CsitQuality csit = {});

    void validate() const;
};

// ln w - ln(2 ln w); defined for w >= 2 (where 2 ln w < w always holds).
double threshold(double w);

// Gain-domain threshold for the configured tail family, chosen so the
// per-band crossing probability is 2 ln w / w for every family:
//   RayleighUnit        -> threshold(w)
//   ExponentialMean(m)  -> m * threshold(w)
//   Polynomial(n)       -> (w / (2 ln w))^(1/n)
double scheme_threshold(const WidebandParams& p);

// Encoder band-selection rule: smallest index whose (known) squared gain
// meets thresh; nullopt means no band qualifies and the codeword is lost.
std::optional<std::size_t> first_crossing(std::span<const double> gains_sq,
                                          double thresh);

struct EnergyProfile {
    std::vector<double> per_time_energy;
};

// Index of the largest average received energy. Exact ties throw TieError.
std::size_t decode_max_energy(const EnergyProfile& energies);

// (1 - 2 ln w / w)^w, the pre-limit no-band-qualifies probability; tends to
// w^-2 from below as w grows.
double type1_prob_exact(double w);

// L(alpha) = alpha - ln(1 + alpha); the large-deviation exponent of a unit
// mean-energy excess on a noise-only slot.
double chernoff_exponent(double alpha);

// min(1, T exp(-w L(alpha))): union bound over the T-1 wrong slots.
double type2_bound(const WidebandParams& p, double alpha);

// (Phi * p T/delta - 2 sqrt(6 p T/delta) ln w) / w with p = P/K. Throws
// InfeasibleError when nonpositive.
double alpha_star(const WidebandParams& p);

struct RateSummary {
    double per_piece = 0.0;    // delta (w/T) L(alpha*)
    double total = 0.0;        // K * per_piece
    double capacity_ref = 0.0; // large-bandwidth reference for the tail family
};

RateSummary achievable_rate(const WidebandParams& p);

enum class WidebandOutcome { Correct, TypeI, TypeII };

struct WidebandTrial {
    WidebandOutcome kind = WidebandOutcome::Correct;
    std::optional<std::size_t> chosen_band; // empty on type I
    std::size_t decoded = 0;
    double transmitted_energy = 0.0; // sum of |x|^2 over the codeword
};

// One encode -> channel -> decode round with the message pinned to slot 0.
WidebandTrial run_wideband_trial(const WidebandParams& p, RngStream& rng);

struct WidebandSimStats {
    std::int64_t trials = 0;
    std::int64_t type1 = 0;
    std::int64_t type2 = 0;
    std::int64_t correct = 0;
    std::vector<std::int64_t> band_histogram; // chosen band on non-type-I trials

    WilsonInterval p1() const;
    WilsonInterval p2() const;
    WilsonInterval p_correct() const;
};

struct WidebandSimOptions {
    int threads = 0; // 0 = hardware concurrency
    bool record_band_histogram = false;
};

// Independent trials, stream_id = trial index, so thread count never changes
// the aggregate.
WidebandSimStats simulate_trials(const WidebandParams& p, std::int64_t trials,
                                 std::uint64_t seed,
                                 const WidebandSimOptions& opt = {});

} // namespace csitlab

#endif
