#include "csitlab/dmc_ppm.hpp"

#include <cmath>
#include <limits>

#include "csitlab/errors.hpp"

namespace csitlab {

double PpmCodeParams::decode_threshold(const DiscreteChannelSpec& chan) const {
    const double d = relative_entropy(induced_output_dist(chan, u),
                                      induced_output_dist(chan, chan.all_zero_mapping()));
    return d - delta;
}

double PpmCodeParams::operating_point_messages(const DiscreteChannelSpec& chan) const {
    return std::exp(static_cast<double>(n) * (decode_threshold(chan) - delta));
}

void PpmCodeParams::validate(const DiscreteChannelSpec& chan) const {
    if (n < 1) throw DomainError("interval length n must be >= 1");
    if (M < 1) throw DomainError("message count M must be >= 1");
    if (!(delta > 0.0)) throw DomainError("threshold slack delta must be > 0");
    chan.check_mapping(u);
}

std::vector<std::int32_t> ppm_encode(std::int64_t msg,
                                     std::span<const std::int32_t> states,
                                     const DiscreteChannelSpec& chan,
                                     const PpmCodeParams& params) {
    params.validate(chan);
    if (msg < 0 || msg >= params.M) throw DomainError("message index out of range");
    if (states.size() != static_cast<std::size_t>(params.M * params.n))
        throw ShapeError("state stream must have M*n entries");
    std::vector<std::int32_t> inputs(states.size(), chan.zero_input());
    const std::size_t lo = static_cast<std::size_t>(msg * params.n);
    const std::size_t hi = lo + static_cast<std::size_t>(params.n);
    for (std::size_t i = lo; i < hi; ++i) {
        const std::int32_t s = states[i];
        if (s < 0 || static_cast<std::size_t>(s) >= chan.state_count())
            throw ShapeError("state symbol out of range");
        inputs[i] = params.u.map[static_cast<std::size_t>(s)];
    }
    return inputs;
}

Distribution empirical_dist(std::span<const std::int32_t> symbols,
                            std::size_t alphabet_size) {
    if (symbols.empty()) throw EmptyError("empty symbol sequence");
    std::vector<std::int64_t> counts(alphabet_size, 0);
    for (std::int32_t s : symbols) {
        if (s < 0 || static_cast<std::size_t>(s) >= alphabet_size)
            throw ShapeError("symbol out of alphabet range");
        ++counts[static_cast<std::size_t>(s)];
    }
    return Distribution::from_counts(counts);
}

namespace {

// Divergence of a count vector (over `len` samples) from `base`, without
// materializing a Distribution in the per-interval hot path.
double type_divergence(std::span<const std::int64_t> counts, std::int64_t len,
                       const Distribution& base) {
    double d = 0.0;
    const double n = static_cast<double>(len);
    for (std::size_t y = 0; y < counts.size(); ++y) {
        if (counts[y] == 0) continue;
        if (base[y] == 0.0) return std::numeric_limits<double>::infinity();
        const double p = static_cast<double>(counts[y]) / n;
        d += p * std::log(p / base[y]);
    }
    return d < 0.0 ? 0.0 : d;
}

} // namespace

std::vector<double> interval_divergences(std::span<const std::int32_t> outputs,
                                         const DiscreteChannelSpec& chan,
                                         const PpmCodeParams& params) {
    params.validate(chan);
    if (outputs.size() != static_cast<std::size_t>(params.M * params.n))
        throw ShapeError("output stream must have M*n entries");
    const Distribution base =
        induced_output_dist(chan, chan.all_zero_mapping());
    std::vector<double> divs(static_cast<std::size_t>(params.M));
    std::vector<std::int64_t> counts(chan.output_count());
    for (std::int64_t k = 0; k < params.M; ++k) {
        std::fill(counts.begin(), counts.end(), 0);
        const std::size_t lo = static_cast<std::size_t>(k * params.n);
        for (std::size_t i = lo; i < lo + static_cast<std::size_t>(params.n); ++i) {
            const std::int32_t y = outputs[i];
            if (y < 0 || static_cast<std::size_t>(y) >= chan.output_count())
                throw ShapeError("output symbol out of range");
            ++counts[static_cast<std::size_t>(y)];
        }
        divs[static_cast<std::size_t>(k)] = type_divergence(counts, params.n, base);
    }
    return divs;
}

PpmDecodeResult ppm_decode(std::span<const std::int32_t> outputs,
                           const DiscreteChannelSpec& chan,
                           const PpmCodeParams& params) {
    const std::vector<double> divs = interval_divergences(outputs, chan, params);
    const double thresh = params.decode_threshold(chan);
    PpmDecodeResult res;
    int crossings = 0;
    for (std::size_t k = 0; k < divs.size(); ++k) {
        if (divs[k] > thresh) {
            if (++crossings == 1) {
                res.kind = PpmDecodeResult::Kind::Decoded;
                res.message = static_cast<std::int64_t>(k);
            } else {
                res.kind = PpmDecodeResult::Kind::MultiInterval;
                res.message = -1;
                break;
            }
        }
    }
    if (crossings == 0) res.kind = PpmDecodeResult::Kind::NoInterval;
    return res;
}

PpmOutcomeKind classify_ppm_trial(std::span<const double> divergences,
                                  double threshold, std::int64_t message,
                                  double cost, double cost_cap) {
    if (cost > cost_cap) return PpmOutcomeKind::CostOverflow;
    bool signal_cross = false;
    int wrong_cross = 0;
    for (std::size_t k = 0; k < divergences.size(); ++k) {
        if (divergences[k] > threshold) {
            if (static_cast<std::int64_t>(k) == message)
                signal_cross = true;
            else
                ++wrong_cross;
        }
    }
    if (signal_cross && wrong_cross == 0) return PpmOutcomeKind::Correct;
    if (!signal_cross && wrong_cross == 0) return PpmOutcomeKind::NoInterval;
    return PpmOutcomeKind::MultiInterval;
}

double default_cost_cap(const DiscreteChannelSpec& chan,
                        const PpmCodeParams& params) {
    return static_cast<double>(params.n) *
           (expected_cost(chan, params.u) + params.delta);
}

double PpmSimStats::wrong_crossing_frequency(std::int64_t message_count) const {
    if (message_count < 2 || trials == 0) return 0.0;
    return static_cast<double>(wrong_interval_crossings) /
           (static_cast<double>(trials) * static_cast<double>(message_count - 1));
}

PpmSimStats ppm_simulate(const DiscreteChannelSpec& chan,
                         const PpmCodeParams& params, std::int64_t trials,
                         double cost_cap, std::uint64_t seed) {
    params.validate(chan);
    if (trials < 1) throw DomainError("trials must be >= 1");

    const Distribution base = induced_output_dist(chan, chan.all_zero_mapping());
    const double thresh = params.decode_threshold(chan);
    const std::size_t len = static_cast<std::size_t>(params.M * params.n);
    const std::int64_t msg = 0;

    // Cumulative state distribution for inverse-CDF sampling.
    std::vector<double> state_cdf(chan.state_count());
    double acc = 0.0;
    for (std::size_t s = 0; s < chan.state_count(); ++s) {
        acc += chan.state_dist()[s];
        state_cdf[s] = acc;
    }
    state_cdf.back() = 1.0;

    PpmSimStats stats;
    std::vector<std::int32_t> states(len), inputs(len), outputs(len);
    std::vector<std::int64_t> counts(chan.output_count());

    for (std::int64_t t = 0; t < trials; ++t) {
        RngStream rng(seed, static_cast<std::uint64_t>(t));
        for (std::size_t i = 0; i < len; ++i) {
            const double u = rng.next_unit();
            std::size_t s = 0;
            while (u > state_cdf[s]) ++s;
            states[i] = static_cast<std::int32_t>(s);
        }
        inputs = ppm_encode(msg, states, chan, params);
        double cost = 0.0;
        for (std::size_t i = 0; i < len; ++i) {
            cost += chan.cost(static_cast<std::size_t>(inputs[i]));
            const Distribution& row =
                chan.row(static_cast<std::size_t>(inputs[i]),
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

        ++stats.trials;

        std::vector<double> divs(static_cast<std::size_t>(params.M));
        for (std::int64_t k = 0; k < params.M; ++k) {
            std::fill(counts.begin(), counts.end(), 0);
            const std::size_t lo = static_cast<std::size_t>(k * params.n);
            for (std::size_t i = lo;
                 i < lo + static_cast<std::size_t>(params.n); ++i)
                ++counts[static_cast<std::size_t>(outputs[i])];
            divs[static_cast<std::size_t>(k)] =
                type_divergence(counts, params.n, base);
        }
        // Wrong-interval crossing diagnostics, counted on every trial.
        for (std::int64_t k = 0; k < params.M; ++k)
            if (k != msg && divs[static_cast<std::size_t>(k)] > thresh)
                ++stats.wrong_interval_crossings;

        switch (classify_ppm_trial(divs, thresh, msg, cost, cost_cap)) {
        case PpmOutcomeKind::Correct: ++stats.correct; break;
        case PpmOutcomeKind::NoInterval: ++stats.no_interval; break;
        case PpmOutcomeKind::MultiInterval: ++stats.multi_interval; break;
        case PpmOutcomeKind::CostOverflow: ++stats.cost_overflow; break;
        }
    }
    return stats;
}

double sanov_exponent(const Distribution& target, const Distribution& base) {
    return relative_entropy(target, base);
}

} // namespace csitlab
