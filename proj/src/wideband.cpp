#include "csitlab/wideband.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "csitlab/errors.hpp"

namespace csitlab {

WidebandParams WidebandParams::with_defaults(std::int64_t w, std::int64_t T,
                                             double P, double epsilon,
                                             FadingTail tail,
                                             CsitQuality csit) {
    WidebandParams p;
    p.w = w;
    p.T = T;
    p.P = P;
    p.epsilon = epsilon;
    p.tail = tail;
    p.csit = csit;
    if (w < 2) throw DomainError("w must be >= 2");
    p.K = std::max<std::int64_t>(1, std::llround(std::log(static_cast<double>(w))));
    p.delta = epsilon * static_cast<double>(T) / static_cast<double>(w);
    p.lambda = static_cast<double>(T) * (P / static_cast<double>(p.K)) / p.delta;
    p.validate();
    return p;
}

void WidebandParams::validate() const {
    if (w < 2) throw DomainError("w must be >= 2");
    if (T < 1) throw DomainError("T must be >= 1");
    if (K < 1) throw DomainError("K must be >= 1");
    if (!(P > 0.0)) throw DomainError("P must be > 0");
    if (!(epsilon > 0.0)) throw DomainError("epsilon must be > 0");
    if (!(delta > 0.0) || delta > 1.0) throw DomainError("delta must lie in (0, 1]");
    if (!(lambda >= 0.0)) throw DomainError("lambda must be >= 0");
    csit.validate();
    if (csit.beta < 1.0 && tail.kind != FadingTail::Kind::RayleighUnit)
        throw DomainError(
            "noisy transmitter knowledge is defined only for the Rayleigh "
            "tail (Gaussian known/error split)");
}

double threshold(double w) {
    if (!(w >= 2.0)) throw DomainError("threshold needs w >= 2");
    const double lw = std::log(w);
    if (!(2.0 * lw < w)) throw DomainError("threshold needs 2 ln w < w");
    return lw - std::log(2.0 * lw);
}

double scheme_threshold(const WidebandParams& p) {
    const double w = static_cast<double>(p.w);
    switch (p.tail.kind) {
    case FadingTail::Kind::RayleighUnit:
        return threshold(w);
    case FadingTail::Kind::ExponentialMean:
        return p.tail.mean * threshold(w);
    case FadingTail::Kind::Polynomial:
        // Pinned so that w * thresh^-n = 2 ln w, keeping the type-I law.
        return std::pow(w / (2.0 * std::log(w)), 1.0 / p.tail.tail_exponent);
    }
    throw DomainError("unknown tail kind");
}

std::optional<std::size_t> first_crossing(std::span<const double> gains_sq,
                                          double thresh) {
    for (std::size_t i = 0; i < gains_sq.size(); ++i)
        if (gains_sq[i] >= thresh) return i;
    return std::nullopt;
}

std::size_t decode_max_energy(const EnergyProfile& energies) {
    const auto& e = energies.per_time_energy;
    if (e.empty()) throw EmptyError("empty energy profile");
    std::size_t best = 0;
    for (std::size_t i = 1; i < e.size(); ++i)
        if (e[i] > e[best]) best = i;
    for (std::size_t i = 0; i < e.size(); ++i)
        if (i != best && e[i] == e[best])
            throw TieError("exact energy tie between slots");
    return best;
}

double type1_prob_exact(double w) {
    if (!(w >= 2.0)) throw DomainError("type1_prob_exact needs w >= 2");
    const double q = 2.0 * std::log(w) / w;
    if (!(q < 1.0)) throw DomainError("type1_prob_exact needs 2 ln w < w");
    return std::exp(w * std::log1p(-q));
}

double chernoff_exponent(double alpha) {
    if (alpha < 0.0) throw DomainError("chernoff exponent needs alpha >= 0");
    return alpha - std::log1p(alpha);
}

double type2_bound(const WidebandParams& p, double alpha) {
    const double e = static_cast<double>(p.w) * chernoff_exponent(alpha);
    return std::min(1.0, static_cast<double>(p.T) * std::exp(-e));
}

double alpha_star(const WidebandParams& p) {
    const double w = static_cast<double>(p.w);
    const double lam = static_cast<double>(p.T) *
                       (p.P / static_cast<double>(p.K)) / p.delta;
    const double a =
        (threshold(w) * lam - 2.0 * std::sqrt(6.0 * lam) * std::log(w)) / w;
    if (!(a > 0.0))
        throw InfeasibleError("alpha* = " + std::to_string(a) +
                              " <= 0: scheme cannot operate at these parameters");
    return a;
}

RateSummary achievable_rate(const WidebandParams& p) {
    const double a = alpha_star(p);
    RateSummary r;
    r.per_piece = p.delta * static_cast<double>(p.w) /
                  static_cast<double>(p.T) * chernoff_exponent(a);
    r.total = static_cast<double>(p.K) * r.per_piece;
    const double W = static_cast<double>(p.w) * static_cast<double>(p.K);
    switch (p.tail.kind) {
    case FadingTail::Kind::RayleighUnit:
        r.capacity_ref = p.P * std::log(W);
        break;
    case FadingTail::Kind::ExponentialMean:
        r.capacity_ref = p.tail.mean * p.P * std::log(W);
        break;
    case FadingTail::Kind::Polynomial:
        r.capacity_ref = p.P * std::pow(W, 1.0 / (p.tail.tail_exponent + 1.0));
        break;
    }
    r.capacity_ref *= p.csit.beta;
    return r;
}

namespace {

// Sum of `count` unit-mean exponential energies. Uniforms are multiplied in
// short chunks so one log covers many draws; the chunk length keeps the
// running product far from the underflow edge.
double noise_energy_sum(RngStream& rng, std::int64_t count) {
    double sum = 0.0;
    double prod = 1.0;
    int in_chunk = 0;
    for (std::int64_t i = 0; i < count; ++i) {
        prod *= rng.next_unit();
        if (++in_chunk == 128) {
            sum -= std::log(prod);
            prod = 1.0;
            in_chunk = 0;
        }
    }
    if (in_chunk > 0) sum -= std::log(prod);
    return sum;
}

} // namespace

WidebandTrial run_wideband_trial(const WidebandParams& p, RngStream& rng) {
    const double w = static_cast<double>(p.w);
    // Per-band crossing probability is 2 ln w / w for every tail family by
    // the choice of scheme_threshold, and comparing the band's uniform
    // against it is the same decision as comparing the gain to the
    // threshold (monotone inverse-CDF map). Only the chosen band's gain is
    // ever materialized.
    const double p_cross = 2.0 * std::log(w) / w;

    WidebandTrial trial;
    std::optional<std::size_t> chosen;
    double known_sq = 0.0;
    for (std::int64_t k = 0; k < p.w; ++k) {
        const double u = rng.next_unit();
        if (u <= p_cross) {
            chosen = static_cast<std::size_t>(k);
            known_sq = gain_squared_from_unit(p.tail, u);
            break;
        }
    }
    trial.chosen_band = chosen;

    EnergyProfile profile;
    profile.per_time_energy.resize(static_cast<std::size_t>(p.T));
    // Slot 0 carries the message when a band qualified.
    if (chosen) {
        // Under imperfect knowledge the scan above read |g|^2 with
        // g ~ CN(0, beta); the true gain adds an independent CN(0, 1-beta)
        // error. The known part is rotated real, which is lossless since
        // the error and the noise are circularly symmetric. beta = 1 makes
        // the error term exactly zero while consuming the same draws, so
        // perfect-knowledge runs are trial-for-trial reproducible from the
        // noisy-knowledge code path.
        const double g = std::sqrt(p.csit.beta * known_sq);
        const ComplexSample err = rng.next_cnormal(1.0 - p.csit.beta);
        const ComplexSample h{g + err.real(), err.imag()};
        const ComplexSample n = sample_noise(rng);
        const ComplexSample x{std::sqrt(p.lambda), 0.0};
        trial.transmitted_energy = std::norm(x);
        const ComplexSample y = apply_channel(x, h, n);
        profile.per_time_energy[0] =
            (std::norm(y) + noise_energy_sum(rng, p.w - 1)) / w;
    } else {
        profile.per_time_energy[0] = noise_energy_sum(rng, p.w) / w;
    }
    for (std::int64_t t = 1; t < p.T; ++t)
        profile.per_time_energy[static_cast<std::size_t>(t)] =
            noise_energy_sum(rng, p.w) / w;

    trial.decoded = decode_max_energy(profile);
    if (!chosen)
        trial.kind = WidebandOutcome::TypeI;
    else if (trial.decoded != 0)
        trial.kind = WidebandOutcome::TypeII;
    else
        trial.kind = WidebandOutcome::Correct;
    return trial;
}

WilsonInterval WidebandSimStats::p1() const { return wilson_interval(type1, trials); }
WilsonInterval WidebandSimStats::p2() const { return wilson_interval(type2, trials); }
WilsonInterval WidebandSimStats::p_correct() const {
    return wilson_interval(correct, trials);
}

WidebandSimStats simulate_trials(const WidebandParams& p, std::int64_t trials,
                                 std::uint64_t seed,
                                 const WidebandSimOptions& opt) {
    if (trials < 1) throw DomainError("trials must be >= 1");
    p.validate();

    int threads = opt.threads > 0
                      ? opt.threads
                      : static_cast<int>(std::thread::hardware_concurrency());
    if (threads < 1) threads = 1;
    threads = static_cast<int>(
        std::min<std::int64_t>(threads, trials));

    std::vector<WidebandSimStats> partial(static_cast<std::size_t>(threads));
    auto worker = [&](int idx) {
        WidebandSimStats& s = partial[static_cast<std::size_t>(idx)];
        if (opt.record_band_histogram)
            s.band_histogram.assign(static_cast<std::size_t>(p.w), 0);
        for (std::int64_t t = idx; t < trials; t += threads) {
            RngStream rng(seed, static_cast<std::uint64_t>(t));
            const WidebandTrial trial = run_wideband_trial(p, rng);
            ++s.trials;
            switch (trial.kind) {
            case WidebandOutcome::Correct: ++s.correct; break;
            case WidebandOutcome::TypeI: ++s.type1; break;
            case WidebandOutcome::TypeII: ++s.type2; break;
            }
            if (opt.record_band_histogram && trial.chosen_band)
                ++s.band_histogram[*trial.chosen_band];
        }
    };

    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int i = 0; i < threads; ++i) pool.emplace_back(worker, i);
        for (auto& th : pool) th.join();
    }

    WidebandSimStats total;
    if (opt.record_band_histogram)
        total.band_histogram.assign(static_cast<std::size_t>(p.w), 0);
    for (const auto& s : partial) {
        total.trials += s.trials;
        total.type1 += s.type1;
        total.type2 += s.type2;
        total.correct += s.correct;
        for (std::size_t b = 0; b < s.band_histogram.size(); ++b)
            total.band_histogram[b] += s.band_histogram[b];
    }
    return total;
}

} // namespace csitlab
