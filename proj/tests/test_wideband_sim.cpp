#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numeric>
#include <vector>

#include "csitlab/wideband.hpp"

using namespace csitlab;

TEST_CASE("type-one rate matches the closed form at w = 100") {
    WidebandParams p = WidebandParams::with_defaults(100, 4, 1.0, 0.1);
    const WidebandSimStats stats = simulate_trials(p, 100000, 11);
    const double exact = type1_prob_exact(100.0);
    CHECK(stats.p1().contains(exact));
}

TEST_CASE("noisy knowledge keeps the type-one law (threshold scaled by beta)") {
    WidebandParams p = WidebandParams::with_defaults(100, 4, 1.0, 0.1);
    p.csit.beta = 0.5;
    const WidebandSimStats stats = simulate_trials(p, 100000, 12);
    CHECK(stats.p1().contains(type1_prob_exact(100.0)));
}

TEST_CASE("zero energy decodes uniformly over slots") {
    WidebandParams p = WidebandParams::with_defaults(100, 8, 1.0, 0.1);
    p.lambda = 0.0;
    const std::int64_t trials = 200000;
    const WidebandSimStats stats = simulate_trials(p, trials, 13);
    // Success requires both a band crossing and the argmax landing on the
    // message slot, so the target is (1 - P_I) / T.
    const double target = (1.0 - type1_prob_exact(100.0)) / 8.0;
    CHECK(stats.p_correct().contains(target));
}

TEST_CASE("paired runs: type-two errors vanish as bands grow") {
    // Energy scaled with w keeps the excess-energy signal fixed while the
    // noise averages concentrate, so errors must fall.
    const std::int64_t trials = 100000;
    WidebandParams p64 = WidebandParams::with_defaults(64, 4, 1.0, 0.1);
    p64.lambda = 64.0 / 5.0;
    WidebandParams p256 = WidebandParams::with_defaults(256, 4, 1.0, 0.1);
    p256.lambda = 256.0 / 5.0;
    const WidebandSimStats s64 = simulate_trials(p64, trials, 14);
    const WidebandSimStats s256 = simulate_trials(p256, trials, 14);
    CHECK(s64.type2 > 100);         // the small system actually errs
    CHECK(s256.type2 < s64.type2);  // and the larger one errs strictly less
    CHECK(s64.p1().contains(type1_prob_exact(64.0)));
    CHECK(s256.p1().contains(type1_prob_exact(256.0)));
}

TEST_CASE("perfect knowledge is the beta = 1 corner of the noisy path") {
    WidebandParams perfect = WidebandParams::with_defaults(64, 4, 1.0, 0.1);
    WidebandParams noisy = perfect;
    noisy.csit = CsitQuality{1.0};
    for (std::uint64_t t = 0; t < 2000; ++t) {
        RngStream a(99, t), b(99, t);
        const WidebandTrial ta = run_wideband_trial(perfect, a);
        const WidebandTrial tb = run_wideband_trial(noisy, b);
        REQUIRE(ta.kind == tb.kind);
        REQUIRE(ta.chosen_band == tb.chosen_band);
        REQUIRE(ta.decoded == tb.decoded);
    }
}

TEST_CASE("energy accounting: lambda on success, zero on type I") {
    WidebandParams p = WidebandParams::with_defaults(32, 4, 1.0, 0.1);
    p.lambda = 17.25;
    int seen_type1 = 0, seen_success = 0;
    for (std::uint64_t t = 0; t < 20000 && (seen_type1 < 5 || seen_success < 5);
         ++t) {
        RngStream rng(123, t);
        const WidebandTrial trial = run_wideband_trial(p, rng);
        if (trial.kind == WidebandOutcome::TypeI) {
            REQUIRE(trial.transmitted_energy == 0.0);
            ++seen_type1;
        } else {
            REQUIRE(trial.transmitted_energy == doctest::Approx(17.25).epsilon(1e-12));
            ++seen_success;
        }
    }
    CHECK(seen_type1 >= 5);
    CHECK(seen_success >= 5);
}

TEST_CASE("aggregates are independent of the thread count") {
    WidebandParams p = WidebandParams::with_defaults(64, 4, 1.0, 0.1);
    WidebandSimOptions serial{1, true};
    WidebandSimOptions parallel{2, true};
    const WidebandSimStats a = simulate_trials(p, 20000, 7, serial);
    const WidebandSimStats b = simulate_trials(p, 20000, 7, parallel);
    CHECK(a.type1 == b.type1);
    CHECK(a.type2 == b.type2);
    CHECK(a.correct == b.correct);
    CHECK(a.band_histogram == b.band_histogram);

    const WidebandSimStats c = simulate_trials(p, 20000, 7, serial);
    CHECK(a.type1 == c.type1);
    CHECK(a.type2 == c.type2);
    CHECK(a.correct == c.correct);
}

TEST_CASE("chosen band follows the truncated geometric law") {
    const std::int64_t w = 256;
    WidebandParams p = WidebandParams::with_defaults(w, 2, 1.0, 0.1);
    WidebandSimOptions opt;
    opt.record_band_histogram = true;
    const std::int64_t trials = 1000000;
    const WidebandSimStats stats = simulate_trials(p, trials, 21, opt);

    const double q = 2.0 * std::log(static_cast<double>(w)) / static_cast<double>(w);
    std::vector<double> pmf(static_cast<std::size_t>(w));
    double z = 0.0;
    for (std::int64_t k = 0; k < w; ++k) {
        pmf[static_cast<std::size_t>(k)] = q * std::pow(1.0 - q, static_cast<double>(k));
        z += pmf[static_cast<std::size_t>(k)];
    }
    for (auto& v : pmf) v /= z;

    const std::int64_t successes =
        std::accumulate(stats.band_histogram.begin(), stats.band_histogram.end(),
                        std::int64_t{0});
    CHECK(successes > trials - trials / 1000);

    double h_exact = 0.0;
    for (double v : pmf) h_exact -= v * std::log(v);
    CHECK(h_exact == doctest::Approx(4.116974).epsilon(1e-5));

    double h_emp = 0.0;
    for (std::int64_t c : stats.band_histogram) {
        if (c == 0) continue;
        const double f = static_cast<double>(c) / static_cast<double>(successes);
        h_emp -= f * std::log(f);
    }
    CHECK(std::fabs(h_emp - h_exact) < 0.02);

    // Head of the pmf within sampling noise.
    for (std::size_t k = 0; k < 32; ++k) {
        const double f = static_cast<double>(stats.band_histogram[k]) /
                         static_cast<double>(successes);
        const double sigma =
            std::sqrt(pmf[k] * (1.0 - pmf[k]) / static_cast<double>(successes));
        REQUIRE(std::fabs(f - pmf[k]) <= 5.0 * sigma);
    }
}

TEST_CASE("band-choice entropy approaches ln w with growing w") {
    // Exact truncated-geometric entropy over ln w, summed exactly up to 2^20.
    auto entropy_ratio_exact = [](std::int64_t w) {
        const double q = 2.0 * std::log(static_cast<double>(w)) / static_cast<double>(w);
        const double z = 1.0 - std::pow(1.0 - q, static_cast<double>(w));
        double h = 0.0;
        for (std::int64_t k = 0; k < w; ++k) {
            const double pk = q * std::pow(1.0 - q, static_cast<double>(k)) / z;
            if (pk > 0.0) h -= pk * std::log(pk);
        }
        return h / std::log(static_cast<double>(w));
    };
    double prev = 0.0;
    for (std::int64_t w = 256; w <= (1 << 20); w *= 16) {
        const double r = entropy_ratio_exact(w);
        REQUIRE(r > prev);
        REQUIRE(r < 1.0);
        prev = r;
    }
    // Far asymptote via the closed form H = H_b(q)/q (truncation negligible).
    auto entropy_ratio_closed = [](double w) {
        const double q = 2.0 * std::log(w) / w;
        return (binary_entropy(q) / q) / std::log(w);
    };
    prev = 0.0;
    for (double w = 1e4; w <= 1e300; w *= 1e20) {
        const double r = entropy_ratio_closed(w);
        REQUIRE(r > prev);
        prev = r;
    }
    CHECK(entropy_ratio_closed(1e300) >= 0.99);
}
