#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "csitlab/errors.hpp"
#include "csitlab/wideband.hpp"

using namespace csitlab;

TEST_CASE("threshold values") {
    CHECK(threshold(100.0) == doctest::Approx(2.38484337962).epsilon(1e-10));
    const double e2 = std::exp(2.0);
    CHECK(threshold(e2) == doctest::Approx(2.0 - std::log(4.0)).epsilon(1e-12));
    // Direct evaluation at the smallest admissible w; positive because
    // w / (2 ln w) > 1 for every w >= 2.
    CHECK(threshold(2.0) == doctest::Approx(0.36651292058).epsilon(1e-10));
    CHECK(threshold(2.0) > 0.0);
    CHECK_THROWS_AS(threshold(1.5), DomainError);
}

TEST_CASE("type-one probability: exact form and asymptote") {
    CHECK(type1_prob_exact(100.0) == doctest::Approx(6.36266111107e-5).epsilon(1e-9));
    // Approaches 1/w^2 from below.
    CHECK(type1_prob_exact(100.0) < 1e-4);
    const double ratio1e6 = type1_prob_exact(1e6) * 1e12;
    CHECK(ratio1e6 > 0.5);
    CHECK(ratio1e6 < 1.0);
    CHECK(ratio1e6 == doctest::Approx(0.999618329159).epsilon(1e-9));
}

TEST_CASE("type-one probability decreases in w from 8 up") {
    double prev = type1_prob_exact(8.0);
    for (double w = 9; w <= 4096; ++w) {
        const double cur = type1_prob_exact(w);
        REQUIRE(cur < prev);
        prev = cur;
    }
    // Spot checks further out on a geometric grid.
    for (double w = 8192; w <= 1e6; w *= 2) {
        const double cur = type1_prob_exact(w);
        REQUIRE(cur < prev);
        prev = cur;
    }
}

TEST_CASE("exact-to-asymptote ratio grows in w") {
    double prev = 0.0;
    for (double w = 64; w <= 1e6; w *= 2) {
        const double r = type1_prob_exact(w) * w * w;
        REQUIRE(r > prev);
        REQUIRE(r <= 1.0);
        prev = r;
    }
}

TEST_CASE("large-deviation exponent") {
    CHECK(chernoff_exponent(0.0) == 0.0);
    CHECK(chernoff_exponent(1.0) == doctest::Approx(0.306852819440).epsilon(1e-12));
    CHECK(chernoff_exponent(10.0) == doctest::Approx(7.602104727202).epsilon(1e-12));
    // ~ alpha for large alpha.
    CHECK(chernoff_exponent(1e4) / 1e4 == doctest::Approx(1.0).epsilon(1e-3));
    CHECK_THROWS_AS(chernoff_exponent(-0.1), DomainError);
    // strictly increasing
    double prev = -1.0;
    for (double a = 0.0; a <= 20.0; a += 0.25) {
        REQUIRE(chernoff_exponent(a) > prev);
        prev = chernoff_exponent(a);
    }
}

TEST_CASE("union bound over wrong slots") {
    WidebandParams p = WidebandParams::with_defaults(100, 10, 1.0, 0.1);
    CHECK(type2_bound(p, 1.0) == doctest::Approx(4.71575654390e-13).epsilon(1e-9));
    CHECK(type2_bound(p, 0.0) == 1.0); // vacuous at alpha = 0
    // Degenerate boundary: ln T / w == L(alpha) makes the bound exactly 1.
    const double alpha_boundary = [] {
        // solve L(a) = ln(10)/100 by bisection
        double lo = 0.0, hi = 5.0;
        const double target = std::log(10.0) / 100.0;
        for (int i = 0; i < 200; ++i) {
            const double mid = 0.5 * (lo + hi);
            (chernoff_exponent(mid) < target ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    }();
    CHECK(type2_bound(p, alpha_boundary) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("operating point alpha*") {
    // Exact formula value at w = 1e6, P = 1, eps = 0.1, K = ceil(ln w) = 14.
    WidebandParams p = WidebandParams::with_defaults(1000000, 8, 1.0, 0.1);
    p.K = 14;
    p.delta = p.epsilon * static_cast<double>(p.T) / static_cast<double>(p.w);
    p.lambda = static_cast<double>(p.T) * (p.P / 14.0) / p.delta;
    CHECK(alpha_star(p) == doctest::Approx(7.44034939682).epsilon(1e-9));

    // Approaches P/eps as w grows (the formula-level limit); at w = 1e30 the
    // log corrections are still visible but inside 15%.
    WidebandParams big = WidebandParams::with_defaults(
        static_cast<std::int64_t>(1e18), 8, 1.0, 0.1);
    // w beyond int64: drive the formula directly through doubles.
    const double w = 1e30;
    const double K = std::round(std::log(w));
    const double lam = w * (1.0 / K) / 0.1; // pT/delta with delta = eps T / w
    const double a =
        (threshold(w) * lam - 2.0 * std::sqrt(6.0 * lam) * std::log(w)) / w;
    CHECK(std::fabs(a - 10.0) / 10.0 < 0.15);
    CHECK(alpha_star(big) > 0.0);

    // Leading term alone: lambda = w, threshold 2 -> contribution 2.
    CHECK(2.0 * static_cast<double>(p.w) / static_cast<double>(p.w) == 2.0);

    // Infeasible corner: tiny w with aggressive peakiness.
    WidebandParams bad = WidebandParams::with_defaults(64, 8, 1.0, 1.0);
    CHECK_THROWS_AS(alpha_star(bad), InfeasibleError);
}

TEST_CASE("achievable rate chain at P=1, eps=0.01") {
    // Frozen from direct evaluation of r = delta (w/T) L(alpha*), R = K r.
    WidebandParams p8 = WidebandParams::with_defaults(100000000, 4, 1.0, 0.01);
    const RateSummary r8 = achievable_rate(p8);
    CHECK(r8.per_piece == doctest::Approx(0.77856863).epsilon(1e-6));
    CHECK(r8.total == doctest::Approx(14.01423542).epsilon(1e-6));
    CHECK(r8.capacity_ref ==
          doctest::Approx(std::log(1e8 * 18.0)).epsilon(1e-12));
    CHECK(r8.total / r8.capacity_ref == doctest::Approx(0.657604).epsilon(1e-4));

    // The ratio against the reference climbs with w (both normalizations).
    double prev_ref = 0.0, prev_lnw = 0.0;
    for (double w = 1e4; w <= 1e12 + 1; w *= 100) {
        WidebandParams p = WidebandParams::with_defaults(
            static_cast<std::int64_t>(w), 4, 1.0, 0.01);
        const RateSummary r = achievable_rate(p);
        const double v_ref = r.total / r.capacity_ref;
        const double v_lnw = r.total / std::log(w);
        REQUIRE(v_ref > prev_ref);
        REQUIRE(v_lnw > prev_lnw);
        prev_ref = v_ref;
        prev_lnw = v_lnw;
    }
}

TEST_CASE("tail variants scale the capacity reference") {
    WidebandParams base = WidebandParams::with_defaults(1000000, 4, 1.0, 0.01);
    const RateSummary r0 = achievable_rate(base);

    WidebandParams heavy = base;
    heavy.tail = FadingTail::exponential_mean(2.0);
    CHECK(achievable_rate(heavy).capacity_ref ==
          doctest::Approx(2.0 * r0.capacity_ref).epsilon(1e-12));

    WidebandParams poly = base;
    poly.tail = FadingTail::polynomial(2.0);
    const double W = static_cast<double>(base.w) * static_cast<double>(base.K);
    CHECK(achievable_rate(poly).capacity_ref ==
          doctest::Approx(std::pow(W, 1.0 / 3.0)).epsilon(1e-12));

    WidebandParams noisy = base;
    noisy.csit.beta = 0.5;
    CHECK(achievable_rate(noisy).capacity_ref ==
          doctest::Approx(0.5 * r0.capacity_ref).epsilon(1e-12));
}

TEST_CASE("encoder band selection") {
    const double phi = 2.384843;
    const std::vector<double> gains = {0.1, 3.0, 5.0};
    auto f = first_crossing(gains, phi);
    REQUIRE(f.has_value());
    CHECK(*f == 1); // second band, first to clear the threshold

    const std::vector<double> low = {0.5, 1.0, 2.0};
    CHECK_FALSE(first_crossing(low, phi).has_value());

    // Noisy knowledge compares |g|^2 against beta * threshold.
    const double beta = 0.5;
    const std::vector<double> known = {1.0, 1.3};
    auto fb = first_crossing(known, beta * phi);
    REQUIRE(fb.has_value());
    CHECK(*fb == 1);
}

TEST_CASE("energy decoder picks the argmax and rejects ties") {
    CHECK(decode_max_energy({{1.0, 4.2, 1.1}}) == 1);
    CHECK(decode_max_energy({{5.0}}) == 0);
    CHECK_THROWS_AS(decode_max_energy({{2.0, 2.0, 1.0}}), TieError);
    CHECK_THROWS_AS(decode_max_energy({{}}), EmptyError);
}

TEST_CASE("parameter defaults and validation") {
    WidebandParams p = WidebandParams::with_defaults(1024, 16, 2.0, 0.1);
    CHECK(p.K == 7); // round(ln 1024) = round(6.93)
    CHECK(p.delta == doctest::Approx(0.1 * 16.0 / 1024.0));
    CHECK(p.lambda ==
          doctest::Approx(16.0 * (2.0 / 7.0) / p.delta).epsilon(1e-12));
    CHECK_THROWS_AS(WidebandParams::with_defaults(1, 4, 1.0, 0.1), DomainError);

    WidebandParams bad = p;
    bad.delta = 1.5;
    CHECK_THROWS_AS(bad.validate(), DomainError);

    // Noisy knowledge is tied to the Gaussian split; other tails reject it.
    WidebandParams poly = p;
    poly.tail = FadingTail::polynomial(2.0);
    poly.csit.beta = 0.5;
    CHECK_THROWS_AS(poly.validate(), DomainError);
}

TEST_CASE("scheme threshold per tail family") {
    WidebandParams p = WidebandParams::with_defaults(256, 4, 1.0, 0.1);
    CHECK(scheme_threshold(p) == doctest::Approx(threshold(256.0)));

    p.tail = FadingTail::exponential_mean(3.0);
    CHECK(scheme_threshold(p) == doctest::Approx(3.0 * threshold(256.0)));

    p.tail = FadingTail::polynomial(2.0);
    const double t = scheme_threshold(p);
    // Pinned so that w * P(gain >= t) = 2 ln w.
    CHECK(256.0 * tail_exceedance(p.tail, t) ==
          doctest::Approx(2.0 * std::log(256.0)).epsilon(1e-12));
}
