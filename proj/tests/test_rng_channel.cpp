#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "csitlab/channel.hpp"
#include "csitlab/errors.hpp"
#include "csitlab/rng.hpp"

using namespace csitlab;

TEST_CASE("streams replay and diverge as keyed") {
    RngStream a(42, 7), b(42, 7), c(42, 8);
    bool all_equal = true, any_equal_c = false;
    for (int i = 0; i < 1000; ++i) {
        const auto va = a.next_u64();
        all_equal = all_equal && va == b.next_u64();
        any_equal_c = any_equal_c || va == c.next_u64();
    }
    CHECK(all_equal);
    CHECK_FALSE(any_equal_c);
}

TEST_CASE("uniforms live in (0,1] and exponentials match moments") {
    RngStream rng(1, 0);
    const int n = 1000000;
    double sum = 0.0, mn = 1.0;
    for (int i = 0; i < n; ++i) {
        const double u = rng.next_unit();
        mn = std::min(mn, u);
        sum += -std::log(u);
    }
    CHECK(mn > 0.0);
    CHECK(sum / n == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("rayleigh gain draws have unit mean") {
    RngStream rng(2, 0);
    const int n = 1000000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i)
        sum += sample_gain_squared(FadingTail::rayleigh(), rng);
    CHECK(sum / n == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("exponential-mean tail scales the mean") {
    RngStream rng(3, 0);
    const int n = 1000000;
    double sum = 0.0;
    const auto tail = FadingTail::exponential_mean(3.0);
    for (int i = 0; i < n; ++i) sum += sample_gain_squared(tail, rng);
    CHECK(sum / n == doctest::Approx(3.0).epsilon(0.01));
}

TEST_CASE("polynomial tail has the closed-form exceedance") {
    // P(X >= 4) = 4^-2 = 0.0625 for tail exponent 2.
    RngStream rng(4, 0);
    const int n = 1000000;
    const auto tail = FadingTail::polynomial(2.0);
    int hits = 0;
    for (int i = 0; i < n; ++i)
        if (sample_gain_squared(tail, rng) >= 4.0) ++hits;
    const double p = 0.0625;
    const double sigma = std::sqrt(p * (1 - p) / n);
    CHECK(std::fabs(static_cast<double>(hits) / n - p) <= 3 * sigma);
    CHECK(tail_exceedance(tail, 4.0) == doctest::Approx(0.0625));
}

TEST_CASE("noise is unit-variance circularly symmetric") {
    RngStream rng(5, 0);
    const int n = 1000000;
    double esq = 0.0, ere = 0.0;
    int tail_hits = 0;
    const double cut = 2.0 * std::log(100.0); // exceedance 1e-4
    for (int i = 0; i < n; ++i) {
        const ComplexSample z = sample_noise(rng);
        esq += std::norm(z);
        ere += z.real();
        if (std::norm(z) >= cut) ++tail_hits;
    }
    CHECK(esq / n == doctest::Approx(1.0).epsilon(0.01));
    CHECK(std::fabs(ere / n) <= 0.005);
    const double p = 1e-4;
    CHECK(std::fabs(static_cast<double>(tail_hits) / n - p) <=
          3 * std::sqrt(p * (1 - p) / n));
}

TEST_CASE("channel law is h*x + n") {
    CHECK(apply_channel({0, 0}, {3, -2}, {1, 0}) == ComplexSample{1, 0});
    CHECK(apply_channel({1, 0}, {2, 0}, {0, 0}) == ComplexSample{2, 0});
    // x = sqrt(lambda) with lambda = 4, h = 1 + i: y = 2 + 2i, |y|^2 = 8.
    const ComplexSample y = apply_channel({2, 0}, {1, 1}, {0, 0});
    CHECK(y == ComplexSample{2, 2});
    CHECK(std::norm(y) == doctest::Approx(8.0));
}

namespace {

// Two-sample Kolmogorov-Smirnov statistic.
double ks_statistic(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j])
            ++i;
        else
            ++j;
        const double fa = static_cast<double>(i) / a.size();
        const double fb = static_cast<double>(j) / b.size();
        d = std::max(d, std::fabs(fa - fb));
    }
    return d;
}

} // namespace

TEST_CASE("beta-split gain agrees with the direct draw in distribution") {
    const std::size_t n = 100000;
    RngStream rng(6, 0);
    std::vector<double> direct(n), split(n);
    const double beta = 0.4;
    for (auto& v : direct) v = sample_gain_squared(FadingTail::rayleigh(), rng);
    for (auto& v : split) {
        const ComplexSample g = rng.next_cnormal(beta);
        const ComplexSample f = rng.next_cnormal(1.0 - beta);
        v = std::norm(g + f);
    }
    // Two-sample KS at significance 0.01: c(0.01) = 1.628.
    const double crit = 1.628 * std::sqrt(2.0 / static_cast<double>(n));
    CHECK(ks_statistic(direct, split) < crit);
}

TEST_CASE("band maxima follow the doubly exponential law") {
    // P(max of w unit exponentials <= ln w) -> exp(-1). The max of the -log
    // uniforms is the -log of the minimum uniform, so each replicate costs
    // one log instead of w.
    for (const std::int64_t w : {std::int64_t{10000}, std::int64_t{100000}}) {
        RngStream rng(7, static_cast<std::uint64_t>(w));
        const int reps = 30000;
        int below = 0;
        for (int r = 0; r < reps; ++r) {
            double min_u = 1.0;
            for (std::int64_t k = 0; k < w; ++k)
                min_u = std::min(min_u, rng.next_unit());
            if (-std::log(min_u) - std::log(static_cast<double>(w)) <= 0.0)
                ++below;
        }
        const double frac = static_cast<double>(below) / reps;
        CHECK(std::fabs(frac - std::exp(-1.0)) < 0.01);
    }
}

TEST_CASE("invalid parameters are rejected") {
    CHECK_THROWS_AS(FadingTail::exponential_mean(0.0), DomainError);
    CHECK_THROWS_AS(FadingTail::polynomial(-1.0), DomainError);
    CHECK_THROWS_AS(CsitQuality{0.0}.validate(), DomainError);
    CHECK_THROWS_AS(CsitQuality{1.5}.validate(), DomainError);
    CHECK_NOTHROW(CsitQuality{1.0}.validate());
}
