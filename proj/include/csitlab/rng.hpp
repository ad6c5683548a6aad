#ifndef CSITLAB_RNG_HPP
#define CSITLAB_RNG_HPP

#include <cmath>
#include <complex>
#include <cstdint>

namespace csitlab {

// Counter-based generator (Philox2x64-10). A stream is a value: copying it
// copies the full state, and the same (seed, stream_id) always replays the
// same sequence. Streams with distinct stream_ids are independent, which is
// what lets Monte Carlo trials run on any number of threads and still
// aggregate to bit-identical results.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id)
        : key_(seed), stream_(stream_id), ctr_hi_(stream_id) {}

    std::uint64_t seed() const { return key_; }
    std::uint64_t stream_id() const { return stream_; }

    std::uint64_t next_u64() {
        if (have_buffered_) {
            have_buffered_ = false;
            return buffered_;
        }
        // 128-bit counter: stream id in the high word gives every stream its
        // own disjoint counter range under the same key.
        std::uint64_t x0 = ctr_lo_;
        std::uint64_t x1 = ctr_hi_;
        if (++ctr_lo_ == 0) ++ctr_hi_;
        std::uint64_t k = key_;
        for (int round = 0; round < 10; ++round) {
            const unsigned __int128 prod =
                static_cast<unsigned __int128>(kMultiplier) * x0;
            const std::uint64_t hi = static_cast<std::uint64_t>(prod >> 64);
            const std::uint64_t lo = static_cast<std::uint64_t>(prod);
            x0 = hi ^ k ^ x1;
            x1 = lo;
            k += kWeyl0;
        }
        buffered_ = x1;
        have_buffered_ = true;
        return x0;
    }

    // Uniform on (0, 1]; never returns 0 so -log(u) is always finite.
    double next_unit() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1p-53;
    }

    double next_exponential() { return -std::log(next_unit()); }

    // Standard normal via Box-Muller; the second variate of each pair is
    // cached so consecutive calls consume exactly two uniforms per pair.
    double next_normal() {
        if (have_normal_) {
            have_normal_ = false;
            return cached_normal_;
        }
        const double r = std::sqrt(2.0 * next_exponential());
        const double phase = 2.0 * kPi * next_unit();
        cached_normal_ = r * std::sin(phase);
        have_normal_ = true;
        return r * std::cos(phase);
    }

    // Circularly symmetric complex Gaussian with E|z|^2 = variance.
    std::complex<double> next_cnormal(double variance) {
        const double s = std::sqrt(variance * 0.5);
        const double re = next_normal();
        const double im = next_normal();
        return {s * re, s * im};
    }

private:
    static constexpr std::uint64_t kMultiplier = 0xD2B74407B1CE6E93ull;
    static constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ull;
    static constexpr double kPi = 3.14159265358979323846;

    std::uint64_t key_;
    std::uint64_t stream_;
    std::uint64_t ctr_lo_ = 0;
    std::uint64_t ctr_hi_ = 0;
    std::uint64_t buffered_ = 0;
    bool have_buffered_ = false;
    double cached_normal_ = 0.0;
    bool have_normal_ = false;
};

} // namespace csitlab

#endif
