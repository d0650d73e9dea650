#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace ruinlab {

// Normal distribution primitives.

/// Standard normal distribution function Phi(x).
double normal_cdf(double x);

/// Standard normal tail Psi(x) = 1 - Phi(x), evaluated through erfc so that
/// relative accuracy is kept deep in the upper tail.
double normal_tail(double x);

/// log Psi(x); finite for every finite x, including where Psi underflows.
double log_normal_tail(double x);

/// Standard normal density.
double normal_pdf(double x);

// Counter-based random streams.

/// Identifies one independent random stream. One stream per Monte Carlo path.
struct StreamKey {
    std::uint64_t seed = 0;
    std::uint64_t stream_index = 0;

    friend bool operator==(const StreamKey&, const StreamKey&) = default;
};

/// Philox4x32 with 10 rounds (Salmon et al., SC'11). Pure function of
/// (counter, key).
using Philox4x32Counter = std::array<std::uint32_t, 4>;
using Philox4x32Key = std::array<std::uint32_t, 2>;
Philox4x32Counter philox4x32_10(Philox4x32Counter ctr, Philox4x32Key key);

namespace detail {
struct ZigguratTables {
    std::array<std::uint64_t, 256> k{};
    std::array<double, 256> w{};
    std::array<double, 256> f{};
};
const ZigguratTables& ziggurat_tables() noexcept;
}  // namespace detail

/// Deterministic N(0,1) sequence for a (key, substream) pair.
///
/// Raw bits come from Philox(ctr = {b, substream, idx_lo, idx_hi},
/// key = {seed_lo, seed_hi}) for blocks b = 0, 1, ...; each block yields two
/// 64-bit words, turned into normals by a 256-layer ziggurat. The sequence
/// depends only on the key and the substream, never on how or where it is
/// consumed.
class NormalStream {
public:
    explicit NormalStream(StreamKey key, std::uint32_t substream = 0) noexcept;

    double next() noexcept {
        const std::uint64_t bits = next_bits();
        const std::size_t layer = bits & 0xff;
        const std::uint64_t magnitude = (bits >> 9) & 0x000fffffffffffffULL;
        double x = static_cast<double>(magnitude) * zig_->w[layer];
        if ((bits >> 8) & 1) x = -x;
        if (magnitude < zig_->k[layer]) return x;
        return next_slow(layer, x, (bits >> 8) & 1);
    }

    void fill(std::span<double> out) noexcept;

    std::uint64_t next_bits() noexcept {
        if (pos_ == buf_.size()) refill();
        return buf_[pos_++];
    }

    /// Uniform on [0, 1) with 53 random bits.
    double next_uniform() noexcept { return static_cast<double>(next_bits() >> 11) * 0x1.0p-53; }

private:
    void refill() noexcept;
    double next_slow(std::size_t layer, double x, bool negative) noexcept;

    const detail::ZigguratTables* zig_;
    Philox4x32Key philox_key_{};
    std::uint32_t substream_ = 0;
    std::uint32_t idx_lo_ = 0;
    std::uint32_t idx_hi_ = 0;
    std::uint32_t block_ = 0;
    static constexpr std::size_t kBuffer = 64;
    std::array<std::uint64_t, kBuffer> buf_{};
    std::size_t pos_ = kBuffer;
};

/// First n variates of the key's stream (substream 0).
std::vector<double> standard_normals(StreamKey key, std::size_t n);

}  // namespace ruinlab
