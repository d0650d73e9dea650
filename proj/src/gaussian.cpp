#include "ruinlab/gaussian.hpp"

#include <cmath>
#include <numbers>

#include "ruinlab/errors.hpp"

namespace ruinlab {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

inline void check_finite(double x, const char* fn) {
    detail::require_domain(std::isfinite(x), std::string(fn) + ": argument must be finite");
}

// Mills ratio Psi(x)/phi(x) by backward evaluation of Laplace's continued
// fraction. Only used for x >= 30, where 60 terms are far more than enough.
double mills_ratio_cf(double x) {
    double tail = x;
    for (int k = 60; k >= 1; --k) tail = x + k / tail;
    return 1.0 / tail;
}

}  // namespace

double normal_cdf(double x) {
    check_finite(x, "normal_cdf");
    return 0.5 * std::erfc(-x * kInvSqrt2);
}

double normal_tail(double x) {
    check_finite(x, "normal_tail");
    return 0.5 * std::erfc(x * kInvSqrt2);
}

double log_normal_tail(double x) {
    check_finite(x, "log_normal_tail");
    if (x < 30.0) return std::log(normal_tail(x));
    return -0.5 * x * x - 0.5 * std::log(2.0 * std::numbers::pi) + std::log(mills_ratio_cf(x));
}

double normal_pdf(double x) {
    return std::exp(-0.5 * x * x) * (std::numbers::inv_sqrtpi / std::numbers::sqrt2);
}

Philox4x32Counter philox4x32_10(Philox4x32Counter ctr, Philox4x32Key key) {
    constexpr std::uint32_t kMul0 = 0xD2511F53;
    constexpr std::uint32_t kMul1 = 0xCD9E8D57;
    constexpr std::uint32_t kWeyl0 = 0x9E3779B9;
    constexpr std::uint32_t kWeyl1 = 0xBB67AE85;
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            key[0] += kWeyl0;
            key[1] += kWeyl1;
        }
        const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
        const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
        const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const auto lo0 = static_cast<std::uint32_t>(p0);
        const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const auto lo1 = static_cast<std::uint32_t>(p1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
}

namespace detail {

// Marsaglia & Tsang (2000) layer construction, 256 layers over 52-bit
// magnitudes. Layer 0 is the base strip together with the tail beyond r.
const ZigguratTables& ziggurat_tables() noexcept {
    static const ZigguratTables tables = [] {
        ZigguratTables t;
        constexpr double r = 3.6541528853610087963519472518;
        constexpr double area = 4.92867323399e-3;
        constexpr double m = 4503599627370496.0;  // 2^52
        double x = r;
        double prev = r;
        const double q = area / std::exp(-0.5 * r * r);
        t.k[0] = static_cast<std::uint64_t>((r / q) * m);
        t.k[1] = 0;
        t.w[0] = q / m;
        t.w[255] = r / m;
        t.f[0] = 1.0;
        t.f[255] = std::exp(-0.5 * r * r);
        for (int i = 254; i >= 1; --i) {
            x = std::sqrt(-2.0 * std::log(area / x + std::exp(-0.5 * x * x)));
            t.k[i + 1] = static_cast<std::uint64_t>((x / prev) * m);
            prev = x;
            t.f[i] = std::exp(-0.5 * x * x);
            t.w[i] = x / m;
        }
        return t;
    }();
    return tables;
}

}  // namespace detail

NormalStream::NormalStream(StreamKey key, std::uint32_t substream) noexcept
    : zig_(&detail::ziggurat_tables()),
      philox_key_{static_cast<std::uint32_t>(key.seed), static_cast<std::uint32_t>(key.seed >> 32)},
      substream_(substream),
      idx_lo_(static_cast<std::uint32_t>(key.stream_index)),
      idx_hi_(static_cast<std::uint32_t>(key.stream_index >> 32)) {}

void NormalStream::refill() noexcept {
    // Structure-of-arrays Philox over kBuffer / 2 consecutive blocks so the
    // rounds vectorize; bitwise identical to calling philox4x32_10 per block.
    constexpr std::size_t kBlocks = kBuffer / 2;
    constexpr std::uint32_t kMul0 = 0xD2511F53;
    constexpr std::uint32_t kMul1 = 0xCD9E8D57;
    std::uint32_t c0[kBlocks], c1[kBlocks], c2[kBlocks], c3[kBlocks];
    for (std::size_t j = 0; j < kBlocks; ++j) {
        c0[j] = block_ + static_cast<std::uint32_t>(j);
        c1[j] = substream_;
        c2[j] = idx_lo_;
        c3[j] = idx_hi_;
    }
    block_ += static_cast<std::uint32_t>(kBlocks);
    std::uint32_t k0 = philox_key_[0];
    std::uint32_t k1 = philox_key_[1];
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            k0 += 0x9E3779B9;
            k1 += 0xBB67AE85;
        }
        for (std::size_t j = 0; j < kBlocks; ++j) {
            const std::uint64_t p0 = std::uint64_t{kMul0} * c0[j];
            const std::uint64_t p1 = std::uint64_t{kMul1} * c2[j];
            const auto n0 = static_cast<std::uint32_t>(p1 >> 32) ^ c1[j] ^ k0;
            const auto n2 = static_cast<std::uint32_t>(p0 >> 32) ^ c3[j] ^ k1;
            c1[j] = static_cast<std::uint32_t>(p1);
            c3[j] = static_cast<std::uint32_t>(p0);
            c0[j] = n0;
            c2[j] = n2;
        }
    }
    for (std::size_t j = 0; j < kBlocks; ++j) {
        buf_[2 * j] = (std::uint64_t{c1[j]} << 32) | c0[j];
        buf_[2 * j + 1] = (std::uint64_t{c3[j]} << 32) | c2[j];
    }
    pos_ = 0;
}

double NormalStream::next_slow(std::size_t layer, double x, bool negative) noexcept {
    constexpr double r = 3.6541528853610087963519472518;
    for (;;) {
        if (layer == 0) {
            // Tail beyond r.
            for (;;) {
                const double xx = -std::log1p(-next_uniform()) / r;
                const double yy = -std::log1p(-next_uniform());
                if (yy + yy > xx * xx) return negative ? -(r + xx) : r + xx;
            }
        }
        const auto& f = zig_->f;
        if ((f[layer - 1] - f[layer]) * next_uniform() + f[layer] < std::exp(-0.5 * x * x)) return x;

        const std::uint64_t bits = next_bits();
        layer = bits & 0xff;
        negative = (bits >> 8) & 1;
        const std::uint64_t magnitude = (bits >> 9) & 0x000fffffffffffffULL;
        x = static_cast<double>(magnitude) * zig_->w[layer];
        if (negative) x = -x;
        if (magnitude < zig_->k[layer]) return x;
    }
}

void NormalStream::fill(std::span<double> out) noexcept {
    for (double& z : out) z = next();
}

std::vector<double> standard_normals(StreamKey key, std::size_t n) {
    std::vector<double> out(n);
    NormalStream stream(key);
    stream.fill(out);
    return out;
}

}  // namespace ruinlab
