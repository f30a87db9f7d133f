#pragma once

#include <cstdint>
#include <cmath>

namespace greenpath {

// Philox 4x32-10 counter-based generator.  A stream is keyed by the user
// seed; the stream id (walk index) occupies the upper counter words, so any
// walk can be generated independently of every other walk regardless of
// scheduling.  Blocks are generated four at a time: the per-block round
// chains are data-independent, which lets the CPU pipeline the multiplies.
class Philox4x32 {
public:
    Philox4x32(std::uint64_t seed, std::uint64_t stream)
        : key0_(static_cast<std::uint32_t>(seed)),
          key1_(static_cast<std::uint32_t>(seed >> 32)),
          stream_(stream) {}

    std::uint32_t next_u32() {
        if (pos_ == kBuf) refill();
        return buf_[pos_++];
    }

    std::uint64_t next_u64() {
        const std::uint64_t hi = next_u32();
        return (hi << 32) | next_u32();
    }

    // Uniform double in the open interval (0, 1), 53 significant bits.
    double uniform() {
        if (upos_ == kBuf / 2) urefill();
        return ubuf_[upos_++];
    }

private:
    static constexpr std::uint32_t kMul0 = 0xD2511F53u;
    static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
    static constexpr int kBuf = 16;  // four counter blocks per refill

    // Two independent Philox rounds side by side; the chains have no data
    // dependence, so the multiplies pipeline.
    static void round2(std::uint32_t k0, std::uint32_t k1, std::uint32_t* a, std::uint32_t* b) {
        const std::uint64_t pa0 = static_cast<std::uint64_t>(kMul0) * a[0];
        const std::uint64_t pa1 = static_cast<std::uint64_t>(kMul1) * a[2];
        const std::uint64_t pb0 = static_cast<std::uint64_t>(kMul0) * b[0];
        const std::uint64_t pb1 = static_cast<std::uint64_t>(kMul1) * b[2];
        const std::uint32_t a0 = static_cast<std::uint32_t>(pa1 >> 32) ^ a[1] ^ k0;
        const std::uint32_t a1 = static_cast<std::uint32_t>(pa1);
        const std::uint32_t a2 = static_cast<std::uint32_t>(pa0 >> 32) ^ a[3] ^ k1;
        const std::uint32_t a3 = static_cast<std::uint32_t>(pa0);
        const std::uint32_t b0 = static_cast<std::uint32_t>(pb1 >> 32) ^ b[1] ^ k0;
        const std::uint32_t b1 = static_cast<std::uint32_t>(pb1);
        const std::uint32_t b2 = static_cast<std::uint32_t>(pb0 >> 32) ^ b[3] ^ k1;
        const std::uint32_t b3 = static_cast<std::uint32_t>(pb0);
        a[0] = a0; a[1] = a1; a[2] = a2; a[3] = a3;
        b[0] = b0; b[1] = b1; b[2] = b2; b[3] = b3;
    }

    void generate(std::uint32_t out[kBuf]) {
        std::uint32_t a[4], b[4], c[4], d[4];
        auto init = [this](std::uint32_t* ctr, std::uint64_t block) {
            ctr[0] = static_cast<std::uint32_t>(block);
            ctr[1] = static_cast<std::uint32_t>(block >> 32);
            ctr[2] = static_cast<std::uint32_t>(stream_);
            ctr[3] = static_cast<std::uint32_t>(stream_ >> 32);
        };
        init(a, block_);
        init(b, block_ + 1);
        init(c, block_ + 2);
        init(d, block_ + 3);
        std::uint32_t k0 = key0_, k1 = key1_;
        for (int round = 0; round < 10; ++round) {
            round2(k0, k1, a, b);
            round2(k0, k1, c, d);
            k0 += kWeyl0;
            k1 += kWeyl1;
        }
        for (int i = 0; i < 4; ++i) {
            out[i] = a[i];
            out[4 + i] = b[i];
            out[8 + i] = c[i];
            out[12 + i] = d[i];
        }
        block_ += 4;
    }

    void refill() {
        generate(buf_);
        pos_ = 0;
    }

    void urefill() {
        std::uint32_t raw[kBuf];
        generate(raw);
        for (int i = 0; i < kBuf / 2; ++i) {
            const std::uint64_t bits =
                (static_cast<std::uint64_t>(raw[2 * i]) << 32) | raw[2 * i + 1];
            ubuf_[i] = (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
        }
        upos_ = 0;
    }

    std::uint32_t key0_, key1_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    std::uint32_t buf_[kBuf] = {};
    double ubuf_[kBuf / 2] = {};
    int pos_ = kBuf;
    int upos_ = kBuf / 2;
};

// Per-walk random source: uniforms plus polar-method normals (the second
// normal of each pair is cached).
class RandomStream {
public:
    RandomStream(std::uint64_t seed, std::uint64_t stream) : gen_(seed, stream) {}

    double uniform() { return gen_.uniform(); }

    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        // Marsaglia polar method (exact, no trig).
        while (true) {
            const double u = 2.0 * gen_.uniform() - 1.0;
            const double v = 2.0 * gen_.uniform() - 1.0;
            const double s = u * u + v * v;
            if (s >= 1.0 || s == 0.0) continue;
            const double f = std::sqrt(-2.0 * std::log(s) / s);
            spare_ = v * f;
            has_spare_ = true;
            return u * f;
        }
    }

    // Uniform direction on the unit sphere of R^n.
    template <typename PointT>
    void unit_vector(int n, PointT& out) {
        double norm2 = 0.0;
        do {
            norm2 = 0.0;
            for (int i = 0; i < n; ++i) {
                out[i] = normal();
                norm2 += out[i] * out[i];
            }
        } while (norm2 == 0.0);
        const double inv = 1.0 / std::sqrt(norm2);
        for (int i = 0; i < n; ++i) out[i] *= inv;
    }

private:
    Philox4x32 gen_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace greenpath
