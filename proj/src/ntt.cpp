#include "mockpadic/ntt.hpp"

#include <algorithm>
#include <array>
#include <cstdint>

#include "mockpadic/errors.hpp"

namespace mockpadic::ntt {

namespace {

using u64 = std::uint64_t;

struct PrimeSpec {
    u64 q;
    u64 root;
};

// Each prime is below 2^62 with 2-adicity at least 32.
constexpr std::array<PrimeSpec, kPrimeCount> kPrimes{{
    {4611685941117976577ULL, 3},
    {4611685692009873409ULL, 19},
    {4611685606110527489ULL, 3},
    {4611685318347718657ULL, 5},
    {4611685232448372737ULL, 3},
    {4611685219563470849ULL, 3},
}};

constexpr int kMaxLog = 30;

// Montgomery arithmetic modulo a prime below 2^62, R = 2^64.
struct Mont {
    u64 q = 0;
    u64 qneg_inv = 0;
    u64 r2 = 0;

    explicit Mont(u64 modulus) : q(modulus) {
        u64 inv = q;
        for (int i = 0; i < 6; ++i) inv *= 2 - q * inv;
        qneg_inv = 0 - inv;
        const u128 r = (static_cast<u128>(1) << 64) % q;
        r2 = static_cast<u64>((r * r) % q);
    }

    u64 reduce(u128 t) const noexcept {
        const u64 m = static_cast<u64>(t) * qneg_inv;
        const u64 u = static_cast<u64>((t + static_cast<u128>(m) * q) >> 64);
        return u >= q ? u - q : u;
    }
    u64 mul(u64 a, u64 b) const noexcept { return reduce(static_cast<u128>(a) * b); }
    u64 to_mont(u64 a) const noexcept { return mul(a % q, r2); }
    u64 from_mont(u64 a) const noexcept { return reduce(a); }
    u64 add(u64 a, u64 b) const noexcept {
        const u64 s = a + b;
        return s >= q ? s - q : s;
    }
    u64 sub(u64 a, u64 b) const noexcept { return a >= b ? a - b : a + q - b; }
    u64 pow(u64 a, u64 e) const noexcept {
        u64 r = to_mont(1);
        while (e) {
            if (e & 1) r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }
};

int bit_length(std::size_t n) {
    int b = 0;
    while (n) {
        ++b;
        n >>= 1;
    }
    return b;
}

// Roots for the in-place butterflies: each block of a level shares one
// twiddle, advanced by rate[ctz(~s)] between blocks, so no tables are read.
struct Rates {
    std::array<u64, kMaxLog + 1> rate{};
    std::array<u64, kMaxLog + 1> irate{};

    Rates(const Mont& m, u64 g) {
        std::array<u64, kMaxLog + 3> root{}, iroot{};
        constexpr int rank = kMaxLog + 2;
        root[rank] = m.pow(g, (m.q - 1) >> rank);
        iroot[rank] = m.pow(root[rank], m.q - 2);
        for (int i = rank - 1; i >= 0; --i) {
            root[static_cast<std::size_t>(i)] = m.mul(root[static_cast<std::size_t>(i + 1)], root[static_cast<std::size_t>(i + 1)]);
            iroot[static_cast<std::size_t>(i)] = m.mul(iroot[static_cast<std::size_t>(i + 1)], iroot[static_cast<std::size_t>(i + 1)]);
        }
        u64 prod = m.to_mont(1), iprod = m.to_mont(1);
        for (int i = 0; i <= kMaxLog; ++i) {
            const auto ui = static_cast<std::size_t>(i);
            rate[ui] = m.mul(root[ui + 2], prod);
            irate[ui] = m.mul(iroot[ui + 2], iprod);
            prod = m.mul(prod, iroot[ui + 2]);
            iprod = m.mul(iprod, root[ui + 2]);
        }
    }
};

// Forward transform, natural order in, bit-reversed out (Montgomery domain).
void transform_forward(u64* a, int log, const Mont& m, const Rates& r) {
    for (int len = 0; len < log; ++len) {
        const std::size_t p = std::size_t{1} << (log - len - 1);
        const std::size_t blocks = std::size_t{1} << len;
        u64 rot = m.to_mont(1);
        for (std::size_t s = 0; s < blocks; ++s) {
            u64* x = a + (s << (log - len));
            u64* y = x + p;
            for (std::size_t i = 0; i < p; ++i) {
                const u64 l = x[i], rr = m.mul(y[i], rot);
                x[i] = m.add(l, rr);
                y[i] = m.sub(l, rr);
            }
            if (s + 1 != blocks) rot = m.mul(rot, r.rate[static_cast<std::size_t>(__builtin_ctzll(~s))]);
        }
    }
}

// Inverse transform, bit-reversed in, natural out, unscaled.
void transform_inverse(u64* a, int log, const Mont& m, const Rates& r) {
    for (int len = log; len > 0; --len) {
        const std::size_t p = std::size_t{1} << (log - len);
        const std::size_t blocks = std::size_t{1} << (len - 1);
        u64 irot = m.to_mont(1);
        for (std::size_t s = 0; s < blocks; ++s) {
            u64* x = a + (s << (log - len + 1));
            u64* y = x + p;
            for (std::size_t i = 0; i < p; ++i) {
                const u64 l = x[i], rr = y[i];
                x[i] = m.add(l, rr);
                y[i] = m.mul(m.sub(l, rr), irot);
            }
            if (s + 1 != blocks) irot = m.mul(irot, r.irate[static_cast<std::size_t>(__builtin_ctzll(~s))]);
        }
    }
}

void load(std::vector<u64>& dst, std::span<const u128> src, const Mont& m) {
    std::fill(dst.begin(), dst.end(), 0);
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] = m.to_mont(static_cast<u64>(src[i] % m.q));
}

// Convolution modulo one NTT prime; returns the first out_len outputs in
// ordinary (non-Montgomery) representation.
std::vector<u64> convolve_one(const PrimeSpec& spec, std::span<const u128> a, std::span<const u128> b,
                              int log, std::size_t out_len) {
    const std::size_t size = std::size_t{1} << log;
    const Mont m(spec.q);
    const Rates rates(m, m.to_mont(spec.root));
    std::vector<u64> fa(size);
    load(fa, a, m);
    transform_forward(fa.data(), log, m, rates);
    const bool square = a.data() == b.data() && a.size() == b.size();
    if (square) {
        for (std::size_t i = 0; i < size; ++i) fa[i] = m.mul(fa[i], fa[i]);
    } else {
        std::vector<u64> fb(size);
        load(fb, b, m);
        transform_forward(fb.data(), log, m, rates);
        for (std::size_t i = 0; i < size; ++i) fa[i] = m.mul(fa[i], fb[i]);
    }
    transform_inverse(fa.data(), log, m, rates);
    const u64 scale = m.pow(m.to_mont(static_cast<u64>(size % m.q)), m.q - 2);
    std::vector<u64> out(out_len);
    for (std::size_t i = 0; i < out_len; ++i) out[i] = m.from_mont(m.mul(fa[i], scale));
    return out;
}

} // namespace

int primes_needed(const ResidueRing& ring, std::size_t terms) {
    // Each prime exceeds 2^61.99, so 61 usable bits per prime is conservative.
    const int bits = 2 * ring.modulus_bits() + bit_length(terms) + 1;
    const int k = (bits + 60) / 61;
    if (k > kPrimeCount) {
        throw ResourceExhausted("convolution needs " + std::to_string(k) + " NTT primes; only " +
                                std::to_string(kPrimeCount) + " are available");
    }
    return k;
}

std::vector<u128> convolve(const ResidueRing& ring, std::span<const u128> a, std::span<const u128> b,
                           std::size_t out_len) {
    if (a.empty() || b.empty() || out_len == 0) return std::vector<u128>(out_len, 0);
    out_len = std::min(out_len, a.size() + b.size() - 1);
    a = a.first(std::min(a.size(), out_len));
    b = b.first(std::min(b.size(), out_len));
    const std::size_t full = a.size() + b.size() - 1;
    const int log = bit_length(full - 1);
    if (log > kMaxLog) throw ResourceExhausted("convolution length exceeds the NTT limit");
    const int k = primes_needed(ring, std::min(a.size(), b.size()));

    std::vector<std::vector<u64>> residues;
    residues.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) residues.push_back(convolve_one(kPrimes[static_cast<std::size_t>(i)], a, b, log, out_len));

    // Garner: mixed-radix digits v_i, then sum v_i * (q_0 ... q_{i-1}) mod the ring modulus.
    std::vector<Mont> monts;
    for (int i = 0; i < k; ++i) monts.emplace_back(kPrimes[static_cast<std::size_t>(i)].q);
    // inv[i][j] = q_j^{-1} mod q_i (Montgomery form), j < i
    std::vector<std::vector<u64>> inv(static_cast<std::size_t>(k));
    std::vector<u128> radix_prepared(static_cast<std::size_t>(k));
    u128 radix = 1 % ring.modulus();
    for (int i = 0; i < k; ++i) {
        const Mont& mi = monts[static_cast<std::size_t>(i)];
        for (int j = 0; j < i; ++j) {
            const u64 qj = mi.to_mont(kPrimes[static_cast<std::size_t>(j)].q);
            inv[static_cast<std::size_t>(i)].push_back(mi.pow(qj, mi.q - 2));
        }
        radix_prepared[static_cast<std::size_t>(i)] = ring.prepare(radix);
        radix = ring.mul(radix, static_cast<u128>(kPrimes[static_cast<std::size_t>(i)].q) % ring.modulus());
    }

    std::vector<u128> out(out_len);
    std::array<u64, kPrimeCount> v{};
    for (std::size_t t = 0; t < out_len; ++t) {
        u128 acc = 0;
        for (int i = 0; i < k; ++i) {
            const auto ui = static_cast<std::size_t>(i);
            const Mont& mi = monts[ui];
            u64 x = mi.to_mont(residues[ui][t]);
            for (int j = 0; j < i; ++j) {
                const auto uj = static_cast<std::size_t>(j);
                x = mi.mul(mi.sub(x, mi.to_mont(v[uj] % mi.q)), inv[ui][uj]);
            }
            v[ui] = mi.from_mont(x);
            acc = ring.add(acc, ring.mul_prepared(static_cast<u128>(v[ui]), radix_prepared[ui]));
        }
        out[t] = acc;
    }
    return out;
}

} // namespace mockpadic::ntt
