#pragma once

// Arithmetic in Z/p^M with the modulus held in a 128-bit word.

#include <cstdint>
#include <string>

#include "mockpadic/exactnum.hpp"

namespace mockpadic {

using u128 = unsigned __int128;

/// Largest supported modulus bit length; keeps Montgomery reduction free of
/// carries out of the top word.
inline constexpr int kResidueMaxBits = 126;

class ResidueRing {
public:
    /// Ring Z/p^digits. Throws ResourceExhausted when p^digits needs more than
    /// kResidueMaxBits bits, InvalidInput for p < 3 or non-prime p.
    ResidueRing(std::uint64_t p, int digits);

    std::uint64_t prime() const noexcept { return p_; }
    int digits() const noexcept { return digits_; }
    u128 modulus() const noexcept { return n_; }
    int modulus_bits() const noexcept { return bits_; }

    u128 add(u128 a, u128 b) const noexcept {
        u128 s = a + b;
        return s >= n_ ? s - n_ : s;
    }
    u128 sub(u128 a, u128 b) const noexcept { return a >= b ? a - b : a + (n_ - b); }
    u128 neg(u128 a) const noexcept { return a == 0 ? 0 : n_ - a; }
    u128 mul(u128 a, u128 b) const noexcept { return redc(mul_wide(redc(mul_wide(a, b)), r2_)); }

    /// c * R mod n, for repeated multiplication by the same constant.
    u128 prepare(u128 c) const noexcept { return redc(mul_wide(c, r2_)); }
    /// a * c where `prepared` came from prepare(c).
    u128 mul_prepared(u128 a, u128 prepared) const noexcept { return redc(mul_wide(a, prepared)); }

    u128 pow(u128 a, std::uint64_t e) const noexcept;
    /// Inverse of a unit; throws InvalidInput when p divides a.
    u128 inverse(u128 a) const;

    u128 from_int(long long x) const noexcept;
    u128 from_big(const BigInt& x) const;
    u128 from_rational(const BigRational& x) const; // denominator must be a unit
    BigInt to_big(u128 a) const;

    bool operator==(const ResidueRing& o) const noexcept { return p_ == o.p_ && digits_ == o.digits_; }

    /// "mod:p^M"
    std::string tag() const;

private:
    struct Wide {
        u128 hi, lo;
    };
    static Wide mul_wide(u128 a, u128 b) noexcept;
    u128 redc(Wide t) const noexcept;

    std::uint64_t p_;
    int digits_;
    int bits_;
    u128 n_;
    u128 ninv_; // -n^{-1} mod 2^128
    u128 r2_;   // 2^256 mod n
};

inline ResidueRing::Wide ResidueRing::mul_wide(u128 a, u128 b) noexcept {
    using u64 = std::uint64_t;
    const u64 a0 = static_cast<u64>(a), a1 = static_cast<u64>(a >> 64);
    const u64 b0 = static_cast<u64>(b), b1 = static_cast<u64>(b >> 64);
    const u128 p00 = static_cast<u128>(a0) * b0;
    const u128 p01 = static_cast<u128>(a0) * b1;
    const u128 p10 = static_cast<u128>(a1) * b0;
    const u128 p11 = static_cast<u128>(a1) * b1;
    const u128 mid = (p00 >> 64) + static_cast<u64>(p01) + static_cast<u64>(p10);
    const u128 lo = (mid << 64) | static_cast<u64>(p00);
    const u128 hi = p11 + (p01 >> 64) + (p10 >> 64) + (mid >> 64);
    return {hi, lo};
}

inline u128 ResidueRing::redc(Wide t) const noexcept {
    const u128 m = t.lo * ninv_;
    const Wide mn = mul_wide(m, n_);
    const u128 lo = t.lo + mn.lo;
    const u128 carry = lo < t.lo ? 1 : 0;
    const u128 r = t.hi + mn.hi + carry;
    return r >= n_ ? r - n_ : r;
}

std::string u128_to_string(u128 x);

} // namespace mockpadic
