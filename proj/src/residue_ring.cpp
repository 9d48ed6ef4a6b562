#include "mockpadic/residue_ring.hpp"

#include <algorithm>

#include "mockpadic/errors.hpp"

namespace mockpadic {

ResidueRing::ResidueRing(std::uint64_t p, int digits) : p_(p), digits_(digits) {
    if (p < 3 || !is_prime(p)) throw InvalidInput("residue ring: p must be an odd prime");
    if (digits < 1) throw InvalidInput("residue ring: digits must be positive");
    const BigInt modulus = pow_int(p, static_cast<unsigned long>(digits));
    bits_ = static_cast<int>(mpz_sizeinbase(modulus.get_mpz_t(), 2));
    if (bits_ > kResidueMaxBits) {
        throw ResourceExhausted("residue ring: " + std::to_string(p) + "^" + std::to_string(digits) +
                                " needs " + std::to_string(bits_) + " bits; at most " +
                                std::to_string(kResidueMaxBits) + " are supported");
    }
    n_ = 1;
    for (int i = 0; i < digits; ++i) n_ *= p;

    // Newton iteration for n^{-1} mod 2^128; n is odd so n*n == 1 mod 8.
    u128 inv = n_;
    for (int i = 0; i < 7; ++i) inv *= 2 - n_ * inv;
    ninv_ = -inv;

    // 2^128 mod n, then doubled 128 more times.
    u128 r = (static_cast<u128>(0) - n_) % n_;
    for (int i = 0; i < 128; ++i) r = add(r, r);
    r2_ = r;
}

u128 ResidueRing::pow(u128 a, std::uint64_t e) const noexcept {
    u128 result = 1 % n_;
    while (e) {
        if (e & 1) result = mul(result, a);
        a = mul(a, a);
        e >>= 1;
    }
    return result;
}

u128 ResidueRing::inverse(u128 a) const {
    const BigInt x = to_big(a);
    const BigInt m = to_big(n_);
    BigInt inv;
    if (mpz_invert(inv.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t()) == 0) {
        throw InvalidInput("residue ring: element is not a unit");
    }
    return from_big(inv);
}

u128 ResidueRing::from_int(long long x) const noexcept {
    if (x >= 0) return static_cast<u128>(x) % n_;
    const u128 magnitude = static_cast<u128>(-(x + 1)) + 1;
    return neg(magnitude % n_);
}

u128 ResidueRing::from_big(const BigInt& x) const {
    BigInt r;
    mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), to_big(n_).get_mpz_t());
    u128 out = 0;
    std::size_t count = 0;
    std::uint64_t words[2] = {0, 0};
    mpz_export(words, &count, -1, sizeof(std::uint64_t), 0, 0, r.get_mpz_t());
    out = (static_cast<u128>(words[1]) << 64) | words[0];
    return out;
}

u128 ResidueRing::from_rational(const BigRational& x) const {
    const u128 num = from_big(BigInt(x.get_num()));
    if (x.get_den() == 1) return num;
    return mul(num, inverse(from_big(BigInt(x.get_den()))));
}

BigInt ResidueRing::to_big(u128 a) const {
    BigInt r;
    const std::uint64_t words[2] = {static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(a >> 64)};
    mpz_import(r.get_mpz_t(), 2, -1, sizeof(std::uint64_t), 0, 0, words);
    return r;
}

std::string ResidueRing::tag() const { return "mod:" + std::to_string(p_) + "^" + std::to_string(digits_); }

std::string u128_to_string(u128 x) {
    if (x == 0) return "0";
    std::string s;
    while (x) {
        s.push_back(static_cast<char>('0' + static_cast<int>(x % 10)));
        x /= 10;
    }
    std::reverse(s.begin(), s.end());
    return s;
}

} // namespace mockpadic
