#pragma once

// Exact arithmetic substrate: GMP-backed integers and rationals, and
// capped-precision p-adic numbers with explicit precision bookkeeping.

#include <cstdint>
#include <limits>
#include <optional>
#include <string>

#include <gmpxx.h>

namespace mockpadic {

using BigInt = mpz_class;
using BigRational = mpq_class;

/// Builds num/den in lowest terms with the sign on the numerator.
/// Throws InvalidInput when den == 0.
BigRational rational_from_parts(const BigInt& num, const BigInt& den);

/// Parses "a" or "a/b" (decimal). Throws InvalidInput on malformed text.
BigRational parse_rational(const std::string& text);

/// "a" for integers, "a/b" otherwise.
std::string to_string(const BigRational& x);
std::string to_string(const BigInt& x);

/// p-adic valuation of a nonzero integer; removes the p-part into `unit` when given.
long valuation(const BigInt& x, std::uint64_t p, BigInt* unit = nullptr);

/// v_p(x) for nonzero rational x.
long valuation(const BigRational& x, std::uint64_t p);

BigInt pow_int(std::uint64_t base, unsigned long exponent);

bool is_prime(std::uint64_t n);

/// Valuation of a difference, possibly only known as a lower bound because
/// the operands agree to the full shared precision.
struct DifferenceValuation {
    long value = 0;
    bool at_least = false; // true: v_p(a - b) >= value ("≥ cap")
    bool infinite = false; // both operands are the exact element 0

    bool operator==(const DifferenceValuation&) const = default;
};

std::string to_string(const DifferenceValuation& d);

// A p-adic number x = p^valuation * unit with the unit known modulo p^digits.
//
// Zero is represented by an infinite-valuation flag. A zero produced by
// cancellation keeps the absolute precision to which it is known; only the
// literal zero is exact. Precision is never inflated: every operation
// returns at most the precision its inputs justify.
class PadicApprox {
public:
    /// Placeholder exact zero with no prime attached.
    PadicApprox() = default;
    static PadicApprox exact_zero(std::uint64_t p);
    /// Zero known modulo p^absolute_precision.
    static PadicApprox zero_mod(std::uint64_t p, long absolute_precision);
    /// Embedding of a rational with `digits` significant digits (0 maps to exact zero).
    static PadicApprox from_rational(const BigRational& x, std::uint64_t p, long digits);
    /// An integer known modulo p^absolute_precision (residue taken mod p^absolute_precision).
    static PadicApprox from_residue(const BigInt& residue, std::uint64_t p, long absolute_precision);

    std::uint64_t prime() const noexcept { return p_; }
    bool is_zero() const noexcept { return !valuation_.has_value(); }
    bool is_exact_zero() const noexcept { return is_zero() && !zero_floor_.has_value(); }

    /// nullopt encodes +∞.
    std::optional<long> valuation() const noexcept { return valuation_; }
    /// Significant digits of the unit; 0 for zero elements.
    long digits() const noexcept { return digits_; }
    const BigInt& unit() const noexcept { return unit_; }
    /// valuation + digits; for zero the floor it is known to; nullopt when exact.
    std::optional<long> absolute_precision() const noexcept;

    /// Representative in [0, p^n) of x mod p^n. Requires x integral and n <= absolute precision.
    BigInt residue(long n) const;

    /// The same number with precision lowered to `absolute` (never raised).
    PadicApprox reduced_to(long absolute) const;

    PadicApprox operator-() const;
    friend PadicApprox operator+(const PadicApprox& a, const PadicApprox& b);
    friend PadicApprox operator-(const PadicApprox& a, const PadicApprox& b);
    friend PadicApprox operator*(const PadicApprox& a, const PadicApprox& b);

    /// Exact agreement on the shared absolute precision.
    bool agrees_with(const PadicApprox& other) const;

    /// "O(5^3)" / "5^2 * 2 + O(5^5)" style rendering.
    std::string to_string() const;

private:
    PadicApprox(std::uint64_t p) : p_(p) {}

    std::uint64_t p_ = 0;
    std::optional<long> valuation_;
    BigInt unit_;
    long digits_ = 0;
    std::optional<long> zero_floor_; // only meaningful for zero elements
};

PadicApprox padic_from_rational(const BigRational& x, std::uint64_t p, long digits);

/// v_p(a - b) on the shared precision; throws DomainMismatch for different primes.
DifferenceValuation padic_valuation_of_difference(const PadicApprox& a, const PadicApprox& b);

} // namespace mockpadic
