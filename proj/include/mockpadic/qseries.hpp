#pragma once

// Truncated Laurent q-series.
//
// LaurentSeries holds rational coefficients sparsely; ResidueSeries holds
// coefficients in Z/p^M densely from its start exponent. Both carry an
// exclusive truncation bound `prec`: every coefficient below prec is known,
// nothing at or above it is claimed.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "mockpadic/exactnum.hpp"
#include "mockpadic/residue_ring.hpp"

namespace mockpadic {

/// Weight, level and a character with values in {-1, 0, 1} indexed by d mod N.
struct OperatorContext {
    int weight = 0;
    long level = 1;
    std::vector<int> chi; // size == level

    static OperatorContext trivial(int weight, long level);
    /// Character d -> (d/3) lifted to modulus `level` (3 | level).
    static OperatorContext quadratic_mod3(int weight, long level);

    int character(long d) const;
    /// Throws InvalidInput when chi is not supported on units or has the wrong size.
    void validate() const;
};

class LaurentSeries {
public:
    LaurentSeries() = default;
    /// Zero series known to order prec.
    explicit LaurentSeries(long prec) : prec_(prec) {}
    /// Coefficients from a map; entries at or above prec are rejected.
    LaurentSeries(std::map<long, BigRational> coeffs, long prec);
    /// Dense coefficients c[i] at exponent start + i.
    static LaurentSeries from_dense(long start, const std::vector<BigRational>& c, long prec);
    static LaurentSeries from_integers(long start, const std::vector<BigInt>& c, long prec);
    static LaurentSeries monomial(long exponent, const BigRational& c, long prec);

    long prec() const noexcept { return prec_; }
    /// First exponent with a nonzero coefficient; prec for the zero series.
    long valuation() const noexcept;
    bool is_zero() const noexcept { return coeffs_.empty(); }
    /// Coefficient at n; throws PrecisionError when n >= prec.
    BigRational coeff(long n) const;
    const std::map<long, BigRational>& terms() const noexcept { return coeffs_; }

    /// Same series with prec lowered to min(prec, new_prec).
    LaurentSeries truncated(long new_prec) const;
    /// q^s times this series.
    LaurentSeries shifted(long s) const;
    LaurentSeries scaled(const BigRational& c) const;

    LaurentSeries operator-() const;
    friend LaurentSeries operator+(const LaurentSeries& a, const LaurentSeries& b);
    friend LaurentSeries operator-(const LaurentSeries& a, const LaurentSeries& b);
    friend LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b);

    /// Equal coefficients below the smaller prec.
    bool agrees_with(const LaurentSeries& other) const;
    /// Identical coefficients and prec.
    bool operator==(const LaurentSeries& other) const = default;

    /// Common denominator of all stored coefficients.
    BigInt common_denominator() const;

    std::string to_string(long max_terms = 12) const;

private:
    void normalize();

    std::map<long, BigRational> coeffs_;
    long prec_ = 0;
};

LaurentSeries add(const LaurentSeries& a, const LaurentSeries& b);
LaurentSeries sub(const LaurentSeries& a, const LaurentSeries& b);
LaurentSeries mul(const LaurentSeries& a, const LaurentSeries& b);
/// Coefficient at n becomes n^times a(n).
LaurentSeries apply_D(const LaurentSeries& a, int times);
/// sum_{n>0} n^{1-k} a(n) q^n; rejects nonzero coefficients at n <= 0.
LaurentSeries eichler_integral(const LaurentSeries& h, int k);
/// sum a(pn) q^n, prec -> ceil(prec / p).
LaurentSeries apply_Up(const LaurentSeries& a, long p);
/// sum a(n) q^{pn}, prec -> p (prec - 1) + 1.
LaurentSeries apply_Vp(const LaurentSeries& a, long p);
/// (T_l a)(n) = a(ln) + chi(l) l^{k-1} a(n/l).
LaurentSeries hecke_Tl(const LaurentSeries& a, long l, const OperatorContext& ctx);
/// Terms with n <= 0.
LaurentSeries principal_part(const LaurentSeries& a);

class ResidueSeries {
public:
    using Ring = std::shared_ptr<const ResidueRing>;

    ResidueSeries(Ring ring, long start, std::vector<u128> coeffs, long prec);
    static ResidueSeries zero(Ring ring, long prec);
    static ResidueSeries from_rational(Ring ring, const LaurentSeries& a);

    const Ring& ring() const noexcept { return ring_; }
    long start() const noexcept { return start_; }
    long prec() const noexcept { return prec_; }
    long valuation() const noexcept;
    u128 coeff(long n) const;
    /// Dense coefficients for exponents start .. prec-1.
    const std::vector<u128>& data() const noexcept { return c_; }

    ResidueSeries truncated(long new_prec) const;
    ResidueSeries shifted(long s) const;
    ResidueSeries scaled(u128 c) const;

    ResidueSeries operator-() const;
    friend ResidueSeries operator+(const ResidueSeries& a, const ResidueSeries& b);
    friend ResidueSeries operator-(const ResidueSeries& a, const ResidueSeries& b);
    friend ResidueSeries operator*(const ResidueSeries& a, const ResidueSeries& b);

    bool agrees_with(const ResidueSeries& other) const;

    std::string domain_tag() const { return ring_->tag(); }

private:
    void check_same_ring(const ResidueSeries& other) const;

    Ring ring_;
    long start_ = 0;
    std::vector<u128> c_;
    long prec_ = 0;
};

/// Length above which dense residue products switch from schoolbook to NTT.
void set_schoolbook_threshold(std::size_t terms);
std::size_t schoolbook_threshold();

/// Truncated product of dense coefficient vectors in `ring`.
std::vector<u128> dense_product(const ResidueRing& ring, std::span<const u128> a, std::span<const u128> b,
                                std::size_t out_len);
/// Inverse of a power series with unit constant term, to `len` terms.
std::vector<u128> dense_inverse(const ResidueRing& ring, std::span<const u128> a, std::size_t len);

ResidueSeries add(const ResidueSeries& a, const ResidueSeries& b);
ResidueSeries sub(const ResidueSeries& a, const ResidueSeries& b);
ResidueSeries mul(const ResidueSeries& a, const ResidueSeries& b);
ResidueSeries apply_D(const ResidueSeries& a, int times);
ResidueSeries apply_Up(const ResidueSeries& a, long p);
ResidueSeries apply_Vp(const ResidueSeries& a, long p);
ResidueSeries hecke_Tl(const ResidueSeries& a, long l, const OperatorContext& ctx);
ResidueSeries principal_part(const ResidueSeries& a);

// Text format:
//   domain=rational, n0=<first exponent>, prec=<bound>
//   <n> <c>
// Lines starting with '#' are comments.
void write_series(std::ostream& out, const LaurentSeries& a);
void write_series(std::ostream& out, const ResidueSeries& a);
LaurentSeries read_rational_series(std::istream& in);
/// Reads a mod-p^M series; the ring is built from the header.
ResidueSeries read_residue_series(std::istream& in);
/// Domain tag from a header line without consuming the stream contents.
std::string series_domain(const std::string& header_line);

} // namespace mockpadic
