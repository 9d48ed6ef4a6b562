#pragma once

// Eta quotients on Gamma_0(N): Ligozat data, exact and residue expansions,
// a small named catalog, exhaustive exponent search, and exact linear algebra
// for spaces of forms with poles only at the cusp infinity.

#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mockpadic/qseries.hpp"

namespace mockpadic {

// ---------------------------------------------------------------- cusps

/// Cusps of Gamma_0(N) with denominator c (c | N) form a class of `count`
/// cusps; c = N is the cusp infinity.
struct CuspClass {
    long denominator;
    long count; // phi(gcd(c, N/c))
    long width; // N / gcd(c^2, N)
};

std::vector<long> divisors(long n);
std::vector<CuspClass> cusp_classes(long level);
/// [SL2(Z) : Gamma_0(N)]
long gamma0_index(long level);
/// Genus of X_0(N).
long gamma0_genus(long level);
/// Number of elliptic points of order 2 and 3.
long gamma0_elliptic2(long level);
long gamma0_elliptic3(long level);

// ---------------------------------------------------------------- eta quotients

class EtaQuotient {
public:
    EtaQuotient() = default;
    /// prod_{d | N} eta(d tau)^{r_d}; zero exponents are dropped. Throws
    /// InvalidInput when some d does not divide N.
    EtaQuotient(long level, std::map<long, int> exponents);
    /// Parses tokens "d:r".
    static EtaQuotient parse(long level, const std::vector<std::string>& tokens);

    long level() const noexcept { return level_; }
    const std::map<long, int>& exponents() const noexcept { return r_; }
    int exponent(long d) const;
    /// sum r_d (twice the weight).
    long exponent_sum() const;
    /// Weight; throws InvalidInput when sum r_d is odd.
    int weight() const;
    /// (1/24) sum d r_d
    BigRational order_at_infinity() const;
    /// Order in the local uniformizer at a cusp with denominator c | N.
    BigRational cusp_order(long c) const;

    /// sum d r_d = 0 and sum (N/d) r_d = 0 mod 24, sum r_d even.
    bool ligozat_conditions() const;
    /// (-1)^w prod d^{r_d} is a rational square.
    bool trivial_character() const;
    bool is_valid() const { return ligozat_conditions() && trivial_character(); }

    EtaQuotient operator*(const EtaQuotient& o) const;
    EtaQuotient pow(int e) const;
    bool operator==(const EtaQuotient&) const = default;

    /// "eta(3t)^8" style; "1" for the empty quotient.
    std::string to_string() const;
    /// "d:r d:r" tokens as used in catalog files.
    std::string to_tokens() const;

private:
    long level_ = 1;
    std::map<long, int> r_;
};

/// Sum over cusp classes of count * order; equals weight * index / 12.
BigRational valence_sum(const EtaQuotient& e);

// ---------------------------------------------------------------- expansions

/// Integer coefficients of prod_{n>=1} (1 - q^{dn})^e for q^0 .. q^{len-1}.
std::vector<BigInt> euler_power_integers(long d, int e, long len);
/// In-place multiplication by prod (1 - q^{dn})^e using sparse passes.
void multiply_euler_factor(std::vector<BigInt>& f, long d, int e);
void multiply_euler_factor(const ResidueRing& ring, std::vector<u128>& f, long d, int e);

/// prod (1 - x^n)^e for x^0 .. x^{len-1} in the ring; sparse passes for short
/// lengths, NTT products and Newton inversion for long ones.
std::vector<u128> euler_power_residues(const ResidueRing& ring, int e, std::size_t len);
/// f(x) -> f(q^d) truncated to len terms.
std::vector<u128> dilate(const std::vector<u128>& f, long d, std::size_t len);

/// Rational series of prod (1 - q^{dn})^exponent, prec >= 1.
LaurentSeries euler_product_expansion(long d, int exponent, long prec);
/// Full expansion including the leading power q^{(1/24) sum d r_d}. Rejects
/// quotients failing the Ligozat conditions.
LaurentSeries eta_expansion(const EtaQuotient& e, long prec);
ResidueSeries eta_expansion(const EtaQuotient& e, long prec, const ResidueSeries::Ring& ring);

// ---------------------------------------------------------------- catalog

struct CatalogEntry {
    std::string name;
    EtaQuotient eta;
};

class Catalog {
public:
    /// g = eta(3t)^8, t = (eta(t)/eta(9t))^3, phi0 = eta(3t)^2/eta(9t)^6.
    static Catalog builtin();
    /// Lines "name N d1:r1 d2:r2 ..."; '#' starts a comment.
    static Catalog read(std::istream& in);
    static Catalog load(const std::string& path);

    void add(CatalogEntry entry);
    const CatalogEntry* find(const std::string& name) const;
    /// Throws InvalidInput listing the catalog when absent.
    const CatalogEntry& at(const std::string& name) const;
    std::vector<std::string> names() const;
    const std::vector<CatalogEntry>& entries() const noexcept { return entries_; }

private:
    std::vector<CatalogEntry> entries_;
};

/// Weight-2 Eisenstein series on Gamma_0(9): "E2_3" = E2 - 3 E2(3t),
/// "E2_9" = E2 - 9 E2(9t), "E2_chi3" = sum_n sum_{d|n} chi(d) chi(n/d) d q^n
/// with chi the character mod 3.
std::vector<std::string> eisenstein_names();
LaurentSeries eisenstein_expansion(const std::string& name, long prec);

// ---------------------------------------------------------------- search

/// Exponent vectors with |r_d| <= box, sum r_d = 2w, Ligozat conditions,
/// trivial character, and cusp_order(c) >= bound for every (c, bound) given.
/// A box of 0 yields no candidates.
std::vector<EtaQuotient> search_eta_quotients(long level, int weight, const std::map<long, BigRational>& lower_bounds,
                                              int box);

// ---------------------------------------------------------------- linear algebra

struct RrefResult {
    std::size_t rank = 0;
    std::vector<std::vector<BigRational>> reduced;   // same shape as the input
    std::vector<std::vector<BigRational>> transform; // square; transform * input = reduced
    std::vector<std::size_t> pivots;                 // pivot column of each of the first rank rows
};

RrefResult rref(const std::vector<std::vector<BigRational>>& matrix);

// ---------------------------------------------------------------- form spaces

/// Lower bounds on orders at cusp classes (denominator -> bound). Exact when
/// the generator is an eta quotient.
struct OrderCertificate {
    std::map<long, BigRational> bound;
    bool exact = false;

    OrderCertificate operator+(const OrderCertificate& o) const;
    /// Bound valid for any linear combination of the two.
    static OrderCertificate combine(const OrderCertificate& a, const OrderCertificate& b);
};

OrderCertificate certificate_of(const EtaQuotient& e);

struct Generator {
    std::string name;
    int weight = 0;
    OrderCertificate orders;
    std::function<LaurentSeries(long)> expand;
};

Generator generator_from_eta(const std::string& name, const EtaQuotient& e);
/// Eisenstein generators carry lower bound 0 at every finite cusp.
std::vector<Generator> eisenstein_generators();

/// One spanning product generator * t^j.
struct SpanningProduct {
    std::string label;
    std::size_t generator = 0;
    int t_power = 0;
    OrderCertificate orders;
};

struct FormSpaceBasis {
    long level = 9;
    int weight = 0;
    long pole_bound = 0;
    /// Required lower bound at every cusp other than infinity.
    long finite_bound = 0;
    long prec = 0;
    std::vector<SpanningProduct> products;
    std::vector<LaurentSeries> product_series;
    /// Reduced row-echelon basis, sorted by leading exponent, leading coefficient 1.
    std::vector<LaurentSeries> basis;
    /// provenance[i][j]: coefficient of product j in basis element i.
    std::vector<std::vector<BigRational>> provenance;
    std::vector<OrderCertificate> certificates;
    std::optional<long> expected_dimension;

    std::vector<long> leading_exponents() const;
    /// Index of the basis element with the given leading exponent.
    std::optional<std::size_t> index_of_leading(long exponent) const;
    bool dimension_matches() const { return expected_dimension && *expected_dimension == static_cast<long>(basis.size()); }
};

/// Genus-0 Riemann-Roch count max(0, m + w - (#finite cusps) * b + 1); nullopt
/// when X_0(N) has positive genus or elliptic points.
std::optional<long> expected_dimension(long level, int weight, long pole_bound, long finite_bound);

/// Default margin 4m + 40 beyond the pole bound.
long default_basis_prec(long pole_bound);

struct BasisRequest {
    long level = 9;
    int weight = 4;
    long pole_bound = 0;
    long finite_bound = 1;
    long prec = 0; // 0 selects default_basis_prec
};

/// Spans {G * t^j} over generators G of the requested weight whose certificates
/// meet the finite-cusp bound, with pole order at most m at infinity, and
/// reduces to canonical echelon form. `hauptmodul` must have a simple pole at
/// infinity and non-negative orders elsewhere.
FormSpaceBasis build_basis(const BasisRequest& request, const std::vector<Generator>& generators,
                           const Generator& hauptmodul);

/// Level-9 generators: g, phi0, the weight-2 Eisenstein series, and eta
/// quotients found by search for weights 2 and -2; plus the hauptmodul t.
std::vector<Generator> default_generators();
Generator default_hauptmodul();

/// Convenience wrapper for level 9 with the default generators.
FormSpaceBasis build_basis(long level, int weight, long pole_bound, long finite_bound, long prec = 0);

} // namespace mockpadic
