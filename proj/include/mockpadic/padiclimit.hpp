#pragma once

// p-adic limits of representative coefficients at inert primes: the
// approximants a_Phi(p^{2m+1}) / beta^{2m}, their stabilization, the
// even-power vanishing check, and the corrected Eichler series mod p^M.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mockpadic/cohomology.hpp"

namespace mockpadic {

/// True iff p is inert in Q(sqrt(-3)), i.e. p = 2 mod 3. Throws InvalidInput
/// when p is not prime or divides 6N.
bool check_inert(long p, long level = 9);

struct FrobeniusRoots {
    long p = 0;
    int k = 4;
    BigRational a_g_p;
    int chi_p = 1;
    /// beta^2 = -chi(p) p^{k-1} when a_g(p) = 0.
    BigRational beta_squared;
};

/// Reads a_g(p) from the expansion of g.
FrobeniusRoots frobenius_roots(long p, const OperatorContext& ctx = OperatorContext::trivial(4, 9));
/// (-chi(p) p^{k-1})^m; throws InvalidInput when a_g(p) != 0.
BigRational beta_even_powers(const FrobeniusRoots& roots, long m);

/// Default depth: 3 for p = 5, otherwise 2.
long default_m_max(long p);
/// (k - 1)(2 m_max + 1) + 4.
long default_guard(long m_max, int k = 4);

enum class Route { Automatic, Exact, Residue };
std::string to_string(Route r);
Route parse_route(const std::string& text);

/// Coefficients [q^n] g t^j for j = 0 .. max_power at selected exponents n,
/// either as exact integers or modulo p^digits.
struct GtTable {
    long max_power = 0;
    bool exact = false;
    std::map<long, std::vector<BigInt>> integer;
    std::shared_ptr<const ResidueRing> ring;
    std::map<long, std::vector<u128>> residue;
};

GtTable gt_table_exact(long max_power, const std::vector<long>& exponents);
GtTable gt_table_residue(std::shared_ptr<const ResidueRing> ring, long max_power, const std::vector<long>& exponents);

struct PhiCoefficient {
    std::optional<BigRational> exact;
    PadicApprox padic;
};

/// a_Phi(n) from the table. `digits` bounds the p-adic precision of exact values.
PhiCoefficient phi_coefficient(const CuspFormClass& phi, const GtTable& table, long n, long p, long digits);

struct DeltaOptions {
    long m_max = 0;  // 0 selects default_m_max
    long M = 6;      // requested digits
    long guard = -1; // negative selects default_guard
    Route route = Route::Automatic;
};

struct Approximant {
    long m = 0;
    long exponent = 0; // p^{2m+1}
    std::optional<BigRational> coefficient_exact;
    std::optional<BigRational> value_exact;
    PadicApprox coefficient; // a_Phi(p^{2m+1})
    PadicApprox value;       // r_m at full working precision
    PadicApprox image;       // r_m with at most M significant digits
};

struct EvenPowerCheck {
    /// v_p(a_Phi(p^{2m})) - (k-1) m for m = 1 .. m_max.
    std::vector<DifferenceValuation> entries;
    /// Entries positive and non-decreasing.
    bool contract_holds = false;
};

struct DeltaReport {
    long p = 0;
    long M = 0;
    long m_max = 0;
    long guard = 0;
    Route route = Route::Exact;
    std::string representative;
    long pole_order = 0;
    BigRational beta_squared;

    std::vector<Approximant> approximants;
    /// v_p(r_{m+1} - r_m) for m = 0 .. m_max - 1.
    std::vector<DifferenceValuation> differences;
    bool increasing = false;
    /// Certified absolute digits of delta.
    long certified_digits = 0;
    PadicApprox delta;
    std::optional<long> delta_valuation;
    bool verdict_nonzero = false;
    std::string outcome;

    /// delta read as the V(g)-coordinate with the limit-formula sign, and with the opposite sign.
    PadicApprox delta_limit_sign;
    PadicApprox delta_opposite_sign;
    /// lim a_Phi(p^{2m}) / beta^{2m} at depth m_max; tied to the representative.
    PadicApprox alpha_slot;
    std::string alpha_disclaimer;

    EvenPowerCheck even_powers;
    double seconds = 0;
};

/// Route actually used for the given options.
Route resolve_route(long p, long m_max, Route requested);

/// Reports for several representatives sharing one coefficient table.
std::vector<DeltaReport> delta_reports(const std::vector<CuspFormClass>& phis, long p, const DeltaOptions& opts);
DeltaReport delta_approximants(const CuspFormClass& phi, long p, const DeltaOptions& opts);

/// Throws HardFailure when an entry is negative.
EvenPowerCheck even_power_vanishing_check(const CuspFormClass& phi, long p, long m_max, Route route = Route::Automatic);

struct CorrectedSeries {
    long p = 0;
    long M = 0;
    long prec = 0;
    /// n -> coefficient with its own precision, for 0 != n < prec.
    std::map<long, PadicApprox> coeffs;
};

/// Minimum guard digits so that n^{1-k} loses no requested precision below prec.
long corrected_series_guard(long p, long prec, int k = 4);

/// sum_{n != 0} n^{1-k} a_Phi(n) q^n - alpha E_g - delta E_{g|V_p}, each
/// coefficient reduced to absolute precision at most M. Throws PrecisionError
/// when guard < corrected_series_guard.
CorrectedSeries assemble_corrected_series(const CuspFormClass& phi, const PadicApprox& alpha, const PadicApprox& delta,
                                          long prec, long M, long guard);

} // namespace mockpadic
