#include "mockpadic/padiclimit.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "mockpadic/errors.hpp"

namespace mockpadic {

namespace {

// Residue expansions beyond this many terms would not fit the memory budget.
constexpr long kMaxResidueLength = 25'000'000;
// Exact expansions stay practical up to about this many terms.
constexpr long kExactRouteLimit = 100'000;
// A single exact table for the even exponents is affordable a bit further.
constexpr long kExactEvenLimit = 300'000;

const EtaQuotient& g_eta() {
    static const EtaQuotient e = Catalog::builtin().at("g").eta;
    return e;
}

long checked_pow(long p, long e) {
    long r = 1;
    for (long i = 0; i < e; ++i) {
        if (r > (1L << 40) / p) throw ResourceExhausted("exponent p^" + std::to_string(e) + " is out of reach");
        r *= p;
    }
    return r;
}

BigRational rational_pow(const BigRational& x, long e) {
    BigRational r = 1;
    for (long i = 0; i < e; ++i) r *= x;
    return r;
}

BigInt common_denominator(const std::vector<BigRational>& c) {
    BigInt d = 1;
    for (const auto& x : c) mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), x.get_den_mpz_t());
    return d;
}

DifferenceValuation exact_valuation(const BigRational& x, long p) {
    if (x == 0) return {0, false, true};
    return {valuation(x, static_cast<std::uint64_t>(p)), false, false};
}

DifferenceValuation padic_valuation(const PadicApprox& x) {
    if (x.is_exact_zero()) return {0, false, true};
    if (x.is_zero()) return {*x.absolute_precision(), true, false};
    return {*x.valuation(), false, false};
}

DifferenceValuation shifted(DifferenceValuation d, long s) {
    if (!d.infinite) d.value += s;
    return d;
}

// a > b is certain.
bool surely_greater(const DifferenceValuation& a, const DifferenceValuation& b) {
    if (b.infinite || b.at_least) return false;
    if (a.infinite) return true;
    return a.value > b.value;
}

// a >= b is certain.
bool surely_geq(const DifferenceValuation& a, const DifferenceValuation& b) {
    if (a.infinite) return true;
    if (b.infinite || b.at_least) return false;
    return a.value >= b.value;
}

// [q^n] g t^j = sum_i B[i] A^j[n - 1 + j - 3i] with g = q B(q^3), t = q^{-1} A.
template <class T, class MulAdd>
T dot(const std::vector<T>& b, const std::vector<T>& a, long n, long j, T zero, MulAdd&& muladd) {
    T acc = zero;
    const long top = n - 1 + j;
    for (long i = 0; 3 * i <= top && i < static_cast<long>(b.size()); ++i) {
        muladd(acc, b[static_cast<std::size_t>(i)], a[static_cast<std::size_t>(top - 3 * i)]);
    }
    return acc;
}

void check_exponents(const std::vector<long>& ns) {
    if (ns.empty()) throw InvalidInput("coefficient table: no exponents requested");
    for (long n : ns) {
        if (n < 1) throw InvalidInput("coefficient table: exponents must be positive");
    }
}

} // namespace

// ---------------------------------------------------------------- Frobenius data

bool check_inert(long p, long level) {
    if (p < 2 || !is_prime(static_cast<std::uint64_t>(p))) throw InvalidInput(std::to_string(p) + " is not prime");
    if ((6 * level) % p == 0) throw InvalidInput("p = " + std::to_string(p) + " divides 6N = " + std::to_string(6 * level));
    return p % 3 == 2;
}

FrobeniusRoots frobenius_roots(long p, const OperatorContext& ctx) {
    FrobeniusRoots r;
    r.p = p;
    r.k = ctx.weight;
    r.a_g_p = eta_expansion(g_eta(), p + 1).coeff(p);
    r.chi_p = ctx.character(p);
    if (r.a_g_p == 0) r.beta_squared = BigRational(-r.chi_p) * rational_pow(p, r.k - 1);
    return r;
}

BigRational beta_even_powers(const FrobeniusRoots& roots, long m) {
    if (roots.a_g_p != 0) {
        throw InvalidInput("beta^2m is irrational unless a_g(p) = 0; a_g(" + std::to_string(roots.p) +
                           ") = " + to_string(roots.a_g_p));
    }
    if (m < 0) throw InvalidInput("beta_even_powers: m must be non-negative");
    return rational_pow(roots.beta_squared, m);
}

long default_m_max(long p) { return p == 5 ? 3 : 2; }

long default_guard(long m_max, int k) { return (k - 1) * (2 * m_max + 1) + 4; }

std::string to_string(Route r) {
    switch (r) {
    case Route::Automatic: return "auto";
    case Route::Exact: return "exact";
    case Route::Residue: return "residue";
    }
    return "auto";
}

Route parse_route(const std::string& text) {
    if (text == "auto") return Route::Automatic;
    if (text == "exact") return Route::Exact;
    if (text == "residue") return Route::Residue;
    throw InvalidInput("unknown route '" + text + "' (auto, exact, residue)");
}

Route resolve_route(long p, long m_max, Route requested) {
    if (requested != Route::Automatic) return requested;
    return checked_pow(p, 2 * m_max + 1) <= kExactRouteLimit ? Route::Exact : Route::Residue;
}

// ---------------------------------------------------------------- coefficient tables

GtTable gt_table_exact(long max_power, const std::vector<long>& ns) {
    check_exponents(ns);
    const long maxn = *std::max_element(ns.begin(), ns.end());
    GtTable t;
    t.exact = true;
    t.max_power = max_power;
    const std::vector<BigInt> b = euler_power_integers(1, 8, (maxn + max_power) / 3 + 1);
    std::vector<BigInt> a(static_cast<std::size_t>(maxn + max_power));
    a[0] = 1;
    auto muladd = [](BigInt& acc, const BigInt& x, const BigInt& y) {
        mpz_addmul(acc.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
    };
    for (long n : ns) t.integer[n].push_back((n - 1) % 3 == 0 ? b[static_cast<std::size_t>((n - 1) / 3)] : BigInt(0));
    for (long j = 1; j <= max_power; ++j) {
        multiply_euler_factor(a, 1, 3);
        multiply_euler_factor(a, 9, -3);
        for (long n : ns) t.integer[n].push_back(dot(b, a, n, j, BigInt(0), muladd));
    }
    return t;
}

GtTable gt_table_residue(std::shared_ptr<const ResidueRing> ring, long max_power, const std::vector<long>& ns) {
    check_exponents(ns);
    const long maxn = *std::max_element(ns.begin(), ns.end());
    const long len = maxn + max_power;
    if (len > kMaxResidueLength) {
        throw ResourceExhausted("residue expansion of " + std::to_string(len) + " terms exceeds the supported " +
                                std::to_string(kMaxResidueLength));
    }
    GtTable t;
    t.ring = ring;
    t.max_power = max_power;
    const ResidueRing& r = *ring;
    const auto ulen = static_cast<std::size_t>(len);
    const std::vector<u128> b = euler_power_residues(r, 8, static_cast<std::size_t>((maxn + max_power) / 3 + 1));
    for (long n : ns) t.residue[n].push_back((n - 1) % 3 == 0 ? b[static_cast<std::size_t>((n - 1) / 3)] : 0);
    if (max_power == 0) return t;

    std::vector<u128> a;
    {
        const auto e1 = euler_power_residues(r, 3, ulen);
        const auto e9 = dilate(euler_power_residues(r, -3, ulen / 9 + 1), 9, ulen);
        a = dense_product(r, e1, e9, ulen);
    }
    auto muladd = [&r](u128& acc, u128 x, u128 y) { acc = r.add(acc, r.mul(x, y)); };
    std::vector<u128> power = a;
    for (long j = 1; j <= max_power; ++j) {
        if (j > 1) power = dense_product(r, power, a, ulen);
        for (long n : ns) t.residue[n].push_back(dot(b, power, n, j, u128(0), muladd));
    }
    return t;
}

PhiCoefficient phi_coefficient(const CuspFormClass& phi, const GtTable& table, long n, long p, long digits) {
    const auto& c = phi.g_t_coefficients;
    if (static_cast<long>(c.size()) - 1 > table.max_power) {
        throw InvalidInput("phi_coefficient: table covers t^" + std::to_string(table.max_power) + " only");
    }
    const auto up = static_cast<std::uint64_t>(p);
    if (table.exact) {
        const auto it = table.integer.find(n);
        if (it == table.integer.end()) throw InvalidInput("phi_coefficient: exponent not tabulated");
        BigRational s = 0;
        for (std::size_t j = 0; j < c.size(); ++j) s += c[j] * it->second[j];
        return {s, s == 0 ? PadicApprox::exact_zero(up) : PadicApprox::from_rational(s, up, digits)};
    }
    const auto it = table.residue.find(n);
    if (it == table.residue.end()) throw InvalidInput("phi_coefficient: exponent not tabulated");
    const ResidueRing& r = *table.ring;
    if (r.prime() != up) throw DomainMismatch("phi_coefficient: table built for another prime");
    const BigInt den = common_denominator(c);
    u128 s = 0;
    for (std::size_t j = 0; j < c.size(); ++j) {
        const BigInt scaled = c[j].get_num() * (den / c[j].get_den());
        s = r.add(s, r.mul(r.from_big(scaled), it->second[j]));
    }
    const PadicApprox num = PadicApprox::from_residue(r.to_big(s), up, r.digits());
    return {std::nullopt, num * PadicApprox::from_rational(BigRational(1) / den, up, r.digits())};
}

// ---------------------------------------------------------------- reports

namespace {

struct Plan {
    long p, m_max, M, guard;
    Route route;
    FrobeniusRoots roots;
};

Plan make_plan(long p, const DeltaOptions& opts) {
    if (!check_inert(p)) {
        throw InvalidInput("p = " + std::to_string(p) + " splits in Q(sqrt(-3)) (p = 1 mod 3); the limit formula needs inert p");
    }
    if (p < 5) throw InvalidInput("p must be at least 5");
    Plan plan{p, opts.m_max > 0 ? opts.m_max : default_m_max(p), opts.M, 0, Route::Exact, frobenius_roots(p)};
    if (opts.m_max < 0) throw InvalidInput("m_max must be positive");
    if (plan.M < 1) throw InvalidInput("M must be positive");
    plan.guard = opts.guard >= 0 ? opts.guard : default_guard(plan.m_max);
    plan.route = resolve_route(p, plan.m_max, opts.route);
    return plan;
}

std::vector<long> report_exponents(long p, long m_max) {
    std::vector<long> ns;
    for (long m = 0; m <= m_max; ++m) ns.push_back(checked_pow(p, 2 * m + 1));
    for (long m = 1; m <= m_max; ++m) ns.push_back(checked_pow(p, 2 * m));
    return ns;
}

long max_power(const std::vector<CuspFormClass>& phis) {
    long j = 0;
    for (const auto& phi : phis) j = std::max(j, static_cast<long>(phi.g_t_coefficients.size()) - 1);
    return j;
}

long denominator_p_part(const std::vector<CuspFormClass>& phis, long p) {
    long e = 0;
    for (const auto& phi : phis) {
        const BigInt d = common_denominator(phi.g_t_coefficients);
        e = std::max(e, valuation(d, static_cast<std::uint64_t>(p)));
    }
    return e;
}

GtTable build_table(const Plan& plan, long j, const std::vector<long>& ns, long extra_guard) {
    if (plan.route == Route::Exact) return gt_table_exact(j, ns);
    const long required = 3 * plan.m_max + extra_guard;
    if (plan.guard < required) {
        throw PrecisionError("guard digits do not cover the division by beta^2m", required);
    }
    auto ring = std::make_shared<const ResidueRing>(static_cast<std::uint64_t>(plan.p), static_cast<int>(plan.M + plan.guard));
    return gt_table_residue(std::move(ring), j, ns);
}

PadicApprox image_of(const PadicApprox& x, long M) {
    if (x.is_zero()) return x.reduced_to(M);
    return x.reduced_to(*x.valuation() + M);
}

EvenPowerCheck even_entries(const CuspFormClass& phi, const GtTable& table, const Plan& plan, long digits) {
    EvenPowerCheck out;
    for (long m = 1; m <= plan.m_max; ++m) {
        const auto c = phi_coefficient(phi, table, checked_pow(plan.p, 2 * m), plan.p, digits);
        const DifferenceValuation v = c.exact ? exact_valuation(*c.exact, plan.p) : padic_valuation(c.padic);
        out.entries.push_back(shifted(v, -3 * m));
    }
    for (std::size_t i = 0; i < out.entries.size(); ++i) {
        const auto& e = out.entries[i];
        if (!e.infinite && !e.at_least && e.value < 0) {
            throw HardFailure(phi.id() + ": v_p(a(p^" + std::to_string(2 * (i + 1)) + ")) - " +
                              std::to_string(3 * (i + 1)) + " = " + std::to_string(e.value) +
                              " is negative at p = " + std::to_string(plan.p));
        }
    }
    out.contract_holds = true;
    const DifferenceValuation one{1, false, false};
    for (std::size_t i = 0; i < out.entries.size(); ++i) {
        if (!surely_geq(out.entries[i], one)) out.contract_holds = false;
        if (i > 0 && !surely_geq(out.entries[i], out.entries[i - 1])) out.contract_holds = false;
    }
    return out;
}

std::vector<long> even_exponents(long p, long m_max) {
    std::vector<long> ns;
    for (long m = 1; m <= m_max; ++m) ns.push_back(checked_pow(p, 2 * m));
    return ns;
}

// Even exponents stop at p^{2 m_max}, a factor p below the odd ones, so they
// often fit the exact route even when the odd ones do not.
bool even_fits_exact(const Plan& plan) { return checked_pow(plan.p, 2 * plan.m_max) <= kExactEvenLimit; }

DeltaReport make_report(const CuspFormClass& phi, const GtTable& table, const GtTable& even_table, const Plan& plan) {
    DeltaReport rep;
    rep.p = plan.p;
    rep.M = plan.M;
    rep.m_max = plan.m_max;
    rep.guard = plan.guard;
    rep.route = plan.route;
    rep.representative = phi.id();
    rep.pole_order = phi.pole_order;
    rep.beta_squared = plan.roots.beta_squared;
    const auto up = static_cast<std::uint64_t>(plan.p);
    const long digits = plan.M + plan.guard;

    for (long m = 0; m <= plan.m_max; ++m) {
        Approximant a;
        a.m = m;
        a.exponent = checked_pow(plan.p, 2 * m + 1);
        const auto c = phi_coefficient(phi, table, a.exponent, plan.p, digits);
        const BigRational beta2m = beta_even_powers(plan.roots, m);
        a.coefficient = c.padic;
        if (c.exact) {
            a.coefficient_exact = c.exact;
            a.value_exact = *c.exact / beta2m;
            a.value = *a.value_exact == 0 ? PadicApprox::exact_zero(up) : PadicApprox::from_rational(*a.value_exact, up, digits);
        } else {
            a.value = c.padic * PadicApprox::from_rational(BigRational(1) / beta2m, up, digits);
        }
        a.image = image_of(a.value, plan.M);
        rep.approximants.push_back(std::move(a));
    }
    for (long m = 0; m < plan.m_max; ++m) {
        const auto& x = rep.approximants[static_cast<std::size_t>(m)];
        const auto& y = rep.approximants[static_cast<std::size_t>(m + 1)];
        if (x.value_exact && y.value_exact) {
            rep.differences.push_back(exact_valuation(*y.value_exact - *x.value_exact, plan.p));
        } else {
            rep.differences.push_back(padic_valuation_of_difference(y.value, x.value));
        }
    }
    rep.increasing = true;
    for (std::size_t i = 1; i < rep.differences.size(); ++i) {
        if (!surely_greater(rep.differences[i], rep.differences[i - 1])) rep.increasing = false;
    }

    const auto& last = rep.differences.back();
    const PadicApprox& r_last = rep.approximants.back().value;
    rep.certified_digits = last.infinite ? plan.M : std::min(plan.M, last.value - 1);
    const DifferenceValuation v_last =
        rep.approximants.back().value_exact ? exact_valuation(*rep.approximants.back().value_exact, plan.p)
                                            : padic_valuation(r_last);
    if (!v_last.infinite && !v_last.at_least) rep.delta_valuation = v_last.value;

    if (plan.m_max < 2) {
        rep.outcome = "no stabilization at this depth: m_max >= 2 is needed to compare consecutive differences";
    } else if (!rep.increasing) {
        rep.outcome = "no stabilization at this depth: difference valuations are not strictly increasing";
    } else if (rep.certified_digits < 1) {
        rep.outcome = "no stabilization at this depth: no certified digits";
    } else if (!rep.delta_valuation || !surely_greater(last, v_last)) {
        rep.outcome = "delta not separated from the noise floor at this depth";
    } else {
        rep.verdict_nonzero = true;
        rep.outcome = "delta != 0";
    }
    if (rep.certified_digits >= 1) {
        rep.delta = r_last.reduced_to(rep.certified_digits);
    } else {
        rep.delta = PadicApprox::zero_mod(up, std::max(0L, rep.certified_digits));
    }
    rep.delta_limit_sign = rep.delta;
    rep.delta_opposite_sign = -rep.delta;

    const auto ce = phi_coefficient(phi, even_table, checked_pow(plan.p, 2 * plan.m_max), plan.p, digits);
    const BigRational beta = beta_even_powers(plan.roots, plan.m_max);
    if (ce.exact) {
        const BigRational v = *ce.exact / beta;
        rep.alpha_slot = v == 0 ? PadicApprox::exact_zero(up) : image_of(PadicApprox::from_rational(v, up, digits), plan.M);
    } else {
        rep.alpha_slot = image_of(ce.padic * PadicApprox::from_rational(BigRational(1) / beta, up, digits), plan.M);
    }
    rep.alpha_disclaimer =
        "alpha slot = a_Phi(p^2m)/beta^2m at m = m_max for this representative; adding c*g shifts it by c, "
        "so it is not the analytic alpha_g";
    rep.even_powers = even_entries(phi, even_table, plan, digits);
    return rep;
}

} // namespace

std::vector<DeltaReport> delta_reports(const std::vector<CuspFormClass>& phis, long p, const DeltaOptions& opts) {
    if (phis.empty()) throw InvalidInput("delta_reports: no representatives");
    const auto start = std::chrono::steady_clock::now();
    const Plan plan = make_plan(p, opts);
    const long j = max_power(phis);
    const GtTable table = build_table(plan, j, report_exponents(p, plan.m_max), denominator_p_part(phis, p));
    std::optional<GtTable> even;
    if (!table.exact && even_fits_exact(plan)) even = gt_table_exact(j, even_exponents(p, plan.m_max));
    std::vector<DeltaReport> out;
    for (const auto& phi : phis) out.push_back(make_report(phi, table, even ? *even : table, plan));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    for (auto& r : out) r.seconds = secs;
    return out;
}

DeltaReport delta_approximants(const CuspFormClass& phi, long p, const DeltaOptions& opts) {
    return delta_reports({phi}, p, opts).front();
}

EvenPowerCheck even_power_vanishing_check(const CuspFormClass& phi, long p, long m_max, Route route) {
    DeltaOptions opts;
    opts.m_max = m_max;
    opts.route = route;
    Plan plan = make_plan(p, opts);
    if (route == Route::Automatic) plan.route = even_fits_exact(plan) ? Route::Exact : Route::Residue;
    const GtTable table = build_table(plan, max_power({phi}), even_exponents(p, plan.m_max), denominator_p_part({phi}, p));
    return even_entries(phi, table, plan, plan.M + plan.guard);
}

// ---------------------------------------------------------------- corrected series

long corrected_series_guard(long p, long prec, int k) {
    long j = 0;
    for (long q = p; q < prec; q *= p) ++j;
    return (k - 1) * j;
}

CorrectedSeries assemble_corrected_series(const CuspFormClass& phi, const PadicApprox& alpha, const PadicApprox& delta,
                                          long prec, long M, long guard) {
    if (alpha.prime() != delta.prime()) throw DomainMismatch("assemble: alpha and delta over different primes");
    const long p = static_cast<long>(alpha.prime());
    if (M < 1) throw InvalidInput("assemble: M must be positive");
    const long required = corrected_series_guard(p, prec, phi.weight);
    if (guard < required) throw PrecisionError("assemble: guard digits exhausted by n^{1-k}", required);

    const LaurentSeries a = phi.phi.prec() >= prec ? phi.phi.truncated(prec) : phi.expand(prec);
    const LaurentSeries g = eta_expansion(g_eta(), std::max(prec, 2L));
    const auto up = static_cast<std::uint64_t>(p);
    const long digits = M + guard;
    auto embed = [&](const BigRational& x) {
        return x == 0 ? PadicApprox::exact_zero(up) : PadicApprox::from_rational(x, up, digits);
    };

    CorrectedSeries out{p, M, prec, {}};
    const long start = a.is_zero() ? 1 : std::min(a.valuation(), 1L);
    for (long n = start; n < prec; ++n) {
        if (n == 0) continue;
        BigRational n_pow = 1;
        for (int i = 1; i < phi.weight; ++i) n_pow *= n;
        PadicApprox x = embed(a.coeff(n) / n_pow);
        if (n > 0) {
            const BigRational ag = g.coeff(n);
            if (ag != 0) x = x - alpha * embed(ag / n_pow);
            if (n % p == 0) {
                const BigRational agp = g.coeff(n / p);
                if (agp != 0) x = x - delta * embed(agp / n_pow);
            }
        }
        if (x.is_exact_zero()) continue;
        out.coeffs.emplace(n, x.reduced_to(M));
    }
    return out;
}

} // namespace mockpadic
