#include "doctest.h"
#include "mockpadic/errors.hpp"
#include "mockpadic/padiclimit.hpp"

using namespace mockpadic;

namespace {

const std::vector<CuspFormClass>& reps() {
    static const std::vector<CuspFormClass> r{construct_representative(1), construct_representative(2)};
    return r;
}

PadicApprox embed(const BigRational& x, long p, long digits) {
    return x == 0 ? PadicApprox::exact_zero(static_cast<std::uint64_t>(p))
                  : PadicApprox::from_rational(x, static_cast<std::uint64_t>(p), digits);
}

BigRational cube(long n) { return BigRational(n) * n * n; }

} // namespace

TEST_CASE("inert primes") {
    CHECK(check_inert(5));
    CHECK_FALSE(check_inert(7));
    CHECK(check_inert(11));
    CHECK(check_inert(23));
    CHECK_THROWS_AS(check_inert(3), InvalidInput);
    CHECK_THROWS_AS(check_inert(2), InvalidInput);
    CHECK_THROWS_AS(check_inert(9), InvalidInput);
}

TEST_CASE("even powers of beta") {
    const auto r5 = frobenius_roots(5);
    CHECK(r5.a_g_p == 0);
    CHECK(r5.beta_squared == -125);
    CHECK(beta_even_powers(r5, 0) == 1);
    CHECK(beta_even_powers(r5, 2) == 15625);
    CHECK(beta_even_powers(r5, 3) == -1953125);
    CHECK(beta_even_powers(frobenius_roots(11), 1) == -1331);
    const auto r7 = frobenius_roots(7);
    CHECK(r7.a_g_p != 0);
    CHECK_THROWS_AS(beta_even_powers(r7, 1), InvalidInput);
    CHECK(default_m_max(5) == 3);
    CHECK(default_m_max(23) == 2);
    CHECK(default_guard(3) == 25);
}

TEST_CASE("routes") {
    CHECK(resolve_route(5, 3, Route::Automatic) == Route::Exact);
    CHECK(resolve_route(11, 2, Route::Automatic) == Route::Residue);
    CHECK(resolve_route(11, 2, Route::Exact) == Route::Exact);
    CHECK(parse_route("residue") == Route::Residue);
    CHECK_THROWS_AS(parse_route("fast"), InvalidInput);
}

TEST_CASE("coefficient tables match the expanded representative") {
    const auto& phi = reps()[1];
    const std::vector<long> ns{1, 2, 5, 25, 125, 311};
    const auto exact = gt_table_exact(3, ns);
    auto ring = std::make_shared<const ResidueRing>(5, 12);
    const auto residue = gt_table_residue(ring, 3, ns);
    const auto series = phi.expand(320);
    for (long n : ns) {
        const auto e = phi_coefficient(phi, exact, n, 5, 12);
        REQUIRE(e.exact);
        CHECK(*e.exact == series.coeff(n));
        const auto r = phi_coefficient(phi, residue, n, 5, 12);
        CHECK(r.padic.agrees_with(embed(series.coeff(n), 5, 30)));
    }
    // the top exponent of the table is covered in full
    const auto top = gt_table_exact(3, {311});
    CHECK(*phi_coefficient(phi, top, 311, 5, 12).exact == series.coeff(311));
}

TEST_CASE("delta at p = 5") {
    const auto out = delta_reports(reps(), 5, {});
    REQUIRE(out.size() == 2);
    for (const auto& r : out) {
        CHECK(r.route == Route::Exact);
        CHECK(r.m_max == 3);
        CHECK(r.approximants.size() == 4);
        CHECK(r.increasing);
        CHECK(r.verdict_nonzero);
        REQUIRE(r.delta_valuation);
        CHECK(*r.delta_valuation == 0);
        CHECK(r.certified_digits == 6);
        CHECK(r.delta.agrees_with(PadicApprox::from_residue(3549, 5, 6)));
        CHECK(r.delta_opposite_sign.agrees_with(-r.delta));
        for (const auto& a : r.approximants) {
            REQUIRE(a.value_exact);
            CHECK(*a.value_exact == *a.coefficient_exact / beta_even_powers(frobenius_roots(5), a.m));
        }
    }
    CHECK(out[0].delta.agrees_with(out[1].delta));
    CHECK(out[0].alpha_slot.is_exact_zero());
    CHECK(out[0].even_powers.contract_holds);
}

TEST_CASE("exact and residue routes agree at p = 5") {
    DeltaOptions exact_opts, residue_opts;
    exact_opts.route = Route::Exact;
    residue_opts.route = Route::Residue;
    const auto e = delta_reports(reps(), 5, exact_opts);
    const auto r = delta_reports(reps(), 5, residue_opts);
    for (std::size_t i = 0; i < e.size(); ++i) {
        REQUIRE(e[i].approximants.size() == r[i].approximants.size());
        for (std::size_t m = 0; m < e[i].approximants.size(); ++m) {
            CHECK(e[i].approximants[m].image.agrees_with(r[i].approximants[m].image));
            CHECK(e[i].approximants[m].image.valuation() == r[i].approximants[m].image.valuation());
        }
        CHECK(e[i].verdict_nonzero == r[i].verdict_nonzero);
        CHECK(e[i].delta.agrees_with(r[i].delta));
        for (std::size_t k = 0; k < e[i].differences.size(); ++k) {
            CHECK(to_string(e[i].differences[k]) == to_string(r[i].differences[k]));
        }
    }
}

TEST_CASE("delta at p = 11") {
    const auto out = delta_reports(reps(), 11, {});
    for (const auto& r : out) {
        CHECK(r.route == Route::Residue);
        CHECK(r.increasing);
        CHECK(r.verdict_nonzero);
        CHECK(r.delta_valuation == 0L);
        CHECK(r.certified_digits >= 1);
    }
    const long shared = std::min(out[0].certified_digits, out[1].certified_digits);
    CHECK(out[0].delta.reduced_to(shared).agrees_with(out[1].delta.reduced_to(shared)));
}

TEST_CASE("shallow depth reports no stabilization") {
    DeltaOptions opts;
    opts.m_max = 1;
    const auto r = delta_approximants(reps()[0], 5, opts);
    CHECK_FALSE(r.verdict_nonzero);
    CHECK(r.outcome.rfind("no stabilization", 0) == 0);
}

TEST_CASE("delta rejects bad primes and thin guards") {
    CHECK_THROWS_AS(delta_approximants(reps()[0], 7, {}), InvalidInput);
    CHECK_THROWS_AS(delta_approximants(reps()[0], 3, {}), InvalidInput);
    DeltaOptions opts;
    opts.route = Route::Residue;
    opts.guard = 2;
    try {
        (void)delta_approximants(reps()[0], 5, opts);
        FAIL("expected PrecisionError");
    } catch (const PrecisionError& e) {
        CHECK(e.required() == 9);
    }
    DeltaOptions deep;
    deep.m_max = 3;
    deep.route = Route::Residue;
    CHECK_THROWS_AS(delta_approximants(reps()[0], 41, deep), ResourceExhausted);
}

TEST_CASE("even power vanishing") {
    const auto chk = even_power_vanishing_check(reps()[0], 5, 3);
    REQUIRE(chk.entries.size() == 3);
    CHECK(chk.contract_holds);
    for (const auto& e : chk.entries) CHECK(e.infinite);

    auto bad = reps()[0];
    bad.g_t_coefficients[0] += rational_from_parts(1, 5);
    CHECK_THROWS_AS(even_power_vanishing_check(bad, 5, 3), HardFailure);
    CHECK_THROWS_AS(delta_approximants(bad, 5, {}), HardFailure);
}

TEST_CASE("corrected series with zero constants") {
    const auto& phi = reps()[1];
    const long prec = 200;
    const long guard = corrected_series_guard(5, prec);
    CHECK(guard == 9);
    const auto zero = PadicApprox::exact_zero(5);
    const auto s = assemble_corrected_series(phi, zero, zero, prec, 6, guard);
    const auto a = phi.expand(prec);
    for (long n = -2; n < prec; ++n) {
        if (n == 0 || n % 5 == 0) continue;
        const BigRational want = a.coeff(n) / cube(n);
        const auto it = s.coeffs.find(n);
        if (want == 0) {
            CHECK(it == s.coeffs.end());
            continue;
        }
        REQUIRE(it != s.coeffs.end());
        CHECK(it->second.agrees_with(embed(want, 5, 40).reduced_to(6)));
    }
    CHECK_THROWS_AS(assemble_corrected_series(phi, zero, zero, prec, 6, guard - 1), PrecisionError);
}

TEST_CASE("corrected series with the reported constants") {
    const auto& phi = reps()[0];
    const auto rep = delta_approximants(phi, 5, {});
    const long prec = 3130;
    const long M = 6;
    const long guard = corrected_series_guard(5, prec);
    const auto s = assemble_corrected_series(phi, rep.alpha_slot, rep.delta, prec, M, guard);
    const auto a = phi.expand(prec);
    const auto g = eta_expansion(EtaQuotient(9, {{3, 8}}), prec);

    // D^3 recovers Phi - alpha g - delta g|V_p at every n != 0
    for (const auto& [n, x] : s.coeffs) {
        PadicApprox want = embed(a.coeff(n), 5, 40);
        if (n > 0) {
            want = want - rep.alpha_slot * embed(g.coeff(n), 5, 40);
            if (n % 5 == 0) want = want - rep.delta * embed(g.coeff(n / 5), 5, 40);
        }
        CHECK(x.agrees_with(want * embed(BigRational(1) / cube(n), 5, 40)));
        CHECK((x * embed(cube(n), 5, 40)).agrees_with(want));
    }

    // at n = p^{2m+1} the scaled coefficient is r_m - delta, which sits at or
    // above the stabilization floor
    const auto roots = frobenius_roots(5);
    for (long m = 1; m <= 2; ++m) {
        long n = 5;
        for (long i = 0; i < 2 * m; ++i) n *= 5;
        const auto it = s.coeffs.find(n);
        REQUIRE(it != s.coeffs.end());
        const auto scaled = it->second * embed(cube(n) / beta_even_powers(roots, m), 5, 40);
        long floor = rep.certified_digits;
        for (std::size_t k = static_cast<std::size_t>(m); k < rep.differences.size(); ++k) {
            if (!rep.differences[k].infinite) floor = std::min(floor, rep.differences[k].value);
        }
        if (!scaled.is_zero()) CHECK(*scaled.valuation() >= floor);
    }
}
