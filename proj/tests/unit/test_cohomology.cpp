#include <random>

#include "doctest.h"
#include "mockpadic/cohomology.hpp"
#include "mockpadic/errors.hpp"

using namespace mockpadic;

namespace {

const EtaQuotient kG(9, {{3, 8}});
const EtaQuotient kT(9, {{1, 3}, {9, -3}});

} // namespace

TEST_CASE("pairing of g with itself vanishes") {
    const auto g = CertifiedSeries::from_eta(kG, 30);
    const auto v = pairing(g, g, 4);
    CHECK(v.value == 0);
    CHECK(v.cusps.empty());
}

TEST_CASE("pairing rejects missing certificates and short expansions") {
    const auto g = CertifiedSeries::from_eta(kG, 30);
    CertifiedSeries bare{eta_expansion(kG, 30), 4, 9, {}};
    CHECK_THROWS_AS(pairing(bare, g, 4), CertificationError);
    const auto t = CertifiedSeries::from_eta(kT, 30);
    CHECK_THROWS_AS(pairing(t, t, 4), CertificationError);
    const auto phi = construct_representative(3);
    const CertifiedSeries p{phi.phi, 4, 9, phi.orders};
    const auto gshort = CertifiedSeries::from_eta(kG, 3);
    try {
        (void)pairing(p, gshort, 4);
        FAIL("expected PrecisionError");
    } catch (const PrecisionError& e) {
        CHECK(e.required() == 4);
    }
}

TEST_CASE("certification") {
    const auto g = eta_expansion(kG, 40);
    const auto gc = certificate_of(kG);
    const auto c1 = certify_weakly_holomorphic_cusp_form({{"g", 1, g, gc}});
    CHECK(c1.pole_order == 0);

    const auto products = g_t_products(2, 40);
    const auto gt_cert = gc + certificate_of(kT);
    // g t and g t^2 both have nonzero constant terms; cancel them.
    const BigRational c = -products[2].coeff(0) / products[1].coeff(0);
    const auto c2 = certify_weakly_holomorphic_cusp_form(
        {{"g*t^2", 1, products[2], gt_cert + certificate_of(kT)}, {"g*t", c, products[1], gt_cert}});
    CHECK(c2.pole_order == 1);
    CHECK(c2.combination.coeff(0) == 0);

    CHECK_THROWS_AS(certify_weakly_holomorphic_cusp_form({{"g*t", 1, products[1], gt_cert}}), CertificationError);
    const auto t = eta_expansion(kT, 40);
    CHECK_THROWS_AS(certify_weakly_holomorphic_cusp_form({{"t", 1, t, certificate_of(kT)}}), CertificationError);
    CHECK_THROWS_AS(certify_weakly_holomorphic_cusp_form({}), CertificationError);
}

TEST_CASE("representative of pole order 1") {
    const auto phi = construct_representative(1);
    CHECK(phi.pairing_with_g == 1);
    CHECK(phi.phi.coeff(-1) == -1);
    CHECK(phi.phi.coeff(0) == 0);
    CHECK(phi.phi.coeff(2) == -2);
    CHECK(phi.phi.coeff(5) == 49);
    CHECK(phi.normalization.at(-1) == 1);
    CHECK(phi.g_t_coefficients == std::vector<BigRational>{-9, -6, -1});
    for (const auto& [n, c] : phi.phi.terms()) CHECK(((n % 3) + 3) % 3 == 2);
    CHECK(phi.expand(200).agrees_with(phi.phi));
    CHECK_THROWS_AS(construct_representative(0), InvalidInput);
}

TEST_CASE("representatives for higher pole orders") {
    for (long m = 1; m <= 5; ++m) {
        const auto phi = construct_representative(m, 120);
        CHECK(phi.phi.valuation() == -m);
        CHECK(phi.phi.coeff(0) == 0);
        CHECK(phi.pairing_with_g == 1);
        CHECK(phi.phi.prec() == 120);
        for (const auto& [c, b] : phi.orders.bound) CHECK(b >= 1);
        const auto g = CertifiedSeries::from_eta(kG, 130);
        CHECK(pairing(g, g, 4).value == 0);
    }
}

TEST_CASE("pairing is well defined on derivative images") {
    const auto w4 = build_basis(9, 4, 4, 1);
    const auto wm2 = build_basis(9, -2, 4, 0);
    REQUIRE(wm2.basis.size() == 3);
    for (std::size_t i = 0; i < wm2.basis.size(); ++i) {
        const auto d = derivative_image(CertifiedSeries::from_basis(wm2, i), 4);
        CHECK(d.finite_orders_at_least(1));
        for (std::size_t j = 0; j < w4.basis.size(); ++j) {
            // S_4^! members only: the element led by q^0 keeps its constant term.
            if (w4.basis[j].coeff(0) != 0) continue;
            CHECK(pairing(d, CertifiedSeries::from_basis(w4, j), 4).value == 0);
        }
    }
}

TEST_CASE("pairing is bilinear") {
    const auto w4 = build_basis(9, 4, 3, 1);
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<long> num(-7, 7), den(1, 5);
    std::uniform_int_distribution<std::size_t> pick(0, w4.basis.size() - 1);
    const auto g = CertifiedSeries::from_eta(kG, w4.prec);
    for (int trial = 0; trial < 100; ++trial) {
        const auto x = CertifiedSeries::from_basis(w4, pick(rng));
        const auto y = CertifiedSeries::from_basis(w4, pick(rng));
        const BigRational a = rational_from_parts(num(rng), den(rng));
        const BigRational b = rational_from_parts(num(rng), den(rng));
        CertifiedSeries comb{x.series.scaled(a) + y.series.scaled(b), 4, 9,
                             OrderCertificate::combine(x.orders, y.orders)};
        const auto lhs = pairing(comb, g, 4).value;
        CHECK(lhs == a * pairing(x, g, 4).value + b * pairing(y, g, 4).value);
    }
}

TEST_CASE("canonical reduction") {
    const auto wm2 = build_basis(9, -2, 6, 0);
    const auto g = eta_expansion(kG, 60);
    CHECK(reduce_canonical(g, wm2).result == g);
    for (std::size_t i = 0; i < wm2.basis.size(); ++i) {
        const auto r = reduce_canonical(apply_D(wm2.basis[i], 3), wm2);
        CHECK(r.result.is_zero());
    }
    const auto p1 = construct_representative(1, 60);
    const auto p2 = construct_representative(2, 60);
    const auto r1 = reduce_canonical(p1.phi, wm2).result;
    const auto r2 = reduce_canonical(p2.phi, wm2).result;
    // idempotent
    CHECK(reduce_canonical(r2, wm2).result == r2);
    const auto diff = r2 - r1;
    CHECK(diff.valuation() >= 1);
    const auto rest = diff - g.truncated(diff.prec()).scaled(diff.coeff(1));
    CHECK(rest.is_zero());
    // linear
    const auto combo = p1.phi.scaled(3) + p2.phi.scaled(rational_from_parts(-2, 7));
    const auto lhs = reduce_canonical(combo, wm2).result;
    CHECK(lhs == r1.scaled(3) + r2.scaled(rational_from_parts(-2, 7)));
    const auto shallow = build_basis(9, -2, 2, 0);
    CHECK_THROWS_AS(reduce_canonical(construct_representative(4, 60).phi, shallow), PrecisionError);
}

TEST_CASE("Hecke class check") {
    const auto ctx = OperatorContext::trivial(4, 9);
    const auto wm2 = build_basis(9, -2, 26, 0);
    for (long m : {1L, 2L}) {
        const auto phi = construct_representative(m, hecke_required_prec(13));
        for (long l : {2L, 5L, 7L, 13L}) {
            const auto w = hecke_class_check(phi, l, ctx, wm2);
            CHECK_MESSAGE(w.passed, "m=" << m << " l=" << l << ": " << w.detail);
        }
        auto bad = phi;
        std::map<long, BigRational> c = bad.phi.terms();
        c[5] += 1;
        bad.phi = LaurentSeries(c, bad.phi.prec());
        CHECK_FALSE(hecke_class_check(bad, 7, ctx, wm2).passed);
    }
    const auto phi = construct_representative(1, 50);
    CHECK_THROWS_AS(hecke_class_check(phi, 13, ctx, wm2), PrecisionError);
    const auto shallow = build_basis(9, -2, 4, 0);
    CHECK_THROWS_AS(hecke_class_check(construct_representative(1, 400), 13, ctx, shallow), PrecisionError);
}
