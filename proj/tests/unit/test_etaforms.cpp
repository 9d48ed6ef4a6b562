#include <algorithm>
#include <memory>
#include <random>
#include <sstream>

#include "doctest.h"
#include "mockpadic/errors.hpp"
#include "mockpadic/etaforms.hpp"

using namespace mockpadic;

namespace {

// prod (1 - q^{dn})^e by repeated multiplication by binomials; e may be negative
// through the geometric series.
LaurentSeries brute_euler(long d, int e, long prec) {
    LaurentSeries r = LaurentSeries::monomial(0, 1, prec);
    for (long n = d; n < prec; n += d) {
        std::map<long, BigRational> f;
        if (e >= 0) {
            f = {{0, 1}, {n, -1}};
        } else {
            for (long k = 0; k < prec; k += n) f[k] = 1;
        }
        const LaurentSeries factor(f, prec);
        for (int i = 0; i < std::abs(e); ++i) r = r * factor;
    }
    return r;
}

LaurentSeries brute_eta(const EtaQuotient& e, long prec) {
    const long ord = e.order_at_infinity().get_num().get_si();
    LaurentSeries r = LaurentSeries::monomial(0, 1, prec - ord);
    for (const auto& [d, x] : e.exponents()) r = r * brute_euler(d, x, prec - ord);
    return r.shifted(ord);
}

const EtaQuotient kG(9, {{3, 8}});
const EtaQuotient kT(9, {{1, 3}, {9, -3}});
const EtaQuotient kPhi0(9, {{3, 2}, {9, -6}});

} // namespace

TEST_CASE("cusp data for level 9") {
    const auto cs = cusp_classes(9);
    REQUIRE(cs.size() == 3);
    CHECK(cs[0].denominator == 1);
    CHECK(cs[0].width == 9);
    CHECK(cs[1].denominator == 3);
    CHECK(cs[1].count == 2);
    CHECK(cs[2].width == 1);
    CHECK(gamma0_index(9) == 12);
    CHECK(gamma0_genus(9) == 0);
    CHECK(gamma0_genus(11) == 1);
    CHECK(gamma0_genus(37) == 2);
    CHECK(gamma0_elliptic2(9) == 0);
    CHECK(gamma0_elliptic3(9) == 0);
    CHECK(gamma0_elliptic3(7) == 2);
}

TEST_CASE("euler_product_expansion examples") {
    CHECK(euler_product_expansion(1, 1, 8) ==
          LaurentSeries({{0, 1}, {1, -1}, {2, -1}, {5, 1}, {7, 1}}, 8));
    CHECK(euler_product_expansion(2, 0, 5) == LaurentSeries::monomial(0, 1, 5));
    const auto one = euler_product_expansion(3, 1, 10);
    LaurentSeries p = LaurentSeries::monomial(0, 1, 10);
    for (int i = 0; i < 8; ++i) p = p * one;
    CHECK(euler_product_expansion(3, 8, 10) == p);
    CHECK_THROWS_AS(euler_product_expansion(1, 1, 0), InvalidInput);
}

TEST_CASE("eta_expansion examples") {
    const auto g = eta_expansion(kG, 20);
    CHECK(g.valuation() == 1);
    CHECK(g.coeff(1) == 1);
    CHECK(g.coeff(4) == -8);
    CHECK(g.coeff(7) == 20);
    for (const auto& [n, c] : g.terms()) CHECK(n % 3 == 1);
    const auto t = eta_expansion(kT, 5);
    CHECK(t.valuation() == -1);
    CHECK(t.coeff(-1) == 1);
    CHECK(t.coeff(0) == -3);
    CHECK(t.coeff(1) == 0);
    CHECK(t.coeff(2) == 5);
    CHECK(eta_expansion(EtaQuotient(9, {}), 6) == LaurentSeries::monomial(0, 1, 6));
    CHECK_THROWS_AS(eta_expansion(EtaQuotient(9, {{1, 1}}), 5), InvalidInput);
}

TEST_CASE("expansions match brute-force products") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> ex(-4, 4);
    const long prec = 120;
    for (long d : {1L, 2L, 3L, 5L}) {
        for (int e : {-5, -3, -1, 1, 2, 3, 7}) CHECK(euler_product_expansion(d, e, prec) == brute_euler(d, e, prec));
    }
    CHECK(eta_expansion(kG, 300) == brute_eta(kG, 300));
    CHECK(eta_expansion(kT, 300) == brute_eta(kT, 300));
    CHECK(eta_expansion(kPhi0, 300) == brute_eta(kPhi0, 300));
    int tested = 0;
    while (tested < 20) {
        EtaQuotient e(9, {{1, ex(rng)}, {3, ex(rng)}, {9, ex(rng)}});
        if (!e.ligozat_conditions()) continue;
        CHECK(eta_expansion(e, 60) == brute_eta(e, 60));
        ++tested;
    }
}

TEST_CASE("expansion is multiplicative in exponent vectors") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> ex(-6, 6);
    int tested = 0;
    while (tested < 100) {
        EtaQuotient a(9, {{1, ex(rng)}, {3, ex(rng)}, {9, ex(rng)}});
        EtaQuotient b(9, {{1, ex(rng)}, {3, ex(rng)}, {9, ex(rng)}});
        if (!a.ligozat_conditions() || !b.ligozat_conditions()) continue;
        const auto prod = eta_expansion(a, 40) * eta_expansion(b, 40);
        CHECK(prod.agrees_with(eta_expansion(a * b, 40)));
        ++tested;
    }
}

TEST_CASE("residue expansions agree with integer expansions") {
    const auto ring = std::make_shared<const ResidueRing>(5, 20);
    for (int e : {-8, -3, -1, 1, 3, 8}) {
        const auto ints = euler_power_integers(1, e, 9000);
        const auto res = euler_power_residues(*ring, e, 9000);
        bool same = true;
        for (std::size_t i = 0; i < ints.size(); ++i) same &= ring->from_big(ints[i]) == res[i];
        CHECK(same);
    }
    for (const auto& e : {kG, kT, kPhi0}) {
        const auto exact = eta_expansion(e, 500);
        CHECK(eta_expansion(e, 500, ring).agrees_with(ResidueSeries::from_rational(ring, exact)));
    }
}

TEST_CASE("long residue expansion takes the product route consistently") {
    const auto ring = std::make_shared<const ResidueRing>(11, 12);
    const long prec = 60000;
    const auto fast = eta_expansion(kT, prec, ring);
    std::vector<u128> f(static_cast<std::size_t>(prec + 1), 0);
    f[0] = 1;
    multiply_euler_factor(*ring, f, 1, 3);
    multiply_euler_factor(*ring, f, 9, -3);
    CHECK(fast.agrees_with(ResidueSeries(ring, -1, f, prec)));
}

TEST_CASE("Hecke action on g") {
    const auto g = eta_expansion(kG, 400);
    const auto ctx = OperatorContext::trivial(4, 9);
    CHECK(apply_Up(g, 3).is_zero());
    CHECK(hecke_Tl(g, 2, ctx).is_zero());
    CHECK(hecke_Tl(g, 5, ctx).is_zero());
    const auto t7 = hecke_Tl(g, 7, ctx);
    CHECK(t7.agrees_with(g.scaled(g.coeff(7))));
    const auto t13 = hecke_Tl(g, 13, ctx);
    CHECK(t13.agrees_with(g.scaled(g.coeff(13))));
}

TEST_CASE("cusp orders and the valence identity") {
    CHECK(kT.cusp_order(9) == -1);
    CHECK(kT.cusp_order(1) == 1);
    CHECK(kT.cusp_order(3) == 0);
    for (long c : {1L, 3L, 9L}) {
        CHECK(kG.cusp_order(c) == 1);
        CHECK(EtaQuotient(9, {}).cusp_order(c) == 0);
    }
    CHECK(kPhi0.cusp_order(9) == -2);
    CHECK(kPhi0.cusp_order(1) == 0);
    CHECK(kPhi0.cusp_order(3) == 0);
    const auto catalog = Catalog::builtin();
    for (const auto& e : catalog.entries()) {
        CHECK(valence_sum(e.eta) == rational_from_parts(e.eta.weight() * gamma0_index(9), 12));
        CHECK(e.eta.cusp_order(9) == e.eta.order_at_infinity());
    }
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> ex(-12, 12);
    const std::vector<long> levels{4, 6, 8, 9, 12, 16, 18, 25, 36};
    int tested = 0;
    while (tested < 200) {
        const long n = levels[rng() % levels.size()];
        std::map<long, int> r;
        for (long d : divisors(n)) r[d] = ex(rng);
        EtaQuotient e(n, r);
        if (e.exponent_sum() % 2) continue;
        CHECK(valence_sum(e) == rational_from_parts(e.weight() * gamma0_index(n), 12));
        ++tested;
    }
}

TEST_CASE("eta quotient validity and parsing") {
    CHECK(kG.is_valid());
    CHECK(kT.is_valid());
    CHECK(kPhi0.is_valid());
    CHECK(kG.weight() == 4);
    CHECK(kPhi0.weight() == -2);
    CHECK_FALSE(EtaQuotient(9, {{1, 1}, {3, 1}}).ligozat_conditions());
    CHECK(EtaQuotient::parse(9, {"3:8"}) == kG);
    CHECK_THROWS_AS(EtaQuotient::parse(9, {"3-8"}), InvalidInput);
    CHECK_THROWS_AS(EtaQuotient(9, {{2, 1}}), InvalidInput);
    CHECK(kG.to_string() == "eta(3t)^8");
    CHECK(EtaQuotient::parse(9, {"1:3", "9:-3"}) == kT);
}

TEST_CASE("catalog") {
    const auto cat = Catalog::builtin();
    CHECK(cat.at("g").eta == kG);
    CHECK(cat.find("nosuch") == nullptr);
    try {
        (void)cat.at("nosuch");
        FAIL("expected InvalidInput");
    } catch (const InvalidInput& e) {
        CHECK(std::string(e.what()).find("phi0") != std::string::npos);
    }
    std::istringstream in("# comment\nh 9 3:8 # trailing\nu 9 1:3 9:-3\n\n");
    const auto c2 = Catalog::read(in);
    CHECK(c2.names() == std::vector<std::string>{"h", "u"});
    CHECK(c2.at("u").eta == kT);
    std::istringstream dup("a 9 3:8\na 9 3:8\n");
    CHECK_THROWS_AS(Catalog::read(dup), InvalidInput);
    std::istringstream bad("a nine 3:8\n");
    CHECK_THROWS_AS(Catalog::read(bad), InvalidInput);
}

TEST_CASE("eta quotient search") {
    const std::map<long, BigRational> holo{{1, 0}, {3, 0}, {9, 0}};
    const auto w2 = search_eta_quotients(9, 2, holo, 12);
    CHECK_FALSE(w2.empty());
    for (const auto& e : w2) {
        CHECK(e.exponent_sum() == 4);
        CHECK(e.is_valid());
        for (long c : {1L, 3L, 9L}) CHECK(e.cusp_order(c) >= 0);
    }
    const auto wm2 = search_eta_quotients(9, -2, {{1, 0}, {3, 0}}, 12);
    CHECK_FALSE(wm2.empty());
    CHECK(std::find(wm2.begin(), wm2.end(), kPhi0) != wm2.end());
    for (const auto& e : wm2) {
        CHECK(e.exponent_sum() == -4);
        CHECK(e.is_valid());
    }
    CHECK(search_eta_quotients(9, 2, holo, 0).empty());
    CHECK_THROWS_AS(search_eta_quotients(9, 2, {{2, 0}}, 3), InvalidInput);
}

TEST_CASE("rref examples and multiply-back") {
    using Mat = std::vector<std::vector<BigRational>>;
    const Mat id{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    const auto r = rref(id);
    CHECK(r.rank == 3);
    CHECK(r.reduced == id);
    CHECK(rref(Mat{{1, 2}, {2, 4}}).rank == 1);
    CHECK(rref(Mat{}).rank == 0);

    std::mt19937_64 rng(9);
    std::uniform_int_distribution<long> num(-5, 5), den(1, 3);
    for (int trial = 0; trial < 30; ++trial) {
        Mat m(6, std::vector<BigRational>(9));
        for (auto& row : m) {
            for (auto& x : row) x = rational_from_parts(num(rng), den(rng));
        }
        if (trial % 3 == 0) m[5] = m[0]; // force a dependency
        const auto res = rref(m);
        Mat prod(6, std::vector<BigRational>(9, 0));
        for (std::size_t i = 0; i < 6; ++i) {
            for (std::size_t k = 0; k < 6; ++k) {
                for (std::size_t j = 0; j < 9; ++j) prod[i][j] += res.transform[i][k] * m[k][j];
            }
        }
        CHECK(prod == res.reduced);
        for (std::size_t i = 0; i < res.rank; ++i) {
            CHECK(res.reduced[i][res.pivots[i]] == 1);
            for (std::size_t k = 0; k < 6; ++k) {
                if (k != i) CHECK(res.reduced[k][res.pivots[i]] == 0);
            }
        }
        for (std::size_t i = res.rank; i < 6; ++i) {
            CHECK(std::all_of(res.reduced[i].begin(), res.reduced[i].end(), [](const BigRational& x) { return x == 0; }));
        }
        if (trial % 3 == 0) CHECK(res.rank <= 5);
    }
}

TEST_CASE("weight-4 bases") {
    const auto b0 = build_basis(9, 4, 0, 1);
    REQUIRE(b0.basis.size() == 2);
    CHECK(b0.dimension_matches());
    CHECK(b0.leading_exponents() == std::vector<long>{0, 1});
    const auto g = eta_expansion(kG, b0.prec);
    CHECK(b0.basis[1] == g);

    const auto b3 = build_basis(9, 4, 3, 1);
    CHECK(b3.leading_exponents() == std::vector<long>{-3, -2, -1, 0, 1});
    CHECK(b3.dimension_matches());
    for (std::size_t i = 0; i < b3.basis.size(); ++i) {
        CHECK(b3.basis[i].coeff(b3.basis[i].valuation()) == 1);
        for (const auto& [c, bound] : b3.certificates[i].bound) CHECK(bound >= 1);
        // provenance reproduces the basis vector
        LaurentSeries sum(b3.prec);
        for (std::size_t k = 0; k < b3.products.size(); ++k) {
            sum = sum + b3.product_series[k].scaled(b3.provenance[i][k]);
        }
        CHECK(sum == b3.basis[i]);
    }
    CHECK_THROWS_AS(build_basis(9, 4, 3, 1, 20), PrecisionError);
}

TEST_CASE("weight -2 and weight 2 bases") {
    const auto b = build_basis(9, -2, 2, 0);
    REQUIRE(b.basis.size() == 1);
    CHECK(b.dimension_matches());
    CHECK(b.leading_exponents() == std::vector<long>{-2});
    // multiplying back against g lands in weight 2 with holomorphic finite cusps
    const auto w2 = build_basis(9, 2, 1, 0);
    CHECK(w2.dimension_matches());
    const auto prod = b.basis[0] * eta_expansion(kG, b.prec + 2);
    const long v = prod.valuation();
    CHECK(v == -1);
    const auto idx = w2.index_of_leading(v);
    REQUIRE(idx.has_value());
    LaurentSeries rest = prod.truncated(w2.prec);
    for (std::size_t i = 0; i < w2.basis.size(); ++i) {
        const long e = w2.basis[i].valuation();
        if (e < rest.prec()) rest = rest - w2.basis[i].scaled(rest.coeff(e));
    }
    CHECK(rest.is_zero());
    for (long m = 1; m <= 5; ++m) CHECK(build_basis(9, -2, m, 0).dimension_matches());
}

TEST_CASE("basis is independent of generator order") {
    auto gens = default_generators();
    const auto a = build_basis({9, 4, 4, 1, 0}, gens, default_hauptmodul());
    std::reverse(gens.begin(), gens.end());
    const auto b = build_basis({9, 4, 4, 1, 0}, gens, default_hauptmodul());
    CHECK(a.basis == b.basis);
}

TEST_CASE("Eisenstein series") {
    const auto e3 = eisenstein_expansion("E2_3", 10);
    CHECK(e3.coeff(0) == -2);
    CHECK(e3.coeff(1) == -24);
    CHECK(e3.coeff(3) == -24 * 4 + 72);
    const auto chi = eisenstein_expansion("E2_chi3", 10);
    CHECK(chi.coeff(1) == 1);
    CHECK(chi.coeff(2) == -1 - 2);
    CHECK_THROWS_AS(eisenstein_expansion("E4", 10), InvalidInput);
    // Every Eisenstein generator lies in the span of weight-2 eta quotients.
    const auto w2 = build_basis(9, 2, 0, 0);
    CHECK(w2.basis.size() == 3);
    CHECK(w2.dimension_matches());
}
