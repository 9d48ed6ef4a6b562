#include <random>
#include <sstream>

#include "doctest.h"
#include "mockpadic/errors.hpp"
#include "mockpadic/ntt.hpp"
#include "mockpadic/qseries.hpp"

using namespace mockpadic;

namespace {

LaurentSeries series(std::initializer_list<std::pair<long, long>> terms, long prec) {
    std::map<long, BigRational> m;
    for (auto [n, c] : terms) m[n] = c;
    return LaurentSeries(std::move(m), prec);
}

LaurentSeries random_series(std::mt19937_64& rng, long lo = -3, long hi = 12) {
    std::uniform_int_distribution<long> start(lo, 2), len(0, hi), coef(-9, 9), den(1, 4);
    const long n0 = start(rng);
    const long prec = n0 + len(rng) + 1;
    std::map<long, BigRational> m;
    for (long n = n0; n < prec; ++n) m[n] = rational_from_parts(coef(rng), den(rng));
    return LaurentSeries(std::move(m), prec);
}

// prod_{n>=1} (1 - q^n)^e by repeated multiplication by binomials.
LaurentSeries brute_euler(int e, long prec) {
    LaurentSeries r = LaurentSeries::monomial(0, 1, prec);
    for (long n = 1; n < prec; ++n) {
        const LaurentSeries f = series({{0, 1}, {n, -1}}, prec);
        for (int i = 0; i < e; ++i) r = r * f;
    }
    return r;
}

} // namespace

TEST_CASE("add truncates to the smaller prec") {
    const auto a = series({{-1, 1}, {1, 2}}, 5);
    const auto b = series({{-1, -1}}, 3);
    const auto s = a + b;
    CHECK(s.prec() == 3);
    CHECK(s == series({{1, 2}}, 3));
    CHECK(a + LaurentSeries(5) == a);
    const auto z = a + (-a);
    CHECK(z.is_zero());
    CHECK(z.prec() == 5);
}

TEST_CASE("mul follows the precision rule") {
    LaurentSeries geometric(std::map<long, BigRational>{}, 10);
    std::map<long, BigRational> m;
    for (long n = 0; n < 10; ++n) m[n] = 1;
    geometric = LaurentSeries(m, 10);
    const auto one = series({{0, 1}, {1, -1}}, 100) * geometric;
    CHECK(one.prec() == 10);
    CHECK(one == series({{0, 1}}, 10));

    const auto x = series({{-1, 1}}, 20) * series({{1, 1}}, 20);
    CHECK(x.coeff(0) == 1);
    CHECK(x.prec() == 19);

    // min(prec_a + n0_b, prec_b + n0_a) with a negative leading exponent.
    const auto y = series({{-2, 1}}, 5) * series({{0, 1}, {3, 1}}, 6);
    CHECK(y.prec() == 4);
}

TEST_CASE("squaring the Euler product matches the direct square") {
    const auto e1 = brute_euler(1, 10);
    const auto e2 = brute_euler(2, 10);
    CHECK((e1 * e1) == e2);
}

TEST_CASE("apply_D and eichler_integral") {
    const auto a = series({{-1, 1}, {2, 3}}, 6);
    CHECK(apply_D(a, 1) == series({{-1, -1}, {2, 6}}, 6));
    const auto b = series({{5, 2}}, 8);
    CHECK(apply_D(b, 3).coeff(5) == 250);

    CHECK(eichler_integral(series({{1, 1}}, 5), 4) == series({{1, 1}}, 5));
    CHECK(eichler_integral(series({{4, 4}}, 6), 4).coeff(4) == BigRational(1, 16));
    CHECK_THROWS_AS(eichler_integral(series({{0, 1}}, 5), 4), InvalidInput);

    const auto c = series({{-2, 7}, {0, 5}, {3, 1}, {4, -2}}, 9);
    std::map<long, BigRational> pos;
    const auto dc = apply_D(c, 3);
    for (const auto& [n, v] : dc.terms()) {
        if (n > 0) pos[n] = v;
    }
    const LaurentSeries h(pos, 9);
    CHECK(apply_D(eichler_integral(h, 4), 3) == h);
}

TEST_CASE("U_p and V_p") {
    CHECK(apply_Up(series({{-5, 1}, {3, 1}}, 10), 5) == series({{-1, 1}}, 2));
    CHECK(apply_Vp(series({{1, 1}}, 3), 5) == series({{5, 1}}, 11));
    std::mt19937_64 rng(21);
    for (int i = 0; i < 100; ++i) {
        const auto a = random_series(rng);
        for (long p : {2L, 3L, 5L}) {
            const auto uv = apply_Up(apply_Vp(a, p), p);
            CHECK(uv.agrees_with(a));
            CHECK(uv.prec() == a.prec());
            const auto vu = apply_Vp(apply_Up(a, p), p);
            for (const auto& [n, c] : vu.terms()) {
                CHECK(n % p == 0);
                CHECK(c == a.coeff(n));
            }
        }
    }
}

TEST_CASE("principal part keeps n <= 0") {
    CHECK(principal_part(series({{-2, 1}, {0, 5}, {1, 1}}, 4)) == series({{-2, 1}, {0, 5}}, 4));
    CHECK(principal_part(series({{1, 1}, {4, 3}}, 9)).is_zero());
}

TEST_CASE("ring laws and Leibniz rule on random series") {
    std::mt19937_64 rng(22);
    for (int i = 0; i < 150; ++i) {
        const auto a = random_series(rng), b = random_series(rng), c = random_series(rng);
        const auto l1 = (a + b) + c, r1 = a + (b + c);
        CHECK(l1 == r1);
        const auto l2 = a * (b + c), r2 = a * b + a * c;
        CHECK(l2.agrees_with(r2));
        const auto l3 = (a * b) * c, r3 = a * (b * c);
        CHECK(l3.agrees_with(r3));
        const auto d = apply_D(a * b, 1);
        const auto leibniz = apply_D(a, 1) * b + a * apply_D(b, 1);
        CHECK(d.agrees_with(leibniz));
    }
}

TEST_CASE("Hecke operators commute on random series") {
    std::mt19937_64 rng(23);
    const auto ctx = OperatorContext::trivial(4, 9);
    ctx.validate();
    const long primes[] = {2, 5, 7, 11, 13};
    for (int i = 0; i < 120; ++i) {
        const auto a = random_series(rng, -2, 400);
        const long l1 = primes[rng() % 5];
        long l2 = primes[rng() % 5];
        if (l2 == l1) l2 = l1 == 2 ? 5 : 2;
        const auto x = hecke_Tl(hecke_Tl(a, l1, ctx), l2, ctx);
        const auto y = hecke_Tl(hecke_Tl(a, l2, ctx), l1, ctx);
        CHECK(x.agrees_with(y));
    }
    // l | N degenerates to U_l
    const auto a = random_series(rng, -2, 60);
    CHECK(hecke_Tl(a, 3, ctx) == apply_Up(a, 3));
}

TEST_CASE("operator context validation") {
    auto bad = OperatorContext::trivial(4, 9);
    bad.chi[3] = 1;
    CHECK_THROWS_AS(bad.validate(), InvalidInput);
    const auto chi3 = OperatorContext::quadratic_mod3(2, 9);
    chi3.validate();
    CHECK(chi3.character(2) == -1);
    CHECK(chi3.character(4) == 1);
    CHECK(chi3.character(6) == 0);
}

TEST_CASE("residue series agree with rational arithmetic") {
    std::mt19937_64 rng(24);
    auto ring = std::make_shared<const ResidueRing>(7, 20);
    for (int i = 0; i < 100; ++i) {
        const auto a = random_series(rng, -3, 40), b = random_series(rng, -3, 40);
        const auto ra = ResidueSeries::from_rational(ring, a);
        const auto rb = ResidueSeries::from_rational(ring, b);
        CHECK((ra * rb).agrees_with(ResidueSeries::from_rational(ring, a * b)));
        CHECK((ra + rb).agrees_with(ResidueSeries::from_rational(ring, a + b)));
        CHECK(apply_Up(ra, 2).agrees_with(ResidueSeries::from_rational(ring, apply_Up(a, 2))));
        CHECK(apply_Vp(ra, 3).agrees_with(ResidueSeries::from_rational(ring, apply_Vp(a, 3))));
        CHECK(apply_D(ra, 3).agrees_with(ResidueSeries::from_rational(ring, apply_D(a, 3))));
        const auto ctx = OperatorContext::trivial(4, 9);
        CHECK(hecke_Tl(ra, 2, ctx).agrees_with(ResidueSeries::from_rational(ring, hecke_Tl(a, 2, ctx))));
    }
    auto other = std::make_shared<const ResidueRing>(7, 21);
    CHECK_THROWS_AS(ResidueSeries::zero(ring, 3) + ResidueSeries::zero(other, 3), DomainMismatch);
}

TEST_CASE("NTT convolution matches schoolbook") {
    std::mt19937_64 rng(25);
    for (auto [p, digits] : {std::pair{5ULL, 50}, std::pair{23ULL, 27}, std::pair{17ULL, 3}}) {
        const ResidueRing ring(p, digits);
        for (std::size_t len : {1UL, 7UL, 300UL, 1025UL}) {
            std::vector<u128> a(len), b(len + 13);
            for (auto& x : a) x = ((static_cast<u128>(rng()) << 64) | rng()) % ring.modulus();
            for (auto& x : b) x = ((static_cast<u128>(rng()) << 64) | rng()) % ring.modulus();
            const std::size_t out = len + 5;
            const auto fast = ntt::convolve(ring, a, b, out);
            const std::size_t saved = schoolbook_threshold();
            set_schoolbook_threshold(1UL << 30);
            const auto slow = dense_product(ring, a, b, out);
            set_schoolbook_threshold(saved);
            CHECK(fast == slow);
        }
    }
}

TEST_CASE("dense inverse") {
    const ResidueRing ring(5, 30);
    std::mt19937_64 rng(26);
    std::vector<u128> a(700);
    for (auto& x : a) x = ((static_cast<u128>(rng()) << 64) | rng()) % ring.modulus();
    a[0] = ring.from_int(3);
    const auto inv = dense_inverse(ring, a, 700);
    const auto one = dense_product(ring, a, inv, 700);
    CHECK(one[0] == 1);
    for (std::size_t i = 1; i < one.size(); ++i) CHECK(one[i] == 0);
}

TEST_CASE("series text round trip") {
    const auto a = series({{-2, 3}, {0, -1}, {5, 7}}, 9).scaled(BigRational(1, 6));
    std::stringstream ss;
    ss << "# comment\n";
    write_series(ss, a);
    CHECK(read_rational_series(ss) == a);

    auto ring = std::make_shared<const ResidueRing>(11, 4);
    const auto r = ResidueSeries::from_rational(ring, a);
    std::stringstream rs;
    write_series(rs, r);
    CHECK(rs.str().rfind("domain=mod:11^4, n0=-2, prec=9", 0) == 0);
    const auto back = read_residue_series(rs);
    CHECK(back.agrees_with(r));

    std::stringstream bad("domain=rational, n0=0\n");
    CHECK_THROWS_AS(read_rational_series(bad), InvalidInput);
}
