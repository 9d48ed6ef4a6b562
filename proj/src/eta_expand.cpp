#include <algorithm>
#include <cmath>

#include "mockpadic/errors.hpp"
#include "mockpadic/etaforms.hpp"
#include "mockpadic/ntt.hpp"

namespace mockpadic {

namespace {

struct SparseTerm {
    long exponent;
    long coeff;
};

// prod (1 - x^n) = 1 + sum_{k>=1} (-1)^k (x^{k(3k-1)/2} + x^{k(3k+1)/2})
std::vector<SparseTerm> pentagonal_terms(long limit) {
    std::vector<SparseTerm> t;
    for (long k = 1;; ++k) {
        const long a = k * (3 * k - 1) / 2, b = k * (3 * k + 1) / 2;
        if (a >= limit) break;
        const long s = k % 2 ? -1 : 1;
        t.push_back({a, s});
        if (b < limit) t.push_back({b, s});
    }
    return t;
}

// prod (1 - x^n)^3 = sum_{k>=0} (-1)^k (2k+1) x^{k(k+1)/2}
std::vector<SparseTerm> jacobi_terms(long limit) {
    std::vector<SparseTerm> t;
    for (long k = 1;; ++k) {
        const long a = k * (k + 1) / 2;
        if (a >= limit) break;
        t.push_back({a, (k % 2 ? -1 : 1) * (2 * k + 1)});
    }
    return t;
}

std::vector<SparseTerm> dilated(std::vector<SparseTerm> t, long d, long len) {
    std::vector<SparseTerm> out;
    for (auto& x : t) {
        if (x.exponent * d < len) out.push_back({x.exponent * d, x.coeff});
    }
    return out;
}

struct IntegerOps {
    static void addmul(BigInt& dst, const BigInt& src, long c) {
        if (c >= 0) mpz_addmul_ui(dst.get_mpz_t(), src.get_mpz_t(), static_cast<unsigned long>(c));
        else mpz_submul_ui(dst.get_mpz_t(), src.get_mpz_t(), static_cast<unsigned long>(-c));
    }
};

struct ResidueOps {
    const ResidueRing& ring;
    mutable std::vector<std::pair<long, u128>> prepared;

    void prepare(const std::vector<SparseTerm>& terms) const {
        prepared.clear();
        for (const auto& t : terms) prepared.emplace_back(t.exponent, ring.prepare(ring.from_int(t.coeff)));
    }
};

// f <- f * (1 + sum terms)
void multiply_pass(std::vector<BigInt>& f, const std::vector<SparseTerm>& terms) {
    std::vector<BigInt> g = f;
    const long len = static_cast<long>(f.size());
    for (const auto& t : terms) {
        for (long i = len - 1; i >= t.exponent; --i) {
            const BigInt& src = f[static_cast<std::size_t>(i - t.exponent)];
            if (src != 0) IntegerOps::addmul(g[static_cast<std::size_t>(i)], src, t.coeff);
        }
    }
    f.swap(g);
}

// f <- f / (1 + sum terms)
void divide_pass(std::vector<BigInt>& f, const std::vector<SparseTerm>& terms) {
    const long len = static_cast<long>(f.size());
    for (long i = 0; i < len; ++i) {
        BigInt& dst = f[static_cast<std::size_t>(i)];
        for (const auto& t : terms) {
            if (t.exponent > i) break;
            const BigInt& src = f[static_cast<std::size_t>(i - t.exponent)];
            if (src != 0) IntegerOps::addmul(dst, src, -t.coeff);
        }
    }
}

void multiply_pass(const ResidueOps& ops, std::vector<u128>& f, const std::vector<SparseTerm>& terms) {
    ops.prepare(terms);
    std::vector<u128> g = f;
    const long len = static_cast<long>(f.size());
    for (const auto& [k, c] : ops.prepared) {
        const u128* src = f.data();
        u128* dst = g.data() + k;
        for (long i = 0; i + k < len; ++i) {
            if (src[i] != 0) dst[i] = ops.ring.add(dst[i], ops.ring.mul_prepared(src[i], c));
        }
    }
    f.swap(g);
}

void divide_pass(const ResidueOps& ops, std::vector<u128>& f, const std::vector<SparseTerm>& terms) {
    std::vector<SparseTerm> neg = terms;
    for (auto& t : neg) t.coeff = -t.coeff;
    ops.prepare(neg);
    const long len = static_cast<long>(f.size());
    for (long i = 0; i < len; ++i) {
        u128 acc = f[static_cast<std::size_t>(i)];
        for (const auto& [k, c] : ops.prepared) {
            if (k > i) break;
            const u128 src = f[static_cast<std::size_t>(i - k)];
            if (src != 0) acc = ops.ring.add(acc, ops.ring.mul_prepared(src, c));
        }
        f[static_cast<std::size_t>(i)] = acc;
    }
}

template <class Mul, class Div>
void apply_factor(long d, int e, long len, Mul&& mul, Div&& div) {
    if (e == 0 || len <= 0) return;
    const int a = std::abs(e) / 3, b = std::abs(e) % 3;
    const long xlen = (len + d - 1) / d;
    const auto jac = dilated(jacobi_terms(xlen), d, len);
    const auto pent = dilated(pentagonal_terms(xlen), d, len);
    auto step = [&](const std::vector<SparseTerm>& terms) {
        if (e > 0) mul(terms);
        else div(terms);
    };
    for (int i = 0; i < a; ++i) step(jac);
    for (int i = 0; i < b; ++i) step(pent);
}

std::vector<u128> dense_from_terms(const ResidueRing& ring, const std::vector<SparseTerm>& terms, std::size_t len) {
    std::vector<u128> v(len, 0);
    if (len) v[0] = 1 % ring.modulus();
    for (const auto& t : terms) v[static_cast<std::size_t>(t.exponent)] = ring.from_int(t.coeff);
    return v;
}

std::vector<u128> unit_vector(const ResidueRing& ring, std::size_t len) {
    std::vector<u128> v(len, 0);
    if (len) v[0] = 1 % ring.modulus();
    return v;
}

// Rough operation counts used to pick between sparse passes and NTT products.
double sparse_cost(int e, std::size_t len) {
    const double n = static_cast<double>(len);
    const int a = std::abs(e) / 3, b = std::abs(e) % 3;
    return n * (a * std::sqrt(2 * n) + b * 2 * std::sqrt(2 * n / 3));
}

double ntt_cost(const ResidueRing& ring, int e, std::size_t len) {
    const int a = std::abs(e) / 3, b = std::abs(e) % 3;
    const double products = std::max(0, a + b - 1) + (e < 0 ? 3 : 0);
    const double size = std::exp2(std::ceil(std::log2(2.0 * static_cast<double>(len))));
    return products * 3 * ntt::primes_needed(ring, len) * size * std::log2(size) / 2;
}

} // namespace

void multiply_euler_factor(std::vector<BigInt>& f, long d, int e) {
    if (d < 1) throw InvalidInput("euler factor: d must be positive");
    apply_factor(
        d, e, static_cast<long>(f.size()), [&](const auto& t) { multiply_pass(f, t); },
        [&](const auto& t) { divide_pass(f, t); });
}

void multiply_euler_factor(const ResidueRing& ring, std::vector<u128>& f, long d, int e) {
    if (d < 1) throw InvalidInput("euler factor: d must be positive");
    const ResidueOps ops{ring, {}};
    apply_factor(
        d, e, static_cast<long>(f.size()), [&](const auto& t) { multiply_pass(ops, f, t); },
        [&](const auto& t) { divide_pass(ops, f, t); });
}

std::vector<BigInt> euler_power_integers(long d, int e, long len) {
    std::vector<BigInt> f(static_cast<std::size_t>(std::max(0L, len)));
    if (len > 0) f[0] = 1;
    multiply_euler_factor(f, d, e);
    return f;
}

std::vector<u128> euler_power_residues(const ResidueRing& ring, int e, std::size_t len) {
    std::vector<u128> f = unit_vector(ring, len);
    if (e == 0 || len == 0) return f;
    if (len <= 4096 || sparse_cost(e, len) <= ntt_cost(ring, e, len)) {
        multiply_euler_factor(ring, f, 1, e);
        return f;
    }
    const long l = static_cast<long>(len);
    const int a = std::abs(e) / 3, b = std::abs(e) % 3;
    const auto jac = dense_from_terms(ring, jacobi_terms(l), len);
    const auto pent = dense_from_terms(ring, pentagonal_terms(l), len);
    std::vector<u128> pos;
    auto times = [&](const std::vector<u128>& x) { pos = pos.empty() ? x : dense_product(ring, pos, x, len); };
    if (a >= 2) {
        const auto jac2 = dense_product(ring, jac, jac, len);
        for (int i = 0; i < a / 2; ++i) times(jac2);
        if (a % 2) times(jac);
    } else if (a == 1) {
        times(jac);
    }
    for (int i = 0; i < b; ++i) times(pent);
    if (e < 0) pos = dense_inverse(ring, pos, len);
    return pos;
}

std::vector<u128> dilate(const std::vector<u128>& f, long d, std::size_t len) {
    if (d < 1) throw InvalidInput("dilate: d must be positive");
    std::vector<u128> out(len, 0);
    for (std::size_t i = 0; i < f.size() && i * static_cast<std::size_t>(d) < len; ++i) {
        out[i * static_cast<std::size_t>(d)] = f[i];
    }
    return out;
}

LaurentSeries euler_product_expansion(long d, int exponent, long prec) {
    if (prec < 1) throw InvalidInput("euler_product_expansion: prec must be at least 1");
    return LaurentSeries::from_integers(0, euler_power_integers(d, exponent, prec), prec);
}

namespace {

long integral_order(const EtaQuotient& e) {
    if (!e.ligozat_conditions()) {
        throw InvalidInput("eta quotient " + e.to_string() + " fails the Ligozat conditions");
    }
    const BigRational ord = e.order_at_infinity();
    if (ord.get_den() != 1) throw InvalidInput("eta quotient " + e.to_string() + " has a non-integral order at infinity");
    return ord.get_num().get_si();
}

} // namespace

LaurentSeries eta_expansion(const EtaQuotient& e, long prec) {
    const long ord = integral_order(e);
    const long len = prec - ord;
    if (len <= 0) return LaurentSeries(prec);
    std::vector<BigInt> f(static_cast<std::size_t>(len));
    f[0] = 1;
    // Positive exponents first, while coefficients are small.
    for (const auto& [d, r] : e.exponents()) {
        if (r > 0) multiply_euler_factor(f, d, r);
    }
    for (const auto& [d, r] : e.exponents()) {
        if (r < 0) multiply_euler_factor(f, d, r);
    }
    return LaurentSeries::from_integers(ord, f, prec);
}

ResidueSeries eta_expansion(const EtaQuotient& e, long prec, const ResidueSeries::Ring& ring) {
    const long ord = integral_order(e);
    const long len = prec - ord;
    if (len <= 0) return ResidueSeries::zero(ring, prec);
    const auto ulen = static_cast<std::size_t>(len);
    std::vector<u128> f = unit_vector(*ring, ulen);
    if (len <= 50000) {
        for (const auto& [d, r] : e.exponents()) multiply_euler_factor(*ring, f, d, r);
    } else {
        bool first = true;
        for (const auto& [d, r] : e.exponents()) {
            const auto xlen = static_cast<std::size_t>((len + d - 1) / d);
            auto factor = dilate(euler_power_residues(*ring, r, xlen), d, ulen);
            f = first ? std::move(factor) : dense_product(*ring, f, factor, ulen);
            first = false;
        }
    }
    return ResidueSeries(ring, ord, std::move(f), prec);
}

// ---------------------------------------------------------------- Eisenstein series

std::vector<std::string> eisenstein_names() { return {"E2_3", "E2_9", "E2_chi3"}; }

LaurentSeries eisenstein_expansion(const std::string& name, long prec) {
    if (prec < 1) throw InvalidInput("eisenstein_expansion: prec must be at least 1");
    std::vector<BigInt> sigma(static_cast<std::size_t>(prec), 0);
    std::vector<BigInt> twisted(static_cast<std::size_t>(prec), 0);
    auto chi = [](long n) { return n % 3 == 0 ? 0 : (n % 3 == 1 ? 1 : -1); };
    for (long d = 1; d < prec; ++d) {
        for (long n = d; n < prec; n += d) {
            sigma[static_cast<std::size_t>(n)] += d;
            twisted[static_cast<std::size_t>(n)] += chi(d) * chi(n / d) * d;
        }
    }
    std::vector<BigInt> c(static_cast<std::size_t>(prec), 0);
    if (name == "E2_3" || name == "E2_9") {
        const long d = name == "E2_3" ? 3 : 9;
        c[0] = 1 - d;
        for (long n = 1; n < prec; ++n) {
            c[static_cast<std::size_t>(n)] -= 24 * sigma[static_cast<std::size_t>(n)];
            if (n * d < prec) c[static_cast<std::size_t>(n * d)] += 24 * d * sigma[static_cast<std::size_t>(n)];
        }
    } else if (name == "E2_chi3") {
        c = twisted;
    } else {
        throw InvalidInput("unknown Eisenstein series '" + name + "'; known: E2_3, E2_9, E2_chi3");
    }
    return LaurentSeries::from_integers(0, c, prec);
}

} // namespace mockpadic
