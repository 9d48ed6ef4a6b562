#include "mockpadic/qseries.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "mockpadic/errors.hpp"
#include "mockpadic/ntt.hpp"

namespace mockpadic {

namespace {

long floor_div(long a, long b) {
    long q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

long ceil_div(long a, long b) { return -floor_div(-a, b); }

long mod_floor(long a, long b) { return a - b * floor_div(a, b); }

BigRational pow_rational(long base, int e) {
    BigInt b = 1;
    const BigInt x(base);
    for (int i = 0; i < std::abs(e); ++i) b *= x;
    if (e >= 0) return BigRational(b);
    return rational_from_parts(1, b);
}

std::atomic<std::size_t> g_schoolbook_threshold{256};

} // namespace

// ---------------------------------------------------------------- context

OperatorContext OperatorContext::trivial(int weight, long level) {
    if (level < 1) throw InvalidInput("operator context: level must be positive");
    OperatorContext ctx{weight, level, std::vector<int>(static_cast<std::size_t>(level), 0)};
    for (long d = 0; d < level; ++d) ctx.chi[static_cast<std::size_t>(d)] = std::gcd(d, level) == 1 ? 1 : 0;
    return ctx;
}

OperatorContext OperatorContext::quadratic_mod3(int weight, long level) {
    if (level < 1 || level % 3 != 0) throw InvalidInput("operator context: level must be divisible by 3");
    OperatorContext ctx{weight, level, std::vector<int>(static_cast<std::size_t>(level), 0)};
    for (long d = 0; d < level; ++d) {
        if (std::gcd(d, level) == 1) ctx.chi[static_cast<std::size_t>(d)] = d % 3 == 1 ? 1 : -1;
    }
    return ctx;
}

int OperatorContext::character(long d) const {
    return chi[static_cast<std::size_t>(mod_floor(d, level))];
}

void OperatorContext::validate() const {
    if (level < 1 || chi.size() != static_cast<std::size_t>(level)) {
        throw InvalidInput("operator context: character table must have one entry per residue mod N");
    }
    for (long d = 0; d < level; ++d) {
        const int c = chi[static_cast<std::size_t>(d)];
        if (c < -1 || c > 1) throw InvalidInput("operator context: character values must lie in {-1, 0, 1}");
        if ((std::gcd(d, level) == 1) != (c != 0)) {
            throw InvalidInput("operator context: character must vanish exactly off the units mod N");
        }
    }
}

// ---------------------------------------------------------------- rational series

LaurentSeries::LaurentSeries(std::map<long, BigRational> coeffs, long prec)
    : coeffs_(std::move(coeffs)), prec_(prec) {
    normalize();
    if (!coeffs_.empty() && coeffs_.rbegin()->first >= prec_) {
        throw InvalidInput("series: coefficient at or above the truncation bound");
    }
}

void LaurentSeries::normalize() {
    for (auto it = coeffs_.begin(); it != coeffs_.end();) {
        if (it->second == 0) {
            it = coeffs_.erase(it);
        } else {
            it->second.canonicalize();
            ++it;
        }
    }
}

LaurentSeries LaurentSeries::from_dense(long start, const std::vector<BigRational>& c, long prec) {
    std::map<long, BigRational> m;
    for (std::size_t i = 0; i < c.size(); ++i) {
        const long n = start + static_cast<long>(i);
        if (n >= prec) break;
        if (c[i] != 0) m.emplace(n, c[i]);
    }
    return LaurentSeries(std::move(m), prec);
}

LaurentSeries LaurentSeries::from_integers(long start, const std::vector<BigInt>& c, long prec) {
    std::map<long, BigRational> m;
    for (std::size_t i = 0; i < c.size(); ++i) {
        const long n = start + static_cast<long>(i);
        if (n >= prec) break;
        if (c[i] != 0) m.emplace(n, BigRational(c[i]));
    }
    return LaurentSeries(std::move(m), prec);
}

LaurentSeries LaurentSeries::monomial(long exponent, const BigRational& c, long prec) {
    std::map<long, BigRational> m;
    if (exponent < prec && c != 0) m.emplace(exponent, c);
    return LaurentSeries(std::move(m), prec);
}

long LaurentSeries::valuation() const noexcept { return coeffs_.empty() ? prec_ : coeffs_.begin()->first; }

BigRational LaurentSeries::coeff(long n) const {
    if (n >= prec_) throw PrecisionError("series coefficient at q^" + std::to_string(n) + " is beyond the truncation", n + 1);
    const auto it = coeffs_.find(n);
    return it == coeffs_.end() ? BigRational(0) : it->second;
}

LaurentSeries LaurentSeries::truncated(long new_prec) const {
    LaurentSeries r = *this;
    if (new_prec >= prec_) return r;
    r.prec_ = new_prec;
    r.coeffs_.erase(r.coeffs_.lower_bound(new_prec), r.coeffs_.end());
    return r;
}

LaurentSeries LaurentSeries::shifted(long s) const {
    std::map<long, BigRational> m;
    for (const auto& [n, c] : coeffs_) m.emplace_hint(m.end(), n + s, c);
    return LaurentSeries(std::move(m), prec_ + s);
}

LaurentSeries LaurentSeries::scaled(const BigRational& c) const {
    if (c == 0) return LaurentSeries(prec_);
    LaurentSeries r = *this;
    for (auto& [n, x] : r.coeffs_) x *= c;
    return r;
}

LaurentSeries LaurentSeries::operator-() const {
    LaurentSeries r = *this;
    for (auto& [n, x] : r.coeffs_) x = -x;
    return r;
}

LaurentSeries operator+(const LaurentSeries& a, const LaurentSeries& b) {
    const long prec = std::min(a.prec_, b.prec_);
    std::map<long, BigRational> m;
    for (const auto& [n, c] : a.coeffs_) {
        if (n >= prec) break;
        m.emplace_hint(m.end(), n, c);
    }
    for (const auto& [n, c] : b.coeffs_) {
        if (n >= prec) break;
        m[n] += c;
    }
    return LaurentSeries(std::move(m), prec);
}

LaurentSeries operator-(const LaurentSeries& a, const LaurentSeries& b) { return a + (-b); }

LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b) {
    const long va = a.valuation(), vb = b.valuation();
    const long prec = std::min(a.prec_ + vb, b.prec_ + va);
    if (a.is_zero() || b.is_zero()) return LaurentSeries(prec);

    std::map<long, BigRational> m;
    if (a.coeffs_.size() <= 32 || b.coeffs_.size() <= 32) {
        for (const auto& [i, x] : a.coeffs_) {
            for (const auto& [j, y] : b.coeffs_) {
                if (i + j >= prec) break;
                m[i + j] += x * y;
            }
        }
        return LaurentSeries(std::move(m), prec);
    }

    // Dense integer product after clearing denominators.
    const BigInt da = a.common_denominator(), db = b.common_denominator();
    auto to_dense = [](const LaurentSeries& s, const BigInt& d, long v, long len) {
        std::vector<BigInt> out(static_cast<std::size_t>(std::max(0L, len)));
        for (const auto& [n, c] : s.coeffs_) {
            if (n - v >= len) break;
            out[static_cast<std::size_t>(n - v)] = BigInt(c.get_num() * (d / c.get_den()));
        }
        return out;
    };
    const long len = prec - va - vb;
    const auto xa = to_dense(a, da, va, len);
    const auto xb = to_dense(b, db, vb, len);
    std::vector<BigInt> out(static_cast<std::size_t>(len));
    for (long i = 0; i < len; ++i) {
        const BigInt& x = xa[static_cast<std::size_t>(i)];
        if (x == 0) continue;
        for (long j = 0; i + j < len; ++j) {
            const BigInt& y = xb[static_cast<std::size_t>(j)];
            if (y != 0) mpz_addmul(out[static_cast<std::size_t>(i + j)].get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
        }
    }
    const BigInt den = da * db;
    for (long i = 0; i < len; ++i) {
        if (out[static_cast<std::size_t>(i)] != 0) m.emplace_hint(m.end(), va + vb + i, rational_from_parts(out[static_cast<std::size_t>(i)], den));
    }
    return LaurentSeries(std::move(m), prec);
}

bool LaurentSeries::agrees_with(const LaurentSeries& other) const {
    const long prec = std::min(prec_, other.prec_);
    return truncated(prec).coeffs_ == other.truncated(prec).coeffs_;
}

BigInt LaurentSeries::common_denominator() const {
    BigInt d = 1;
    for (const auto& [n, c] : coeffs_) mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), c.get_den_mpz_t());
    return d;
}

std::string LaurentSeries::to_string(long max_terms) const {
    std::ostringstream out;
    long shown = 0;
    for (const auto& [n, c] : coeffs_) {
        if (shown == max_terms) {
            out << " + ...";
            break;
        }
        const bool neg = c < 0;
        const BigRational mag = neg ? BigRational(-c) : c;
        if (shown == 0) {
            if (neg) out << "-";
        } else {
            out << (neg ? " - " : " + ");
        }
        const bool unit = mag == 1;
        if (n == 0) {
            out << mockpadic::to_string(mag);
        } else {
            if (!unit) out << mockpadic::to_string(mag) << "*";
            out << "q";
            if (n != 1) out << "^" << n;
        }
        ++shown;
    }
    if (shown == 0) out << "0";
    out << " + O(q^" << prec_ << ")";
    return out.str();
}

LaurentSeries add(const LaurentSeries& a, const LaurentSeries& b) { return a + b; }
LaurentSeries sub(const LaurentSeries& a, const LaurentSeries& b) { return a - b; }
LaurentSeries mul(const LaurentSeries& a, const LaurentSeries& b) { return a * b; }

LaurentSeries apply_D(const LaurentSeries& a, int times) {
    if (times < 0) throw InvalidInput("apply_D: times must be non-negative");
    std::map<long, BigRational> m;
    for (const auto& [n, c] : a.terms()) {
        if (n != 0) m.emplace_hint(m.end(), n, c * pow_rational(n, times));
        else if (times == 0) m.emplace_hint(m.end(), n, c);
    }
    return LaurentSeries(std::move(m), a.prec());
}

LaurentSeries eichler_integral(const LaurentSeries& h, int k) {
    std::map<long, BigRational> m;
    for (const auto& [n, c] : h.terms()) {
        if (n <= 0) throw InvalidInput("eichler_integral: input has a nonzero coefficient at q^" + std::to_string(n));
        m.emplace_hint(m.end(), n, c * pow_rational(n, 1 - k));
    }
    return LaurentSeries(std::move(m), h.prec());
}

LaurentSeries apply_Up(const LaurentSeries& a, long p) {
    if (p < 1) throw InvalidInput("apply_Up: p must be positive");
    std::map<long, BigRational> m;
    for (const auto& [n, c] : a.terms()) {
        if (mod_floor(n, p) == 0) m.emplace_hint(m.end(), n / p, c);
    }
    return LaurentSeries(std::move(m), ceil_div(a.prec(), p));
}

LaurentSeries apply_Vp(const LaurentSeries& a, long p) {
    if (p < 1) throw InvalidInput("apply_Vp: p must be positive");
    std::map<long, BigRational> m;
    for (const auto& [n, c] : a.terms()) m.emplace_hint(m.end(), n * p, c);
    return LaurentSeries(std::move(m), p * (a.prec() - 1) + 1);
}

LaurentSeries hecke_Tl(const LaurentSeries& a, long l, const OperatorContext& ctx) {
    if (l < 2 || !is_prime(static_cast<std::uint64_t>(l))) throw InvalidInput("hecke_Tl: l must be prime");
    const int chi = ctx.character(l);
    LaurentSeries r = apply_Up(a, l);
    if (chi == 0) return r;
    const BigRational factor = BigRational(chi) * pow_rational(l, ctx.weight - 1);
    const LaurentSeries v = apply_Vp(a, l).scaled(factor);
    return r + v;
}

LaurentSeries principal_part(const LaurentSeries& a) {
    std::map<long, BigRational> m;
    for (const auto& [n, c] : a.terms()) {
        if (n > 0) break;
        m.emplace_hint(m.end(), n, c);
    }
    return LaurentSeries(std::move(m), a.prec());
}

// ---------------------------------------------------------------- residue series

void set_schoolbook_threshold(std::size_t terms) { g_schoolbook_threshold = std::max<std::size_t>(terms, 1); }
std::size_t schoolbook_threshold() { return g_schoolbook_threshold; }

std::vector<u128> dense_product(const ResidueRing& ring, std::span<const u128> a, std::span<const u128> b,
                                std::size_t out_len) {
    a = a.first(std::min(a.size(), out_len));
    b = b.first(std::min(b.size(), out_len));
    std::size_t na = a.size(), nb = b.size();
    while (na && a[na - 1] == 0) --na;
    while (nb && b[nb - 1] == 0) --nb;
    a = a.first(na);
    b = b.first(nb);
    if (std::min(na, nb) > schoolbook_threshold()) return ntt::convolve(ring, a, b, out_len);

    std::vector<u128> out(out_len, 0);
    if (na > nb) std::swap(a, b);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        const u128 prepared = ring.prepare(a[i]);
        const std::size_t stop = std::min(b.size(), out_len - i);
        u128* o = out.data() + i;
        for (std::size_t j = 0; j < stop; ++j) {
            if (b[j] != 0) o[j] = ring.add(o[j], ring.mul_prepared(b[j], prepared));
        }
    }
    return out;
}

std::vector<u128> dense_inverse(const ResidueRing& ring, std::span<const u128> a, std::size_t len) {
    if (a.empty()) throw InvalidInput("dense_inverse: empty series");
    std::vector<u128> g{ring.inverse(a[0])};
    std::size_t have = 1;
    while (have < len) {
        const std::size_t next = std::min(2 * have, len);
        // g <- g (2 - a g)
        std::vector<u128> ag = dense_product(ring, a.first(std::min(a.size(), next)), g, next);
        for (auto& x : ag) x = ring.neg(x);
        ag[0] = ring.add(ag[0], ring.from_int(2));
        g = dense_product(ring, g, ag, next);
        have = next;
    }
    g.resize(len);
    return g;
}

ResidueSeries::ResidueSeries(Ring ring, long start, std::vector<u128> coeffs, long prec)
    : ring_(std::move(ring)), start_(start), c_(std::move(coeffs)), prec_(prec) {
    if (!ring_) throw InvalidInput("residue series: missing ring");
    const long span = std::max(0L, prec_ - start_);
    if (static_cast<long>(c_.size()) > span) {
        for (std::size_t i = static_cast<std::size_t>(span); i < c_.size(); ++i) {
            if (c_[i] != 0) throw InvalidInput("residue series: coefficient at or above the truncation bound");
        }
    }
    c_.resize(static_cast<std::size_t>(span), 0);
    for (auto& x : c_) {
        if (x >= ring_->modulus()) x %= ring_->modulus();
    }
}

ResidueSeries ResidueSeries::zero(Ring ring, long prec) { return ResidueSeries(std::move(ring), prec, {}, prec); }

ResidueSeries ResidueSeries::from_rational(Ring ring, const LaurentSeries& a) {
    const long start = a.valuation();
    std::vector<u128> c(static_cast<std::size_t>(std::max(0L, a.prec() - start)), 0);
    for (const auto& [n, x] : a.terms()) c[static_cast<std::size_t>(n - start)] = ring->from_rational(x);
    return ResidueSeries(std::move(ring), start, std::move(c), a.prec());
}

long ResidueSeries::valuation() const noexcept {
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] != 0) return start_ + static_cast<long>(i);
    }
    return prec_;
}

u128 ResidueSeries::coeff(long n) const {
    if (n >= prec_) throw PrecisionError("series coefficient at q^" + std::to_string(n) + " is beyond the truncation", n + 1);
    if (n < start_) return 0;
    return c_[static_cast<std::size_t>(n - start_)];
}

ResidueSeries ResidueSeries::truncated(long new_prec) const {
    if (new_prec >= prec_) return *this;
    const long start = std::min(start_, new_prec);
    std::vector<u128> c(c_.begin(), c_.begin() + std::max(0L, new_prec - start_));
    return ResidueSeries(ring_, start, std::move(c), new_prec);
}

ResidueSeries ResidueSeries::shifted(long s) const { return ResidueSeries(ring_, start_ + s, c_, prec_ + s); }

ResidueSeries ResidueSeries::scaled(u128 c) const {
    ResidueSeries r = *this;
    const u128 prepared = ring_->prepare(c % ring_->modulus());
    for (auto& x : r.c_) x = ring_->mul_prepared(x, prepared);
    return r;
}

ResidueSeries ResidueSeries::operator-() const {
    ResidueSeries r = *this;
    for (auto& x : r.c_) x = ring_->neg(x);
    return r;
}

void ResidueSeries::check_same_ring(const ResidueSeries& other) const {
    if (!(*ring_ == *other.ring_)) {
        throw DomainMismatch("residue series over " + ring_->tag() + " and " + other.ring_->tag());
    }
}

ResidueSeries operator+(const ResidueSeries& a, const ResidueSeries& b) {
    a.check_same_ring(b);
    const long prec = std::min(a.prec_, b.prec_);
    const long start = std::min({a.start_, b.start_, prec});
    std::vector<u128> c(static_cast<std::size_t>(prec - start), 0);
    for (const ResidueSeries* s : {&a, &b}) {
        for (std::size_t i = 0; i < s->c_.size(); ++i) {
            const long n = s->start_ + static_cast<long>(i);
            if (n >= prec) break;
            u128& slot = c[static_cast<std::size_t>(n - start)];
            slot = a.ring_->add(slot, s->c_[i]);
        }
    }
    return ResidueSeries(a.ring_, start, std::move(c), prec);
}

ResidueSeries operator-(const ResidueSeries& a, const ResidueSeries& b) { return a + (-b); }

ResidueSeries operator*(const ResidueSeries& a, const ResidueSeries& b) {
    a.check_same_ring(b);
    const long va = a.valuation(), vb = b.valuation();
    const long prec = std::min(a.prec_ + vb, b.prec_ + va);
    const long start = std::min(va + vb, prec);
    if (va == a.prec_ || vb == b.prec_) return ResidueSeries::zero(a.ring_, prec);
    const std::span<const u128> xa = std::span<const u128>(a.c_).subspan(static_cast<std::size_t>(va - a.start_));
    const std::span<const u128> xb = std::span<const u128>(b.c_).subspan(static_cast<std::size_t>(vb - b.start_));
    auto c = dense_product(*a.ring_, xa, xb, static_cast<std::size_t>(prec - start));
    return ResidueSeries(a.ring_, start, std::move(c), prec);
}

bool ResidueSeries::agrees_with(const ResidueSeries& other) const {
    check_same_ring(other);
    const long prec = std::min(prec_, other.prec_);
    const long lo = std::min(start_, other.start_);
    for (long n = lo; n < prec; ++n) {
        if (coeff(n) != other.coeff(n)) return false;
    }
    return true;
}

ResidueSeries add(const ResidueSeries& a, const ResidueSeries& b) { return a + b; }
ResidueSeries sub(const ResidueSeries& a, const ResidueSeries& b) { return a - b; }
ResidueSeries mul(const ResidueSeries& a, const ResidueSeries& b) { return a * b; }

ResidueSeries apply_D(const ResidueSeries& a, int times) {
    if (times < 0) throw InvalidInput("apply_D: times must be non-negative");
    const ResidueRing& ring = *a.ring();
    std::vector<u128> c = a.data();
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (c[i] == 0) continue;
        const long n = a.start() + static_cast<long>(i);
        c[i] = ring.mul(c[i], ring.pow(ring.from_int(n), static_cast<std::uint64_t>(times)));
    }
    return ResidueSeries(a.ring(), a.start(), std::move(c), a.prec());
}

ResidueSeries apply_Up(const ResidueSeries& a, long p) {
    if (p < 1) throw InvalidInput("apply_Up: p must be positive");
    const long prec = ceil_div(a.prec(), p);
    const long start = std::min(ceil_div(a.start(), p), prec);
    std::vector<u128> c(static_cast<std::size_t>(prec - start), 0);
    for (long n = start; n < prec; ++n) c[static_cast<std::size_t>(n - start)] = a.coeff(n * p);
    return ResidueSeries(a.ring(), start, std::move(c), prec);
}

ResidueSeries apply_Vp(const ResidueSeries& a, long p) {
    if (p < 1) throw InvalidInput("apply_Vp: p must be positive");
    const long prec = p * (a.prec() - 1) + 1;
    const long start = std::min(a.start() * p, prec);
    std::vector<u128> c(static_cast<std::size_t>(prec - start), 0);
    for (std::size_t i = 0; i < a.data().size(); ++i) {
        const long n = (a.start() + static_cast<long>(i)) * p;
        if (n < prec) c[static_cast<std::size_t>(n - start)] = a.data()[i];
    }
    return ResidueSeries(a.ring(), start, std::move(c), prec);
}

ResidueSeries hecke_Tl(const ResidueSeries& a, long l, const OperatorContext& ctx) {
    if (l < 2 || !is_prime(static_cast<std::uint64_t>(l))) throw InvalidInput("hecke_Tl: l must be prime");
    const int chi = ctx.character(l);
    ResidueSeries r = apply_Up(a, l);
    if (chi == 0) return r;
    const ResidueRing& ring = *a.ring();
    u128 factor = ring.pow(ring.from_int(l), static_cast<std::uint64_t>(ctx.weight - 1));
    if (chi < 0) factor = ring.neg(factor);
    const ResidueSeries v = apply_Vp(a, l).scaled(factor);
    return r + v;
}

ResidueSeries principal_part(const ResidueSeries& a) {
    std::vector<u128> c = a.data();
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (a.start() + static_cast<long>(i) > 0) c[i] = 0;
    }
    return ResidueSeries(a.ring(), a.start(), std::move(c), a.prec());
}

// ---------------------------------------------------------------- text format

namespace {

void write_header(std::ostream& out, const std::string& domain, long n0, long prec) {
    out << "domain=" << domain << ", n0=" << n0 << ", prec=" << prec << "\n";
}

struct Header {
    std::string domain;
    long n0 = 0;
    long prec = 0;
};

Header parse_header(const std::string& line) {
    Header h;
    bool have_domain = false, have_n0 = false, have_prec = false;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
        const auto first = field.find_first_not_of(" \t");
        if (first == std::string::npos) continue;
        field = field.substr(first);
        const auto eq = field.find('=');
        if (eq == std::string::npos) throw InvalidInput("series header: malformed field '" + field + "'");
        const std::string key = field.substr(0, eq);
        std::string value = field.substr(eq + 1);
        while (!value.empty() && std::isspace(static_cast<unsigned char>(value.back()))) value.pop_back();
        try {
            if (key == "domain") {
                h.domain = value;
                have_domain = true;
            } else if (key == "n0") {
                h.n0 = std::stol(value);
                have_n0 = true;
            } else if (key == "prec") {
                h.prec = std::stol(value);
                have_prec = true;
            }
        } catch (const std::logic_error&) {
            throw InvalidInput("series header: bad value for " + key);
        }
    }
    if (!have_domain || !have_n0 || !have_prec) throw InvalidInput("series header: missing domain, n0 or prec");
    return h;
}

bool next_content_line(std::istream& in, std::string& line) {
    while (std::getline(in, line)) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        return true;
    }
    return false;
}

template <class F>
void read_terms(std::istream& in, F&& on_term) {
    std::string line;
    while (next_content_line(in, line)) {
        std::istringstream ls(line);
        long n = 0;
        std::string c;
        if (!(ls >> n >> c)) throw InvalidInput("series body: malformed line '" + line + "'");
        on_term(n, c);
    }
}

} // namespace

std::string series_domain(const std::string& header_line) { return parse_header(header_line).domain; }

void write_series(std::ostream& out, const LaurentSeries& a) {
    write_header(out, "rational", a.valuation(), a.prec());
    for (const auto& [n, c] : a.terms()) out << n << " " << to_string(c) << "\n";
}

void write_series(std::ostream& out, const ResidueSeries& a) {
    write_header(out, a.domain_tag(), a.valuation(), a.prec());
    for (std::size_t i = 0; i < a.data().size(); ++i) {
        if (a.data()[i] != 0) out << a.start() + static_cast<long>(i) << " " << u128_to_string(a.data()[i]) << "\n";
    }
}

LaurentSeries read_rational_series(std::istream& in) {
    std::string line;
    if (!next_content_line(in, line)) throw InvalidInput("series: empty input");
    const Header h = parse_header(line);
    if (h.domain != "rational") throw DomainMismatch("series: expected domain=rational, found " + h.domain);
    std::map<long, BigRational> m;
    read_terms(in, [&](long n, const std::string& c) {
        if (n < h.n0) throw InvalidInput("series body: exponent below n0");
        m[n] = parse_rational(c);
    });
    return LaurentSeries(std::move(m), h.prec);
}

ResidueSeries read_residue_series(std::istream& in) {
    std::string line;
    if (!next_content_line(in, line)) throw InvalidInput("series: empty input");
    const Header h = parse_header(line);
    const std::string prefix = "mod:";
    const auto caret = h.domain.find('^');
    if (h.domain.rfind(prefix, 0) != 0 || caret == std::string::npos) {
        throw DomainMismatch("series: expected domain=mod:p^M, found " + h.domain);
    }
    unsigned long p = 0;
    int digits = 0;
    try {
        p = std::stoul(h.domain.substr(prefix.size(), caret - prefix.size()));
        digits = std::stoi(h.domain.substr(caret + 1));
    } catch (const std::logic_error&) {
        throw InvalidInput("series header: malformed domain " + h.domain);
    }
    auto ring = std::make_shared<const ResidueRing>(p, digits);
    const long start = std::min(h.n0, h.prec);
    std::vector<u128> c(static_cast<std::size_t>(h.prec - start), 0);
    read_terms(in, [&](long n, const std::string& text) {
        if (n < h.n0 || n >= h.prec) throw InvalidInput("series body: exponent outside [n0, prec)");
        c[static_cast<std::size_t>(n - start)] = ring->from_big(BigInt(text));
    });
    return ResidueSeries(std::move(ring), start, std::move(c), h.prec);
}

} // namespace mockpadic
