#include "mockpadic/exactnum.hpp"

#include <algorithm>
#include <cctype>

#include "mockpadic/errors.hpp"

namespace mockpadic {

BigRational rational_from_parts(const BigInt& num, const BigInt& den) {
    if (den == 0) {
        throw InvalidInput("rational_from_parts: zero denominator");
    }
    BigRational q(num, den);
    q.canonicalize();
    return q;
}

BigRational parse_rational(const std::string& text) {
    auto is_integer = [](const std::string& s) {
        if (s.empty()) return false;
        std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
        if (i == s.size()) return false;
        return std::all_of(s.begin() + static_cast<long>(i), s.end(),
                           [](unsigned char c) { return std::isdigit(c) != 0; });
    };
    const auto slash = text.find('/');
    const std::string num = text.substr(0, slash);
    const std::string den = slash == std::string::npos ? "1" : text.substr(slash + 1);
    if (!is_integer(num) || !is_integer(den)) {
        throw InvalidInput("malformed rational: '" + text + "'");
    }
    return rational_from_parts(BigInt(num[0] == '+' ? num.substr(1) : num),
                               BigInt(den[0] == '+' ? den.substr(1) : den));
}

std::string to_string(const BigInt& x) { return x.get_str(); }

std::string to_string(const BigRational& x) {
    if (x.get_den() == 1) return x.get_num().get_str();
    return x.get_num().get_str() + "/" + x.get_den().get_str();
}

long valuation(const BigInt& x, std::uint64_t p, BigInt* unit) {
    if (x == 0) throw InvalidInput("valuation of zero");
    BigInt rest;
    const BigInt prime(static_cast<unsigned long>(p));
    const long v = static_cast<long>(mpz_remove(rest.get_mpz_t(), x.get_mpz_t(), prime.get_mpz_t()));
    if (unit) *unit = rest;
    return v;
}

long valuation(const BigRational& x, std::uint64_t p) {
    return valuation(BigInt(x.get_num()), p) - valuation(BigInt(x.get_den()), p);
}

BigInt pow_int(std::uint64_t base, unsigned long exponent) {
    BigInt r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(base), exponent);
    return r;
}

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    const BigInt x(static_cast<unsigned long>(n));
    return mpz_probab_prime_p(x.get_mpz_t(), 40) > 0;
}

std::string to_string(const DifferenceValuation& d) {
    if (d.infinite) return "inf";
    return (d.at_least ? ">=" : "") + std::to_string(d.value);
}

namespace {

BigInt mod_pow(std::uint64_t p, long n) { return pow_int(p, static_cast<unsigned long>(n)); }

BigInt reduce_mod(const BigInt& x, const BigInt& m) {
    BigInt r;
    mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
    return r;
}

} // namespace

PadicApprox PadicApprox::exact_zero(std::uint64_t p) { return PadicApprox(p); }

PadicApprox PadicApprox::zero_mod(std::uint64_t p, long absolute_precision) {
    PadicApprox z(p);
    z.zero_floor_ = absolute_precision;
    return z;
}

PadicApprox PadicApprox::from_rational(const BigRational& x, std::uint64_t p, long digits) {
    if (p < 2 || !is_prime(p)) throw InvalidInput("padic: modulus must be prime");
    if (digits < 1) throw InvalidInput("padic: precision must be positive");
    if (x == 0) return exact_zero(p);
    BigInt num_unit, den_unit;
    const long a = mockpadic::valuation(BigInt(x.get_num()), p, &num_unit);
    const long b = mockpadic::valuation(BigInt(x.get_den()), p, &den_unit);
    const BigInt modulus = mod_pow(p, digits);
    BigInt inv;
    mpz_invert(inv.get_mpz_t(), den_unit.get_mpz_t(), modulus.get_mpz_t());
    PadicApprox r(p);
    r.valuation_ = a - b;
    r.digits_ = digits;
    r.unit_ = reduce_mod(num_unit * inv, modulus);
    return r;
}

PadicApprox PadicApprox::from_residue(const BigInt& residue, std::uint64_t p, long absolute_precision) {
    if (absolute_precision < 1) throw InvalidInput("padic: precision must be positive");
    const BigInt r = reduce_mod(residue, mod_pow(p, absolute_precision));
    if (r == 0) return zero_mod(p, absolute_precision);
    BigInt unit;
    const long v = mockpadic::valuation(r, p, &unit);
    PadicApprox x(p);
    x.valuation_ = v;
    x.digits_ = absolute_precision - v;
    x.unit_ = unit;
    return x;
}

std::optional<long> PadicApprox::absolute_precision() const noexcept {
    if (is_zero()) return zero_floor_;
    return *valuation_ + digits_;
}

BigInt PadicApprox::residue(long n) const {
    if (n <= 0) return 0;
    const auto abs = absolute_precision();
    if (abs && n > *abs) {
        throw PrecisionError("padic residue requested beyond known precision", n);
    }
    if (is_zero()) return 0;
    if (*valuation_ < 0) throw InvalidInput("padic residue of a non-integral element");
    if (*valuation_ >= n) return 0;
    return reduce_mod(unit_ * mod_pow(p_, *valuation_), mod_pow(p_, n));
}

PadicApprox PadicApprox::reduced_to(long absolute) const {
    if (is_zero()) {
        return zero_mod(p_, zero_floor_ ? std::min(*zero_floor_, absolute) : absolute);
    }
    if (absolute <= *valuation_) return zero_mod(p_, absolute);
    PadicApprox r = *this;
    r.digits_ = std::min(digits_, absolute - *valuation_);
    r.unit_ = reduce_mod(unit_, mod_pow(p_, r.digits_));
    return r;
}

PadicApprox PadicApprox::operator-() const {
    if (is_zero()) return *this;
    PadicApprox r = *this;
    r.unit_ = reduce_mod(-unit_, mod_pow(p_, digits_));
    return r;
}

PadicApprox operator+(const PadicApprox& a, const PadicApprox& b) {
    if (a.p_ != b.p_) throw DomainMismatch("padic: mismatched primes");
    if (a.is_exact_zero()) return b;
    if (b.is_exact_zero()) return a;
    const long abs = std::min(*a.absolute_precision(), *b.absolute_precision());
    std::optional<long> vmin;
    for (const PadicApprox* x : {&a, &b}) {
        if (!x->is_zero()) vmin = vmin ? std::min(*vmin, *x->valuation_) : *x->valuation_;
    }
    if (!vmin || abs <= *vmin) return PadicApprox::zero_mod(a.p_, abs);
    const BigInt modulus = mod_pow(a.p_, abs - *vmin);
    BigInt sum = 0;
    for (const PadicApprox* x : {&a, &b}) {
        if (!x->is_zero()) sum += x->unit_ * mod_pow(a.p_, *x->valuation_ - *vmin);
    }
    sum = reduce_mod(sum, modulus);
    if (sum == 0) return PadicApprox::zero_mod(a.p_, abs);
    BigInt unit;
    const long extra = valuation(sum, a.p_, &unit);
    PadicApprox r(a.p_);
    r.valuation_ = *vmin + extra;
    r.digits_ = abs - *r.valuation_;
    r.unit_ = unit;
    return r;
}

PadicApprox operator-(const PadicApprox& a, const PadicApprox& b) { return a + (-b); }

PadicApprox operator*(const PadicApprox& a, const PadicApprox& b) {
    if (a.p_ != b.p_) throw DomainMismatch("padic: mismatched primes");
    if (a.is_exact_zero() || b.is_exact_zero()) return PadicApprox::exact_zero(a.p_);
    if (a.is_zero() || b.is_zero()) {
        // |x| <= p^-floor for a zero operand; the other contributes its valuation or floor.
        auto bound = [](const PadicApprox& x) {
            return x.is_zero() ? *x.zero_floor_ : *x.valuation_;
        };
        return PadicApprox::zero_mod(a.p_, bound(a) + bound(b));
    }
    PadicApprox r(a.p_);
    r.valuation_ = *a.valuation_ + *b.valuation_;
    r.digits_ = std::min(a.digits_, b.digits_);
    r.unit_ = reduce_mod(a.unit_ * b.unit_, mod_pow(a.p_, r.digits_));
    return r;
}

bool PadicApprox::agrees_with(const PadicApprox& other) const {
    return (*this - other).is_zero();
}

std::string PadicApprox::to_string() const {
    const std::string p = std::to_string(p_);
    if (is_exact_zero()) return "0";
    if (is_zero()) return "O(" + p + "^" + std::to_string(*zero_floor_) + ")";
    std::string s;
    if (*valuation_ != 0) s += p + "^" + std::to_string(*valuation_) + " * ";
    s += unit_.get_str() + " + O(" + p + "^" + std::to_string(*valuation_ + digits_) + ")";
    return s;
}

PadicApprox padic_from_rational(const BigRational& x, std::uint64_t p, long digits) {
    return PadicApprox::from_rational(x, p, digits);
}

DifferenceValuation padic_valuation_of_difference(const PadicApprox& a, const PadicApprox& b) {
    if (a.prime() != b.prime()) throw DomainMismatch("padic: mismatched primes");
    const PadicApprox d = a - b;
    if (d.is_exact_zero()) return {0, false, true};
    if (d.is_zero()) return {*d.absolute_precision(), true, false};
    return {*d.valuation(), false, false};
}

} // namespace mockpadic
