#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include "mockpadic/errors.hpp"
#include "mockpadic/etaforms.hpp"

namespace mockpadic {

namespace {

long euler_phi(long n) {
    long result = n;
    for (long p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            while (n % p == 0) n /= p;
            result -= result / p;
        }
    }
    if (n > 1) result -= result / n;
    return result;
}

std::vector<long> prime_divisors(long n) {
    std::vector<long> ps;
    for (long p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            ps.push_back(p);
            while (n % p == 0) n /= p;
        }
    }
    if (n > 1) ps.push_back(n);
    return ps;
}

// Kronecker symbol (D/p) for D in {-3, -4} and prime p.
int kronecker_small(long D, long p) {
    if (D == -4) {
        if (p == 2) return 0;
        return p % 4 == 1 ? 1 : -1;
    }
    if (p == 3) return 0;
    if (p == 2) return -1; // (-3/2) = -1
    return p % 3 == 1 ? 1 : -1;
}

bool is_square(const BigInt& x) { return x >= 0 && mpz_perfect_square_p(x.get_mpz_t()) != 0; }

} // namespace

// ---------------------------------------------------------------- cusps

std::vector<long> divisors(long n) {
    if (n < 1) throw InvalidInput("divisors: n must be positive");
    std::vector<long> ds;
    for (long d = 1; d * d <= n; ++d) {
        if (n % d == 0) {
            ds.push_back(d);
            if (d * d != n) ds.push_back(n / d);
        }
    }
    std::sort(ds.begin(), ds.end());
    return ds;
}

std::vector<CuspClass> cusp_classes(long level) {
    std::vector<CuspClass> out;
    for (long c : divisors(level)) {
        const long g = std::gcd(c, level / c);
        out.push_back({c, euler_phi(g), level / std::gcd(c * c, level)});
    }
    return out;
}

long gamma0_index(long level) {
    long index = level;
    for (long p : prime_divisors(level)) index = index / p * (p + 1);
    return index;
}

long gamma0_elliptic2(long level) {
    if (level % 4 == 0) return 0;
    long n = 1;
    for (long p : prime_divisors(level)) n *= 1 + kronecker_small(-4, p);
    return n;
}

long gamma0_elliptic3(long level) {
    if (level % 9 == 0) return 0;
    long n = 1;
    for (long p : prime_divisors(level)) n *= 1 + kronecker_small(-3, p);
    return n;
}

long gamma0_genus(long level) {
    long cusps = 0;
    for (const auto& c : cusp_classes(level)) cusps += c.count;
    // g = 1 + mu/12 - nu2/4 - nu3/3 - nu_inf/2, computed over 12.
    const long twelve_g = 12 + gamma0_index(level) - 3 * gamma0_elliptic2(level) - 4 * gamma0_elliptic3(level) - 6 * cusps;
    return twelve_g / 12;
}

// ---------------------------------------------------------------- eta quotients

EtaQuotient::EtaQuotient(long level, std::map<long, int> exponents) : level_(level) {
    if (level < 1) throw InvalidInput("eta quotient: level must be positive");
    for (const auto& [d, r] : exponents) {
        if (d < 1 || level % d != 0) {
            throw InvalidInput("eta quotient: " + std::to_string(d) + " does not divide level " + std::to_string(level));
        }
        if (r != 0) r_[d] = r;
    }
}

EtaQuotient EtaQuotient::parse(long level, const std::vector<std::string>& tokens) {
    std::map<long, int> r;
    for (const auto& tok : tokens) {
        const auto colon = tok.find(':');
        if (colon == std::string::npos) throw InvalidInput("eta quotient: malformed token '" + tok + "' (want d:r)");
        try {
            std::size_t used_d = 0, used_r = 0;
            const long d = std::stol(tok.substr(0, colon), &used_d);
            const int e = std::stoi(tok.substr(colon + 1), &used_r);
            if (used_d != colon || used_r != tok.size() - colon - 1) throw std::invalid_argument("trailing");
            r[d] += e;
        } catch (const std::logic_error&) {
            throw InvalidInput("eta quotient: malformed token '" + tok + "' (want d:r)");
        }
    }
    return EtaQuotient(level, std::move(r));
}

int EtaQuotient::exponent(long d) const {
    const auto it = r_.find(d);
    return it == r_.end() ? 0 : it->second;
}

long EtaQuotient::exponent_sum() const {
    long s = 0;
    for (const auto& [d, r] : r_) s += r;
    return s;
}

int EtaQuotient::weight() const {
    const long s = exponent_sum();
    if (s % 2 != 0) throw InvalidInput("eta quotient " + to_string() + " has half-integral weight");
    return static_cast<int>(s / 2);
}

BigRational EtaQuotient::order_at_infinity() const {
    long s = 0;
    for (const auto& [d, r] : r_) s += d * r;
    return rational_from_parts(s, 24);
}

BigRational EtaQuotient::cusp_order(long c) const {
    if (c < 1 || level_ % c != 0) throw InvalidInput("cusp_order: denominator must divide the level");
    BigRational sum = 0;
    for (const auto& [d, r] : r_) {
        const long g = std::gcd(d, c);
        sum += rational_from_parts(g * g * r, d);
    }
    const long denom = 24 * std::gcd(c, level_ / c) * c;
    return sum * rational_from_parts(level_, denom);
}

bool EtaQuotient::ligozat_conditions() const {
    long a = 0, b = 0;
    for (const auto& [d, r] : r_) {
        a += d * r;
        b += (level_ / d) * r;
    }
    return a % 24 == 0 && b % 24 == 0 && exponent_sum() % 2 == 0;
}

bool EtaQuotient::trivial_character() const {
    if (exponent_sum() % 2 != 0) return false;
    BigInt num = 1, den = 1;
    for (const auto& [d, r] : r_) {
        const BigInt dd(d);
        for (int i = 0; i < std::abs(r); ++i) (r > 0 ? num : den) *= dd;
    }
    if (weight() % 2 != 0) return false; // (-1)^w s < 0 cannot be a square
    return is_square(num) && is_square(den);
}

EtaQuotient EtaQuotient::operator*(const EtaQuotient& o) const {
    if (o.level_ != level_) throw DomainMismatch("eta quotients of different levels");
    std::map<long, int> r = r_;
    for (const auto& [d, e] : o.r_) r[d] += e;
    return EtaQuotient(level_, std::move(r));
}

EtaQuotient EtaQuotient::pow(int e) const {
    std::map<long, int> r;
    for (const auto& [d, x] : r_) r[d] = x * e;
    return EtaQuotient(level_, std::move(r));
}

std::string EtaQuotient::to_string() const {
    if (r_.empty()) return "1";
    std::string s;
    for (const auto& [d, r] : r_) {
        if (!s.empty()) s += " * ";
        s += "eta(" + (d == 1 ? std::string() : std::to_string(d)) + "t)";
        if (r != 1) s += "^" + (r < 0 ? "(" + std::to_string(r) + ")" : std::to_string(r));
    }
    return s;
}

std::string EtaQuotient::to_tokens() const {
    std::string s;
    for (const auto& [d, r] : r_) {
        if (!s.empty()) s += " ";
        s += std::to_string(d) + ":" + std::to_string(r);
    }
    return s;
}

BigRational valence_sum(const EtaQuotient& e) {
    BigRational total = 0;
    for (const auto& c : cusp_classes(e.level())) total += BigRational(c.count) * e.cusp_order(c.denominator);
    return total;
}

// ---------------------------------------------------------------- catalog

Catalog Catalog::builtin() {
    Catalog c;
    c.add({"g", EtaQuotient(9, {{3, 8}})});
    c.add({"t", EtaQuotient(9, {{1, 3}, {9, -3}})});
    c.add({"phi0", EtaQuotient(9, {{3, 2}, {9, -6}})});
    return c;
}

Catalog Catalog::read(std::istream& in) {
    Catalog c;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string name, level_text;
        if (!(ls >> name)) continue;
        if (!(ls >> level_text)) throw InvalidInput("catalog line " + std::to_string(lineno) + ": missing level");
        long level = 0;
        try {
            level = std::stol(level_text);
        } catch (const std::logic_error&) {
            throw InvalidInput("catalog line " + std::to_string(lineno) + ": bad level '" + level_text + "'");
        }
        std::vector<std::string> tokens;
        for (std::string tok; ls >> tok;) tokens.push_back(tok);
        c.add({name, EtaQuotient::parse(level, tokens)});
    }
    return c;
}

Catalog Catalog::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open catalog file " + path);
    return read(in);
}

void Catalog::add(CatalogEntry entry) {
    if (find(entry.name)) throw InvalidInput("catalog: duplicate name " + entry.name);
    entries_.push_back(std::move(entry));
}

const CatalogEntry* Catalog::find(const std::string& name) const {
    for (const auto& e : entries_) {
        if (e.name == name) return &e;
    }
    return nullptr;
}

const CatalogEntry& Catalog::at(const std::string& name) const {
    if (const auto* e = find(name)) return *e;
    std::string list;
    for (const auto& n : names()) list += (list.empty() ? "" : ", ") + n;
    throw InvalidInput("unknown form '" + name + "'; catalog: " + list);
}

std::vector<std::string> Catalog::names() const {
    std::vector<std::string> out;
    for (const auto& e : entries_) out.push_back(e.name);
    return out;
}

// ---------------------------------------------------------------- search

std::vector<EtaQuotient> search_eta_quotients(long level, int weight, const std::map<long, BigRational>& lower_bounds,
                                              int box) {
    if (box < 0) throw InvalidInput("search: box must be non-negative");
    std::vector<EtaQuotient> out;
    if (box == 0) return out;
    for (const auto& [c, b] : lower_bounds) {
        if (c < 1 || level % c != 0) throw InvalidInput("search: cusp denominator must divide the level");
    }
    const std::vector<long> ds = divisors(level);
    std::vector<int> r(ds.size(), 0);
    const long target = 2L * weight;

    std::function<void(std::size_t, long)> rec = [&](std::size_t i, long partial) {
        if (i + 1 == ds.size()) {
            const long last = target - partial;
            if (last < -box || last > box) return;
            r[i] = static_cast<int>(last);
            std::map<long, int> ex;
            for (std::size_t k = 0; k < ds.size(); ++k) ex[ds[k]] = r[k];
            EtaQuotient e(level, std::move(ex));
            if (!e.ligozat_conditions() || !e.trivial_character()) return;
            for (const auto& [c, b] : lower_bounds) {
                if (e.cusp_order(c) < b) return;
            }
            out.push_back(std::move(e));
            return;
        }
        for (int x = -box; x <= box; ++x) {
            r[i] = x;
            rec(i + 1, partial + x);
        }
    };
    rec(0, 0);
    return out;
}

} // namespace mockpadic
