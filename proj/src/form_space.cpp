#include <algorithm>

#include "mockpadic/errors.hpp"
#include "mockpadic/etaforms.hpp"

namespace mockpadic {

OrderCertificate OrderCertificate::operator+(const OrderCertificate& o) const {
    OrderCertificate out;
    for (const auto& [c, b] : bound) {
        const auto it = o.bound.find(c);
        if (it != o.bound.end()) out.bound[c] = b + it->second;
    }
    out.exact = exact && o.exact;
    return out;
}

OrderCertificate OrderCertificate::combine(const OrderCertificate& a, const OrderCertificate& b) {
    OrderCertificate out;
    for (const auto& [c, x] : a.bound) {
        const auto it = b.bound.find(c);
        if (it != b.bound.end()) out.bound[c] = std::min(x, it->second);
    }
    out.exact = false;
    return out;
}

OrderCertificate certificate_of(const EtaQuotient& e) {
    OrderCertificate cert;
    for (const auto& c : cusp_classes(e.level())) {
        if (c.denominator != e.level()) cert.bound[c.denominator] = e.cusp_order(c.denominator);
    }
    cert.exact = true;
    return cert;
}

Generator generator_from_eta(const std::string& name, const EtaQuotient& e) {
    if (!e.is_valid()) throw InvalidInput("generator " + name + ": " + e.to_string() + " is not a form on Gamma_0(N)");
    return {name, e.weight(), certificate_of(e), [e](long prec) { return eta_expansion(e, prec); }};
}

std::vector<Generator> eisenstein_generators() {
    std::vector<Generator> out;
    for (const auto& name : eisenstein_names()) {
        OrderCertificate cert;
        for (const auto& c : cusp_classes(9)) {
            if (c.denominator != 9) cert.bound[c.denominator] = 0;
        }
        out.push_back({name, 2, cert, [name](long prec) { return eisenstein_expansion(name, prec); }});
    }
    return out;
}

std::vector<long> FormSpaceBasis::leading_exponents() const {
    std::vector<long> out;
    for (const auto& b : basis) out.push_back(b.valuation());
    return out;
}

std::optional<std::size_t> FormSpaceBasis::index_of_leading(long exponent) const {
    for (std::size_t i = 0; i < basis.size(); ++i) {
        if (basis[i].valuation() == exponent) return i;
    }
    return std::nullopt;
}

std::optional<long> expected_dimension(long level, int weight, long pole_bound, long finite_bound) {
    if (gamma0_genus(level) != 0 || gamma0_elliptic2(level) != 0 || gamma0_elliptic3(level) != 0) return std::nullopt;
    const long degree_12 = static_cast<long>(weight) * gamma0_index(level);
    if (degree_12 % 12 != 0) return std::nullopt;
    long finite = 0;
    for (const auto& c : cusp_classes(level)) {
        if (c.denominator != level) finite += c.count;
    }
    return std::max(0L, degree_12 / 12 + pole_bound - finite * finite_bound + 1);
}

long default_basis_prec(long pole_bound) { return pole_bound + 4 * pole_bound + 40; }

namespace {

bool meets_bound(const OrderCertificate& cert, long level, long b) {
    for (const auto& c : cusp_classes(level)) {
        if (c.denominator == level) continue;
        const auto it = cert.bound.find(c.denominator);
        if (it == cert.bound.end() || it->second < b) return false;
    }
    return true;
}

} // namespace

FormSpaceBasis build_basis(const BasisRequest& req, const std::vector<Generator>& generators,
                           const Generator& hauptmodul) {
    if (req.pole_bound < 0) throw InvalidInput("build_basis: pole bound must be non-negative");
    const long required = default_basis_prec(req.pole_bound);
    const long prec = req.prec == 0 ? required : req.prec;
    if (prec < required) {
        throw PrecisionError("build_basis: prec " + std::to_string(prec) + " below the minimum for pole order " +
                                 std::to_string(req.pole_bound),
                             required);
    }
    if (hauptmodul.weight != 0 || !meets_bound(hauptmodul.orders, req.level, 0)) {
        throw InvalidInput("build_basis: hauptmodul must have weight 0 and no poles at finite cusps");
    }

    FormSpaceBasis out;
    out.level = req.level;
    out.weight = req.weight;
    out.pole_bound = req.pole_bound;
    out.finite_bound = req.finite_bound;
    out.prec = prec;
    out.expected_dimension = expected_dimension(req.level, req.weight, req.pole_bound, req.finite_bound);

    struct Chosen {
        std::size_t index;
        long max_power;
    };
    std::vector<Chosen> chosen;
    long max_power = 0, deepest = 0;
    for (std::size_t i = 0; i < generators.size(); ++i) {
        const auto& g = generators[i];
        if (g.weight != req.weight || !meets_bound(g.orders, req.level, req.finite_bound)) continue;
        const LaurentSeries head = g.expand(prec);
        if (head.is_zero()) continue;
        const long probe = head.valuation();
        const long j = probe + req.pole_bound;
        if (j < 0) continue;
        chosen.push_back({i, j});
        max_power = std::max(max_power, j);
        deepest = std::max(deepest, -probe);
    }

    // Precision bookkeeping: t^j has valuation -j, G t^j keeps prec when G is
    // known to prec + j and t to prec + j + 1 + max(0, -v(G)).
    const LaurentSeries t = hauptmodul.expand(prec + max_power + 2 + deepest);
    if (t.valuation() != -1) throw InvalidInput("build_basis: hauptmodul must have a simple pole at infinity");
    std::vector<LaurentSeries> tpow{LaurentSeries::monomial(0, 1, t.prec() + 1)};
    for (long j = 1; j <= max_power; ++j) tpow.push_back(tpow.back() * t);

    for (auto& c : chosen) {
        const auto& g = generators[c.index];
        const LaurentSeries gs = g.expand(prec + c.max_power + 1);
        for (long j = 0; j <= c.max_power; ++j) {
            LaurentSeries s = gs * tpow[static_cast<std::size_t>(j)];
            if (s.prec() < prec) throw PrecisionError("build_basis: internal precision loss", prec);
            out.product_series.push_back(s.truncated(prec));
            OrderCertificate cert = g.orders;
            for (long k = 0; k < j; ++k) cert = cert + hauptmodul.orders;
            out.products.push_back({j == 0 ? g.name : g.name + "*t^" + std::to_string(j), c.index,
                                    static_cast<int>(j), cert});
        }
    }

    const long lo = -req.pole_bound;
    std::vector<std::vector<BigRational>> m;
    for (const auto& s : out.product_series) {
        std::vector<BigRational> row(static_cast<std::size_t>(prec - lo), 0);
        for (const auto& [n, a] : s.terms()) {
            if (n < lo) throw InvalidInput("build_basis: spanning product has a pole beyond the bound");
            row[static_cast<std::size_t>(n - lo)] = a;
        }
        m.push_back(std::move(row));
    }
    const RrefResult r = rref(m);
    for (std::size_t i = 0; i < r.rank; ++i) {
        std::map<long, BigRational> coeffs;
        for (std::size_t k = 0; k < r.reduced[i].size(); ++k) {
            if (r.reduced[i][k] != 0) coeffs[lo + static_cast<long>(k)] = r.reduced[i][k];
        }
        out.basis.emplace_back(std::move(coeffs), prec);
        out.provenance.push_back(r.transform[i]);
        std::optional<OrderCertificate> cert;
        for (std::size_t k = 0; k < out.products.size(); ++k) {
            if (r.transform[i][k] == 0) continue;
            cert = cert ? OrderCertificate::combine(*cert, out.products[k].orders) : out.products[k].orders;
        }
        out.certificates.push_back(cert.value_or(OrderCertificate{}));
    }
    return out;
}

Generator default_hauptmodul() { return generator_from_eta("t", Catalog::builtin().at("t").eta); }

std::vector<Generator> default_generators() {
    std::vector<Generator> out;
    std::vector<EtaQuotient> seen;
    const Catalog cat = Catalog::builtin();
    for (const char* name : {"g", "phi0"}) {
        out.push_back(generator_from_eta(name, cat.at(name).eta));
        seen.push_back(cat.at(name).eta);
    }
    for (auto& e : eisenstein_generators()) out.push_back(std::move(e));
    const std::map<long, BigRational> holomorphic{{1, 0}, {3, 0}};
    for (int w : {4, 2, -2}) {
        for (const auto& e : search_eta_quotients(9, w, holomorphic, 12)) {
            if (std::find(seen.begin(), seen.end(), e) != seen.end()) continue;
            seen.push_back(e);
            out.push_back(generator_from_eta("eta[" + e.to_tokens() + "]", e));
        }
    }
    return out;
}

FormSpaceBasis build_basis(long level, int weight, long pole_bound, long finite_bound, long prec) {
    if (level != 9) throw InvalidInput("build_basis: default generators exist only for level 9");
    return build_basis({level, weight, pole_bound, finite_bound, prec}, default_generators(), default_hauptmodul());
}

} // namespace mockpadic
