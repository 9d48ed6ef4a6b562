#include "mockpadic/cohomology.hpp"

#include <algorithm>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>

#include "mockpadic/errors.hpp"

namespace mockpadic {

namespace {

const EtaQuotient& g_eta() {
    static const EtaQuotient e = Catalog::builtin().at("g").eta;
    return e;
}

const EtaQuotient& t_eta() {
    static const EtaQuotient e = Catalog::builtin().at("t").eta;
    return e;
}

BigRational pow_q(long n, int e) {
    BigRational r = 1;
    for (int i = 0; i < e; ++i) r *= n;
    return r;
}

OrderCertificate g_t_certificate(long j) {
    OrderCertificate c = certificate_of(g_eta());
    const OrderCertificate t = certificate_of(t_eta());
    for (long i = 0; i < j; ++i) c = c + t;
    return c;
}

} // namespace

// ---------------------------------------------------------------- certified series

CertifiedSeries CertifiedSeries::from_eta(const EtaQuotient& e, long prec) {
    return {eta_expansion(e, prec), e.weight(), e.level(), certificate_of(e)};
}

CertifiedSeries CertifiedSeries::from_basis(const FormSpaceBasis& basis, std::size_t index) {
    if (index >= basis.basis.size()) throw InvalidInput("from_basis: index out of range");
    return {basis.basis[index], basis.weight, basis.level, basis.certificates[index]};
}

bool CertifiedSeries::finite_orders_at_least(long bound) const {
    for (const auto& c : cusp_classes(level)) {
        if (c.denominator == level) continue;
        const auto it = orders.bound.find(c.denominator);
        if (it == orders.bound.end() || it->second < bound) return false;
    }
    return true;
}

CertifiedSeries derivative_image(const CertifiedSeries& phi, int k) {
    if (phi.weight != 2 - k) throw InvalidInput("derivative_image: input must have weight 2 - k");
    CertifiedSeries out{apply_D(phi.series, k - 1), k, phi.level, phi.orders};
    for (auto& [c, b] : out.orders.bound) {
        if (b >= 0 && b < 1) {
            b = 1;
            out.orders.exact = false;
        }
    }
    return out;
}

// ---------------------------------------------------------------- pairing

PairingValue pairing(const CertifiedSeries& phi, const CertifiedSeries& psi, int k) {
    if (phi.level != psi.level) throw DomainMismatch("pairing: series of different levels");
    if (!phi.finite_orders_at_least(0) || !psi.finite_orders_at_least(0)) {
        throw CertificationError("pairing: both inputs need certified holomorphy at every cusp other than infinity");
    }
    if (!phi.finite_orders_at_least(1) && !psi.finite_orders_at_least(1)) {
        throw CertificationError("pairing: one input must be certified to vanish at every cusp other than infinity");
    }
    const auto& a = phi.series;
    const auto& b = psi.series;
    const long need_a = b.is_zero() ? 0 : 1 - b.valuation();
    const long need_b = a.is_zero() ? 0 : 1 - a.valuation();
    if (a.prec() < need_a || b.prec() < need_b) {
        throw PrecisionError("pairing: truncation hides exponent pairs (n, -n)", std::max(need_a, need_b));
    }
    PairingValue out;
    for (const auto& [n, x] : a.terms()) {
        if (n == 0 || -n >= b.prec()) continue;
        const BigRational y = b.coeff(-n);
        if (y == 0) continue;
        const BigRational c = x * y / pow_q(n, k - 1);
        out.contributions[n] = c;
        out.value += c;
    }
    if (!out.contributions.empty()) out.cusps.push_back(phi.level);
    return out;
}

// ---------------------------------------------------------------- certification

CuspFormCertificate certify_weakly_holomorphic_cusp_form(const std::vector<Constituent>& f, long level) {
    if (f.empty()) throw CertificationError("certify: empty combination");
    CuspFormCertificate out;
    std::optional<OrderCertificate> orders;
    std::optional<LaurentSeries> sum;
    for (const auto& c : f) {
        const LaurentSeries term = c.series.scaled(c.coeff);
        sum = sum ? *sum + term : term;
        if (c.coeff == 0) continue;
        orders = orders ? OrderCertificate::combine(*orders, c.orders) : c.orders;
        out.labels.push_back(c.label);
    }
    out.combination = *sum;
    out.orders = orders.value_or(OrderCertificate{});
    for (const auto& cusp : cusp_classes(level)) {
        if (cusp.denominator == level) continue;
        const auto it = out.orders.bound.find(cusp.denominator);
        if (it == out.orders.bound.end()) {
            throw CertificationError("certify: no order bound at cusps with denominator " +
                                     std::to_string(cusp.denominator));
        }
        if (it->second < 1) {
            throw CertificationError("certify: order bound " + to_string(it->second) + " at cusps with denominator " +
                                     std::to_string(cusp.denominator) +
                                     " does not force a vanishing constant term there");
        }
    }
    if (out.combination.prec() <= 0) throw PrecisionError("certify: constant term at infinity not known", 1);
    const BigRational c0 = out.combination.coeff(0);
    if (c0 != 0) throw CertificationError("certify: constant term at infinity is " + to_string(c0));
    out.pole_order = out.combination.is_zero() ? 0 : std::max(0L, -out.combination.valuation());
    return out;
}

// ---------------------------------------------------------------- representatives

std::vector<LaurentSeries> g_t_products(long max_power, long prec) {
    if (max_power < 0) throw InvalidInput("g_t_products: negative power");
    const LaurentSeries g = eta_expansion(g_eta(), prec + max_power);
    const LaurentSeries t = eta_expansion(t_eta(), prec + max_power);
    std::vector<LaurentSeries> out{g.truncated(prec)};
    LaurentSeries cur = g;
    for (long j = 1; j <= max_power; ++j) {
        cur = cur * t;
        out.push_back(cur.truncated(prec));
    }
    return out;
}

LaurentSeries CuspFormClass::expand(long prec) const {
    const auto products = g_t_products(static_cast<long>(g_t_coefficients.size()) - 1, prec);
    LaurentSeries out(prec);
    for (std::size_t j = 0; j < products.size(); ++j) {
        if (g_t_coefficients[j] != 0) out = out + products[j].scaled(g_t_coefficients[j]);
    }
    return out;
}

CuspFormClass construct_representative(long m, long prec) {
    if (m < 1) {
        throw InvalidInput("construct_representative: pole order must be at least 1 "
                           "(cusp forms pair to zero with g)");
    }
    const FormSpaceBasis basis = build_basis(9, 4, m, 1);
    const LaurentSeries g = eta_expansion(g_eta(), basis.prec);

    std::vector<long> exps;
    for (long e = -m; e <= 0; ++e) {
        if (basis.index_of_leading(e)) exps.push_back(e);
    }
    if (!basis.index_of_leading(-m)) {
        throw Obstruction("no weight-4 form with pole order exactly " + std::to_string(m) + " at infinity", m + 1);
    }
    const std::size_t nv = exps.size();
    auto elem = [&](std::size_t v) -> const LaurentSeries& { return basis.basis[*basis.index_of_leading(exps[v])]; };

    std::vector<std::vector<BigRational>> rows;
    auto coeff_row = [&](long n, const BigRational& rhs) {
        std::vector<BigRational> r(nv + 1, 0);
        for (std::size_t v = 0; v < nv; ++v) r[v] = elem(v).coeff(n);
        r[nv] = rhs;
        rows.push_back(std::move(r));
    };
    coeff_row(0, 0);
    {
        std::vector<BigRational> r(nv + 1, 0);
        for (std::size_t v = 0; v < nv; ++v) {
            for (const auto& [n, x] : elem(v).terms()) {
                if (n >= 0) break;
                r[v] += x * g.coeff(-n) / pow_q(n, 3);
            }
        }
        r[nv] = 1;
        rows.push_back(std::move(r));
    }
    if (m >= 2) {
        coeff_row(-m, 1);
        for (long j = 2; j < m; ++j) coeff_row(-j, 0);
    }

    const RrefResult rr = rref(rows);
    std::vector<BigRational> x(nv, 0);
    for (std::size_t i = 0; i < rr.rank; ++i) {
        if (rr.pivots[i] == nv) {
            throw Obstruction("normalization constraints are inconsistent at pole order " + std::to_string(m), m + 1);
        }
        x[rr.pivots[i]] = rr.reduced[i][nv];
    }

    CuspFormClass out;
    out.pole_order = m;
    LaurentSeries phi(basis.prec);
    for (std::size_t v = 0; v < nv; ++v) {
        if (x[v] != 0) phi = phi + elem(v).scaled(x[v]);
        out.basis_coefficients[exps[v]] = x[v];
    }
    if (phi.is_zero() || phi.valuation() != -m) {
        throw Obstruction("normalized combination does not reach pole order " + std::to_string(m), m + 1);
    }

    // Rewrite in the triangular spanning set g t^j ~ q^{1-j}.
    const auto products = g_t_products(m + 1, basis.prec);
    out.g_t_coefficients.assign(static_cast<std::size_t>(m + 2), 0);
    LaurentSeries rest = phi;
    for (long n = -m; n <= 1; ++n) {
        const BigRational c = rest.coeff(n);
        if (c == 0) continue;
        const auto j = static_cast<std::size_t>(1 - n);
        out.g_t_coefficients[j] = c;
        rest = rest - products[j].scaled(c);
    }
    if (!rest.is_zero()) throw HardFailure("representative is not in the span of g t^j");

    std::vector<Constituent> parts;
    for (std::size_t j = 0; j < products.size(); ++j) {
        parts.push_back({"g*t^" + std::to_string(j), out.g_t_coefficients[j], products[j],
                         g_t_certificate(static_cast<long>(j))});
    }
    const auto cert = certify_weakly_holomorphic_cusp_form(parts);
    out.orders = cert.orders;

    const long final_prec = prec == 0 ? basis.prec : prec;
    out.phi = final_prec == basis.prec ? phi : out.expand(final_prec);
    if (!out.phi.agrees_with(phi)) throw HardFailure("re-expanded representative disagrees with the basis combination");

    const CertifiedSeries cphi{out.phi, 4, 9, out.orders};
    const auto pv = pairing(cphi, CertifiedSeries::from_eta(g_eta(), std::max(final_prec, m + 2)), 4);
    out.pairing_with_g = pv.value;
    out.normalization = pv.contributions;
    if (out.pairing_with_g != 1) throw HardFailure("representative does not pair to 1 with g");
    return out;
}

// ---------------------------------------------------------------- reduction

Reduction reduce_canonical(const LaurentSeries& f, const FormSpaceBasis& basis_2mk, int k) {
    if (basis_2mk.weight != 2 - k) throw InvalidInput("reduce_canonical: basis must have weight 2 - k");
    Reduction out;
    LaurentSeries cur = f.truncated(basis_2mk.prec);
    while (!cur.is_zero() && cur.valuation() < -1) {
        const long n = cur.valuation();
        if (-n > basis_2mk.pole_bound) {
            throw PrecisionError("reduce_canonical: weight " + std::to_string(2 - k) + " basis too shallow", -n);
        }
        const auto idx = basis_2mk.index_of_leading(n);
        if (!idx) throw Obstruction("reduce_canonical: no weight 2-k form with leading exponent " + std::to_string(n), n);
        const BigRational factor = cur.coeff(n) / pow_q(n, k - 1);
        cur = cur - apply_D(basis_2mk.basis[*idx], k - 1).scaled(factor);
        out.removed[n] += factor;
    }
    out.result = cur;
    return out;
}

long hecke_required_prec(long l) { return l * kHeckeMinPrec; }

HeckeWitness hecke_class_check(const CuspFormClass& phi, long l, const OperatorContext& ctx,
                               const FormSpaceBasis& basis_2mk) {
    HeckeWitness w;
    w.l = l;
    if (phi.phi.prec() < hecke_required_prec(l)) {
        throw PrecisionError("hecke_class_check: representative known to too few terms", hecke_required_prec(l));
    }
    const long depth = l * phi.pole_order;
    if (basis_2mk.pole_bound < depth) {
        throw PrecisionError("hecke_class_check: weight 2-k basis depth must cover pole order " + std::to_string(depth),
                             depth);
    }
    const LaurentSeries g = eta_expansion(g_eta(), std::max(l + 1, phi.phi.prec()));
    w.a_g_l = g.coeff(l);
    const LaurentSeries diff = hecke_Tl(phi.phi, l, ctx) - phi.phi.scaled(w.a_g_l);
    w.reduction = reduce_canonical(diff, basis_2mk, phi.weight);
    const LaurentSeries& r = w.reduction.result;
    if (r.prec() < kHeckeMinPrec) throw PrecisionError("hecke_class_check: reduced series too short", kHeckeMinPrec);
    if (r.coeff(-1) != 0) {
        w.detail = "reduced difference keeps q^-1 coefficient " + to_string(r.coeff(-1));
        return w;
    }
    if (r.coeff(0) != 0) {
        w.detail = "reduced difference has constant term " + to_string(r.coeff(0));
        return w;
    }
    w.g_multiple = r.coeff(1);
    const LaurentSeries rest = r - g.truncated(r.prec()).scaled(w.g_multiple);
    if (!rest.is_zero()) {
        w.detail = "reduced difference is not a multiple of g (first mismatch at q^" + std::to_string(rest.valuation()) +
                   ")";
        return w;
    }
    w.passed = true;
    w.detail = "reduces to " + to_string(w.g_multiple) + " * g";
    return w;
}

// ---------------------------------------------------------------- text format

namespace {

std::string join_map(const std::map<long, BigRational>& m) {
    std::string out;
    for (const auto& [k, v] : m) {
        if (!out.empty()) out += ' ';
        out += std::to_string(k) + ":" + to_string(v);
    }
    return out;
}

std::map<long, BigRational> split_map(const std::string& text) {
    std::map<long, BigRational> m;
    std::istringstream ss(text);
    std::string tok;
    while (ss >> tok) {
        const auto colon = tok.find(':');
        if (colon == std::string::npos) throw InvalidInput("representative: expected n:value, found '" + tok + "'");
        try {
            m[std::stol(tok.substr(0, colon))] = parse_rational(tok.substr(colon + 1));
        } catch (const std::logic_error&) {
            throw InvalidInput("representative: malformed entry '" + tok + "'");
        }
    }
    return m;
}

long to_long(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const long v = std::stol(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::logic_error&) {
        throw InvalidInput("representative: " + key + " is not an integer: '" + value + "'");
    }
}

} // namespace

void write_representative(std::ostream& out, const CuspFormClass& phi) {
    out << "# representative " << phi.id() << "\n";
    out << "level=" << phi.level << "\n";
    out << "weight=" << phi.weight << "\n";
    out << "pole_order=" << phi.pole_order << "\n";
    out << "pairing_with_g=" << to_string(phi.pairing_with_g) << "\n";
    out << "g_t=";
    for (std::size_t j = 0; j < phi.g_t_coefficients.size(); ++j) {
        out << (j ? " " : "") << to_string(phi.g_t_coefficients[j]);
    }
    out << "\n";
    out << "basis=" << join_map(phi.basis_coefficients) << "\n";
    out << "normalization=" << join_map(phi.normalization) << "\n";
    out << "orders=" << join_map(phi.orders.bound) << "\n";
    out << "orders_exact=" << (phi.orders.exact ? 1 : 0) << "\n";
    out << "series\n";
    write_series(out, phi.phi);
}

CuspFormClass read_representative(std::istream& in) {
    CuspFormClass phi;
    std::string line;
    bool have_series = false, have_pole = false, have_gt = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (line == "series") {
            have_series = true;
            break;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw InvalidInput("representative: malformed line '" + line + "'");
        const std::string key = line.substr(0, eq);
        const std::string value = line.substr(eq + 1);
        if (key == "level") {
            phi.level = to_long(key, value);
        } else if (key == "weight") {
            phi.weight = static_cast<int>(to_long(key, value));
        } else if (key == "pole_order") {
            phi.pole_order = to_long(key, value);
            have_pole = true;
        } else if (key == "pairing_with_g") {
            phi.pairing_with_g = parse_rational(value);
        } else if (key == "g_t") {
            std::istringstream ss(value);
            std::string tok;
            while (ss >> tok) phi.g_t_coefficients.push_back(parse_rational(tok));
            have_gt = true;
        } else if (key == "basis") {
            phi.basis_coefficients = split_map(value);
        } else if (key == "normalization") {
            phi.normalization = split_map(value);
        } else if (key == "orders") {
            phi.orders.bound = split_map(value);
        } else if (key == "orders_exact") {
            phi.orders.exact = to_long(key, value) != 0;
        } else {
            throw InvalidInput("representative: unknown key '" + key + "'");
        }
    }
    if (!have_series || !have_pole || !have_gt) throw InvalidInput("representative: incomplete record");
    phi.phi = read_rational_series(in);
    return phi;
}

} // namespace mockpadic
