#include "emit.hpp"

#include <sstream>

namespace mockpadic::cli {

namespace {

Json rational_map(const std::map<long, BigRational>& m) {
    Json j = Json::object();
    for (const auto& [k, v] : m) j[std::to_string(k)] = to_string(v);
    return j;
}

Json optional_rational(const std::optional<BigRational>& x) { return x ? Json(to_string(*x)) : Json(nullptr); }

} // namespace

Json padic_json(const PadicApprox& x) {
    Json j;
    j["valuation"] = x.valuation() ? Json(*x.valuation()) : Json(nullptr);
    j["unit"] = to_string(x.unit());
    j["digits"] = x.digits();
    const auto abs = x.absolute_precision();
    j["absolute_precision"] = abs ? Json(*abs) : Json(nullptr);
    j["text"] = x.to_string();
    return j;
}

Json valuation_json(const DifferenceValuation& d) {
    Json j;
    j["value"] = d.infinite ? Json(nullptr) : Json(d.value);
    j["at_least"] = d.at_least;
    j["infinite"] = d.infinite;
    j["text"] = to_string(d);
    return j;
}

Json series_json(const LaurentSeries& s) {
    Json j;
    j["domain"] = "rational";
    j["n0"] = s.valuation();
    j["prec"] = s.prec();
    Json terms = Json::array();
    for (const auto& [n, c] : s.terms()) terms.push_back(Json::array({n, to_string(c)}));
    j["terms"] = std::move(terms);
    return j;
}

Json certificate_json(const OrderCertificate& c) {
    Json j;
    j["lower_bounds"] = rational_map(c.bound);
    j["exact"] = c.exact;
    return j;
}

Json representative_json(const CuspFormClass& phi) {
    Json j;
    j["id"] = phi.id();
    j["level"] = phi.level;
    j["weight"] = phi.weight;
    j["pole_order"] = phi.pole_order;
    j["pairing_with_g"] = to_string(phi.pairing_with_g);
    Json gt = Json::array();
    for (const auto& c : phi.g_t_coefficients) gt.push_back(to_string(c));
    j["g_t_coefficients"] = std::move(gt);
    j["basis_coefficients"] = rational_map(phi.basis_coefficients);
    j["normalization"] = rational_map(phi.normalization);
    j["orders"] = certificate_json(phi.orders);
    j["series"] = series_json(phi.phi);
    return j;
}

Json report_json(const DeltaReport& r) {
    Json j;
    j["representative"] = r.representative;
    j["pole_order"] = r.pole_order;
    Json apps = Json::array();
    for (const auto& a : r.approximants) {
        Json x;
        x["m"] = a.m;
        x["exponent"] = a.exponent;
        x["coefficient_exact"] = optional_rational(a.coefficient_exact);
        x["r_exact"] = optional_rational(a.value_exact);
        x["coefficient"] = padic_json(a.coefficient);
        x["image"] = padic_json(a.image);
        apps.push_back(std::move(x));
    }
    j["approximants"] = std::move(apps);
    Json diffs = Json::array();
    for (std::size_t i = 0; i < r.differences.size(); ++i) {
        Json d = valuation_json(r.differences[i]);
        d["m"] = static_cast<long>(i);
        diffs.push_back(std::move(d));
    }
    j["differences"] = std::move(diffs);
    j["increasing"] = r.increasing;
    j["certified_digits"] = r.certified_digits;
    j["outcome"] = r.outcome;
    j["delta_nonzero"] = r.verdict_nonzero;
    j["delta"] = padic_json(r.delta);
    j["delta_valuation"] = r.delta_valuation ? Json(*r.delta_valuation) : Json(nullptr);
    j["v_g_coordinate"] = {{"limit_formula_sign", padic_json(r.delta_limit_sign)},
                           {"opposite_sign", padic_json(r.delta_opposite_sign)}};
    j["alpha_slot"] = {{"value", padic_json(r.alpha_slot)}, {"disclaimer", r.alpha_disclaimer}};
    Json even = Json::array();
    for (const auto& e : r.even_powers.entries) even.push_back(valuation_json(e));
    j["even_powers"] = {{"entries", std::move(even)}, {"contract_holds", r.even_powers.contract_holds}};
    return j;
}

Json suite_json(const SuiteResult& s) {
    Json j;
    j["suite"] = s.name;
    j["passed"] = s.passed;
    j["checks"] = s.checks;
    j["failures"] = s.failures;
    j["notes"] = s.notes;
    j["seconds"] = s.seconds;
    return j;
}

Json config_json(const RunConfig& cfg) {
    Json j;
    j["level"] = cfg.level;
    j["weight"] = cfg.weight;
    j["primes"] = cfg.primes;
    Json mm = Json::object();
    for (long p : cfg.primes) mm[std::to_string(p)] = cfg.depth_for(p);
    j["m_max"] = std::move(mm);
    j["M"] = cfg.M;
    j["poles"] = cfg.poles;
    j["prec"] = cfg.prec;
    j["route"] = to_string(cfg.route);
    j["guard"] = cfg.guard < 0 ? Json("default") : Json(cfg.guard);
    j["hecke_primes"] = cfg.hecke_primes;
    j["format"] = to_string(cfg.format);
    return j;
}

std::string approximant_csv_header() {
    return "p,representative,m,exponent,r_exact,valuation,unit,digits,absolute_precision,diff_valuation\n";
}

std::string approximant_csv_rows(const DeltaReport& r) {
    std::ostringstream out;
    for (const auto& a : r.approximants) {
        const auto abs = a.image.absolute_precision();
        out << r.p << "," << r.representative << "," << a.m << "," << a.exponent << ","
            << (a.value_exact ? to_string(*a.value_exact) : "") << ","
            << (a.image.valuation() ? std::to_string(*a.image.valuation()) : "inf") << "," << to_string(a.image.unit())
            << "," << a.image.digits() << "," << (abs ? std::to_string(*abs) : "exact") << ",";
        if (a.m > 0) out << to_string(r.differences[static_cast<std::size_t>(a.m - 1)]);
        out << "\n";
    }
    return out.str();
}

std::string report_text(const DeltaReport& r) {
    std::ostringstream out;
    out << r.representative << " at p = " << r.p << " (route " << to_string(r.route) << ", m_max " << r.m_max
        << ", M " << r.M << ", guard " << r.guard << ")\n";
    for (const auto& a : r.approximants) {
        out << "  r_" << a.m << " = a(" << a.exponent << ")/beta^" << 2 * a.m << " = " << a.image.to_string() << "\n";
    }
    for (std::size_t i = 0; i < r.differences.size(); ++i) {
        out << "  v(r_" << i + 1 << " - r_" << i << ") = " << to_string(r.differences[i]) << "\n";
    }
    out << "  outcome: " << r.outcome << "\n";
    out << "  delta = " << r.delta.to_string() << " (" << r.certified_digits << " certified digits";
    if (r.delta_valuation) out << ", valuation " << *r.delta_valuation;
    out << ")\n";
    out << "  V(g)-coordinate: " << r.delta_limit_sign.to_string() << " (limit-formula sign), "
        << r.delta_opposite_sign.to_string() << " (opposite sign)\n";
    out << "  alpha slot = " << r.alpha_slot.to_string() << "  [" << r.alpha_disclaimer << "]\n";
    out << "  even powers:";
    for (const auto& e : r.even_powers.entries) out << " " << to_string(e);
    out << (r.even_powers.contract_holds ? "  (positive, non-decreasing)" : "  (contract not met)") << "\n";
    return out.str();
}

std::string suite_text(const SuiteResult& s) {
    std::ostringstream out;
    out << (s.passed ? "PASS " : "FAIL ") << s.name << " (" << s.checks << " checks)\n";
    for (const auto& n : s.notes) out << "  note: " << n << "\n";
    for (const auto& f : s.failures) out << "  failure: " << f << "\n";
    return out.str();
}

} // namespace mockpadic::cli
