#include <algorithm>
#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "../src/cli/emit.hpp"
#include "mockpadic/cli.hpp"
#include "mockpadic/cohomology.hpp"
#include "mockpadic/etaforms.hpp"
#include "mockpadic/padiclimit.hpp"

namespace py = pybind11;
using namespace mockpadic;

namespace {

LaurentSeries expand_named(const std::string& name, long prec, long level) {
    const auto catalog = Catalog::builtin();
    if (const auto* e = catalog.find(name); e && level == 9) return eta_expansion(e->eta, prec);
    const auto names = eisenstein_names();
    if (std::find(names.begin(), names.end(), name) != names.end()) return eisenstein_expansion(name, prec);
    std::vector<std::string> tokens;
    std::stringstream ss(name);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        std::stringstream inner(tok);
        std::string t;
        while (inner >> t) tokens.push_back(t);
    }
    if (tokens.empty() || name.find(':') == std::string::npos) throw InvalidInput("unknown form '" + name + "'");
    return eta_expansion(EtaQuotient::parse(level, tokens), prec);
}

std::string expand_json(const std::string& name, long prec, long level) {
    auto j = cli::series_json(expand_named(name, prec, level));
    j["name"] = name;
    j["level"] = level;
    return j.dump();
}

std::string representative_json(long m, long prec) {
    return cli::representative_json(construct_representative(m, prec)).dump();
}

std::string delta_json(long p, long m_max, long M, const std::string& route, const std::vector<long>& poles, long guard) {
    std::vector<CuspFormClass> phis;
    for (long m : poles) phis.push_back(construct_representative(m));
    DeltaOptions o;
    o.m_max = m_max;
    o.M = M;
    o.guard = guard;
    o.route = parse_route(route);
    std::vector<DeltaReport> reports;
    {
        py::gil_scoped_release release;
        reports = delta_reports(phis, p, o);
    }
    cli::Json arr = cli::Json::array();
    for (const auto& r : reports) arr.push_back(cli::report_json(r));
    return arr.dump();
}

std::string suite_json(const std::string& name, int trials, long oracle_prec) {
    cli::SuiteOptions o;
    o.trials = trials;
    o.oracle_prec = oracle_prec;
    cli::SuiteResult r;
    {
        py::gil_scoped_release release;
        r = cli::run_suite(name, o);
    }
    return cli::suite_json(r).dump();
}

py::tuple run_cli(const std::vector<std::string>& args) {
    std::vector<std::string> full{cli::kToolName};
    full.insert(full.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : full) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return py::make_tuple(code, out.str(), err.str());
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Native core of mockpadic; results are returned as JSON text.";
    m.attr("__version__") = cli::kToolVersion;

    py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
    py::register_exception<HardFailure>(m, "HardFailure", PyExc_RuntimeError);
    py::register_exception<ResourceExhausted>(m, "ResourceExhausted", PyExc_MemoryError);
    py::register_exception<Obstruction>(m, "Obstruction", PyExc_ValueError);
    py::register_exception<PrecisionError>(m, "PrecisionError", PyExc_ArithmeticError);
    py::register_exception<CertificationError>(m, "CertificationError", PyExc_RuntimeError);

    m.def("expand_json", &expand_json, py::arg("name"), py::arg("prec") = 20, py::arg("level") = 9);
    m.def("representative_json", &representative_json, py::arg("pole_order"), py::arg("prec") = 0);
    m.def("delta_json", &delta_json, py::arg("p"), py::arg("m_max") = 0, py::arg("M") = 6, py::arg("route") = "auto",
          py::arg("poles") = std::vector<long>{1, 2}, py::arg("guard") = -1);
    m.def("suite_json", &suite_json, py::arg("name"), py::arg("trials") = 100, py::arg("oracle_prec") = 2000);
    m.def("suite_names", &cli::suite_names);
    m.def("run", &run_cli, py::arg("args"), "Runs the command line tool; returns (exit_code, stdout, stderr).");
}
