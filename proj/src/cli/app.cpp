#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "emit.hpp"

namespace mockpadic::cli {

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

Json envelope_head(const std::string& command) {
    Json j;
    j["tool"] = kToolName;
    j["version"] = kToolVersion;
    j["command"] = command;
    return j;
}

// ---------------------------------------------------------------- errors

struct Failure {
    int code;
    std::string kind;
    std::string message;
    Json extra = Json::object();
};

Failure classify(const std::exception_ptr& ep) {
    try {
        std::rethrow_exception(ep);
    } catch (const ConfigError& e) {
        Failure f{2, "config", e.what()};
        f.extra["problems"] = e.problems();
        return f;
    } catch (const InvalidInput& e) {
        return {2, "invalid input", e.what()};
    } catch (const PrecisionError& e) {
        Failure f{2, "precision", e.what()};
        f.extra["required"] = e.required();
        return f;
    } catch (const Obstruction& e) {
        Failure f{2, "obstruction", e.what()};
        f.extra["suggested_pole_order"] = e.suggestion();
        return f;
    } catch (const HardFailure& e) {
        return {1, "hard failure", e.what()};
    } catch (const CertificationError& e) {
        return {1, "certification", e.what()};
    } catch (const ResourceExhausted& e) {
        return {3, "resource exhaustion", e.what()};
    } catch (const std::bad_alloc&) {
        return {3, "resource exhaustion", "out of memory"};
    } catch (const std::exception& e) {
        return {1, "internal", e.what()};
    }
}

Json failure_json(const Failure& f) {
    Json j;
    j["kind"] = f.kind;
    j["message"] = f.message;
    for (const auto& [k, v] : f.extra.items()) j[k] = v;
    return j;
}

void emit_failure(std::ostream& out, std::ostream& err, Format fmt, const std::string& command, const Failure& f) {
    err << "error (" << f.kind << "): " << f.message << "\n";
    if (fmt == Format::Json) {
        Json j = envelope_head(command);
        j["error"] = failure_json(f);
        j["exit_code"] = f.code;
        out << j.dump(2) << "\n";
    } else if (fmt == Format::Csv) {
        std::string quoted;
        for (char c : f.message) quoted += c == '"' ? std::string("\"\"") : std::string(1, c);
        out << "error,kind,exit_code\n\"" << quoted << "\"," << f.kind << "," << f.code << "\n";
    }
}

// ---------------------------------------------------------------- representatives

long representative_prec(long m, long prec) { return prec > 0 ? prec : default_basis_prec(m); }

CuspFormClass load_representative(long m, long prec, const Cache& cache, std::ostream& err) {
    const long resolved = representative_prec(m, prec);
    const std::string key = Cache::key("Phi_" + std::to_string(m), "rational", resolved);
    if (auto text = cache.load(key)) {
        std::istringstream in(*text);
        try {
            auto phi = read_representative(in);
            err << "cache hit: " << key << "\n";
            return phi;
        } catch (const InvalidInput&) {
            err << "cache entry " << key << " is unreadable; recomputing\n";
        }
    }
    auto phi = construct_representative(m, resolved);
    if (cache.enabled()) {
        std::ostringstream text;
        write_representative(text, phi);
        cache.store(key, text.str());
        err << "cache store: " << key << "\n";
    }
    return phi;
}

// Linear independence of [Phi] and [g] for each representative in use.
SuiteResult prerequisite_suite(const std::vector<CuspFormClass>& phis) {
    SuiteResult r;
    r.name = "linear independence";
    const auto start = Clock::now();
    const EtaQuotient g_eta(9, {{3, 8}});
    const auto g = CertifiedSeries::from_eta(g_eta, 60);
    r.expect(pairing(g, g, 4).value == 0, "<g, g> = 0");
    for (const auto& phi : phis) {
        try {
            const CertifiedSeries c{phi.phi, 4, 9, phi.orders};
            const auto v = pairing(c, CertifiedSeries::from_eta(g_eta, phi.phi.prec()), 4).value;
            r.expect(v == 1, phi.id() + ": <Phi, g> = " + to_string(v));
            r.expect(phi.phi.coeff(0) == 0, phi.id() + ": constant term vanishes");
        } catch (const std::exception& e) {
            r.expect(false, phi.id() + ": " + e.what());
        }
    }
    r.seconds = since(start);
    return r;
}

// ---------------------------------------------------------------- delta

struct PrimeOutcome {
    long p = 0;
    std::vector<DeltaReport> reports;
    std::optional<Failure> failure;
    bool agreement = true;
    long shared_digits = 0;
    std::string agreement_detail;
    double seconds = 0;
};

PrimeOutcome run_prime(long p, const std::vector<CuspFormClass>& phis, const RunConfig& cfg) {
    PrimeOutcome o;
    o.p = p;
    const auto start = Clock::now();
    try {
        DeltaOptions opts;
        opts.m_max = cfg.depth_for(p);
        opts.M = cfg.M;
        opts.guard = cfg.guard;
        opts.route = cfg.route;
        o.reports = delta_reports(phis, p, opts);
        o.shared_digits = cfg.M;
        for (const auto& r : o.reports) o.shared_digits = std::min(o.shared_digits, r.certified_digits);
        const auto& first = o.reports.front();
        for (const auto& r : o.reports) {
            if (r.verdict_nonzero != first.verdict_nonzero) {
                o.agreement = false;
                o.agreement_detail = r.representative + " and " + first.representative + " disagree on the verdict";
            } else if (o.shared_digits >= 1 &&
                       !r.delta.reduced_to(o.shared_digits).agrees_with(first.delta.reduced_to(o.shared_digits))) {
                o.agreement = false;
                o.agreement_detail = r.representative + " and " + first.representative + " disagree mod p^" +
                                     std::to_string(o.shared_digits);
            }
        }
    } catch (...) {
        o.failure = classify(std::current_exception());
    }
    o.seconds = since(start);
    return o;
}

std::vector<PrimeOutcome> run_primes(const std::vector<CuspFormClass>& phis, const RunConfig& cfg) {
    std::vector<PrimeOutcome> out(cfg.primes.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < cfg.primes.size(); i = next++) out[i] = run_prime(cfg.primes[i], phis, cfg);
    };
    const std::size_t n = std::min<std::size_t>(static_cast<std::size_t>(cfg.jobs), cfg.primes.size());
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < n; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return out;
}

Json prime_json(const PrimeOutcome& o, bool prerequisites_passed) {
    Json j;
    j["p"] = o.p;
    if (o.failure) {
        j["error"] = failure_json(*o.failure);
        j["seconds"] = o.seconds;
        return j;
    }
    const auto& first = o.reports.front();
    j["route"] = to_string(first.route);
    j["m_max"] = first.m_max;
    j["M"] = first.M;
    j["guard"] = first.guard;
    j["beta_squared"] = to_string(first.beta_squared);
    Json reps = Json::array();
    for (const auto& r : o.reports) reps.push_back(report_json(r));
    j["reports"] = std::move(reps);
    j["representative_agreement"] = {{"agree", o.agreement}, {"digits", o.shared_digits}, {"detail", o.agreement_detail}};
    if (prerequisites_passed && o.agreement) {
        Json v;
        v["delta_nonzero"] = first.verdict_nonzero;
        v["outcome"] = first.outcome;
        v["valuation"] = first.delta_valuation ? Json(*first.delta_valuation) : Json(nullptr);
        v["certified_digits"] = o.shared_digits;
        v["delta"] = padic_json(o.shared_digits >= 1 ? first.delta.reduced_to(o.shared_digits) : first.delta);
        j["verdict"] = std::move(v);
    }
    j["seconds"] = o.seconds;
    return j;
}

int outcome_code(const std::vector<PrimeOutcome>& outs, bool prerequisites_passed) {
    bool verification = !prerequisites_passed, resource = false, config = false;
    for (const auto& o : outs) {
        if (!o.failure) {
            verification = verification || !o.agreement;
            continue;
        }
        verification = verification || o.failure->code == 1;
        resource = resource || o.failure->code == 3;
        config = config || o.failure->code == 2;
    }
    return verification ? 1 : resource ? 3 : config ? 2 : 0;
}

void emit_primes(std::ostream& out, Format fmt, const std::vector<PrimeOutcome>& outs, bool prereq, Json& envelope) {
    if (fmt == Format::Json) {
        Json arr = Json::array();
        for (const auto& o : outs) arr.push_back(prime_json(o, prereq));
        envelope["primes"] = std::move(arr);
        return;
    }
    if (fmt == Format::Csv) {
        out << approximant_csv_header();
        for (const auto& o : outs) {
            for (const auto& r : o.reports) out << approximant_csv_rows(r);
        }
        return;
    }
    for (const auto& o : outs) {
        out << "== p = " << o.p << "\n";
        if (o.failure) {
            out << "error (" << o.failure->kind << "): " << o.failure->message << "\n";
            continue;
        }
        for (const auto& r : o.reports) out << report_text(r);
        if (!o.agreement) out << "representatives disagree: " << o.agreement_detail << "\n";
        if (prereq && o.agreement) {
            const auto& first = o.reports.front();
            out << "verdict: " << (first.verdict_nonzero ? "delta_g != 0" : first.outcome);
            if (first.verdict_nonzero && first.delta_valuation) out << ", v_p(delta_g) = " << *first.delta_valuation;
            out << "\n";
        } else {
            out << "verdict withheld\n";
        }
    }
}

// ---------------------------------------------------------------- commands

int cmd_expand(const std::string& name, const RunConfig& cfg, const Cache& cache, std::ostream& out,
               std::ostream& err) {
    const long prec = cfg.prec > 0 ? cfg.prec : 20;
    const bool residue = !cfg.primes.empty();
    if (residue && cfg.primes.size() != 1) throw ConfigError({"expand takes at most one prime for the mod p^M domain"});
    std::shared_ptr<const ResidueRing> ring;
    if (residue) {
        const long p = cfg.primes.front();
        if (p < 2 || !is_prime(static_cast<std::uint64_t>(p))) throw ConfigError({"p = " + std::to_string(p) + ": not prime"});
        ring = std::make_shared<const ResidueRing>(static_cast<std::uint64_t>(p), static_cast<int>(cfg.M));
    }
    const std::string domain = residue ? ring->tag() : "rational";

    const auto catalog = Catalog::builtin();
    std::optional<EtaQuotient> eta;
    if (const auto* e = catalog.find(name); e && cfg.level == 9) {
        eta = e->eta;
    } else if (const auto names = eisenstein_names(); std::find(names.begin(), names.end(), name) != names.end()) {
        // rational Eisenstein series, expanded below
    } else if (name.find(':') != std::string::npos) {
        std::vector<std::string> tokens;
        std::stringstream ss(name);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            std::stringstream inner(tok);
            std::string t;
            while (inner >> t) tokens.push_back(t);
        }
        eta = EtaQuotient::parse(cfg.level, tokens);
    } else {
        std::string known;
        for (const auto& n : catalog.names()) known += " " + n;
        for (const auto& n : eisenstein_names()) known += " " + n;
        throw InvalidInput("unknown form '" + name + "'; catalog:" + known + " (or eta tokens such as 3:8)");
    }

    const std::string label = eta ? (catalog.find(name) ? name : "eta[" + eta->to_tokens() + "]@" + std::to_string(cfg.level)) : name;
    const std::string key = Cache::key(label, domain, prec);
    std::string text;
    if (auto hit = cache.load(key)) {
        text = *hit;
        err << "cache hit: " << key << "\n";
    } else {
        std::ostringstream s;
        if (residue) {
            const auto series = eta ? eta_expansion(*eta, prec, ring)
                                    : ResidueSeries::from_rational(ring, eisenstein_expansion(name, prec));
            write_series(s, series);
        } else {
            write_series(s, eta ? eta_expansion(*eta, prec) : eisenstein_expansion(name, prec));
        }
        text = s.str();
        if (cache.enabled()) {
            cache.store(key, text);
            err << "cache store: " << key << "\n";
        }
    }

    // Rendering works from the cached text so hits and misses print the same bytes.
    std::istringstream in(text);
    std::vector<std::pair<long, std::string>> terms;
    long n0 = 0, prec_out = prec;
    {
        std::string header;
        std::getline(in, header);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            std::istringstream ls(line);
            long n;
            std::string c;
            ls >> n >> c;
            terms.emplace_back(n, c);
        }
        n0 = terms.empty() ? prec : terms.front().first;
    }
    if (cfg.format == Format::Json) {
        Json j = envelope_head("expand");
        j["name"] = name;
        j["level"] = eta ? eta->level() : 9;
        if (eta) j["eta_quotient"] = eta->to_string();
        j["domain"] = domain;
        j["n0"] = n0;
        j["prec"] = prec_out;
        Json arr = Json::array();
        for (const auto& [n, c] : terms) arr.push_back(Json::array({n, c}));
        j["terms"] = std::move(arr);
        out << j.dump(2) << "\n";
    } else if (cfg.format == Format::Csv) {
        out << "n,coefficient\n";
        for (const auto& [n, c] : terms) out << n << "," << c << "\n";
    } else {
        if (!residue) {
            std::istringstream again(text);
            out << "# " << name << " = " << read_rational_series(again).to_string(12) << "\n";
        }
        out << text;
    }
    return 0;
}

int cmd_represent(const RunConfig& cfg, const Cache& cache, std::ostream& out, std::ostream& err) {
    std::vector<CuspFormClass> phis;
    for (long m : cfg.poles) phis.push_back(load_representative(m, cfg.prec, cache, err));
    if (cfg.format == Format::Json) {
        Json j = envelope_head("represent");
        Json arr = Json::array();
        for (const auto& phi : phis) arr.push_back(representative_json(phi));
        j["representatives"] = std::move(arr);
        out << j.dump(2) << "\n";
    } else if (cfg.format == Format::Csv) {
        out << "representative,j,c_j\n";
        for (const auto& phi : phis) {
            for (std::size_t k = 0; k < phi.g_t_coefficients.size(); ++k) {
                out << phi.id() << "," << k << "," << to_string(phi.g_t_coefficients[k]) << "\n";
            }
        }
    } else {
        for (const auto& phi : phis) {
            out << "# " << phi.id() << " = " << phi.phi.to_string(10) << "\n";
            write_representative(out, phi);
        }
    }
    return 0;
}

std::vector<SuiteResult> run_suites(const std::vector<std::string>& names, const RunConfig& cfg, long oracle_prec,
                                    int trials) {
    std::vector<std::string> list;
    for (const auto& n : names) {
        if (n == "all") {
            list = suite_names();
            break;
        }
        list.push_back(n);
    }
    for (const auto& n : list) {
        const auto known = suite_names();
        if (std::find(known.begin(), known.end(), n) == known.end()) {
            std::string k;
            for (const auto& s : known) k += " " + s;
            throw ConfigError({"unknown suite '" + n + "' (known:" + k + ", all)"});
        }
    }
    SuiteOptions o;
    o.poles = cfg.poles;
    o.hecke_primes = cfg.hecke_primes;
    if (!cfg.primes.empty()) {
        o.even_prime = cfg.primes.front();
        o.even_depth = cfg.depth_for(o.even_prime);
    }
    o.oracle_prec = oracle_prec;
    o.trials = trials;
    std::vector<SuiteResult> out;
    for (const auto& n : list) out.push_back(run_suite(n, o));
    return out;
}

void emit_suites(std::ostream& out, Format fmt, const std::vector<SuiteResult>& suites, Json& envelope) {
    if (fmt == Format::Json) {
        Json arr = Json::array();
        for (const auto& s : suites) arr.push_back(suite_json(s));
        envelope["verification"] = std::move(arr);
    } else if (fmt == Format::Csv) {
        out << "suite,passed,checks,failures\n";
        for (const auto& s : suites) out << s.name << "," << (s.passed ? 1 : 0) << "," << s.checks << "," << s.failures.size() << "\n";
    } else {
        for (const auto& s : suites) out << suite_text(s);
    }
}

int cmd_verify(const std::vector<std::string>& names, const RunConfig& cfg, long oracle_prec, int trials,
               std::ostream& out) {
    const auto start = Clock::now();
    const auto suites = run_suites(names, cfg, oracle_prec, trials);
    bool ok = true;
    for (const auto& s : suites) ok = ok && s.passed;
    Json j = envelope_head("verify");
    j["config"] = config_json(cfg);
    emit_suites(out, cfg.format, suites, j);
    if (cfg.format == Format::Json) {
        j["passed"] = ok;
        j["timing"] = {{"total_seconds", since(start)}};
        out << j.dump(2) << "\n";
    }
    return ok ? 0 : 1;
}

int cmd_delta(const RunConfig& cfg, const Cache& cache, std::ostream& out, std::ostream& err,
              const std::vector<SuiteResult>& extra_suites, const std::string& command) {
    const auto start = Clock::now();
    std::vector<CuspFormClass> phis;
    for (long m : cfg.poles) phis.push_back(load_representative(m, 0, cache, err));
    std::vector<SuiteResult> suites = extra_suites;
    suites.push_back(prerequisite_suite(phis));
    bool prereq = true;
    for (const auto& s : suites) prereq = prereq && s.passed;
    const auto outs = run_primes(phis, cfg);
    const int code = outcome_code(outs, prereq);

    Json j = envelope_head(command);
    j["config"] = config_json(cfg);
    if (cfg.format == Format::Csv) {
        emit_primes(out, cfg.format, outs, prereq, j);
    } else {
        emit_suites(out, cfg.format, suites, j);
        emit_primes(out, cfg.format, outs, prereq, j);
    }
    if (cfg.format == Format::Json) {
        j["status"] = code == 0 ? "ok" : code == 1 ? "verification failure" : code == 3 ? "resource exhaustion" : "error";
        j["exit_code"] = code;
        j["timing"] = {{"total_seconds", since(start)}};
        out << j.dump(2) << "\n";
    }
    return code;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Mock modular forms at level 9: q-expansions, cohomology representatives and p-adic limits",
                 kToolName};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", kToolVersion);

    std::string config_path, mmax_text, format_text, route_text, cache_dir;
    std::vector<long> primes, poles, hecke;
    long M = 0, prec = 0, guard = 0, level = 0, weight = 0, oracle_prec = 2000;
    int jobs = 0, trials = 100;
    bool no_cache = false;
    auto* o_config = app.add_option("--config", config_path, "key = value configuration file");
    auto* o_p = app.add_option("--p", primes, "prime(s), comma separated")->delimiter(',');
    auto* o_mmax = app.add_option("--mmax", mmax_text, "depth m_max: one value or p:m pairs");
    auto* o_M = app.add_option("--M", M, "requested p-adic digits");
    auto* o_pole = app.add_option("--pole", poles, "representative pole order(s)")->delimiter(',');
    auto* o_prec = app.add_option("--prec", prec, "expansion precision");
    auto* o_jobs = app.add_option("--jobs", jobs, "parallel per-prime jobs");
    auto* o_cache = app.add_option("--cache-dir", cache_dir, "cache directory (overrides MOCKPADIC_CACHE_DIR)");
    auto* o_nocache = app.add_flag("--no-cache", no_cache, "disable the expansion cache");
    auto* o_format = app.add_option("--format", format_text, "json | csv | text");
    auto* o_route = app.add_option("--route", route_text, "auto | exact | residue");
    auto* o_guard = app.add_option("--guard", guard, "guard digits for residue runs");
    auto* o_level = app.add_option("--level", level, "level N (expand only accepts N != 9)");
    auto* o_weight = app.add_option("--weight", weight, "weight k");
    auto* o_l = app.add_option("--l", hecke, "Hecke indices for verify")->delimiter(',');

    std::string form_name;
    std::vector<std::string> suite_list;
    auto* expand = app.add_subcommand("expand", "q-expansion of a catalog form");
    expand->add_option("name", form_name, "catalog name, Eisenstein name, or eta tokens d:r,...")->required();
    auto* represent = app.add_subcommand("represent", "representative Phi_m of the cohomology class");
    auto* delta = app.add_subcommand("delta", "p-adic approximants and the delta_g verdict");
    auto* verify = app.add_subcommand("verify", "run verification suites");
    verify->add_option("suites", suite_list, "pairing hecke evenpower oracles properties cache | all");
    verify->add_option("--oracle-prec", oracle_prec, "precision of the pentagonal oracle");
    verify->add_option("--trials", trials, "randomized instances per property");
    auto* report = app.add_subcommand("report", "all verification suites followed by delta for every prime");
    report->add_option("--oracle-prec", oracle_prec, "precision of the pentagonal oracle");
    report->add_option("--trials", trials, "randomized instances per property");

    Format fmt = Format::Json;
    std::string command = "unknown";
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e, out, err);
        return rc == 0 ? 0 : 2;
    }
    for (auto* sub : {expand, represent, delta, verify, report}) {
        if (sub->parsed()) command = sub->get_name();
    }
    if (o_format->count()) {
        try {
            fmt = parse_format(format_text);
        } catch (const InvalidInput&) {
        }
    }

    try {
        RunConfig cfg;
        std::vector<std::string> problems;
        if (o_config->count()) {
            std::ifstream in(config_path);
            if (!in) {
                problems.push_back("cannot read config file '" + config_path + "'");
            } else {
                apply_config(in, cfg, problems);
            }
        }
        if (const char* env = std::getenv("MOCKPADIC_CACHE_DIR"); env && *env) {
            cfg.cache_dir = env;
            cfg.use_cache = true;
        }
        if (o_p->count()) cfg.primes = primes;
        if (o_mmax->count()) apply_setting(cfg, "mmax", mmax_text, problems);
        if (o_M->count()) cfg.M = M;
        if (o_pole->count()) cfg.poles = poles;
        if (o_prec->count()) cfg.prec = prec;
        if (o_jobs->count()) cfg.jobs = jobs;
        if (o_cache->count()) {
            cfg.cache_dir = cache_dir;
            cfg.use_cache = !cache_dir.empty();
        }
        if (o_nocache->count()) cfg.use_cache = false;
        if (o_format->count()) apply_setting(cfg, "format", format_text, problems);
        if (o_route->count()) apply_setting(cfg, "route", route_text, problems);
        if (o_guard->count()) cfg.guard = guard;
        if (o_level->count()) cfg.level = level;
        if (o_weight->count()) cfg.weight = weight;
        if (o_l->count()) cfg.hecke_primes = hecke;
        if (oracle_prec < 1) problems.push_back("oracle-prec must be positive");
        if (trials < 1) problems.push_back("trials must be positive");
        fmt = cfg.format;

        Command cmd = Command::Expand;
        if (command == "represent") cmd = Command::Represent;
        if (command == "delta") cmd = Command::Delta;
        if (command == "verify") cmd = Command::Verify;
        if (command == "report") {
            cmd = Command::Report;
            if (cfg.primes.empty()) cfg.primes = {5, 11};
        }
        for (auto& v : validate(cfg, cmd)) problems.push_back(std::move(v));
        if (!problems.empty()) throw ConfigError(problems);

        Cache cache;
        if (cfg.use_cache) cache = Cache(cfg.cache_dir.empty() ? Cache::default_dir() : cfg.cache_dir);

        switch (cmd) {
        case Command::Expand: return cmd_expand(form_name, cfg, cache, out, err);
        case Command::Represent: return cmd_represent(cfg, cache, out, err);
        case Command::Delta: return cmd_delta(cfg, cache, out, err, {}, "delta");
        case Command::Verify:
            return cmd_verify(suite_list.empty() ? std::vector<std::string>{"all"} : suite_list, cfg, oracle_prec, trials, out);
        case Command::Report: {
            const auto suites = run_suites({"all"}, cfg, oracle_prec, trials);
            return cmd_delta(cfg, cache, out, err, suites, "report");
        }
        }
        return 0;
    } catch (...) {
        const Failure f = classify(std::current_exception());
        emit_failure(out, err, fmt, command, f);
        return f.code;
    }
}

} // namespace mockpadic::cli
