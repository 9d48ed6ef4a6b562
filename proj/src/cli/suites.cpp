#include <chrono>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <unistd.h>

#include "mockpadic/cli.hpp"

namespace mockpadic::cli {

namespace {

const EtaQuotient kG(9, {{3, 8}});

LaurentSeries random_series(std::mt19937_64& rng, long lo, long hi) {
    std::uniform_int_distribution<long> start(lo, 2), len(1, hi), coef(-9, 9), den(1, 4);
    const long n0 = start(rng);
    const long prec = n0 + len(rng) + 1;
    std::map<long, BigRational> m;
    for (long n = n0; n < prec; ++n) m[n] = rational_from_parts(coef(rng), den(rng));
    return LaurentSeries(std::move(m), prec);
}

long max_of(const std::vector<long>& v, long floor) {
    long m = floor;
    for (long x : v) m = std::max(m, x);
    return m;
}

std::vector<CuspFormClass> representatives(const std::vector<long>& poles, long prec) {
    std::vector<CuspFormClass> out;
    for (long m : poles) out.push_back(construct_representative(m, prec));
    return out;
}

void suite_pairing(SuiteResult& r, const SuiteOptions& o) {
    const long depth = max_of(o.poles, 1) + 2;
    const auto w4 = build_basis(9, 4, depth, 1);
    const auto wm2 = build_basis(9, -2, depth, 0);
    r.expect(wm2.basis.size() >= 3, "at least three weight -2 forms (found " + std::to_string(wm2.basis.size()) + ")");
    long skipped = 0;
    for (const auto& b : w4.basis) skipped += b.coeff(0) != 0;
    for (std::size_t i = 0; i < wm2.basis.size(); ++i) {
        const auto d = derivative_image(CertifiedSeries::from_basis(wm2, i), 4);
        for (std::size_t j = 0; j < w4.basis.size(); ++j) {
            if (w4.basis[j].coeff(0) != 0) continue;
            const auto v = pairing(d, CertifiedSeries::from_basis(w4, j), 4).value;
            r.expect(v == 0, "<D^3 phi_" + std::to_string(i) + ", psi_" + std::to_string(j) + "> = " + to_string(v));
        }
    }
    r.notes.push_back("weight -2 forms exercised: " + std::to_string(wm2.basis.size()));
    if (skipped) r.notes.push_back("weight-4 elements with a nonzero constant term (outside S_4^!) skipped: " + std::to_string(skipped));

    const auto g = CertifiedSeries::from_eta(kG, 60);
    r.expect(pairing(g, g, 4).value == 0, "<g, g> = 0");
    for (const auto& phi : representatives(o.poles, 0)) {
        r.expect(phi.pairing_with_g == 1, phi.id() + ": <Phi, g> = " + to_string(phi.pairing_with_g));
        const CertifiedSeries c{phi.phi, 4, 9, phi.orders};
        const auto v = pairing(c, CertifiedSeries::from_eta(kG, phi.phi.prec()), 4).value;
        r.expect(v == 1, phi.id() + ": recomputed <Phi, g> = " + to_string(v));
    }

    std::mt19937_64 rng(o.seed);
    std::uniform_int_distribution<long> num(-7, 7), den(1, 5);
    std::uniform_int_distribution<std::size_t> pick(0, w4.basis.size() - 1);
    const auto gw = CertifiedSeries::from_eta(kG, w4.prec);
    for (int t = 0; t < o.trials; ++t) {
        const auto x = CertifiedSeries::from_basis(w4, pick(rng));
        const auto y = CertifiedSeries::from_basis(w4, pick(rng));
        const BigRational a = rational_from_parts(num(rng), den(rng));
        const BigRational b = rational_from_parts(num(rng), den(rng));
        const CertifiedSeries comb{x.series.scaled(a) + y.series.scaled(b), 4, 9,
                                   OrderCertificate::combine(x.orders, y.orders)};
        const auto lhs = pairing(comb, gw, 4).value;
        const BigRational rhs = a * pairing(x, gw, 4).value + b * pairing(y, gw, 4).value;
        r.expect(lhs == rhs, "bilinearity trial " + std::to_string(t) + ": " + to_string(lhs) + " != " + to_string(rhs));
    }
}

void suite_hecke(SuiteResult& r, const SuiteOptions& o) {
    const long lmax = max_of(o.hecke_primes, 2);
    const long mmax = max_of(o.poles, 1);
    const auto wm2 = build_basis(9, -2, lmax * mmax + 2, 0);
    const auto ctx = OperatorContext::trivial(4, 9);
    for (const auto& phi : representatives(o.poles, hecke_required_prec(lmax))) {
        for (long l : o.hecke_primes) {
            const auto w = hecke_class_check(phi, l, ctx, wm2);
            r.expect(w.passed, phi.id() + ", l = " + std::to_string(l) + ": " + w.detail);
            if (w.passed) {
                r.notes.push_back(phi.id() + ", l = " + std::to_string(l) + ": a_g(l) = " + to_string(w.a_g_l) +
                                  ", remainder = " + to_string(w.g_multiple) + " g");
            }
        }
        auto bad = phi;
        std::map<long, BigRational> c = bad.phi.terms();
        c[5] += 1;
        bad.phi = LaurentSeries(c, bad.phi.prec());
        r.expect(!hecke_class_check(bad, 7, ctx, wm2).passed, phi.id() + ": corrupted control was not detected");
    }
}

void suite_evenpower(SuiteResult& r, const SuiteOptions& o) {
    const long p = o.even_prime;
    for (const auto& phi : representatives(o.poles, 0)) {
        try {
            const auto chk = even_power_vanishing_check(phi, p, o.even_depth);
            std::string line = phi.id() + " at p = " + std::to_string(p) + ":";
            for (const auto& e : chk.entries) line += " " + to_string(e);
            line += chk.contract_holds ? " (positive, non-decreasing)" : " (contract not met)";
            r.notes.push_back(line);
            // Only the pole-order-1 representative is free of the c*g shift.
            if (phi.pole_order == 1) r.expect(chk.contract_holds, line);
        } catch (const HardFailure& e) {
            r.expect(false, e.what());
        }
    }
    auto bad = construct_representative(1);
    bad.g_t_coefficients[0] += rational_from_parts(1, p);
    bool raised = false;
    try {
        (void)even_power_vanishing_check(bad, p, o.even_depth);
    } catch (const HardFailure&) {
        raised = true;
    }
    r.expect(raised, "corrupted representative did not raise a hard failure");
}

void suite_oracles(SuiteResult& r, const SuiteOptions& o) {
    const long n = o.oracle_prec;
    std::vector<BigInt> brute(static_cast<std::size_t>(n), 0);
    brute[0] = 1;
    for (long k = 1; k < n; ++k) {
        for (long i = n - 1; i >= k; --i) brute[static_cast<std::size_t>(i)] -= brute[static_cast<std::size_t>(i - k)];
    }
    const auto pent = euler_power_integers(1, 1, n);
    long mismatches = 0;
    for (long i = 0; i < n; ++i) {
        if (pent[static_cast<std::size_t>(i)] != brute[static_cast<std::size_t>(i)]) {
            if (mismatches++ < 5) r.expect(false, "pentagonal vs brute force differ at q^" + std::to_string(i));
        }
    }
    r.expect(mismatches == 0, "pentagonal vs brute force to prec " + std::to_string(n));

    const auto phis = representatives(o.poles, 0);
    DeltaOptions eo, ro;
    eo.route = Route::Exact;
    ro.route = Route::Residue;
    eo.m_max = ro.m_max = 3;
    const auto e = delta_reports(phis, 5, eo);
    const auto s = delta_reports(phis, 5, ro);
    for (std::size_t i = 0; i < e.size(); ++i) {
        for (std::size_t m = 0; m < e[i].approximants.size(); ++m) {
            const auto& x = e[i].approximants[m].image;
            const auto& y = s[i].approximants[m].image;
            r.expect(x.agrees_with(y) && x.valuation() == y.valuation(),
                     e[i].representative + " r_" + std::to_string(m) + ": exact " + x.to_string() + " vs residue " +
                         y.to_string());
        }
    }

    const auto g = eta_expansion(kG, 400);
    r.expect(apply_D(eichler_integral(g, 4), 3) == g, "D^3 E_g = g");
    for (const auto& phi : phis) {
        LaurentSeries positive(phi.phi.prec());
        std::map<long, BigRational> pos;
        for (const auto& [k, c] : phi.phi.terms()) {
            if (k > 0) pos[k] = c;
        }
        positive = LaurentSeries(pos, phi.phi.prec());
        r.expect(apply_D(eichler_integral(positive, 4), 3) == positive, phi.id() + ": D^3 E round trip");
    }
}

void suite_properties(SuiteResult& r, const SuiteOptions& o) {
    std::mt19937_64 rng(o.seed + 1);
    for (int t = 0; t < o.trials; ++t) {
        const auto a = random_series(rng, -3, 12), b = random_series(rng, -3, 12), c = random_series(rng, -3, 12);
        const std::string tag = " (trial " + std::to_string(t) + ")";
        r.expect(a * b == b * a, "commutativity" + tag);
        r.expect((a * b) * c == a * (b * c), "associativity" + tag);
        r.expect((a * (b + c)).agrees_with(a * b + a * c), "distributivity" + tag);
        r.expect(a + (-a) == LaurentSeries(a.prec()), "additive inverse" + tag);
    }
    const auto ctx = OperatorContext::trivial(4, 9);
    const std::vector<long> primes{2, 5, 7, 11, 13};
    for (int t = 0; t < o.trials; ++t) {
        const auto a = random_series(rng, -2, 300);
        const long l1 = primes[rng() % primes.size()];
        long l2 = primes[rng() % primes.size()];
        if (l2 == l1) l2 = l1 == 2 ? 5 : 2;
        const auto x = hecke_Tl(hecke_Tl(a, l1, ctx), l2, ctx);
        const auto y = hecke_Tl(hecke_Tl(a, l2, ctx), l1, ctx);
        r.expect(x.agrees_with(y), "T_" + std::to_string(l1) + " T_" + std::to_string(l2) + " commute (trial " +
                                       std::to_string(t) + ")");
    }
    for (int t = 0; t < o.trials; ++t) {
        const auto a = random_series(rng, -3, 40);
        const long p = primes[rng() % primes.size()];
        r.expect(apply_Up(apply_Vp(a, p), p) == a, "U_p V_p = id at p = " + std::to_string(p) + " (trial " +
                                                        std::to_string(t) + ")");
    }
    const auto catalog = Catalog::builtin();
    for (const auto& e : catalog.entries()) {
        const auto want = rational_from_parts(e.eta.weight() * gamma0_index(e.eta.level()), 12);
        r.expect(valence_sum(e.eta) == want, "valence identity for " + e.name);
    }
    std::uniform_int_distribution<int> ex(-12, 12);
    const std::vector<long> levels{4, 6, 8, 9, 12, 16, 18, 25, 36};
    int tested = 0;
    while (tested < o.trials) {
        const long n = levels[rng() % levels.size()];
        std::map<long, int> ex_map;
        for (long d : divisors(n)) ex_map[d] = ex(rng);
        const EtaQuotient e(n, ex_map);
        if (e.exponent_sum() % 2) continue;
        r.expect(valence_sum(e) == rational_from_parts(e.weight() * gamma0_index(n), 12),
                 "valence identity for " + e.to_string() + " on Gamma_0(" + std::to_string(n) + ")");
        ++tested;
    }
}

void suite_cache(SuiteResult& r, const SuiteOptions&) {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / ("mockpadic-cache-check-" + std::to_string(::getpid()));
    fs::remove_all(dir);
    const Cache cache(dir.string());
    const auto g = eta_expansion(kG, 300);
    std::ostringstream text;
    write_series(text, g);
    const auto key = Cache::key("g", "rational", 300);
    cache.store(key, text.str());
    const auto back = cache.load(key);
    r.expect(back.has_value(), "stored entry reloads");
    if (back) {
        std::istringstream in(*back);
        r.expect(read_rational_series(in) == g, "reloaded series equals the fresh expansion");
    }
    {
        std::fstream f(cache.path_for(key), std::ios::in | std::ios::out | std::ios::binary);
        f.seekp(-3, std::ios::end);
        f.put('7');
    }
    r.expect(!cache.load(key).has_value(), "a corrupted entry is rejected");
    fs::remove_all(dir);
}

} // namespace

void SuiteResult::expect(bool ok, const std::string& what) {
    ++checks;
    if (!ok) {
        passed = false;
        failures.push_back(what);
    }
}

std::vector<std::string> suite_names() { return {"pairing", "hecke", "evenpower", "oracles", "properties", "cache"}; }

SuiteResult run_suite(const std::string& name, const SuiteOptions& opts) {
    SuiteResult r;
    r.name = name;
    const auto start = std::chrono::steady_clock::now();
    try {
        if (name == "pairing") {
            suite_pairing(r, opts);
        } else if (name == "hecke") {
            suite_hecke(r, opts);
        } else if (name == "evenpower") {
            suite_evenpower(r, opts);
        } else if (name == "oracles") {
            suite_oracles(r, opts);
        } else if (name == "properties") {
            suite_properties(r, opts);
        } else if (name == "cache") {
            suite_cache(r, opts);
        } else {
            std::string known;
            for (const auto& s : suite_names()) known += " " + s;
            throw InvalidInput("unknown suite '" + name + "' (known:" + known + ", all)");
        }
    } catch (const InvalidInput&) {
        throw;
    } catch (const ResourceExhausted&) {
        throw;
    } catch (const std::exception& e) {
        r.expect(false, std::string("exception: ") + e.what());
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

} // namespace mockpadic::cli
