#include <algorithm>
#include <istream>
#include <sstream>

#include "mockpadic/cli.hpp"

namespace mockpadic::cli {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::optional<long> parse_long(const std::string& text) {
    try {
        std::size_t used = 0;
        const long v = std::stol(text, &used);
        if (used != text.size()) return std::nullopt;
        return v;
    } catch (const std::logic_error&) {
        return std::nullopt;
    }
}

std::optional<std::vector<long>> parse_list(const std::string& text) {
    std::vector<long> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto v = parse_long(trim(item));
        if (!v) return std::nullopt;
        out.push_back(*v);
    }
    if (out.empty()) return std::nullopt;
    return out;
}

} // namespace

std::string to_string(Format f) {
    switch (f) {
    case Format::Json: return "json";
    case Format::Csv: return "csv";
    case Format::Text: return "text";
    }
    return "json";
}

Format parse_format(const std::string& text) {
    if (text == "json") return Format::Json;
    if (text == "csv") return Format::Csv;
    if (text == "text") return Format::Text;
    throw InvalidInput("unknown format '" + text + "' (json, csv, text)");
}

long RunConfig::depth_for(long p) const {
    const auto it = m_max.find(p);
    if (it != m_max.end()) return it->second;
    return m_max_all > 0 ? m_max_all : default_m_max(p);
}

namespace {

std::string join_problems(const std::vector<std::string>& problems) {
    std::string s = "configuration rejected:";
    for (const auto& p : problems) s += "\n  - " + p;
    return s;
}

} // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : InvalidInput(join_problems(problems)), problems_(std::move(problems)) {}

bool apply_setting(RunConfig& cfg, const std::string& key, const std::string& raw, std::vector<std::string>& errors) {
    const std::string value = trim(raw);
    auto bad = [&](const std::string& why) {
        errors.push_back(key + " = '" + value + "': " + why);
        return false;
    };
    auto integer = [&](auto& slot) {
        const auto v = parse_long(value);
        if (!v) return bad("expected an integer");
        slot = static_cast<std::remove_reference_t<decltype(slot)>>(*v);
        return true;
    };
    auto list = [&](std::vector<long>& slot) {
        const auto v = parse_list(value);
        if (!v) return bad("expected a comma-separated list of integers");
        slot = *v;
        return true;
    };

    if (key == "level" || key == "N") return integer(cfg.level);
    if (key == "weight" || key == "k") return integer(cfg.weight);
    if (key == "primes" || key == "p") return list(cfg.primes);
    if (key == "M") return integer(cfg.M);
    if (key == "prec") return integer(cfg.prec);
    if (key == "jobs") return integer(cfg.jobs);
    if (key == "guard") return integer(cfg.guard);
    if (key == "poles" || key == "pole") return list(cfg.poles);
    if (key == "l" || key == "hecke_primes") return list(cfg.hecke_primes);
    if (key == "cache_dir") {
        cfg.cache_dir = value;
        cfg.use_cache = !value.empty();
        return true;
    }
    if (key == "format") {
        try {
            cfg.format = parse_format(value);
            return true;
        } catch (const InvalidInput& e) {
            return bad(e.what());
        }
    }
    if (key == "route") {
        try {
            cfg.route = parse_route(value);
            return true;
        } catch (const InvalidInput& e) {
            return bad(e.what());
        }
    }
    if (key == "mmax" || key == "m_max") {
        // "3" for every prime, or "5:3,11:2" per prime
        if (value.find(':') == std::string::npos) {
            const auto v = parse_long(value);
            if (!v || *v < 1) return bad("expected a positive integer or p:m pairs");
            cfg.m_max_all = *v;
            return true;
        }
        std::stringstream ss(value);
        std::string item;
        while (std::getline(ss, item, ',')) {
            const auto colon = item.find(':');
            const auto p = colon == std::string::npos ? std::nullopt : parse_long(trim(item.substr(0, colon)));
            const auto m = colon == std::string::npos ? std::nullopt : parse_long(trim(item.substr(colon + 1)));
            if (!p || !m) return bad("expected an integer or p:m pairs");
            cfg.m_max[*p] = *m;
        }
        return true;
    }
    errors.push_back("unknown key '" + key + "'");
    return false;
}

void apply_config(std::istream& in, RunConfig& cfg, std::vector<std::string>& errors) {
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            errors.push_back("line " + std::to_string(lineno) + ": expected key = value");
            continue;
        }
        apply_setting(cfg, trim(line.substr(0, eq)), line.substr(eq + 1), errors);
    }
}

std::vector<std::string> validate(const RunConfig& cfg, Command cmd) {
    std::vector<std::string> errs;
    const bool needs_level9 = cmd != Command::Expand;
    if (cfg.level < 1) errs.push_back("level must be positive");
    if (needs_level9 && cfg.level != 9) {
        errs.push_back("level " + std::to_string(cfg.level) + " is supported only by expand; use level 9");
    }
    if (needs_level9 && cfg.weight != 4) {
        errs.push_back("weight " + std::to_string(cfg.weight) + " is not supported; the level-9 instance has weight 4");
    }
    if (cfg.jobs < 1) errs.push_back("jobs must be at least 1");
    if (cfg.M < 1) errs.push_back("M must be at least 1");
    if (cfg.prec < 0) errs.push_back("prec must be non-negative");
    if (cfg.m_max_all < 0) errs.push_back("mmax must be positive");
    for (const auto& [p, m] : cfg.m_max) {
        if (m < 1) errs.push_back("mmax for p = " + std::to_string(p) + " must be positive");
        if (std::find(cfg.primes.begin(), cfg.primes.end(), p) == cfg.primes.end() &&
            (cmd == Command::Delta || cmd == Command::Report)) {
            errs.push_back("mmax given for p = " + std::to_string(p) + ", which is not among the primes");
        }
    }
    for (long m : cfg.poles) {
        if (m < 1) errs.push_back("pole order " + std::to_string(m) + " must be at least 1 (a cusp form pairs to zero with g)");
    }
    for (long l : cfg.hecke_primes) {
        if (l < 2 || !is_prime(static_cast<std::uint64_t>(l))) errs.push_back("Hecke index " + std::to_string(l) + " is not prime");
    }
    if (cmd == Command::Delta && cfg.primes.empty()) errs.push_back("no primes given (use --p)");
    if (cmd == Command::Delta || cmd == Command::Report || cmd == Command::Verify) {
        for (long p : cfg.primes) {
            const std::string tag = "p = " + std::to_string(p) + ": ";
            if (p < 2 || !is_prime(static_cast<std::uint64_t>(p))) {
                errs.push_back(tag + "not prime");
                continue;
            }
            if ((6 * cfg.level) % p == 0) {
                errs.push_back(tag + "divides 6N = " + std::to_string(6 * cfg.level));
                continue;
            }
            if (p < 5) errs.push_back(tag + "p must be at least 5");
            if (p % 3 != 2) errs.push_back(tag + "splits in Q(sqrt(-3)) (p = 1 mod 3); the limit formula needs inert p");
        }
        if (cfg.guard >= 0) {
            for (long p : cfg.primes) {
                if (cfg.guard < 3 * cfg.depth_for(p)) {
                    errs.push_back("guard " + std::to_string(cfg.guard) + " is below 3 * mmax = " +
                                   std::to_string(3 * cfg.depth_for(p)) + " for p = " + std::to_string(p));
                }
            }
        }
    }
    return errs;
}

} // namespace mockpadic::cli
