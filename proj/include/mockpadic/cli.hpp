#pragma once

// Command-line front end: run configuration, file cache, verification
// suites and report emission.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mockpadic/errors.hpp"
#include "mockpadic/padiclimit.hpp"

namespace mockpadic::cli {

inline constexpr const char* kToolName = "mockpadic";
inline constexpr const char* kToolVersion = "0.1.0";

enum class Format { Json, Csv, Text };
std::string to_string(Format f);
using mockpadic::to_string;
Format parse_format(const std::string& text);

struct RunConfig {
    long level = 9;
    int weight = 4;
    std::vector<long> primes;
    /// Per-prime depth; primes absent here use default_m_max.
    std::map<long, long> m_max;
    /// Depth for every prime not listed in m_max; 0 selects default_m_max.
    long m_max_all = 0;
    long M = 6;
    std::vector<long> poles{1, 2};
    /// 0 selects the default precision of each command.
    long prec = 0;
    int jobs = 1;
    std::string cache_dir;
    bool use_cache = true;
    Format format = Format::Json;
    Route route = Route::Automatic;
    /// Negative selects default_guard.
    long guard = -1;
    std::vector<long> hecke_primes{2, 5, 7, 13};

    long depth_for(long p) const;
};

/// Config violations, all of them, collected before any computation.
class ConfigError : public InvalidInput {
public:
    explicit ConfigError(std::vector<std::string> problems);
    const std::vector<std::string>& problems() const noexcept { return problems_; }

private:
    std::vector<std::string> problems_;
};

/// Applies "key = value" lines ('#' starts a comment). Problems are appended
/// to `errors` rather than thrown.
void apply_config(std::istream& in, RunConfig& cfg, std::vector<std::string>& errors);
/// Applies a single key; returns false and appends to errors on failure.
bool apply_setting(RunConfig& cfg, const std::string& key, const std::string& value, std::vector<std::string>& errors);

enum class Command { Expand, Represent, Delta, Verify, Report };

/// Every violation of the run invariants for the given command.
std::vector<std::string> validate(const RunConfig& cfg, Command cmd);

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view data);

/// Plain-text cache of expansions and representatives keyed by
/// (name, domain, prec). Entries carry a checksum of their payload; a
/// mismatch is treated as a miss. Writes go to a temporary file that is
/// renamed into place.
class Cache {
public:
    Cache() = default;
    explicit Cache(std::string dir);

    static std::string key(const std::string& name, const std::string& domain, long prec);
    /// MOCKPADIC_CACHE_DIR, else $XDG_CACHE_HOME/mockpadic, else ~/.cache/mockpadic.
    static std::string default_dir();

    bool enabled() const noexcept { return !dir_.empty(); }
    const std::string& dir() const noexcept { return dir_; }
    std::string path_for(const std::string& key) const;

    /// Payload of a valid entry.
    std::optional<std::string> load(const std::string& key) const;
    void store(const std::string& key, const std::string& payload) const;

    /// Counters for diagnostics.
    mutable long hits = 0;
    mutable long misses = 0;
    mutable long corrupt = 0;

private:
    std::string dir_;
};

struct SuiteResult {
    std::string name;
    bool passed = true;
    long checks = 0;
    /// Counterexample dumps.
    std::vector<std::string> failures;
    /// Informational lines.
    std::vector<std::string> notes;
    double seconds = 0;

    void expect(bool ok, const std::string& what);
};

struct SuiteOptions {
    std::vector<long> poles{1, 2};
    std::vector<long> hecke_primes{2, 5, 7, 13};
    long even_prime = 5;
    long even_depth = 3;
    /// Precision of the pentagonal vs brute-force comparison.
    long oracle_prec = 2000;
    /// Randomized instances per property.
    int trials = 100;
    std::uint64_t seed = 20240917;
};

std::vector<std::string> suite_names();
/// Throws InvalidInput for unknown names.
SuiteResult run_suite(const std::string& name, const SuiteOptions& opts);

/// Entry point shared by the executable and the tests. Returns the exit
/// status: 0 success, 1 verification failure, 2 config error, 3 resource
/// exhaustion.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace mockpadic::cli
