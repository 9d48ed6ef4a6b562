#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <system_error>
#include <thread>

#include <unistd.h>

#include "mockpadic/cli.hpp"

namespace mockpadic::cli {

namespace fs = std::filesystem;

namespace {

constexpr const char* kMagic = "mockpadic-cache 1";

std::string hex64(std::uint64_t x) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
    return buf;
}

std::string sanitize(const std::string& s) {
    std::string out;
    for (char c : s) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' ||
                        c == '-' || c == '.' || c == '^' || c == '+';
        out += ok ? c : '_';
    }
    return out;
}

} // namespace

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

Cache::Cache(std::string dir) : dir_(std::move(dir)) {}

std::string Cache::key(const std::string& name, const std::string& domain, long prec) {
    return sanitize(name) + "__" + sanitize(domain) + "__" + std::to_string(prec);
}

std::string Cache::default_dir() {
    if (const char* d = std::getenv("MOCKPADIC_CACHE_DIR")) return d;
    if (const char* x = std::getenv("XDG_CACHE_HOME"); x && *x) return (fs::path(x) / "mockpadic").string();
    if (const char* h = std::getenv("HOME"); h && *h) return (fs::path(h) / ".cache" / "mockpadic").string();
    return ".mockpadic-cache";
}

std::string Cache::path_for(const std::string& key) const { return (fs::path(dir_) / (key + ".txt")).string(); }

std::optional<std::string> Cache::load(const std::string& key) const {
    if (!enabled()) return std::nullopt;
    std::ifstream in(path_for(key), std::ios::binary);
    if (!in) {
        ++misses;
        return std::nullopt;
    }
    std::string magic, key_line, sum_line, len_line, sep;
    std::getline(in, magic);
    std::getline(in, key_line);
    std::getline(in, sum_line);
    std::getline(in, len_line);
    std::getline(in, sep);
    std::ostringstream body;
    body << in.rdbuf();
    std::string payload = body.str();
    const bool header_ok = magic == kMagic && key_line == "key=" + key && sep == "---" &&
                           sum_line.rfind("checksum=fnv1a64:", 0) == 0 && len_line.rfind("length=", 0) == 0;
    if (!header_ok || len_line.substr(7) != std::to_string(payload.size()) ||
        sum_line.substr(17) != hex64(fnv1a64(payload))) {
        ++corrupt;
        ++misses;
        return std::nullopt;
    }
    ++hits;
    return payload;
}

void Cache::store(const std::string& key, const std::string& payload) const {
    if (!enabled()) return;
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw ResourceExhausted("cache directory " + dir_ + " is not writable: " + ec.message());
    const std::string final_path = path_for(key);
    std::ostringstream tag;
    tag << ::getpid() << '.' << std::this_thread::get_id();
    const std::string tmp = final_path + ".tmp." + tag.str();
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ResourceExhausted("cannot write cache entry " + tmp);
        out << kMagic << "\n"
            << "key=" << key << "\n"
            << "checksum=fnv1a64:" << hex64(fnv1a64(payload)) << "\n"
            << "length=" << payload.size() << "\n"
            << "---\n"
            << payload;
        if (!out) throw ResourceExhausted("short write to cache entry " + tmp);
    }
    fs::rename(tmp, final_path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw ResourceExhausted("cannot move cache entry into place: " + final_path);
    }
}

} // namespace mockpadic::cli
