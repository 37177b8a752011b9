// config.hpp — flat key = value configuration with dotted section names

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace dimerdyn {

// Syntax: one `key = value` per line, `#` starts a comment, keys are
// [a-z0-9_.]+. Later assignments override earlier ones only across
// sources (merge); a key repeated within one source is an error.
class Config {
public:
    struct Entry {
        std::string value;
        std::string source;
        int line{0};
    };

    static Config parse(std::istream& in, const std::string& source = "<input>");
    static Config parse(const std::string& text, const std::string& source = "<input>");
    static Config load(const std::filesystem::path& path);

    void set(const std::string& key, const std::string& value, const std::string& source = "<set>");
    void merge(const Config& other);   // other wins
    bool has(const std::string& key) const;
    void erase(const std::string& key);

    std::optional<std::string> get(const std::string& key) const;
    std::string get_string(const std::string& key) const;   // required
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    std::optional<double> find_double(const std::string& key) const;
    long long get_int(const std::string& key, long long fallback) const;
    std::uint64_t get_uint64(const std::string& key, std::uint64_t fallback) const;
    std::vector<double> get_list(const std::string& key) const;   // comma-separated

    // Energy given as exactly one of <stem>_mev, <stem>_ps_inv; value in ps⁻¹.
    std::optional<double> find_energy(const std::string& stem) const;
    double get_energy(const std::string& stem) const;

    const std::map<std::string, Entry>& entries() const { return entries_; }

    // Keys never read through a getter; used to reject typos.
    std::vector<std::string> unused_keys() const;
    void mark_used(const std::string& key) const { used_.insert(key); }

    // Sorted `key = value` lines, reparseable.
    std::string to_text() const;

private:
    const Entry* lookup(const std::string& key) const;
    [[noreturn]] void fail(const std::string& key, const std::string& what) const;

    std::map<std::string, Entry> entries_;
    mutable std::set<std::string> used_;
};

// Shortest round-trip decimal form of a double.
std::string format_number(double v);

} // namespace dimerdyn
