// config.cpp — parser and typed accessors for run configuration

#include "dimerdyn/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "dimerdyn/error.hpp"
#include "dimerdyn/spectral.hpp"

namespace dimerdyn {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool valid_key(const std::string& k)
{
    if (k.empty() || k.front() == '.' || k.back() == '.')
        return false;
    for (char c : k)
        if (!((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' || c == '.'))
            return false;
    return true;
}

std::optional<double> to_double(const std::string& s)
{
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (first != last && *first == '+')
        ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last)
        return std::nullopt;
    return v;
}

} // namespace

Config Config::parse(std::istream& in, const std::string& source)
{
    Config cfg;
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string text = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (text.empty())
            continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos)
            throw ConfigError(source + ": expected 'key = value', got '" + text + "'", line);
        const std::string key = trim(text.substr(0, eq));
        const std::string value = trim(text.substr(eq + 1));
        if (!valid_key(key))
            throw ConfigError(source + ": invalid key '" + key + "'", line);
        if (value.empty())
            throw ConfigError(source + ": empty value for '" + key + "'", line);
        if (cfg.entries_.count(key))
            throw ConfigError(source + ": duplicate key '" + key + "' (first at line " +
                                  std::to_string(cfg.entries_[key].line) + ")",
                              line);
        cfg.entries_[key] = {value, source, line};
    }
    return cfg;
}

Config Config::parse(const std::string& text, const std::string& source)
{
    std::istringstream in(text);
    return parse(in, source);
}

Config Config::load(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path.string() + "'");
    return parse(in, path.string());
}

void Config::set(const std::string& key, const std::string& value, const std::string& source)
{
    if (!valid_key(key))
        throw ConfigError("invalid key '" + key + "'");
    entries_[key] = {value, source, 0};
}

void Config::merge(const Config& other)
{
    for (const auto& [k, e] : other.entries_)
        entries_[k] = e;
}

bool Config::has(const std::string& key) const { return entries_.count(key) > 0; }

void Config::erase(const std::string& key) { entries_.erase(key); }

const Config::Entry* Config::lookup(const std::string& key) const
{
    used_.insert(key);
    const auto it = entries_.find(key);
    return it == entries_.end() ? nullptr : &it->second;
}

void Config::fail(const std::string& key, const std::string& what) const
{
    const auto it = entries_.find(key);
    if (it == entries_.end())
        throw ConfigError("'" + key + "': " + what);
    throw ConfigError(it->second.source + ": '" + key + "': " + what, it->second.line);
}

std::optional<std::string> Config::get(const std::string& key) const
{
    const Entry* e = lookup(key);
    if (!e)
        return std::nullopt;
    return e->value;
}

std::string Config::get_string(const std::string& key) const
{
    const Entry* e = lookup(key);
    if (!e)
        fail(key, "required key is missing");
    return e->value;
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const
{
    const Entry* e = lookup(key);
    return e ? e->value : fallback;
}

std::optional<double> Config::find_double(const std::string& key) const
{
    const Entry* e = lookup(key);
    if (!e)
        return std::nullopt;
    const auto v = to_double(e->value);
    if (!v)
        fail(key, "not a number: '" + e->value + "'");
    return v;
}

double Config::get_double(const std::string& key) const
{
    const auto v = find_double(key);
    if (!v)
        fail(key, "required key is missing");
    return *v;
}

double Config::get_double(const std::string& key, double fallback) const
{
    return find_double(key).value_or(fallback);
}

long long Config::get_int(const std::string& key, long long fallback) const
{
    const Entry* e = lookup(key);
    if (!e)
        return fallback;
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(e->value.data(), e->value.data() + e->value.size(), v);
    if (ec != std::errc() || ptr != e->value.data() + e->value.size())
        fail(key, "not an integer: '" + e->value + "'");
    return v;
}

std::uint64_t Config::get_uint64(const std::string& key, std::uint64_t fallback) const
{
    const Entry* e = lookup(key);
    if (!e)
        return fallback;
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(e->value.data(), e->value.data() + e->value.size(), v);
    if (ec != std::errc() || ptr != e->value.data() + e->value.size())
        fail(key, "not an unsigned integer: '" + e->value + "'");
    return v;
}

std::vector<double> Config::get_list(const std::string& key) const
{
    const Entry* e = lookup(key);
    if (!e)
        return {};
    std::vector<double> out;
    std::stringstream ss(e->value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto v = to_double(trim(item));
        if (!v)
            fail(key, "bad list element '" + trim(item) + "'");
        out.push_back(*v);
    }
    return out;
}

std::optional<double> Config::find_energy(const std::string& stem) const
{
    const auto mev = find_double(stem + "_mev");
    const auto ps = find_double(stem + "_ps_inv");
    if (mev && ps)
        fail(stem + "_ps_inv", "give exactly one of " + stem + "_mev, " + stem + "_ps_inv");
    if (mev)
        return mev_to_ps_inv(*mev);
    return ps;
}

double Config::get_energy(const std::string& stem) const
{
    const auto v = find_energy(stem);
    if (!v)
        throw ConfigError("'" + stem + "': required energy missing (use " + stem + "_mev or " + stem + "_ps_inv)");
    return *v;
}

std::vector<std::string> Config::unused_keys() const
{
    std::vector<std::string> out;
    for (const auto& [k, e] : entries_)
        if (!used_.count(k))
            out.push_back(k);
    return out;
}

std::string Config::to_text() const
{
    std::string out;
    for (const auto& [k, e] : entries_)
        out += k + " = " + e.value + "\n";
    return out;
}

std::string format_number(double v)
{
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

} // namespace dimerdyn
