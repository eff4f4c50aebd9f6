#pragma once
//
// Flat key=value run configuration with CLI-flag and environment overrides.
// Parsed configs round-trip to an identical canonical serialization.
//

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "zw8/characters.hpp"
#include "zw8/cyc.hpp"

namespace zw8 {

struct RunConfig {
    std::map<std::string, std::string> kv;

    static RunConfig defaults();
    static RunConfig from_file(const std::string& path);
    // Later sources override earlier keys.
    void merge(const RunConfig& over);
    // Environment overrides with prefix ZW8_ (ZW8_SEED=7 sets seed=7).
    void merge_env(char** envp);

    std::string canonical() const; // sorted key=value lines

    const std::string& get(const std::string& key) const;
    bool has(const std::string& key) const { return kv.count(key) > 0; }
    void set(const std::string& key, const std::string& v) { kv[key] = v; }

    int64_t get_int(const std::string& key) const;
    double get_double(const std::string& key) const;
    CycInt get_cyc(const std::string& key) const; // "n" or "a0,a1,a2,a3"
    AdditiveMode get_mode() const;
};

// "1,0,0,0" = dense coefficients from the leading exponent down to 0.
std::vector<std::pair<int64_t, int64_t>> parse_poly(const std::string& s);

// Character selector: trivial | quadratic | quartic | idx:N, resolved
// against the character list mod D.  Throws if unavailable.
std::optional<DirichletChar> select_character(const std::string& sel, const Modulus& D);

} // namespace zw8
