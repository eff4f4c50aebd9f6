#include "zw8/runconfig.hpp"

#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace zw8 {

RunConfig RunConfig::defaults() {
    RunConfig c;
    c.kv = {
        {"command", "verify"},
        {"suite", "all"},
        {"kind", "int"},
        {"poly", "1,0,0,0"},
        {"A", "1"},
        {"B", "4"},
        {"F", "4"},
        {"D", "-3"},
        {"char", "trivial"},
        {"mode", "different"},
        {"weight_lo", "0.5"},
        {"weight_hi", "2.0"},
        {"x_min", "1024"},
        {"x_max", "131072"},
        {"x_ratio", "2"},
        {"seed", "3141592653"},
        {"workers", "1"},
        {"threshold_scale", "1"},
        {"out", ""},
        {"in", ""},
        {"table_p", "17"},
        {"table_jmax", "4"},
        {"fit_lo", "0"},
        {"fit_hi", "0"},
        {"expected_exponent", "0"},
        {"quick", "0"},
    };
    return c;
}

RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    RunConfig c;
    std::string line;
    while (std::getline(in, line)) {
        size_t h = line.find('#');
        if (h != std::string::npos) line.resize(h);
        size_t eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            size_t a = s.find_first_not_of(" \t\r");
            size_t b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        std::string k = trim(line.substr(0, eq)), v = trim(line.substr(eq + 1));
        if (!k.empty()) c.kv[k] = v;
    }
    return c;
}

void RunConfig::merge(const RunConfig& over) {
    for (auto& [k, v] : over.kv) kv[k] = v;
}

void RunConfig::merge_env(char** envp) {
    if (!envp) return;
    for (char** e = envp; *e; ++e) {
        const char* s = *e;
        if (std::strncmp(s, "ZW8_", 4) != 0) continue;
        const char* eq = std::strchr(s, '=');
        if (!eq) continue;
        std::string key(s + 4, eq - s - 4);
        for (char& ch : key) ch = (char)std::tolower((unsigned char)ch);
        kv[key] = eq + 1;
    }
}

std::string RunConfig::canonical() const {
    std::ostringstream os;
    for (auto& [k, v] : kv) os << k << "=" << v << "\n";
    return os.str();
}

const std::string& RunConfig::get(const std::string& key) const {
    auto it = kv.find(key);
    if (it == kv.end()) throw std::runtime_error("config: missing key " + key);
    return it->second;
}

int64_t RunConfig::get_int(const std::string& key) const {
    return std::stoll(get(key));
}

double RunConfig::get_double(const std::string& key) const {
    return std::stod(get(key));
}

CycInt RunConfig::get_cyc(const std::string& key) const {
    const std::string& s = get(key);
    std::vector<long> parts;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) parts.push_back(std::stol(tok));
    if (parts.size() == 1) return CycInt(parts[0]);
    if (parts.size() == 4) return CycInt(parts[0], parts[1], parts[2], parts[3]);
    throw std::runtime_error("config: bad element " + s + " for " + key);
}

AdditiveMode RunConfig::get_mode() const {
    const std::string& m = get("mode");
    if (m == "plain") return AdditiveMode::PLAIN;
    if (m == "different") return AdditiveMode::DIFFERENT;
    throw std::runtime_error("config: bad mode " + m);
}

std::vector<std::pair<int64_t, int64_t>> parse_poly(const std::string& s) {
    std::vector<int64_t> coeffs;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) coeffs.push_back(std::stoll(tok));
    if (coeffs.empty()) throw std::runtime_error("poly: empty spec");
    std::vector<std::pair<int64_t, int64_t>> terms;
    int64_t deg = (int64_t)coeffs.size() - 1;
    for (size_t i = 0; i < coeffs.size(); ++i) {
        if (coeffs[i] != 0) terms.push_back({coeffs[i], deg - (int64_t)i});
    }
    if (terms.empty()) terms.push_back({0, 0});
    return terms;
}

std::optional<DirichletChar> select_character(const std::string& sel, const Modulus& D) {
    if (sel == "trivial") return std::nullopt;
    auto chars = dirichlet_enumerate(D);
    if (sel.rfind("idx:", 0) == 0) {
        size_t idx = (size_t)std::stoll(sel.substr(4));
        if (idx >= chars.size()) throw std::runtime_error("char: index out of range");
        return chars[idx];
    }
    int64_t want = sel == "quadratic" ? 2 : sel == "quartic" ? 4 : -1;
    if (want < 0) throw std::runtime_error("char: bad selector " + sel);
    for (auto& c : chars)
        if (c.order() == want) return c;
    throw std::runtime_error("char: no character of order " + std::to_string(want) +
                             " modulo the configured D");
}

} // namespace zw8
