#include "zw8/units.hpp"

#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "zw8/modulus.hpp"

namespace zw8 {

CycInt fundamental_unit() { return CycInt(1, 1, 0, -1); }

CycInt unit_power(int64_t k) {
    CycInt eps = fundamental_unit();
    if (k < 0) {
        // (1+sqrt2)^{-1} = sqrt2 - 1
        eps = CycInt(-1, 1, 0, -1);
        k = -k;
    }
    CycInt r(1), b = eps;
    while (k) {
        if (k & 1) r *= b;
        b *= b;
        k >>= 1;
    }
    return r;
}

namespace {

double log_embed_ratio(const CycInt& x) {
    return std::log(std::abs(x.embed1())) - std::log(std::abs(x.embed2()));
}

// |x^{eta1}|^2 as an exact element a + b sqrt2 of Z[sqrt2]; the eta2 value is
// its conjugate a - b sqrt2.  Used for exact balancing decisions.
struct Zs2 {
    Int a, b;
    Zs2 mul(const Zs2& o) const { return {a * o.a + 2 * b * o.b, a * o.b + b * o.a}; }
    Zs2 conj() const { return {a, -b}; }
    int sign() const {
        int sa = mpz_sgn(a.get_mpz_t()), sb = mpz_sgn(b.get_mpz_t());
        if (sa >= 0 && sb >= 0) return (sa == 0 && sb == 0) ? 0 : 1;
        if (sa <= 0 && sb <= 0) return -1;
        Int d = a * a - 2 * b * b;
        int sd = mpz_sgn(d.get_mpz_t());
        return sa > 0 ? sd : -sd;
    }
    bool operator>=(const Zs2& o) const {
        Zs2 d{a - o.a, b - o.b};
        return d.sign() >= 0;
    }
};

Zs2 embed1_sq(const CycInt& x) {
    // x * galois(x, 7) lies in Z[sqrt2] = Z + Z(w - w^3); its eta1 image is
    // |x^{eta1}|^2.
    CycInt m = x * x.galois(7);
    if (m[1] != -m[3] || m[2] != 0)
        throw std::logic_error("embed1_sq: product not in Z[sqrt2]");
    return {m[0], m[1]};
}

// Exact balanced window: choose the power k of the stabilizer unit u (with
// ratio multiplier (1+sqrt2)^{2t} where t = log_{1+sqrt2}|u^{eta1}|) so that
// W = |c^{eta1}|^2 / |c^{eta2}|^2 lands in [(1+sqrt2)^{-2t}, (1+sqrt2)^{2t}).
CycInt balance_exact(const CycInt& c, int unit_log) {
    CycInt step = unit_power(unit_log);
    double lr = log_embed_ratio(c);
    double stepl = 2.0 * unit_log * std::log(1.0 + std::sqrt(2.0));
    long k = std::lround(-lr / stepl);
    CycInt cur = c * unit_power(unit_log * k);
    Zs2 win{1, 0};
    for (int i = 0; i < 2 * unit_log; ++i) win = win.mul(Zs2{1, 1}); // (1+sqrt2)^{2t}
    auto lt = [](const Zs2& x, const Zs2& y) { // x < y
        Zs2 d{y.a - x.a, y.b - x.b};
        return d.sign() > 0;
    };
    // the float guess is off by at most a step or two; walk into the window
    for (int guard = 0; guard < 8; ++guard) {
        Zs2 P = embed1_sq(cur), Q = P.conj();
        if (lt(P.mul(win), Q)) { // W < (1+sqrt2)^{-2t}
            cur = cur * step;
        } else if (!lt(P, Q.mul(win))) { // W >= (1+sqrt2)^{2t}
            cur = divide_exact(cur, step);
        } else {
            return cur;
        }
    }
    throw std::logic_error("balance_exact: window search failed");
}

struct UnitTables {
    Modulus mod4 = Modulus(CycInt(4));
    // All units modulo 4: key = reduced residue coords, value = (t, j) with
    // unit = w^t * eps^j, eps = 1+sqrt2.  eps has order 4 mod 4, w order 8.
    std::map<std::array<int64_t, 4>, std::pair<int, int>> image;
    // Units congruent to 1 mod 4 form <eps^4> (times nothing else); checked
    // at construction.
    std::vector<std::pair<int, int>> stabilizer; // list of (t, j) with w^t eps^j = 1 mod 4

    UnitTables() {
        CycInt eps = fundamental_unit();
        for (int t = 0; t < 8; ++t) {
            for (int j = 0; j < 4; ++j) {
                CycInt u = CycInt::omega(t) * unit_power(j);
                Vec4 v = mod4.to_vec(u);
                std::array<int64_t, 4> key = {v[0], v[1], v[2], v[3]};
                if (!image.count(key)) image[key] = {t, j};
                if (mod4.congruent(u, CycInt(1)) && (t != 0 || j != 0))
                    stabilizer.push_back({t, j});
            }
        }
    }
};

const UnitTables& tables() {
    static UnitTables t;
    return t;
}

} // namespace

std::optional<NormalizeResult> try_normalize_assoc(const CycInt& c) {
    if (c.is_zero()) return std::nullopt;
    const UnitTables& T = tables();
    if (!is_unit(euclid_gcd(c, CycInt(2)))) return std::nullopt;

    // Need unit u with u*c = 1 mod 4, i.e. u = c^{-1} in (R/4)^* lying in the
    // unit image.
    CycInt cinv = inverse_mod(c, T.mod4);
    Vec4 v = T.mod4.to_vec(cinv);
    auto it = T.image.find({v[0], v[1], v[2], v[3]});
    if (it == T.image.end()) return std::nullopt;
    auto [t, j] = it->second;
    CycInt u = CycInt::omega(t) * unit_power(j);
    CycInt c1 = u * c;

    // Balance the embeddings over the stabilizer of the congruence class:
    // eps^4 = 17 + 12 sqrt2 is the smallest unit fixing the class mod 4, so
    // pick the unique power landing the embedding ratio in the exact window.
    CycInt best = balance_exact(c1, 4);
    CycInt best_u = divide_exact(best, c);
    return NormalizeResult{best, best_u};
}

NormalizeResult normalize_assoc(const CycInt& c) {
    auto r = try_normalize_assoc(c);
    if (!r) {
        if (c.is_zero() || !is_unit(euclid_gcd(c, CycInt(2))))
            throw std::domain_error("normalize_assoc: input not coprime to 2");
        throw std::domain_error("normalize_assoc: no associate of " + c.str() +
                                " is congruent to 1 mod 4");
    }
    return *r;
}

CycInt canonical_assoc(const CycInt& c) {
    if (c.is_zero()) return c;
    auto n = try_normalize_assoc(c);
    if (n) return n->value;
    // Balance embeddings with the fundamental unit, then take the
    // lexicographically minimal torsion associate.
    CycInt base = balance_exact(c, 1);
    CycInt best = base;
    for (int t = 1; t < 8; ++t) {
        CycInt cand = base * CycInt::omega(t);
        if (cand.lex_less(best)) best = cand;
    }
    return best;
}

bool is_associate(const CycInt& a, const CycInt& b) {
    if (a.is_zero() || b.is_zero()) return a.is_zero() && b.is_zero();
    if (!divides(b, a)) return false;
    return is_unit(divide_exact(a, b));
}

} // namespace zw8
