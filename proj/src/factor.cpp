#include "zw8/factor.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

#include "zw8/units.hpp"

namespace zw8 {

namespace {

uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m) {
    return (uint64_t)((__uint128_t)a * b % m);
}

uint64_t powmod(uint64_t a, uint64_t e, uint64_t m) {
    uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

} // namespace

bool is_prime_u64(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n % p == 0) return n == p;
    }
    uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) d >>= 1, ++s;
    for (uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool comp = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                comp = false;
                break;
            }
        }
        if (comp) return false;
    }
    return true;
}

namespace {

uint64_t pollard_rho(uint64_t n) {
    if ((n & 1) == 0) return 2;
    std::mt19937_64 rng(0x9e3779b97f4a7c15ULL ^ n);
    while (true) {
        uint64_t c = rng() % (n - 1) + 1;
        uint64_t x = rng() % n, y = x, d = 1;
        auto f = [&](uint64_t v) { return (mulmod(v, v, n) + c) % n; };
        uint64_t cnt = 0;
        while (d == 1) {
            x = f(x);
            y = f(f(y));
            uint64_t diff = x > y ? x - y : y - x;
            if (diff == 0) break;
            d = std::gcd(diff, n);
            if (++cnt > (1u << 22)) break;
        }
        if (d != 1 && d != n) return d;
    }
}

void factor_rec(uint64_t n, std::vector<uint64_t>& out) {
    if (n == 1) return;
    if (is_prime_u64(n)) {
        out.push_back(n);
        return;
    }
    uint64_t d = pollard_rho(n);
    factor_rec(d, out);
    factor_rec(n / d, out);
}

// ---- F_{p^2} helpers for the non-split primes -----------------------------

struct Fp2 {
    // x + y*s with s^2 = d (d a quadratic non-residue mod p)
    uint64_t x, y;
};

struct Fp2Ctx {
    uint64_t p, d;
    Fp2 mul(Fp2 a, Fp2 b) const {
        uint64_t nx = (mulmod(a.x, b.x, p) + mulmod(d, mulmod(a.y, b.y, p), p)) % p;
        uint64_t ny = (mulmod(a.x, b.y, p) + mulmod(a.y, b.x, p)) % p;
        return {nx, ny};
    }
    Fp2 pow(Fp2 a, __uint128_t e) const {
        Fp2 r{1, 0};
        while (e) {
            if (e & 1) r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }
    Fp2 frob(Fp2 a) const { // Frobenius x + ys -> x - ys (s^p = -s)
        return {a.x, a.y ? p - a.y : 0};
    }
};

} // namespace

std::vector<std::pair<uint64_t, int>> factor_u64(uint64_t n) {
    std::vector<uint64_t> primes;
    for (uint64_t p = 2; p * p <= n && p < 100000; ++p) {
        while (n % p == 0) {
            primes.push_back(p);
            n /= p;
        }
    }
    factor_rec(n, primes);
    std::sort(primes.begin(), primes.end());
    std::vector<std::pair<uint64_t, int>> out;
    for (uint64_t p : primes) {
        if (!out.empty() && out.back().first == p)
            out.back().second++;
        else
            out.push_back({p, 1});
    }
    return out;
}

std::vector<CycInt> primes_above(uint64_t p) {
    std::vector<CycInt> out;
    if (p == 2) {
        out.push_back(CycInt(1, 1, 0, 0)); // 1 + w, totally ramified
        return out;
    }
    if (p % 8 == 1) {
        // x^4 = -1 mod p has four roots g^{(p-1)/8 * odd}.
        auto pm1_factors = factor_u64(p - 1);
        uint64_t g = 2;
        for (;; ++g) {
            bool ok = true;
            for (auto [q, e] : pm1_factors)
                if (powmod(g, (p - 1) / q, p) == 1) {
                    ok = false;
                    break;
                }
            if (ok) break;
        }
        uint64_t r = powmod(g, (p - 1) / 8, p);
        uint64_t rr = r;
        for (int k = 0; k < 4; ++k) {
            out.push_back(euclid_gcd(CycInt((long)p), CycInt::omega(1) - CycInt(Int((unsigned long)rr))));
            rr = mulmod(rr, mulmod(r, r, p), p); // next odd power r^{2k+1}
        }
    } else {
        // Residue degree 2: factor x^4 + 1 into the two conjugate quadratics
        // over F_p using a primitive eighth root of unity in F_{p^2}.
        uint64_t d = 2;
        while (powmod(d, (p - 1) / 2, p) == 1) ++d;
        Fp2Ctx F{p, d};
        std::mt19937_64 rng(12345 ^ p);
        Fp2 zeta{0, 0};
        while (true) {
            Fp2 a{rng() % p, rng() % p};
            if (a.x == 0 && a.y == 0) continue;
            Fp2 z = F.pow(a, ((__uint128_t)p * p - 1) / 8);
            Fp2 z4 = F.pow(z, 4);
            if (z4.x == p - 1 && z4.y == 0) {
                zeta = z;
                break;
            }
        }
        // The two Frobenius orbits among the primitive eighth roots: {zeta,
        // zeta^p} and {zeta^k, ...} for the smallest odd k not in the first.
        auto make_prime = [&](Fp2 z) {
            Fp2 zp = F.pow(z, p); // Frobenius
            Fp2 s = {(z.x + zp.x) % p, (z.y + zp.y) % p};
            Fp2 n0 = F.mul(z, zp);
            if (s.y != 0 || n0.y != 0) throw std::logic_error("primes_above: orbit not rational");
            // quadratic t^2 - s t + n0
            CycInt q = CycInt::omega(1) * CycInt::omega(1) -
                       CycInt(Int((unsigned long)s.x)) * CycInt::omega(1) +
                       CycInt(Int((unsigned long)n0.x));
            return euclid_gcd(CycInt((long)p), q);
        };
        out.push_back(make_prime(zeta));
        // find a primitive eighth root outside the first orbit
        Fp2 zp = F.pow(zeta, p);
        for (int k = 3; k <= 7; k += 2) {
            Fp2 z2 = F.pow(zeta, k);
            if ((z2.x == zp.x && z2.y == zp.y)) continue;
            Fp2 z2p = F.pow(z2, p);
            if ((z2p.x == zeta.x && z2p.y == zeta.y)) continue;
            out.push_back(make_prime(z2));
            break;
        }
    }
    for (CycInt& q : out) q = canonical_assoc(q);
    std::sort(out.begin(), out.end(), [](const CycInt& a, const CycInt& b) { return a.lex_less(b); });
    return out;
}

Factorization factor(const CycInt& c, int64_t norm_bound) {
    if (c.is_zero()) throw std::domain_error("factor: zero input");
    Int n = c.norm();
    if (n == 1) throw std::domain_error("factor: unit input");
    if (n > Int(norm_bound))
        throw std::domain_error("factor: norm " + n.get_str() + " exceeds bound");

    uint64_t nn = mpz_get_ui(n.get_mpz_t());
    Factorization out;
    CycInt rest = c;
    for (auto [p, e] : factor_u64(nn)) {
        (void)e;
        for (const CycInt& q : primes_above(p)) {
            int mult = 0;
            while (divides(q, rest)) {
                rest = divide_exact(rest, q);
                ++mult;
            }
            if (mult > 0) out.factors.push_back({q, mult});
        }
    }
    if (!is_unit(rest))
        throw std::logic_error("factor: leftover cofactor " + rest.str());
    out.unit = rest;
    return out;
}

} // namespace zw8
