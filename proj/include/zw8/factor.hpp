#pragma once
//
// Factorization into primes of Z[w].  Strategy: factor |N(c)| over Z, then
// lift each rational prime via gcds with w - r for roots r of x^4 + 1 mod p
// (or the quadratic factors when p does not split completely).
//

#include <cstdint>
#include <vector>

#include "zw8/cyc.hpp"

namespace zw8 {

struct PrimePower {
    CycInt prime;
    int exp;
};

struct Factorization {
    std::vector<PrimePower> factors; // canonicalized primes, deterministic order
    CycInt unit;                     // c = unit * prod prime^exp
};

inline constexpr int64_t kDefaultFactorBound = 1000000000000LL; // 10^12

// Throws std::domain_error on zero/unit input and when |N(c)| exceeds the bound.
Factorization factor(const CycInt& c, int64_t norm_bound = kDefaultFactorBound);

// Rational prime factorization helper (trial division + Pollard rho).
std::vector<std::pair<uint64_t, int>> factor_u64(uint64_t n);
bool is_prime_u64(uint64_t n);

// One canonical prime of Z[w] above each rational prime p, together with the
// residue degree f (norm = p^f).  For split p there are four primes; all are
// returned.  p = 2 yields the single ramified prime 1 + w.
std::vector<CycInt> primes_above(uint64_t p);

} // namespace zw8
