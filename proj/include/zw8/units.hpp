#pragma once
//
// Unit handling: the unit group of Z[w] is {±w^k} x <1+sqrt2>.  Elements
// coprime to 2 whose class mod 4 lies in the image of the units admit an
// associate congruent to 1 mod 4; normalize_assoc finds the canonical one.
//

#include <optional>
#include <utility>

#include "zw8/cyc.hpp"

namespace zw8 {

// Fundamental unit 1 + sqrt(2) = 1 + w - w^3.
CycInt fundamental_unit();

// eps^k for k of either sign.
CycInt unit_power(int64_t k);

struct NormalizeResult {
    CycInt value; // = unit * input, congruent to 1 mod 4
    CycInt unit;
};

// Finds the canonical associate of c that is congruent to 1 mod 4.
// Canonical: among all such associates, balance |eta1| vs |eta2| as closely
// as possible (unique minimizer of |log ratio| over the stabilizer).
// Requires gcd(c, 2) to be a unit; throws if c has no associate = 1 mod 4.
NormalizeResult normalize_assoc(const CycInt& c);
std::optional<NormalizeResult> try_normalize_assoc(const CycInt& c);

// Deterministic associate used where normalize_assoc does not apply:
// fundamental-unit power balancing the embeddings, then lexicographically
// minimal coordinate tuple over the 16 torsion associates.
CycInt canonical_assoc(const CycInt& c);

bool is_associate(const CycInt& a, const CycInt& b);

} // namespace zw8
