#pragma once
//
// Complete exponential sums over Z[w] and their closed forms: the brute-force
// evaluator, quartic-twisted Kloosterman sums S4, the Salie-type prime-power
// evaluation, the quadratic Gauss-sum closed form, and the identity suite
// linking quartic sums to Kloosterman sums at prime, prime-power and
// composite moduli.
//

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "zw8/characters.hpp"
#include "zw8/cyc.hpp"
#include "zw8/factor.hpp"
#include "zw8/ffield.hpp"
#include "zw8/modulus.hpp"

namespace zw8 {

// Sparse integral polynomial sum_k coeff_k x^{e_k}.
struct PolySpec {
    std::vector<std::pair<CycInt, int64_t>> terms;

    PolySpec() = default;
    PolySpec(std::initializer_list<std::pair<CycInt, int64_t>> t);
    static PolySpec quartic_even(const CycInt& A, const CycInt& B); // A x^4 + B x^2
    static PolySpec quadratic(const CycInt& A, const CycInt& B);    // A x^2 + B x
    void validate() const; // distinct nonnegative exponents
    int64_t max_exp() const;
};

struct TwistSpec {
    enum Kind { None, Symbol, Dirichlet } kind = None;
    int symbol_k = 4; // for Kind::Symbol: 2 or 4
    std::optional<DirichletChar> chi;

    static TwistSpec none() { return {}; }
    static TwistSpec symbol(int k) { return {Symbol, k, std::nullopt}; }
    static TwistSpec dirichlet(DirichletChar c) { return {Dirichlet, 4, std::move(c)}; }
};

struct SumValue {
    Cplx value{0, 0};
    Int modulus_norm{0};
    enum Method { Brute, Closed, Assembled } method = Brute;
};

// Scratch tables for sums over a fixed modulus: unit mask, inverses, residue
// symbol exponents and additive phases, all indexed by the packed residue.
// The symbol and inverse tables are built lazily on first use; a context is
// therefore not safe to share across threads (use one per worker).
class SumContext {
public:
    SumContext(const Modulus& c, AdditiveMode mode);

    const Modulus& modulus() const { return c_; }
    AdditiveMode mode() const { return mode_; }
    int64_t size() const { return N_; }

    int64_t index_of(const Vec4& v) const;
    const Vec4& residue(int64_t idx) const { return res_[idx]; }
    bool unit(int64_t idx) const { return unit_[idx] != 0; }
    int64_t inverse(int64_t idx) const; // index of the inverse residue (units only)
    int quartic_exponent(int64_t idx) const; // -1 on non-units
    // e(x/c) for the residue with this index.
    Cplx phase(int64_t idx) const { return phase_[idx]; }
    Cplx phase_of(const CycInt& x) const;

    const Factorization& factors() const { return fac_; }
    int64_t unit_count() const { return phi_; }

private:
    Modulus c_;
    AdditiveMode mode_;
    int64_t N_;
    Factorization fac_;
    std::vector<Vec4> res_;
    std::vector<uint8_t> unit_;
    std::vector<Cplx> phase_;
    mutable std::vector<int8_t> quartic_; // lazy
    mutable std::vector<int32_t> inv_;    // lazy
    int64_t phi_ = 0;
    void ensure_quartic() const;
};

// sum over x mod c of twist(x) e(f(x)/c); symbol twists restrict to units.
SumValue complete_sum(const PolySpec& f, const Modulus& c, const TwistSpec& twist,
                      AdditiveMode mode);
SumValue complete_sum(const PolySpec& f, const SumContext& ctx, const TwistSpec& twist);

// S4(r, s, c) = sum over units a, d = a^{-1}, of (a/c)_4 e((ra + sd)/c).
// Unit modulus gives 1 by convention.
SumValue kloosterman_s4(const CycInt& r, const CycInt& s, const Modulus& c, AdditiveMode mode);
SumValue kloosterman_s4(const CycInt& r, const CycInt& s, const SumContext& ctx);

// Same sum at a prime modulus via one walk of the cyclic unit group
// (no per-residue symbol exponentiation); used on large prime moduli.
SumValue kloosterman_s4_prime(const CycInt& r, const CycInt& s, const Modulus& p,
                              AdditiveMode mode);

// All solutions of u^2 = b mod p^m (p an odd prime of Z[w], gcd(b,p) = 1):
// Tonelli-Shanks in the residue field, then Hensel lifting.  Empty when b is
// a quadratic non-residue.
std::vector<CycInt> sqrt_mod(const CycInt& b, const CycInt& p, int m);

// Salie-type closed form for S4(a, b, p^m), m >= 2:
//   even m = 2k:  N(p)^k sum_{u^2 = b/a} (u/p^m)_4 e(2au/p^m)
//   odd  m = 2k+1: N(p)^{k+1/2} (a/p)_2 (same sum)
// In PLAIN mode the odd case carries the extra factor (w/p)_2 coming from
// rescaling the additive character by the different generator.
SumValue s4_prime_power(const CycInt& a, const CycInt& b, const CycInt& p, int m,
                        AdditiveMode mode);

// Closed form of sum_x e((m x^2 + n x + r)/c) for c = 1 mod 4, gcd(2m,c) = 1:
//   (m/c)_2 e(r/c) e(-n^2/(4m) /c) sqrt(N(c)).
struct QuadClosed {
    Cplx value{0, 0};
    SymbolValue sym = SymbolValue::root(0); // (m/c)_2
    Cplx phase_r{1, 0};                     // e(r/c)
    Cplx phase_square{1, 0};                // e(-n^2 inv(4m)/c)
    double scale = 1;                       // sqrt(N(c))
};
QuadClosed quad_sum_closed(const CycInt& m, const CycInt& n, const CycInt& r,
                           const Modulus& c, AdditiveMode mode);

// ---------------------------------------------------------------------------
// Identity reports

struct RhsTerm {
    std::string label;
    Cplx value;
};

struct IdentityReport {
    std::string statement_id;
    Int modulus_norm;
    Cplx lhs;
    std::vector<RhsTerm> rhs_terms;
    Cplx rhs_total;
    double residual; // |lhs - rhs_total|
    uint64_t seed = 0;
    AdditiveMode mode;
    std::string note; // alternate-convention diagnostics

    std::string to_json() const;
};

// Theorem: at a prime p with N(p) = 1 mod 4 and gcd(AB, p) = 1,
//   sum e((Ax^4+Bx^2)/p) - sum e((Ax^2+Bx)/p)
//     = sum (x/p)_2 e((Ax^2+Bx)/p)
//     = (AB/p)_2 e(-B^2/(8A) /p) S4(B^2/(16A), B^2/(16A), p).
// The report carries all three values; residual = worst pairwise gap.
IdentityReport identity_prime(const CycInt& A, const CycInt& B, const Modulus& p,
                              AdditiveMode mode);
// Context-sharing variant for sweeps with many (A, B) at one prime.
IdentityReport identity_prime(const CycInt& A, const CycInt& B, const SumContext& ctx);

// Prime-power version (m >= 2, A and B squares, B = 4B'); m = 1 delegates.
IdentityReport identity_prime_power(const CycInt& A, const CycInt& B, const CycInt& p,
                                    int m, AdditiveMode mode);

// Composite version: LHS = Kloosterman term + quadratic term + cross terms
// over coprime decompositions c = n*m.
IdentityReport identity_composite(const CycInt& A, const CycInt& B, const Modulus& c,
                                  AdditiveMode mode);

// Number of ordered coprime decompositions c = n*m with n,m != c.
int64_t cross_term_count(const Factorization& f);

// Residual of the cross-term reduction
//   sum_{x(m)} e(inv(n)(Ax^2+Bx)/m)
//     = (n/m)_2 e(B^2/(4mA) /n) e(-B^2/(4A) /(nm)) sqrt(N(m)).
double cross_reduction_check(const CycInt& A, const CycInt& B, const CycInt& n,
                             const CycInt& m, AdditiveMode mode);

// Elementary reciprocity e(inv(A)/B) = e(-inv(B)/A) e(1/(AB)) checked in
// exact rational phases; returns the exact phase distance (0 when it holds).
Rat reciprocity_residual(const CycInt& A, const CycInt& B, AdditiveMode mode);

// ---------------------------------------------------------------------------
// Appendix identity over a rational prime field (higher-power analogue)

struct CnnReport {
    int64_t p, n, A, B;
    Cplx lhs, rhs;
    double residual;
};

// sum_x e((A x^{2n} + B x^n)/p) against the character double-sum form;
// requires p = 1 mod 2n, gcd(AB, p) = 1.
CnnReport cnn_check(int64_t n, int64_t p, int64_t A, int64_t B);

bool is_square(const CycInt& x);
std::optional<CycInt> sqrt_exact(const CycInt& x);

} // namespace zw8
