#pragma once
//
// Characters on Z[w]: quartic/quadratic power residue symbols, additive
// characters in the two normalizations (plain trace and trace twisted by the
// different), Dirichlet characters modulo D with brute-force unit-group
// discovery, and Gauss sums.
//

#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "zw8/cyc.hpp"
#include "zw8/factor.hpp"
#include "zw8/modulus.hpp"

namespace zw8 {

using Cplx = std::complex<double>;

// ---------------------------------------------------------------------------
// Power residue symbols

// Value of a power residue symbol: 0 or i^k.
class SymbolValue {
public:
    static SymbolValue zero() { return SymbolValue(-1); }
    static SymbolValue root(int k) { return SymbolValue(((k % 4) + 4) % 4); }

    bool is_zero() const { return k_ < 0; }
    int exponent() const; // throws on zero
    SymbolValue operator*(const SymbolValue& o) const {
        if (is_zero() || o.is_zero()) return zero();
        return root(k_ + o.k_);
    }
    SymbolValue pow(int64_t e) const {
        if (is_zero()) return e == 0 ? root(0) : zero();
        return root(int((k_ * (e % 4) % 4 + 4) % 4));
    }
    SymbolValue square() const { return pow(2); }
    Cplx value() const {
        if (is_zero()) return {0, 0};
        static const Cplx i4[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
        return i4[k_];
    }
    // For quadratic values: +1 or -1.
    int sign() const;
    bool operator==(const SymbolValue& o) const { return k_ == o.k_; }

private:
    explicit SymbolValue(int k) : k_(k) {}
    int k_; // -1 for zero, else exponent of i
};

// (a/c)_k for k in {2,4}.  Prime c: the unique i^j congruent to
// a^{(N(c)-1)/k}; composite odd c: product over the factorization.
// Throws when c is divisible by 1 + w.
SymbolValue power_symbol(const CycInt& a, const CycInt& c, int k);

// Same, for a prime modulus already wrapped as a Modulus (skips factoring).
SymbolValue power_symbol_prime(const CycInt& a, const Modulus& p, int k);

// ---------------------------------------------------------------------------
// Additive characters

enum class AdditiveMode {
    PLAIN,     // e(Tr(alpha))
    DIFFERENT, // e(Tr(alpha/delta)), delta = 4 w^3
};

// Exact phase in [0,1): Tr(alpha) or Tr(alpha/delta) reduced mod 1.
Rat additive_phase(const FieldElem& alpha, AdditiveMode mode);
Cplx additive_char(const FieldElem& alpha, AdditiveMode mode);

// Fast evaluation of x -> e(x/c) (x integral) for a fixed modulus:
// phase(x) = (t . x) / den mod 1 with integer row t.
struct PhaseTable {
    int64_t t[4];
    int64_t den;

    static PhaseTable make(const CycInt& c, AdditiveMode mode);
    // Phase numerator in [0, den).
    int64_t num(const Vec4& x) const {
        __int128 s = 0;
        for (int i = 0; i < 4; ++i) s += (__int128)t[i] * x[i];
        int64_t r = (int64_t)(s % den);
        return r < 0 ? r + den : r;
    }
    Cplx value(const Vec4& x) const {
        double a = 2.0 * 3.14159265358979323846 * (double)num(x) / (double)den;
        return {std::cos(a), std::sin(a)};
    }
};

// ---------------------------------------------------------------------------
// Dirichlet characters modulo D

// Multiplicative structure of (R/D)^*, discovered by brute force: polycyclic
// generator search, then Smith reduction to an independent basis.
class UnitGroup {
public:
    static std::shared_ptr<const UnitGroup> discover(const Modulus& D,
                                                     int64_t norm_bound = 1000000);

    const Modulus& modulus() const { return D_; }
    int64_t order() const { return order_; } // = phi(D)
    int64_t exponent() const { return L_; }  // lcm of cycle orders
    const std::vector<int64_t>& cycle_orders() const { return d_; }
    const std::vector<CycInt>& basis() const { return h_; }

    // Coordinates of a unit residue w.r.t. the basis; nullopt for non-units.
    std::optional<std::vector<int64_t>> coords(const CycInt& x) const;

    // All unit residues in canonical enumeration order.
    std::vector<CycInt> units() const;

private:
    UnitGroup(Modulus D) : D_(std::move(D)) {}
    Modulus D_;
    int64_t order_ = 1, L_ = 1;
    std::vector<int64_t> d_;     // cyclic orders d_1..d_r (all > 1)
    std::vector<CycInt> h_;      // independent generators
    std::vector<uint32_t> idx_;  // packed residue -> packed coords + 1, 0 = non-unit
    int64_t pack_residue(const Vec4& v) const;
    friend class DirichletChar;
};

class DirichletChar {
public:
    DirichletChar(std::shared_ptr<const UnitGroup> g, std::vector<int64_t> t);

    const Modulus& modulus() const { return G_->modulus(); }
    const UnitGroup& group() const { return *G_; }
    int64_t order() const { return order_; }
    bool is_trivial() const { return order_ == 1; }

    // Exact exponent k with value = e^{2 pi i k / common_order}; nullopt when
    // the character vanishes (argument not coprime to D).
    std::optional<int64_t> exponent_of(const CycInt& x) const;
    int64_t common_order() const { return G_->exponent(); }
    Cplx value(const CycInt& x) const;

    DirichletChar power(int64_t e) const;
    DirichletChar conj() const { return power(-1); }
    const std::vector<int64_t>& twist() const { return t_; }

private:
    std::shared_ptr<const UnitGroup> G_;
    std::vector<int64_t> t_; // 0 <= t_i < d_i
    int64_t order_;
};

// All phi(D) characters mod D, trivial character first, deterministic order.
std::vector<DirichletChar> dirichlet_enumerate(const Modulus& D,
                                               int64_t norm_bound = 1000000);

// ---------------------------------------------------------------------------
// Gauss sums

// tau(chi) = sum over units x mod D of chi(x) e(x/D) in the given mode.
Cplx gauss_sum(const DirichletChar& chi, AdditiveMode mode);

// tau of the power residue symbol (./c)_k at an odd modulus c.
Cplx gauss_sum_symbol(int k, const Modulus& c, AdditiveMode mode);

} // namespace zw8
