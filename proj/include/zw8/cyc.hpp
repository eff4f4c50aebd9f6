#pragma once
//
// Exact arithmetic in Z[w] and Q(w) where w is a primitive eighth root of
// unity, w^4 = -1.  Elements are stored on the power basis {1, w, w^2, w^3}.
// The field contains i = w^2 and sqrt(2) = w - w^3.
//

#include <array>
#include <complex>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace zw8 {

using Int = mpz_class;
using Rat = mpq_class;

class FieldElem;

// Integer element a0 + a1*w + a2*w^2 + a3*w^3.
class CycInt {
public:
    CycInt() : c_{0, 0, 0, 0} {}
    CycInt(long n) : c_{Int(n), 0, 0, 0} {}
    CycInt(Int n) : c_{std::move(n), 0, 0, 0} {}
    CycInt(Int a0, Int a1, Int a2, Int a3)
        : c_{std::move(a0), std::move(a1), std::move(a2), std::move(a3)} {}

    static CycInt omega(int k); // w^k for any integer k
    static CycInt sqrt2() { return CycInt(0, 1, 0, -1); }

    const Int& operator[](int i) const { return c_[i]; }
    Int& operator[](int i) { return c_[i]; }

    bool is_zero() const { return c_[0] == 0 && c_[1] == 0 && c_[2] == 0 && c_[3] == 0; }
    bool is_rational() const { return c_[1] == 0 && c_[2] == 0 && c_[3] == 0; }
    bool is_one() const { return c_[0] == 1 && is_rational(); }

    CycInt operator-() const { return CycInt(-c_[0], -c_[1], -c_[2], -c_[3]); }
    CycInt operator+(const CycInt& o) const {
        return CycInt(c_[0] + o.c_[0], c_[1] + o.c_[1], c_[2] + o.c_[2], c_[3] + o.c_[3]);
    }
    CycInt operator-(const CycInt& o) const {
        return CycInt(c_[0] - o.c_[0], c_[1] - o.c_[1], c_[2] - o.c_[2], c_[3] - o.c_[3]);
    }
    CycInt operator*(const CycInt& o) const;
    CycInt& operator+=(const CycInt& o) { return *this = *this + o; }
    CycInt& operator-=(const CycInt& o) { return *this = *this - o; }
    CycInt& operator*=(const CycInt& o) { return *this = *this * o; }

    bool operator==(const CycInt& o) const { return c_ == o.c_; }
    bool operator!=(const CycInt& o) const { return c_ != o.c_; }

    // Galois action w -> w^k, k odd.
    CycInt galois(int k) const;
    // Complex conjugation on both embeddings: w -> w^7.
    CycInt conj() const { return galois(7); }

    // Product of the conjugates over the nontrivial automorphisms,
    // so that x * conj_product(x) = norm(x).
    CycInt conj_product() const;

    // Tr(x) = sum of the four Galois conjugates = 4*a0.
    Int trace() const { return 4 * c_[0]; }
    // N(x) = product of the four conjugates; nonnegative (CM field).
    Int norm() const;

    // Images under the two embeddings eta1: w -> e^{i pi/4}, eta2: w -> e^{3 i pi/4}.
    std::complex<double> embed1() const;
    std::complex<double> embed2() const;
    struct EmbeddingPair {
        std::complex<double> eta1, eta2;
    };
    EmbeddingPair embeddings() const { return {embed1(), embed2()}; }

    std::string str() const;

    // Lexicographic order on coordinates (a0,a1,a2,a3); a deterministic
    // tie-break order, not an arithmetic one.
    bool lex_less(const CycInt& o) const { return c_ < o.c_; }

private:
    std::array<Int, 4> c_;
};

std::ostream& operator<<(std::ostream& os, const CycInt& x);

// Element of Q(w) with exact rational coordinates.
class FieldElem {
public:
    FieldElem() : q_{} {}
    FieldElem(const CycInt& x) : q_{Rat(x[0]), Rat(x[1]), Rat(x[2]), Rat(x[3])} {}
    FieldElem(Rat a0, Rat a1, Rat a2, Rat a3)
        : q_{std::move(a0), std::move(a1), std::move(a2), std::move(a3)} {}

    const Rat& operator[](int i) const { return q_[i]; }

    bool is_zero() const {
        return q_[0] == 0 && q_[1] == 0 && q_[2] == 0 && q_[3] == 0;
    }

    FieldElem operator+(const FieldElem& o) const;
    FieldElem operator-(const FieldElem& o) const;
    FieldElem operator*(const FieldElem& o) const;

    // Tr = 4*q0 (the traces of w, w^2, w^3 vanish).
    Rat trace() const { return 4 * q_[0]; }

    // True iff all coordinates are integers.
    bool is_integral() const;
    CycInt to_cyc() const; // requires is_integral()

    FieldElem inverse() const; // throws on zero
    FieldElem operator/(const FieldElem& o) const { return *this * o.inverse(); }

    // Nearest integer element, rounding each coordinate to nearest.
    CycInt round() const;

private:
    std::array<Rat, 4> q_;
};

// delta = Phi8'(w) = 4 w^3, the pinned generator of the different ideal.
// Tr(x/delta) is an integer for every integral x.
CycInt different_gen();

// Euclidean division: a = q*b + r with N(r) < N(b).  Z[w] is norm-Euclidean;
// rounding the field quotient coordinatewise works everywhere we have tested,
// but a small neighborhood search backs it up.
struct DivResult {
    CycInt quot;
    CycInt rem;
};
DivResult euclid_div(const CycInt& a, const CycInt& b);

// Exact quotient a/b when b | a; throws if not divisible.
CycInt divide_exact(const CycInt& a, const CycInt& b);
bool divides(const CycInt& b, const CycInt& a);

// gcd up to canonicalization of the associate (see units.hpp).
CycInt euclid_gcd(CycInt a, CycInt b);

// Extended gcd: g = u*a + v*b.
struct XgcdResult {
    CycInt g, u, v;
};
XgcdResult euclid_xgcd(const CycInt& a, const CycInt& b);

bool is_unit(const CycInt& x);

} // namespace zw8
