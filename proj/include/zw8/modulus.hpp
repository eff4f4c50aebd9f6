#pragma once
//
// Residue arithmetic modulo a nonzero c in Z[w]: Hermite normal form of the
// lattice c*Z[w] inside Z^4, canonical representatives, reduction, modular
// inverse and CRT.
//
// Moduli whose norm fits comfortably in 64 bits additionally carry a plain
// int64 "fast form" used by the brute-force summation loops.
//

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "zw8/cyc.hpp"

namespace zw8 {

// Coordinate vector of a reduced residue; valid alongside the SmallForm that
// produced it (all entries in [0, diag[i])).
using Vec4 = std::array<int64_t, 4>;

struct SmallForm {
    int64_t diag[4];  // HNF pivots d0..d3, product = N(c)
    int64_t h[4][4];  // h[i][j]: row i of HNF column j (pivot at h[j][j])
    int64_t norm;
    bool fits64;      // products of reduced coordinates stay within int64

    void reduce(Vec4& v) const {
        for (int j = 0; j < 4; ++j) {
            int64_t q = v[j] / diag[j];
            if (v[j] % diag[j] < 0) --q;
            if (q == 0) continue;
            for (int i = j; i < 4; ++i) v[i] -= q * h[i][j];
        }
    }
    Vec4 mul(const Vec4& a, const Vec4& b) const {
        Vec4 r;
        if (fits64) {
            int64_t acc[4] = {0, 0, 0, 0};
            for (int i = 0; i < 4; ++i) {
                if (a[i] == 0) continue;
                for (int j = 0; j < 4; ++j) {
                    int k = i + j;
                    int64_t t = a[i] * b[j];
                    if (k < 4)
                        acc[k] += t;
                    else
                        acc[k - 4] -= t;
                }
            }
            for (int i = 0; i < 4; ++i) r[i] = acc[i];
        } else {
            __int128 acc[4] = {0, 0, 0, 0};
            for (int i = 0; i < 4; ++i) {
                if (a[i] == 0) continue;
                for (int j = 0; j < 4; ++j) {
                    if (b[j] == 0) continue;
                    int k = i + j;
                    __int128 t = (__int128)a[i] * b[j];
                    if (k < 4)
                        acc[k] += t;
                    else
                        acc[k - 4] -= t;
                }
            }
            for (int i = 0; i < 4; ++i) r[i] = (int64_t)(acc[i] % ((__int128)norm * 4));
        }
        reduce(r);
        return r;
    }
    Vec4 add(Vec4 a, const Vec4& b) const {
        for (int i = 0; i < 4; ++i) a[i] += b[i];
        reduce(a);
        return a;
    }
    Vec4 neg(Vec4 a) const {
        for (int i = 0; i < 4; ++i) a[i] = -a[i];
        reduce(a);
        return a;
    }
};

class Modulus {
public:
    explicit Modulus(CycInt c);

    const CycInt& elem() const { return c_; }
    const Int& residue_count() const { return count_; }

    // HNF basis of c*Z[w]: column j has pivot hnf(j,j) > 0 at row j and
    // zeros above it.
    const Int& hnf(int i, int j) const { return H_[i][j]; }

    // Canonical representative of x mod c (all coordinates in [0, hnf(j,j))).
    CycInt reduce(const CycInt& x) const;

    bool congruent(const CycInt& a, const CycInt& b) const {
        return reduce(a - b).is_zero();
    }

    // All N(c) canonical representatives in lexicographic normal-form order.
    // Requires the fast form (norm within int64).
    std::vector<CycInt> residues() const;
    void for_each_residue(const std::function<void(const Vec4&)>& f) const;

    bool has_small_form() const { return small_ != nullptr; }
    const SmallForm& small() const;
    CycInt from_vec(const Vec4& v) const {
        return CycInt(v[0], v[1], v[2], v[3]);
    }
    Vec4 to_vec(const CycInt& x) const; // reduces first

    bool is_unit_residue(const CycInt& x) const;

    friend CycInt inverse_mod(const CycInt& a, const Modulus& c);
    friend CycInt crt(const CycInt& x1, const Modulus& c1, const CycInt& x2,
                      const Modulus& c2);

private:
    CycInt c_;
    Int count_;
    Int H_[4][4];
    std::shared_ptr<SmallForm> small_;
};

// Inverse of a modulo c; requires gcd(a, c) to be a unit.
CycInt inverse_mod(const CycInt& a, const Modulus& c);

// The unique residue mod c1*c2 matching x1 mod c1 and x2 mod c2;
// requires gcd(c1, c2) to be a unit.
CycInt crt(const CycInt& x1, const Modulus& c1, const CycInt& x2, const Modulus& c2);

} // namespace zw8
