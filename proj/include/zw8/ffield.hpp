#pragma once
//
// Multiplicative characters of F_p realized through a primitive root, with
// Gauss sums against e^{2 pi i x / p} and the Hasse-Davenport product check.
//

#include <complex>
#include <cstdint>
#include <vector>

namespace zw8 {

class FpCharTable {
public:
    // Characters of F_p^* of order dividing n; requires p prime, p = 1 mod n.
    FpCharTable(int64_t p, int64_t n);

    int64_t p() const { return p_; }
    int64_t n() const { return n_; }
    int64_t generator() const { return g_; }

    struct Char {
        const FpCharTable* tab;
        int64_t j; // character index: chi(g^a) = e^{2 pi i j a / (p-1)}

        std::complex<double> operator()(int64_t x) const;
        // exact exponent of the value as a (p-1)-th root of unity; -1 at x=0
        int64_t exponent_of(int64_t x) const;
        int64_t order() const;
        bool is_trivial() const;
        Char operator*(const Char& o) const { return {tab, (j + o.j) % (tab->pm1())}; }
        Char inverse() const { return {tab, (tab->pm1() - j % tab->pm1()) % tab->pm1()}; }
        Char power(int64_t e) const;
    };

    // The n characters of order dividing n, trivial first, by increasing index.
    std::vector<Char> chars() const;
    // Any character chi_j of F_p^* (not restricted to order | n).
    Char char_by_index(int64_t j) const { return {this, ((j % pm1()) + pm1()) % pm1()}; }
    // The quadratic character (p odd).
    Char quadratic() const { return char_by_index(pm1() / 2); }
    // A fixed character of exact order m (requires m | p-1).
    Char of_order(int64_t m) const { return char_by_index(pm1() / m); }

    int64_t pm1() const { return p_ - 1; }
    int64_t dlog(int64_t x) const; // discrete log base g, x != 0 mod p

    // tau(chi) = sum_x chi(x) e^{2 pi i x / p}
    std::complex<double> gauss_sum(const Char& chi) const;

private:
    int64_t p_, n_, g_;
    std::vector<int64_t> dlog_; // dlog_[x] for x in [1, p)
};

// |LHS - RHS| of the Hasse-Davenport product relation
//   tau(chi^n) = -chi(n^n) * prod_{l mod n} tau(chi gamma^l) / prod_l tau(gamma^l),
// gamma the n-th residue character.  Requires p = 1 mod n.
double hd_check(int64_t p, int64_t n, const FpCharTable::Char& chi);

// Convenience: worst residual over all characters mod p.
double hd_check_all(int64_t p, int64_t n);

} // namespace zw8
