#include "zw8/cyc.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

namespace zw8 {

CycInt CycInt::omega(int k) {
    k = ((k % 8) + 8) % 8;
    CycInt r;
    if (k < 4)
        r[k] = 1;
    else
        r[k - 4] = -1;
    return r;
}

CycInt CycInt::operator*(const CycInt& o) const {
    // (sum a_i w^i)(sum b_j w^j), folding w^{i+j} with w^4 = -1.
    Int out[4] = {0, 0, 0, 0};
    for (int i = 0; i < 4; ++i) {
        if (c_[i] == 0) continue;
        for (int j = 0; j < 4; ++j) {
            if (o.c_[j] == 0) continue;
            int k = i + j;
            if (k < 4)
                out[k] += c_[i] * o.c_[j];
            else
                out[k - 4] -= c_[i] * o.c_[j];
        }
    }
    return CycInt(out[0], out[1], out[2], out[3]);
}

CycInt CycInt::galois(int k) const {
    if (k % 2 == 0) throw std::invalid_argument("galois: index must be odd");
    CycInt r;
    for (int i = 0; i < 4; ++i) {
        if (c_[i] == 0) continue;
        int e = (i * k) % 8;
        if (e < 0) e += 8;
        if (e < 4)
            r[e] += c_[i];
        else
            r[e - 4] -= c_[i];
    }
    return r;
}

CycInt CycInt::conj_product() const {
    return galois(3) * galois(5) * galois(7);
}

Int CycInt::norm() const {
    CycInt n = *this * conj_product();
    if (n[1] != 0 || n[2] != 0 || n[3] != 0)
        throw std::logic_error("norm: product of conjugates not rational");
    return n[0];
}

std::complex<double> CycInt::embed1() const {
    static const std::complex<double> w(std::sqrt(0.5), std::sqrt(0.5));
    std::complex<double> z(c_[0].get_d(), 0.0);
    std::complex<double> p = w;
    for (int i = 1; i < 4; ++i) {
        z += c_[i].get_d() * p;
        p *= w;
    }
    return z;
}

std::complex<double> CycInt::embed2() const {
    static const std::complex<double> w(-std::sqrt(0.5), std::sqrt(0.5));
    std::complex<double> z(c_[0].get_d(), 0.0);
    std::complex<double> p = w;
    for (int i = 1; i < 4; ++i) {
        z += c_[i].get_d() * p;
        p *= w;
    }
    return z;
}

std::string CycInt::str() const {
    std::ostringstream os;
    os << *this;
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const CycInt& x) {
    static const char* base[4] = {"", "w", "w2", "w3"};
    bool any = false;
    for (int i = 0; i < 4; ++i) {
        if (x[i] == 0) continue;
        if (any && x[i] > 0) os << "+";
        if (i == 0)
            os << x[i];
        else if (x[i] == 1)
            os << base[i];
        else if (x[i] == -1)
            os << "-" << base[i];
        else
            os << x[i] << base[i];
        any = true;
    }
    if (!any) os << "0";
    return os;
}

FieldElem FieldElem::operator+(const FieldElem& o) const {
    return FieldElem(q_[0] + o.q_[0], q_[1] + o.q_[1], q_[2] + o.q_[2], q_[3] + o.q_[3]);
}

FieldElem FieldElem::operator-(const FieldElem& o) const {
    return FieldElem(q_[0] - o.q_[0], q_[1] - o.q_[1], q_[2] - o.q_[2], q_[3] - o.q_[3]);
}

FieldElem FieldElem::operator*(const FieldElem& o) const {
    Rat out[4];
    for (int i = 0; i < 4; ++i) {
        if (q_[i] == 0) continue;
        for (int j = 0; j < 4; ++j) {
            if (o.q_[j] == 0) continue;
            int k = i + j;
            if (k < 4)
                out[k] += q_[i] * o.q_[j];
            else
                out[k - 4] -= q_[i] * o.q_[j];
        }
    }
    return FieldElem(out[0], out[1], out[2], out[3]);
}

bool FieldElem::is_integral() const {
    for (int i = 0; i < 4; ++i)
        if (q_[i].get_den() != 1) return false;
    return true;
}

CycInt FieldElem::to_cyc() const {
    if (!is_integral()) throw std::logic_error("to_cyc: element not integral");
    return CycInt(q_[0].get_num(), q_[1].get_num(), q_[2].get_num(), q_[3].get_num());
}

FieldElem FieldElem::inverse() const {
    if (is_zero()) throw std::domain_error("inverse of zero");
    // 1/x = conj_product(x) / N(x), carried out over the rationals.
    FieldElem g3, g5, g7;
    {
        // Galois on rational coordinates mirrors CycInt::galois.
        auto gal = [&](int k) {
            Rat r[4];
            for (int i = 0; i < 4; ++i) {
                if (q_[i] == 0) continue;
                int e = (i * k) % 8;
                if (e < 4)
                    r[e] += q_[i];
                else
                    r[e - 4] -= q_[i];
            }
            return FieldElem(r[0], r[1], r[2], r[3]);
        };
        g3 = gal(3);
        g5 = gal(5);
        g7 = gal(7);
    }
    FieldElem cp = g3 * g5 * g7;
    FieldElem n = *this * cp;
    Rat nr = n[0];
    if (n[1] != 0 || n[2] != 0 || n[3] != 0 || nr == 0)
        throw std::logic_error("inverse: norm computation failed");
    Rat inv = 1 / nr;
    return FieldElem(cp[0] * inv, cp[1] * inv, cp[2] * inv, cp[3] * inv);
}

CycInt FieldElem::round() const {
    Int r[4];
    for (int i = 0; i < 4; ++i) {
        // round-half-up on the rational q = n/d
        Int n = q_[i].get_num(), d = q_[i].get_den();
        Int twice = 2 * n + d;
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), twice.get_mpz_t(), Int(2 * d).get_mpz_t());
        r[i] = q;
    }
    return CycInt(r[0], r[1], r[2], r[3]);
}

CycInt different_gen() {
    return CycInt(0, 0, 0, 4); // 4 w^3
}

DivResult euclid_div(const CycInt& a, const CycInt& b) {
    if (b.is_zero()) throw std::domain_error("euclid_div: division by zero");
    FieldElem q = FieldElem(a) / FieldElem(b);
    CycInt q0 = q.round();
    CycInt r = a - q0 * b;
    Int nb = b.norm();
    if (r.norm() < nb) return {q0, r};
    // Coordinate rounding very occasionally lands on a bad corner; scan the
    // neighboring quotients for a norm-reducing remainder.
    CycInt best_q = q0, best_r = r;
    Int best_n = r.norm();
    for (int e0 = -1; e0 <= 1; ++e0)
        for (int e1 = -1; e1 <= 1; ++e1)
            for (int e2 = -1; e2 <= 1; ++e2)
                for (int e3 = -1; e3 <= 1; ++e3) {
                    CycInt qq = q0 + CycInt(e0, e1, e2, e3);
                    CycInt rr = a - qq * b;
                    Int nr = rr.norm();
                    if (nr < best_n) {
                        best_n = nr;
                        best_q = qq;
                        best_r = rr;
                    }
                }
    if (best_n >= nb) throw std::logic_error("euclid_div: no norm-reducing remainder found");
    return {best_q, best_r};
}

bool divides(const CycInt& b, const CycInt& a) {
    if (b.is_zero()) return a.is_zero();
    return (FieldElem(a) / FieldElem(b)).is_integral();
}

CycInt divide_exact(const CycInt& a, const CycInt& b) {
    FieldElem q = FieldElem(a) / FieldElem(b);
    if (!q.is_integral()) throw std::domain_error("divide_exact: not divisible");
    return q.to_cyc();
}

CycInt euclid_gcd(CycInt a, CycInt b) {
    if (a.is_zero() && b.is_zero())
        throw std::domain_error("gcd(0,0) undefined");
    while (!b.is_zero()) {
        CycInt r = euclid_div(a, b).rem;
        a = b;
        b = r;
    }
    return a;
}

XgcdResult euclid_xgcd(const CycInt& a, const CycInt& b) {
    CycInt r0 = a, r1 = b;
    CycInt s0(1), s1(0), t0(0), t1(1);
    while (!r1.is_zero()) {
        DivResult d = euclid_div(r0, r1);
        CycInt r2 = d.rem;
        CycInt s2 = s0 - d.quot * s1;
        CycInt t2 = t0 - d.quot * t1;
        r0 = r1; r1 = r2;
        s0 = s1; s1 = s2;
        t0 = t1; t1 = t2;
    }
    return {r0, s0, t0};
}

bool is_unit(const CycInt& x) {
    if (x.is_zero()) return false;
    return x.norm() == 1;
}

} // namespace zw8
