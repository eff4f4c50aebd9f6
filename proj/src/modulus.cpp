#include "zw8/modulus.hpp"

#include <stdexcept>

namespace zw8 {

namespace {

// Column HNF of a nonsingular 4x4 integer matrix whose columns span the
// lattice.  Output: column j has positive pivot at row j, zeros above, and
// entries in row j of columns j' < j reduced into [0, pivot).
void column_hnf(Int M[4][4]) {
    for (int i = 0; i < 4; ++i) {
        // Clear row i across columns > i by column Euclid steps.
        for (int j = i + 1; j < 4; ++j) {
            while (M[i][j] != 0) {
                if (M[i][i] == 0) {
                    for (int r = 0; r < 4; ++r) std::swap(M[r][i], M[r][j]);
                    continue;
                }
                Int q = M[i][j] / M[i][i]; // truncated division is fine here
                for (int r = 0; r < 4; ++r) M[r][j] -= q * M[r][i];
                if (M[i][j] != 0)
                    for (int r = 0; r < 4; ++r) std::swap(M[r][i], M[r][j]);
            }
        }
        if (M[i][i] == 0) throw std::logic_error("hnf: singular lattice");
        if (M[i][i] < 0)
            for (int r = 0; r < 4; ++r) M[r][i] = -M[r][i];
        // Reduce row i of earlier columns into [0, pivot).
        for (int j = 0; j < i; ++j) {
            Int q;
            mpz_fdiv_q(q.get_mpz_t(), M[i][j].get_mpz_t(), M[i][i].get_mpz_t());
            if (q != 0)
                for (int r = 0; r < 4; ++r) M[r][j] -= q * M[r][i];
        }
    }
}

} // namespace

Modulus::Modulus(CycInt c) : c_(std::move(c)) {
    if (c_.is_zero()) throw std::domain_error("Modulus: zero element");
    // Columns = coordinates of c * w^k.
    CycInt cw[4];
    cw[0] = c_;
    for (int k = 1; k < 4; ++k) cw[k] = cw[k - 1] * CycInt::omega(1);
    for (int j = 0; j < 4; ++j)
        for (int i = 0; i < 4; ++i) H_[i][j] = cw[j][i];
    column_hnf(H_);
    count_ = H_[0][0] * H_[1][1] * H_[2][2] * H_[3][3];
    if (count_ != c_.norm()) throw std::logic_error("Modulus: |det(HNF)| != N(c)");

    if (count_.fits_slong_p() || mpz_sizeinbase(count_.get_mpz_t(), 2) < 60) {
        bool ok = true;
        for (int i = 0; i < 4 && ok; ++i)
            for (int j = 0; j < 4 && ok; ++j)
                if (mpz_sizeinbase(H_[i][j].get_mpz_t(), 2) >= 60) ok = false;
        if (ok) {
            auto s = std::make_shared<SmallForm>();
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) s->h[i][j] = mpz_get_si(H_[i][j].get_mpz_t());
            for (int j = 0; j < 4; ++j) s->diag[j] = s->h[j][j];
            s->norm = mpz_get_si(count_.get_mpz_t());
            // reduced coordinates are below max diag; 4 * maxd^2 must fit
            int64_t maxd = std::max({s->diag[0], s->diag[1], s->diag[2], s->diag[3]});
            s->fits64 = maxd < (int64_t)1000000000;
            small_ = std::move(s);
        }
    }
}

CycInt Modulus::reduce(const CycInt& x) const {
    Int v[4] = {x[0], x[1], x[2], x[3]};
    for (int j = 0; j < 4; ++j) {
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), v[j].get_mpz_t(), H_[j][j].get_mpz_t());
        if (q != 0)
            for (int i = j; i < 4; ++i) v[i] -= q * H_[i][j];
    }
    return CycInt(v[0], v[1], v[2], v[3]);
}

const SmallForm& Modulus::small() const {
    if (!small_) throw std::logic_error("Modulus: norm too large for enumeration");
    return *small_;
}

Vec4 Modulus::to_vec(const CycInt& x) const {
    CycInt r = reduce(x);
    Vec4 v;
    for (int i = 0; i < 4; ++i) {
        if (!r[i].fits_slong_p()) throw std::logic_error("to_vec: coordinate overflow");
        v[i] = mpz_get_si(r[i].get_mpz_t());
    }
    return v;
}

void Modulus::for_each_residue(const std::function<void(const Vec4&)>& f) const {
    const SmallForm& s = small();
    Vec4 v;
    for (v[0] = 0; v[0] < s.diag[0]; ++v[0])
        for (v[1] = 0; v[1] < s.diag[1]; ++v[1])
            for (v[2] = 0; v[2] < s.diag[2]; ++v[2])
                for (v[3] = 0; v[3] < s.diag[3]; ++v[3]) f(v);
}

std::vector<CycInt> Modulus::residues() const {
    std::vector<CycInt> out;
    out.reserve(small().norm);
    for_each_residue([&](const Vec4& v) { out.push_back(from_vec(v)); });
    return out;
}

bool Modulus::is_unit_residue(const CycInt& x) const {
    if (reduce(x).is_zero()) return false;
    CycInt g = euclid_gcd(x, c_);
    return is_unit(g);
}

CycInt inverse_mod(const CycInt& a, const Modulus& c) {
    XgcdResult x = euclid_xgcd(a, c.elem());
    if (!is_unit(x.g))
        throw std::domain_error("inverse_mod: gcd(a, c) = " + x.g.str() + " is not a unit");
    // u*a = g - v*c, so a^{-1} = u * g^{-1} mod c.
    CycInt ginv = FieldElem(CycInt(1)).operator/(FieldElem(x.g)).to_cyc();
    return c.reduce(x.u * ginv);
}

CycInt crt(const CycInt& x1, const Modulus& c1, const CycInt& x2, const Modulus& c2) {
    XgcdResult x = euclid_xgcd(c1.elem(), c2.elem());
    if (!is_unit(x.g)) throw std::domain_error("crt: moduli not coprime");
    CycInt ginv = FieldElem(CycInt(1)).operator/(FieldElem(x.g)).to_cyc();
    // ginv*(u*c1 + v*c2) = 1
    CycInt e1 = x.v * ginv * c2.elem(); // = 1 mod c1, 0 mod c2
    CycInt e2 = x.u * ginv * c1.elem(); // = 0 mod c1, 1 mod c2
    Modulus c12(c1.elem() * c2.elem());
    return c12.reduce(x1 * e1 + x2 * e2);
}

} // namespace zw8
