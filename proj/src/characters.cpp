#include "zw8/characters.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "zw8/units.hpp"

namespace zw8 {

int SymbolValue::exponent() const {
    if (is_zero()) throw std::logic_error("SymbolValue: exponent of zero");
    return k_;
}

int SymbolValue::sign() const {
    if (is_zero()) throw std::logic_error("SymbolValue: sign of zero");
    if (k_ == 0) return 1;
    if (k_ == 2) return -1;
    throw std::logic_error("SymbolValue: sign of non-real value");
}

namespace {

CycInt powmod_cyc(CycInt base, Int e, const Modulus& c) {
    CycInt r = c.reduce(CycInt(1));
    base = c.reduce(base);
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) r = c.reduce(r * base);
        base = c.reduce(base * base);
        e >>= 1;
    }
    return r;
}

} // namespace

SymbolValue power_symbol_prime(const CycInt& a, const Modulus& p, int k) {
    if (k != 2 && k != 4) throw std::invalid_argument("power_symbol: k must be 2 or 4");
    Int N = p.residue_count();
    if (N % 2 == 0)
        throw std::domain_error("power_symbol: even (ramified) modulus");
    if ((N - 1) % k != 0)
        throw std::domain_error("power_symbol: N(p) != 1 mod k");
    CycInt t = powmod_cyc(a, (N - 1) / k, p);
    if (t.is_zero()) return SymbolValue::zero();
    for (int j = 0; j < 4; ++j) {
        if (p.congruent(t, CycInt::omega(2 * j))) { // i^j = w^{2j}
            if (k == 2 && j % 2 != 0)
                throw std::logic_error("power_symbol: quadratic symbol out of {-1,1}");
            return SymbolValue::root(j);
        }
    }
    throw std::logic_error("power_symbol: value not a root of unity (modulus not prime?)");
}

SymbolValue power_symbol(const CycInt& a, const CycInt& c, int k) {
    if (k != 2 && k != 4) throw std::invalid_argument("power_symbol: k must be 2 or 4");
    if (is_unit(c)) return SymbolValue::root(0);
    Factorization f = factor(c);
    for (auto& pp : f.factors)
        if (pp.prime.norm() == 2)
            throw std::domain_error("power_symbol: modulus divisible by 1+w");
    SymbolValue s = SymbolValue::root(0);
    for (auto& pp : f.factors) {
        Modulus p(pp.prime);
        SymbolValue sp = power_symbol_prime(a, p, k);
        if (sp.is_zero()) return SymbolValue::zero();
        s = s * sp.pow(pp.exp);
    }
    return s;
}

Rat additive_phase(const FieldElem& alpha, AdditiveMode mode) {
    Rat t;
    if (mode == AdditiveMode::PLAIN) {
        t = alpha.trace();
    } else {
        t = (alpha / FieldElem(different_gen())).trace();
    }
    Int num = t.get_num(), den = t.get_den();
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    return t - Rat(q);
}

Cplx additive_char(const FieldElem& alpha, AdditiveMode mode) {
    Rat t = additive_phase(alpha, mode);
    double a = 2.0 * 3.14159265358979323846 * t.get_d();
    return {std::cos(a), std::sin(a)};
}

PhaseTable PhaseTable::make(const CycInt& c, AdditiveMode mode) {
    FieldElem lambda = FieldElem(CycInt(1)) / FieldElem(c);
    if (mode == AdditiveMode::DIFFERENT)
        lambda = lambda / FieldElem(different_gen());
    Rat tr[4];
    Int den = 1;
    for (int i = 0; i < 4; ++i) {
        tr[i] = (FieldElem(CycInt::omega(i)) * lambda).trace();
        mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), tr[i].get_den().get_mpz_t());
    }
    PhaseTable pt;
    if (!den.fits_slong_p()) throw std::logic_error("PhaseTable: denominator overflow");
    pt.den = mpz_get_si(den.get_mpz_t());
    for (int i = 0; i < 4; ++i) {
        Rat v = tr[i] * den;
        Int n = v.get_num() % den;
        if (n < 0) n += den;
        pt.t[i] = mpz_get_si(n.get_mpz_t());
    }
    return pt;
}

// ---------------------------------------------------------------------------
// Unit group discovery

namespace {

uint64_t pack_key(const Vec4& v, const SmallForm& s) {
    uint64_t k = 0;
    for (int i = 0; i < 4; ++i) k = k * (uint64_t)s.diag[i] + (uint64_t)v[i];
    return k;
}

Vec4 unpack_key(uint64_t k, const SmallForm& s) {
    Vec4 v;
    for (int i = 3; i >= 0; --i) {
        v[i] = (int64_t)(k % (uint64_t)s.diag[i]);
        k /= (uint64_t)s.diag[i];
    }
    return v;
}

// Smith reduction of a small integer matrix M (columns span the relation
// lattice).  Returns the diagonal and W = U^{-1} for the row transform U.
struct Snf {
    std::vector<int64_t> diag;
    std::vector<std::vector<int64_t>> W;
};

Snf smith(std::vector<std::vector<__int128>> M) {
    int n = (int)M.size();
    std::vector<std::vector<__int128>> W(n, std::vector<__int128>(n, 0));
    for (int i = 0; i < n; ++i) W[i][i] = 1;

    auto row_sub = [&](int i, int j, __int128 q) {
        for (int k = 0; k < n; ++k) M[i][k] -= q * M[j][k];
        for (int k = 0; k < n; ++k) W[k][j] += q * W[k][i];
    };
    auto row_swap = [&](int i, int j) {
        std::swap(M[i], M[j]);
        for (int k = 0; k < n; ++k) std::swap(W[k][i], W[k][j]);
    };
    auto col_sub = [&](int i, int j, __int128 q) {
        for (int k = 0; k < n; ++k) M[k][i] -= q * M[k][j];
    };
    auto col_swap = [&](int i, int j) {
        for (int k = 0; k < n; ++k) std::swap(M[k][i], M[k][j]);
    };

    for (int t = 0; t < n; ++t) {
        while (true) {
            int pi = -1, pj = -1;
            __int128 best = 0;
            for (int i = t; i < n; ++i)
                for (int j = t; j < n; ++j) {
                    __int128 a = M[i][j] < 0 ? -M[i][j] : M[i][j];
                    if (a != 0 && (best == 0 || a < best)) {
                        best = a;
                        pi = i;
                        pj = j;
                    }
                }
            if (pi < 0) break;
            if (pi != t) row_swap(t, pi);
            if (pj != t) col_swap(t, pj);
            bool clean = true;
            for (int i = t + 1; i < n; ++i)
                if (M[i][t] != 0) {
                    row_sub(i, t, M[i][t] / M[t][t]);
                    if (M[i][t] != 0) clean = false;
                }
            for (int j = t + 1; j < n; ++j)
                if (M[t][j] != 0) {
                    col_sub(j, t, M[t][j] / M[t][t]);
                    if (M[t][j] != 0) clean = false;
                }
            if (clean) break;
        }
        if (M[t][t] < 0) {
            for (int k = 0; k < n; ++k) M[t][k] = -M[t][k];
            for (int k = 0; k < n; ++k) W[k][t] = -W[k][t];
        }
    }
    Snf out;
    out.diag.resize(n);
    out.W.assign(n, std::vector<int64_t>(n));
    for (int i = 0; i < n; ++i) {
        out.diag[i] = (int64_t)M[i][i];
        for (int j = 0; j < n; ++j) {
            if (W[i][j] > INT64_MAX || W[i][j] < INT64_MIN)
                throw std::logic_error("smith: transform overflow");
            out.W[i][j] = (int64_t)W[i][j];
        }
    }
    return out;
}

} // namespace

int64_t UnitGroup::pack_residue(const Vec4& v) const {
    return (int64_t)pack_key(v, D_.small());
}

std::shared_ptr<const UnitGroup> UnitGroup::discover(const Modulus& D, int64_t norm_bound) {
    if (D.residue_count() > norm_bound)
        throw std::domain_error("UnitGroup: N(D) exceeds bound");
    auto G = std::shared_ptr<UnitGroup>(new UnitGroup(D));
    const SmallForm& s = D.small();
    int64_t N = s.norm;

    std::vector<Vec4> unit_list;
    D.for_each_residue([&](const Vec4& v) {
        CycInt x = G->D_.from_vec(v);
        CycInt g = euclid_gcd(x.is_zero() ? G->D_.elem() : x, G->D_.elem());
        if (zw8::is_unit(g)) unit_list.push_back(v);
    });
    int64_t phi = (int64_t)unit_list.size();

    // Polycyclic generator discovery.
    Vec4 one = D.to_vec(CycInt(1));
    std::unordered_map<uint64_t, std::vector<int64_t>> expo;
    expo[pack_key(one, s)] = {};
    std::vector<Vec4> gens;
    std::vector<int64_t> rel_order;
    std::vector<std::vector<int64_t>> rel_expr;

    for (const Vec4& cand : unit_list) {
        if ((int64_t)expo.size() == phi) break;
        if (expo.count(pack_key(cand, s))) continue;
        Vec4 p = cand;
        int64_t k = 1;
        while (!expo.count(pack_key(p, s))) {
            p = s.mul(p, cand);
            ++k;
        }
        std::vector<int64_t> inside = expo[pack_key(p, s)];
        inside.resize(gens.size(), 0);
        std::vector<std::pair<uint64_t, std::vector<int64_t>>> snapshot(expo.begin(), expo.end());
        for (auto& [key, ex] : snapshot) {
            Vec4 cur = unpack_key(key, s);
            for (int64_t e = 1; e < k; ++e) {
                cur = s.mul(cur, cand);
                std::vector<int64_t> ex2 = ex;
                ex2.resize(gens.size() + 1, 0);
                ex2[gens.size()] = e;
                expo[pack_key(cur, s)] = std::move(ex2);
            }
        }
        gens.push_back(cand);
        rel_order.push_back(k);
        rel_expr.push_back(inside);
        for (auto& [key, ex] : expo) ex.resize(gens.size(), 0);
    }
    if ((int64_t)expo.size() != phi)
        throw std::logic_error("UnitGroup: closure mismatch");

    G->order_ = phi;
    int r = (int)gens.size();
    G->idx_.assign(N, 0);
    if (r == 0) {
        G->L_ = 1;
        G->idx_[pack_key(one, s)] = 1;
        return G;
    }

    // Relation matrix: column i is k_i e_i - sum_j rel_expr[i][j] e_j.
    std::vector<std::vector<__int128>> M(r, std::vector<__int128>(r, 0));
    for (int i = 0; i < r; ++i) {
        M[i][i] += rel_order[i];
        for (int j = 0; j < (int)rel_expr[i].size(); ++j) M[j][i] -= rel_expr[i][j];
    }
    Snf snf = smith(std::move(M));

    std::vector<CycInt> gens_c(r), gens_inv(r);
    for (int i = 0; i < r; ++i) {
        gens_c[i] = D.from_vec(gens[i]);
        gens_inv[i] = inverse_mod(gens_c[i], D);
    }
    for (int i = 0; i < r; ++i) {
        if (snf.diag[i] == 1) continue;
        CycInt h(1);
        for (int j = 0; j < r; ++j) {
            int64_t e = snf.W[j][i];
            const CycInt& base = e >= 0 ? gens_c[j] : gens_inv[j];
            int64_t ae = e >= 0 ? e : -e;
            CycInt b = D.reduce(base), acc = D.reduce(CycInt(1));
            while (ae) {
                if (ae & 1) acc = D.reduce(acc * b);
                b = D.reduce(b * b);
                ae >>= 1;
            }
            h = D.reduce(h * acc);
        }
        G->h_.push_back(h);
        G->d_.push_back(snf.diag[i]);
    }
    int64_t check = 1;
    for (int64_t d : G->d_) check *= d;
    if (check != phi) throw std::logic_error("UnitGroup: basis order mismatch");
    G->L_ = 1;
    for (int64_t d : G->d_) G->L_ = std::lcm(G->L_, d);

    // Fill packed coordinates: odometer over the basis, one multiplication
    // per step (carry at level i multiplies by h_i * prod_{j<i} h_j since
    // h_j^{ -(d_j - 1) } = h_j).
    int m = (int)G->d_.size();
    std::vector<Vec4> hv(m), carry(m);
    for (int i = 0; i < m; ++i) hv[i] = D.to_vec(G->h_[i]);
    for (int i = 0; i < m; ++i) {
        Vec4 w = hv[i];
        for (int j = 0; j < i; ++j) w = s.mul(w, hv[j]);
        carry[i] = w;
    }
    std::vector<int64_t> cnt(m, 0);
    Vec4 cur = one;
    int64_t filled = 0;
    while (true) {
        uint64_t packc = 0;
        for (int i = m - 1; i >= 0; --i) packc = packc * (uint64_t)G->d_[i] + (uint64_t)cnt[i];
        G->idx_[pack_key(cur, s)] = (uint32_t)(packc + 1);
        ++filled;
        int i = 0;
        for (; i < m; ++i) {
            if (cnt[i] + 1 < G->d_[i]) {
                ++cnt[i];
                cur = s.mul(cur, carry[i]);
                break;
            }
            cnt[i] = 0;
        }
        if (i == m) break;
    }
    if (filled != phi) throw std::logic_error("UnitGroup: odometer fill mismatch");
    return G;
}

std::optional<std::vector<int64_t>> UnitGroup::coords(const CycInt& x) const {
    const SmallForm& s = D_.small();
    Vec4 v = D_.to_vec(x);
    uint32_t raw = idx_[pack_key(v, s)];
    if (raw == 0) return std::nullopt;
    uint64_t packc = raw - 1;
    std::vector<int64_t> c(d_.size());
    for (size_t i = 0; i < d_.size(); ++i) {
        c[i] = (int64_t)(packc % (uint64_t)d_[i]);
        packc /= (uint64_t)d_[i];
    }
    return c;
}

std::vector<CycInt> UnitGroup::units() const {
    std::vector<CycInt> out;
    out.reserve(order_);
    D_.for_each_residue([&](const Vec4& v) {
        if (idx_[pack_key(v, D_.small())] != 0) out.push_back(D_.from_vec(v));
    });
    return out;
}

// ---------------------------------------------------------------------------

DirichletChar::DirichletChar(std::shared_ptr<const UnitGroup> g, std::vector<int64_t> t)
    : G_(std::move(g)), t_(std::move(t)) {
    const auto& d = G_->cycle_orders();
    if (t_.size() != d.size()) throw std::invalid_argument("DirichletChar: twist size");
    int64_t L = G_->exponent();
    int64_t g0 = 0;
    for (size_t i = 0; i < t_.size(); ++i) {
        int64_t step = t_[i] % d[i] * (L / d[i]) % L;
        g0 = std::gcd(g0, step);
    }
    order_ = g0 == 0 ? 1 : L / std::gcd(L, g0);
}

std::optional<int64_t> DirichletChar::exponent_of(const CycInt& x) const {
    auto c = G_->coords(x);
    if (!c) return std::nullopt;
    int64_t L = G_->exponent();
    __int128 e = 0;
    const auto& d = G_->cycle_orders();
    for (size_t i = 0; i < t_.size(); ++i)
        e += (__int128)t_[i] * (*c)[i] % L * (L / d[i]);
    int64_t r = (int64_t)(e % L);
    return r < 0 ? r + L : r;
}

Cplx DirichletChar::value(const CycInt& x) const {
    auto e = exponent_of(x);
    if (!e) return {0, 0};
    double a = 2.0 * 3.14159265358979323846 * (double)*e / (double)G_->exponent();
    return {std::cos(a), std::sin(a)};
}

DirichletChar DirichletChar::power(int64_t e) const {
    const auto& d = G_->cycle_orders();
    std::vector<int64_t> t(t_.size());
    for (size_t i = 0; i < t_.size(); ++i) {
        __int128 v = (__int128)t_[i] * (e % d[i]);
        int64_t r = (int64_t)(v % d[i]);
        t[i] = r < 0 ? r + d[i] : r;
    }
    return DirichletChar(G_, std::move(t));
}

std::vector<DirichletChar> dirichlet_enumerate(const Modulus& D, int64_t norm_bound) {
    auto G = UnitGroup::discover(D, norm_bound);
    const auto& d = G->cycle_orders();
    std::vector<DirichletChar> out;
    out.reserve(G->order());
    std::vector<int64_t> t(d.size(), 0);
    while (true) {
        out.emplace_back(G, t);
        size_t i = 0;
        for (; i < d.size(); ++i) {
            if (++t[i] < d[i]) break;
            t[i] = 0;
        }
        if (i == d.size()) break;
    }
    return out;
}

Cplx gauss_sum(const DirichletChar& chi, AdditiveMode mode) {
    const Modulus& D = chi.modulus();
    PhaseTable pt = PhaseTable::make(D.elem(), mode);
    Cplx acc = 0;
    int64_t L = chi.common_order();
    D.for_each_residue([&](const Vec4& v) {
        auto e = chi.exponent_of(D.from_vec(v));
        if (!e) return;
        double a = 2.0 * 3.14159265358979323846 * (double)*e / (double)L;
        acc += Cplx{std::cos(a), std::sin(a)} * pt.value(v);
    });
    return acc;
}

Cplx gauss_sum_symbol(int k, const Modulus& c, AdditiveMode mode) {
    PhaseTable pt = PhaseTable::make(c.elem(), mode);
    Factorization f = factor(c.elem());
    std::vector<std::pair<Modulus, int>> pf;
    for (auto& pp : f.factors) pf.emplace_back(Modulus(pp.prime), pp.exp);
    Cplx acc = 0;
    c.for_each_residue([&](const Vec4& v) {
        CycInt x = c.from_vec(v);
        SymbolValue s = SymbolValue::root(0);
        for (auto& [p, e] : pf) {
            SymbolValue sp = power_symbol_prime(x, p, k);
            if (sp.is_zero()) return;
            s = s * sp.pow(e);
        }
        acc += s.value() * pt.value(v);
    });
    return acc;
}

} // namespace zw8
