#include "zw8/expsums.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "zw8/units.hpp"

namespace zw8 {

namespace {
constexpr double kTau = 2.0 * 3.14159265358979323846;

Cplx i_power(int e) {
    static const Cplx tab[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return tab[((e % 4) + 4) % 4];
}
} // namespace

PolySpec::PolySpec(std::initializer_list<std::pair<CycInt, int64_t>> t) : terms(t) {
    validate();
}

PolySpec PolySpec::quartic_even(const CycInt& A, const CycInt& B) {
    return PolySpec{{A, 4}, {B, 2}};
}

PolySpec PolySpec::quadratic(const CycInt& A, const CycInt& B) {
    return PolySpec{{A, 2}, {B, 1}};
}

void PolySpec::validate() const {
    std::set<int64_t> seen;
    for (auto& [c, e] : terms) {
        if (e < 0) throw std::invalid_argument("PolySpec: negative exponent");
        if (!seen.insert(e).second) throw std::invalid_argument("PolySpec: repeated exponent");
    }
}

int64_t PolySpec::max_exp() const {
    int64_t m = 0;
    for (auto& [c, e] : terms) m = std::max(m, e);
    return m;
}

// ---------------------------------------------------------------------------

SumContext::SumContext(const Modulus& c, AdditiveMode mode)
    : c_(c), mode_(mode), N_(c.small().norm), fac_(factor(c.elem())) {
    res_.reserve(N_);
    c_.for_each_residue([&](const Vec4& v) { res_.push_back(v); });

    // unit mask: nonzero against every prime divisor
    unit_.assign(N_, 1);
    phi_ = 1;
    for (auto& pp : fac_.factors) {
        Modulus mp(pp.prime);
        const SmallForm& sp = mp.small();
        int64_t Np = sp.norm;
        for (int e = 1; e < pp.exp; ++e) phi_ *= Np;
        phi_ *= Np - 1;
        for (int64_t i = 0; i < N_; ++i) {
            if (!unit_[i]) continue;
            Vec4 r = res_[i];
            sp.reduce(r);
            if (r[0] == 0 && r[1] == 0 && r[2] == 0 && r[3] == 0) unit_[i] = 0;
        }
    }

    PhaseTable pt = PhaseTable::make(c_.elem(), mode_);
    phase_.resize(N_);
    for (int64_t i = 0; i < N_; ++i) {
        double a = kTau * (double)pt.num(res_[i]) / (double)pt.den;
        phase_[i] = {std::cos(a), std::sin(a)};
    }
}

void SumContext::ensure_quartic() const {
    if (!quartic_.empty()) return;
    quartic_.assign(N_, 0);
    for (auto& pp : fac_.factors) {
        Modulus mp(pp.prime);
        const SmallForm& sp = mp.small();
        int64_t Np = sp.norm;
        // symbol exponents modulo this prime (defined for all odd primes)
        std::vector<int8_t> sym(Np, -1);
        if (Np != 2) {
            Int e4 = (Int(Np) - 1) / 4;
            Vec4 roots[4];
            for (int j = 0; j < 4; ++j) roots[j] = mp.to_vec(CycInt::omega(2 * j));
            int64_t idx = 0;
            Vec4 v;
            for (v[0] = 0; v[0] < sp.diag[0]; ++v[0])
                for (v[1] = 0; v[1] < sp.diag[1]; ++v[1])
                    for (v[2] = 0; v[2] < sp.diag[2]; ++v[2])
                        for (v[3] = 0; v[3] < sp.diag[3]; ++v[3], ++idx) {
                            Vec4 r = mp.to_vec(CycInt(1)), b = v;
                            Int e = e4;
                            while (e > 0) {
                                if (mpz_odd_p(e.get_mpz_t())) r = sp.mul(r, b);
                                b = sp.mul(b, b);
                                e >>= 1;
                            }
                            for (int j = 0; j < 4; ++j)
                                if (r == roots[j]) {
                                    sym[idx] = (int8_t)j;
                                    break;
                                }
                        }
        }
        auto pidx = [&](const Vec4& v) {
            Vec4 r = v;
            sp.reduce(r);
            int64_t k = 0;
            for (int i = 0; i < 4; ++i) k = k * sp.diag[i] + r[i];
            return k;
        };
        for (int64_t i = 0; i < N_; ++i) {
            if (quartic_[i] < 0) continue;
            if (!unit_[i]) {
                quartic_[i] = -1;
                continue;
            }
            if (Np == 2) continue; // symbol undefined; callers reject even moduli
            int8_t sv = sym[pidx(res_[i])];
            quartic_[i] = (int8_t)((quartic_[i] + sv * pp.exp) % 4);
        }
    }
}

int SumContext::quartic_exponent(int64_t idx) const {
    ensure_quartic();
    return quartic_[idx];
}

int64_t SumContext::index_of(const Vec4& v) const {
    const SmallForm& s = c_.small();
    int64_t k = 0;
    for (int i = 0; i < 4; ++i) k = k * s.diag[i] + v[i];
    return k;
}

int64_t SumContext::inverse(int64_t idx) const {
    if (inv_.empty()) {
        // Montgomery batch inversion: one ring inverse for the product of all
        // units, then a backward sweep of multiplications.
        const SmallForm& s = c_.small();
        inv_.assign(N_, -1);
        std::vector<int32_t> units;
        units.reserve(phi_);
        for (int64_t i = 0; i < N_; ++i)
            if (unit_[i]) units.push_back((int32_t)i);
        std::vector<Vec4> prefix(units.size() + 1);
        prefix[0] = c_.to_vec(CycInt(1));
        for (size_t k = 0; k < units.size(); ++k)
            prefix[k + 1] = s.mul(prefix[k], res_[units[k]]);
        CycInt total = c_.from_vec(prefix[units.size()]);
        Vec4 run = c_.to_vec(inverse_mod(total, c_));
        for (size_t k = units.size(); k-- > 0;) {
            Vec4 invk = s.mul(run, prefix[k]);
            inv_[units[k]] = (int32_t)index_of(invk);
            run = s.mul(run, res_[units[k]]);
        }
    }
    int64_t j = inv_[idx];
    if (j < 0) throw std::domain_error("SumContext: inverse of non-unit");
    return j;
}

Cplx SumContext::phase_of(const CycInt& x) const {
    return phase_[index_of(c_.to_vec(x))];
}

SumValue complete_sum(const PolySpec& f, const SumContext& ctx, const TwistSpec& twist) {
    f.validate();
    const SmallForm& s = ctx.modulus().small();
    int64_t emax = f.max_exp();
    std::vector<std::pair<Vec4, int64_t>> terms;
    for (auto& [co, e] : f.terms) terms.push_back({ctx.modulus().to_vec(co), e});

    Cplx acc = 0;
    std::vector<Vec4> pw((size_t)emax + 1);
    Vec4 zero = ctx.modulus().to_vec(CycInt(0));
    pw[0] = ctx.modulus().to_vec(CycInt(1));
    for (int64_t i = 0; i < ctx.size(); ++i) {
        Cplx w;
        switch (twist.kind) {
            case TwistSpec::None:
                w = 1;
                break;
            case TwistSpec::Symbol: {
                if (!ctx.unit(i)) continue;
                int q = ctx.quartic_exponent(i);
                w = twist.symbol_k == 4 ? i_power(q) : Cplx(q % 2 == 0 ? 1.0 : -1.0, 0.0);
                break;
            }
            case TwistSpec::Dirichlet: {
                w = twist.chi->value(ctx.modulus().from_vec(ctx.residue(i)));
                if (w == Cplx{0, 0}) continue;
                break;
            }
        }
        const Vec4& x = ctx.residue(i);
        for (int64_t e = 1; e <= emax; ++e) pw[e] = e == 1 ? x : s.mul(pw[e - 1], x);
        Vec4 val = zero;
        for (auto& [cv, e] : terms) val = s.add(val, e == 0 ? cv : s.mul(cv, pw[e]));
        acc += w * ctx.phase(ctx.index_of(val));
    }
    return {acc, ctx.modulus().residue_count(), SumValue::Brute};
}

SumValue complete_sum(const PolySpec& f, const Modulus& c, const TwistSpec& twist,
                      AdditiveMode mode) {
    SumContext ctx(c, mode);
    return complete_sum(f, ctx, twist);
}

SumValue kloosterman_s4(const CycInt& r, const CycInt& s, const SumContext& ctx) {
    const SmallForm& sf = ctx.modulus().small();
    Vec4 rv = ctx.modulus().to_vec(r), sv = ctx.modulus().to_vec(s);
    Cplx acc = 0;
    for (int64_t i = 0; i < ctx.size(); ++i) {
        if (!ctx.unit(i)) continue;
        const Vec4& a = ctx.residue(i);
        const Vec4& d = ctx.residue(ctx.inverse(i));
        Vec4 arg = sf.add(sf.mul(rv, a), sf.mul(sv, d));
        acc += i_power(ctx.quartic_exponent(i)) * ctx.phase(ctx.index_of(arg));
    }
    return {acc, ctx.modulus().residue_count(), SumValue::Brute};
}

SumValue kloosterman_s4(const CycInt& r, const CycInt& s, const Modulus& c,
                        AdditiveMode mode) {
    if (is_unit(c.elem())) return {Cplx{1, 0}, Int(1), SumValue::Closed};
    if (c.residue_count() % 2 == 0)
        throw std::domain_error("kloosterman_s4: even-ramified modulus");
    SumContext ctx(c, mode);
    return kloosterman_s4(r, s, ctx);
}

SumValue kloosterman_s4_prime(const CycInt& r, const CycInt& s, const Modulus& p,
                              AdditiveMode mode) {
    const SmallForm& sf = p.small();
    int64_t N = sf.norm;
    if (N % 2 == 0) throw std::domain_error("kloosterman_s4_prime: even modulus");
    // generator of the cyclic unit group
    auto fac = factor_u64((uint64_t)(N - 1));
    auto powv = [&](Vec4 b, int64_t e) {
        Vec4 rr = p.to_vec(CycInt(1));
        while (e) {
            if (e & 1) rr = sf.mul(rr, b);
            b = sf.mul(b, b);
            e >>= 1;
        }
        return rr;
    };
    Vec4 one = p.to_vec(CycInt(1));
    Vec4 g{};
    {
        bool found = false;
        Vec4 v;
        for (v[0] = 0; v[0] < sf.diag[0] && !found; ++v[0])
            for (v[1] = 0; v[1] < sf.diag[1] && !found; ++v[1])
                for (v[2] = 0; v[2] < sf.diag[2] && !found; ++v[2])
                    for (v[3] = 0; v[3] < sf.diag[3] && !found; ++v[3]) {
                        if (v == p.to_vec(CycInt(0))) continue;
                        bool ok = true;
                        for (auto [q, e] : fac)
                            if (powv(v, (N - 1) / (int64_t)q) == one) {
                                ok = false;
                                break;
                            }
                        if (ok) {
                            g = v;
                            found = true;
                        }
                    }
        if (!found) throw std::logic_error("kloosterman_s4_prime: no generator (modulus not prime?)");
    }
    // quartic symbol of g: g^{(N-1)/4} is a primitive fourth root of unity
    int eg = -1;
    {
        Vec4 t = powv(g, (N - 1) / 4);
        for (int j = 0; j < 4; ++j)
            if (t == p.to_vec(CycInt::omega(2 * j))) {
                eg = j;
                break;
            }
        if (eg < 0) throw std::logic_error("kloosterman_s4_prime: symbol of generator");
    }
    PhaseTable pt = PhaseTable::make(p.elem(), mode);
    Vec4 ginv = powv(g, N - 2);
    Vec4 u = p.to_vec(p.reduce(r)); // r * g^j
    Vec4 w = p.to_vec(p.reduce(s)); // s * g^{-j}
    static const Cplx i4[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    Cplx acc = 0;
    for (int64_t j = 0; j < N - 1; ++j) {
        Vec4 arg = sf.add(u, w);
        acc += i4[(int)((j * eg) % 4)] * pt.value(arg);
        u = sf.mul(u, g);
        w = sf.mul(w, ginv);
    }
    return {acc, p.residue_count(), SumValue::Brute};
}

// ---------------------------------------------------------------------------
// Square roots modulo prime powers

std::vector<CycInt> sqrt_mod(const CycInt& b, const CycInt& p, int m) {
    if (m < 1) throw std::invalid_argument("sqrt_mod: m >= 1");
    Modulus mp(p);
    Int q = mp.residue_count();
    if (q % 2 == 0) throw std::domain_error("sqrt_mod: even-ramified prime");
    if (!mp.is_unit_residue(b)) throw std::domain_error("sqrt_mod: gcd(b, p) != 1");

    SymbolValue leg = power_symbol_prime(b, mp, 2);
    if (leg.sign() < 0) return {};

    auto powm = [](CycInt base, Int e, const Modulus& mod) {
        CycInt r = mod.reduce(CycInt(1));
        base = mod.reduce(base);
        while (e > 0) {
            if (mpz_odd_p(e.get_mpz_t())) r = mod.reduce(r * base);
            base = mod.reduce(base * base);
            e >>= 1;
        }
        return r;
    };

    // Tonelli-Shanks in the residue field R/p.
    Int t = q - 1;
    int S = 0;
    while (t % 2 == 0) {
        t /= 2;
        ++S;
    }
    CycInt z;
    {
        bool found = false;
        for (const CycInt& cand : mp.residues()) {
            if (!mp.is_unit_residue(cand)) continue;
            if (power_symbol_prime(cand, mp, 2).sign() < 0) {
                z = cand;
                found = true;
                break;
            }
        }
        if (!found) throw std::logic_error("sqrt_mod: no quadratic non-residue found");
    }
    CycInt c0 = powm(z, t, mp);
    CycInt u = powm(b, t, mp);
    CycInt x = powm(b, (t + 1) / 2, mp);
    int M = S;
    while (!mp.congruent(u, CycInt(1))) {
        int i = 0;
        CycInt v = u;
        while (!mp.congruent(v, CycInt(1))) {
            v = mp.reduce(v * v);
            ++i;
            if (i >= M) throw std::logic_error("sqrt_mod: Tonelli-Shanks stalled");
        }
        CycInt b2 = c0;
        for (int k = 0; k < M - i - 1; ++k) b2 = mp.reduce(b2 * b2);
        x = mp.reduce(x * b2);
        c0 = mp.reduce(b2 * b2);
        u = mp.reduce(u * c0);
        M = i;
    }

    // Hensel lifting to p^m.
    CycInt pk = p;
    for (int j = 2; j <= m; ++j) {
        pk = pk * p;
        Modulus mj(pk);
        CycInt num = mj.reduce(x * x - b);
        CycInt corr = mj.reduce(num * inverse_mod(CycInt(2) * x, mj));
        x = mj.reduce(x - corr);
    }
    Modulus mm(pk);
    CycInt x2 = mm.reduce(-x);
    x = mm.reduce(x);
    std::vector<CycInt> out{x, x2};
    std::sort(out.begin(), out.end(), [](const CycInt& a, const CycInt& b2_) { return a.lex_less(b2_); });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

SumValue s4_prime_power(const CycInt& a, const CycInt& b, const CycInt& p, int m,
                        AdditiveMode mode) {
    if (m < 2) throw std::invalid_argument("s4_prime_power: m >= 2");
    CycInt pm = p;
    for (int i = 1; i < m; ++i) pm = pm * p;
    Modulus cm(pm);
    Modulus mp(p);
    if (!cm.is_unit_residue(a) || !cm.is_unit_residue(b))
        throw std::domain_error("s4_prime_power: gcd(ab, p) != 1");

    CycInt binva = cm.reduce(b * inverse_mod(a, cm));
    std::vector<CycInt> roots = sqrt_mod(binva, p, m);
    Int Np = mp.residue_count();
    double scale = m % 2 == 0 ? std::pow(Np.get_d(), m / 2)
                              : std::pow(Np.get_d(), m / 2) * std::sqrt(Np.get_d());
    if (roots.empty()) return {Cplx{0, 0}, cm.residue_count(), SumValue::Closed};

    PhaseTable pt = PhaseTable::make(pm, mode);
    Cplx acc = 0;
    for (const CycInt& u : roots) {
        SymbolValue s4 = power_symbol_prime(u, mp, 4).pow(m);
        CycInt arg = cm.reduce(CycInt(2) * a * u);
        acc += s4.value() * pt.value(cm.to_vec(arg));
    }
    Cplx val = acc;
    if (m % 2 == 0) {
        val *= scale;
    } else {
        // Stationary phase leaves one mod-p quadratic Gauss sum per critical
        // point, with coefficient a*u0 (same class for both roots).  Its sign
        // depends on the prime and the normalization, so it is computed, not
        // assumed: tau_p = sum_x (x/p)_2 e(x/p) in the same mode.
        Cplx tau_p = gauss_sum_symbol(2, mp, mode);
        int sgn = (power_symbol_prime(a, mp, 2) * power_symbol_prime(roots[0], mp, 2)).sign();
        val *= (double)sgn * tau_p * std::pow(Np.get_d(), (m - 1) / 2);
    }
    return {val, cm.residue_count(), SumValue::Closed};
}

QuadClosed quad_sum_closed(const CycInt& m, const CycInt& n, const CycInt& r,
                           const Modulus& c, AdditiveMode mode) {
    static Modulus mod4(CycInt(4));
    if (!mod4.congruent(c.elem(), CycInt(1)))
        throw std::domain_error("quad_sum_closed: c != 1 mod 4");
    if (!c.is_unit_residue(m) || !c.is_unit_residue(CycInt(2) * m))
        throw std::domain_error("quad_sum_closed: gcd(2m, c) != 1");

    PhaseTable pt = PhaseTable::make(c.elem(), mode);
    SymbolValue sym = power_symbol(m, c.elem(), 2);
    Cplx er = pt.value(c.to_vec(c.reduce(r)));
    CycInt inv4m = inverse_mod(CycInt(4) * m, c);
    CycInt arg = c.reduce(-(n * n) * inv4m);
    Cplx esq = pt.value(c.to_vec(arg));
    double scale = std::sqrt(c.residue_count().get_d());
    QuadClosed out;
    out.sym = sym;
    out.phase_r = er;
    out.phase_square = esq;
    out.scale = scale;
    out.value = (double)sym.sign() * er * esq * scale;
    return out;
}

// ---------------------------------------------------------------------------
// Identity suite

namespace {

const char* mode_name(AdditiveMode m) {
    return m == AdditiveMode::PLAIN ? "plain" : "different";
}

Cplx symbol_phase_prefactor(const CycInt& A, const CycInt& B, const SumContext& ctx) {
    // (AB/c)_2 e(-B^2/(8A) / c)
    SymbolValue s = power_symbol(A * B, ctx.modulus().elem(), 2);
    CycInt inv8A = inverse_mod(CycInt(8) * A, ctx.modulus());
    CycInt arg = ctx.modulus().reduce(-(B * B) * inv8A);
    return (double)s.sign() * ctx.phase_of(arg);
}

} // namespace

IdentityReport identity_prime(const CycInt& A, const CycInt& B, const Modulus& p,
                              AdditiveMode mode) {
    SumContext ctx(p, mode);
    return identity_prime(A, B, ctx);
}

IdentityReport identity_prime(const CycInt& A, const CycInt& B, const SumContext& ctx) {
    const Modulus& p = ctx.modulus();
    AdditiveMode mode = ctx.mode();
    if ((p.residue_count() - 1) % 4 != 0)
        throw std::domain_error("identity_prime: N(p) != 1 mod 4");
    if (!p.is_unit_residue(A) || !p.is_unit_residue(B))
        throw std::domain_error("identity_prime: gcd(AB, p) != 1");

    Cplx quartic = complete_sum(PolySpec::quartic_even(A, B), ctx, TwistSpec::none()).value;
    Cplx quad = complete_sum(PolySpec::quadratic(A, B), ctx, TwistSpec::none()).value;
    Cplx lhs = quartic - quad;
    Cplx twisted = complete_sum(PolySpec::quadratic(A, B), ctx, TwistSpec::symbol(2)).value;

    CycInt inv16A = inverse_mod(CycInt(16) * A, p);
    CycInt arg16 = p.reduce(inv16A * B * B);
    Cplx pref = symbol_phase_prefactor(A, B, ctx);
    Cplx rhs = pref * kloosterman_s4(arg16, arg16, ctx).value;

    // alternate candidate normalization of the argument: inv(8A) B^2
    CycInt arg8 = p.reduce(inverse_mod(CycInt(8) * A, p) * B * B);
    Cplx rhs8 = pref * kloosterman_s4(arg8, arg8, ctx).value;

    IdentityReport rep;
    rep.statement_id = "c4";
    rep.modulus_norm = p.residue_count();
    rep.lhs = lhs;
    rep.rhs_terms = {{"eta_twisted_quadratic", twisted}, {"kloosterman_rhs_16A", rhs},
                     {"kloosterman_rhs_8A", rhs8}};
    rep.rhs_total = rhs;
    rep.residual = std::max(std::abs(lhs - twisted), std::abs(twisted - rhs));
    rep.mode = mode;
    rep.note = std::abs(lhs - rhs) <= std::abs(lhs - rhs8) ? "matches inv(16A)B^2"
                                                           : "matches inv(8A)B^2";
    return rep;
}

IdentityReport identity_prime_power(const CycInt& A, const CycInt& B, const CycInt& p,
                                    int m, AdditiveMode mode) {
    if (m == 1) return identity_prime(A, B, Modulus(p), mode);
    if (!is_square(A) || !is_square(B))
        throw std::domain_error("identity_prime_power: A, B must be squares");
    if (!divides(CycInt(4), B))
        throw std::domain_error("identity_prime_power: B != 0 mod 4");
    CycInt pm = p;
    for (int i = 1; i < m; ++i) pm = pm * p;
    Modulus cm(pm);
    if (!cm.is_unit_residue(A) || !cm.is_unit_residue(B) || !cm.is_unit_residue(CycInt(2)))
        throw std::domain_error("identity_prime_power: gcd(2AB, p) != 1");
    SumContext ctx(cm, mode);

    Cplx quartic = complete_sum(PolySpec::quartic_even(A, B), ctx, TwistSpec::none()).value;
    Cplx quad = complete_sum(PolySpec::quadratic(A, B), ctx, TwistSpec::none()).value;
    Cplx lhs = quartic - quad;

    CycInt inv16A = inverse_mod(CycInt(16) * A, cm);
    CycInt arg16 = cm.reduce(inv16A * B * B);
    Cplx pref = symbol_phase_prefactor(A, B, ctx);
    Cplx s4 = s4_prime_power(arg16, arg16, p, m, mode).value;
    Cplx rhs = pref * s4;

    IdentityReport rep;
    rep.statement_id = "pow";
    rep.modulus_norm = cm.residue_count();
    rep.lhs = lhs;
    rep.rhs_terms = {{"salie_closed_s4", s4}, {"prefactor_times_s4", rhs}};
    rep.rhs_total = rhs;
    rep.residual = std::abs(lhs - rhs);
    rep.mode = mode;
    return rep;
}

int64_t cross_term_count(const Factorization& f) {
    return (int64_t(1) << f.factors.size()) - 2;
}

IdentityReport identity_composite(const CycInt& A, const CycInt& B, const Modulus& c,
                                  AdditiveMode mode) {
    static Modulus mod4(CycInt(4));
    if (!mod4.congruent(c.elem(), CycInt(1)))
        throw std::domain_error("identity_composite: c != 1 mod 4");
    if (!is_square(A) || !is_square(B))
        throw std::domain_error("identity_composite: A, B must be squares");
    if (!divides(CycInt(4), B))
        throw std::domain_error("identity_composite: B != 0 mod 4");
    if (!c.is_unit_residue(A * B) || !c.is_unit_residue(CycInt(2)))
        throw std::domain_error("identity_composite: gcd(2AB, c) != 1");

    SumContext ctx(c, mode);
    const Factorization& fac = ctx.factors();
    int nf = (int)fac.factors.size();

    Cplx lhs = complete_sum(PolySpec::quartic_even(A, B), ctx, TwistSpec::none()).value;

    CycInt arg16 = c.reduce(inverse_mod(CycInt(16) * A, c) * B * B);
    Cplx kterm = symbol_phase_prefactor(A, B, ctx) * kloosterman_s4(arg16, arg16, ctx).value;
    Cplx qterm = complete_sum(PolySpec::quadratic(A, B), ctx, TwistSpec::none()).value;

    IdentityReport rep;
    rep.statement_id = "c400";
    rep.modulus_norm = c.residue_count();
    rep.lhs = lhs;
    rep.rhs_terms = {{"kloosterman_full", kterm}, {"quadratic_full", qterm}};
    rep.mode = mode;

    Cplx cross_minus = 0;
    for (int mask = 1; mask < (1 << nf) - 1; ++mask) {
        CycInt n(1);
        for (int i = 0; i < nf; ++i) {
            if (!(mask & (1 << i))) continue;
            for (int e = 0; e < fac.factors[i].exp; ++e) n = n * fac.factors[i].prime;
        }
        // cofactor carries the unit so that n * mm = c exactly
        CycInt mm = divide_exact(c.elem(), n);
        Modulus Mn(n), Mm(mm);
        // quadratic factor at m, coefficients twisted by inv(n)
        CycInt invn_m = inverse_mod(n, Mm);
        Cplx qm = complete_sum(PolySpec::quadratic(Mm.reduce(A * invn_m), Mm.reduce(B * invn_m)),
                               Mm, TwistSpec::none(), mode)
                      .value;
        // Kloosterman factor at n with cofactor twist inv(m)
        SymbolValue sab = power_symbol(A * B, n, 2);
        CycInt inv8Am = inverse_mod(CycInt(8) * A * mm, Mn);
        PhaseTable ptn = PhaseTable::make(n, mode);
        Cplx epref = ptn.value(Mn.to_vec(Mn.reduce(-(B * B) * inv8Am)));
        CycInt argn = Mn.reduce(inverse_mod(CycInt(16) * A * mm, Mn) * B * B);
        Cplx s4p = kloosterman_s4(argn, argn, Mn, mode).value;
        Cplx s4m = kloosterman_s4(Mn.reduce(-argn), Mn.reduce(-argn), Mn, mode).value;
        Cplx base = qm * (double)sab.sign() * epref;
        cross_minus += base * s4m;
        rep.rhs_terms.push_back({"cross_n=" + n.str(), base * s4p});
    }

    // rhs_total is the sequential sum of the listed constituents, exactly
    Cplx rhs_plus = 0;
    for (const RhsTerm& term : rep.rhs_terms) rhs_plus += term.value;
    Cplx rhs_minus = kterm + qterm + cross_minus;
    bool plus_wins = std::abs(lhs - rhs_plus) <= std::abs(lhs - rhs_minus);
    rep.rhs_total = rhs_plus;
    rep.residual = std::abs(lhs - rhs_plus);
    rep.note = plus_wins ? "cross sign +B^2/(16Am)" : "cross sign -B^2/(16Am)";
    return rep;
}

double cross_reduction_check(const CycInt& A, const CycInt& B, const CycInt& n,
                             const CycInt& m, AdditiveMode mode) {
    static Modulus mod4(CycInt(4));
    if (!mod4.congruent(n, CycInt(1)) || !mod4.congruent(m, CycInt(1)))
        throw std::domain_error("cross_reduction_check: n, m != 1 mod 4");
    CycInt nm = n * m;
    Modulus Mnm(nm);
    if (!Mnm.is_unit_residue(CycInt(2) * A * B))
        throw std::domain_error("cross_reduction_check: gcd(nm, 2AB) != 1");

    Modulus Mm(m);
    Cplx lhs;
    if (is_unit(m)) {
        lhs = 1;
    } else {
        CycInt invn = inverse_mod(n, Mm);
        lhs = complete_sum(PolySpec::quadratic(Mm.reduce(A * invn), Mm.reduce(B * invn)), Mm,
                           TwistSpec::none(), mode)
                  .value;
    }

    SymbolValue nsym = is_unit(m) ? SymbolValue::root(0) : power_symbol(n, m, 2);
    CycInt u = Mnm.reduce(B * B * inverse_mod(CycInt(4) * A, Mnm));
    Cplx e_n{1, 0};
    if (!is_unit(n)) {
        Modulus Mn(n);
        PhaseTable ptn = PhaseTable::make(n, mode);
        CycInt un = Mn.reduce(u * inverse_mod(m, Mn));
        e_n = ptn.value(Mn.to_vec(un));
    }
    PhaseTable ptnm = PhaseTable::make(nm, mode);
    Cplx e_nm = ptnm.value(Mnm.to_vec(Mnm.reduce(-u)));
    Cplx rhs = (double)nsym.sign() * e_n * e_nm * std::sqrt(Mm.residue_count().get_d());
    return std::abs(lhs - rhs);
}

Rat reciprocity_residual(const CycInt& A, const CycInt& B, AdditiveMode mode) {
    if (A.is_zero() || B.is_zero())
        throw std::domain_error("reciprocity: zero argument");
    if (!is_unit(euclid_gcd(A, B))) throw std::domain_error("reciprocity: gcd(A,B) != 1");

    Rat phi1, phi2;
    if (is_unit(B)) {
        phi1 = 0; // e(anything integral) = 1
    } else {
        Modulus MB(B);
        phi1 = additive_phase(FieldElem(inverse_mod(A, MB)) / FieldElem(B), mode);
    }
    Rat pa = 0;
    if (!is_unit(A)) {
        Modulus MA(A);
        pa = additive_phase(FieldElem(-inverse_mod(B, MA)) / FieldElem(A), mode);
    }
    Rat pab = additive_phase(FieldElem(CycInt(1)) / FieldElem(A * B), mode);
    phi2 = pa + pab;

    Rat d = phi1 - phi2;
    // distance to the nearest integer, exact
    Int num = d.get_num(), den = d.get_den();
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    Rat frac = d - Rat(q);
    Rat other = 1 - frac;
    return frac < other ? frac : other;
}

// ---------------------------------------------------------------------------

CnnReport cnn_check(int64_t n, int64_t p, int64_t A, int64_t B) {
    if (p <= 2 || (p - 1) % (2 * n) != 0)
        throw std::domain_error("cnn_check: p != 1 mod 2n");
    if (A % p == 0 || B % p == 0) throw std::domain_error("cnn_check: gcd(AB, p) != 1");

    FpCharTable T(p, 2 * n);
    auto eta = T.quadratic();
    Cplx tau_eta = T.gauss_sum(eta);
    auto psi = [&](int64_t v) {
        v %= p;
        if (v < 0) v += p;
        double a = kTau * (double)v / (double)p;
        return Cplx{std::cos(a), std::sin(a)};
    };
    auto inv = [&](int64_t x) {
        int64_t r = 1, e = p - 2;
        x %= p;
        if (x < 0) x += p;
        while (e) {
            if (e & 1) r = (__int128)r * x % p;
            x = (__int128)x * x % p;
            e >>= 1;
        }
        return r;
    };
    auto powp = [&](int64_t b, int64_t e) {
        int64_t r = 1;
        b %= p;
        if (b < 0) b += p;
        while (e) {
            if (e & 1) r = (__int128)r * b % p;
            b = (__int128)b * b % p;
            e >>= 1;
        }
        return r;
    };

    Cplx lhs = 0;
    for (int64_t x = 0; x < p; ++x) {
        int64_t xn = powp(x, n);
        int64_t arg = ((__int128)A * xn % p * xn + (__int128)B * xn) % p;
        lhs += psi(arg);
    }

    // trivial-character branch: the plain complete quadratic Gauss sum
    Cplx rhs = eta(A) * tau_eta * psi(-(int64_t)((__int128)B * B % p * inv(4 * A % p) % p));
    // remaining branches: rho = xi^2 nontrivial of order dividing n
    int64_t step_n = (p - 1) / n;
    int64_t invB2 = inv((int64_t)((__int128)B * B % p));
    for (int64_t k = 1; k < n; ++k) {
        int64_t jr = k * step_n;
        int64_t jx = -1;
        for (int64_t t = 0; t < 2 * n; ++t) {
            int64_t cand = t * (p - 1) / (2 * n);
            if ((2 * cand) % (p - 1) == jr) {
                jx = cand;
                break;
            }
        }
        if (jx < 0) throw std::logic_error("cnn_check: no square root character");
        auto xi = T.char_by_index(jx);
        auto rho = T.char_by_index(jr);
        auto xieta = xi * eta;
        Cplx dsum = 0;
        for (int64_t a = 1; a < p; ++a) {
            Cplx xa = xi(a);
            int64_t abase = (int64_t)((__int128)4 * a % p * A % p * invB2 % p);
            for (int64_t b = 1; b < p; ++b) {
                int64_t arg = (a + b + (int64_t)((__int128)abase * b % p)) % p;
                dsum += xa * xieta(b) * psi(arg);
            }
        }
        Cplx coef = xi(4) * std::conj(rho(B)) * eta(p - 1) * tau_eta / (double)p;
        rhs += coef * dsum;
    }

    CnnReport rep;
    rep.p = p;
    rep.n = n;
    rep.A = A;
    rep.B = B;
    rep.lhs = lhs;
    rep.rhs = rhs;
    rep.residual = std::abs(lhs - rhs);
    return rep;
}

// ---------------------------------------------------------------------------

std::optional<CycInt> sqrt_exact(const CycInt& x) {
    if (x.is_zero()) return CycInt(0);
    if (x.is_one()) return CycInt(1);
    CycInt core(1);
    CycInt unit = x;
    if (!is_unit(x)) {
        Factorization f = factor(x);
        for (auto& pp : f.factors) {
            if (pp.exp % 2 != 0) return std::nullopt;
            for (int e = 0; e < pp.exp / 2; ++e) core = core * pp.prime;
        }
        unit = f.unit;
    }
    // unit = w^k eps^j; square iff k and j both even
    double lr = std::log(std::abs(unit.embed1())) / std::log(1.0 + std::sqrt(2.0));
    long j = std::lround(lr);
    CycInt tor = unit * unit_power(-j);
    for (int k = 0; k < 8; ++k) {
        if (tor == CycInt::omega(k)) {
            if (k % 2 != 0 || j % 2 != 0) return std::nullopt;
            CycInt root = core * CycInt::omega(k / 2) * unit_power(j / 2);
            if (root * root == x) return root;
            root = core * CycInt::omega(k / 2 + 4) * unit_power(j / 2);
            if (root * root == x) return root;
            return std::nullopt;
        }
    }
    return std::nullopt;
}

bool is_square(const CycInt& x) { return sqrt_exact(x).has_value(); }

std::string IdentityReport::to_json() const {
    nlohmann::json j;
    j["statement_id"] = statement_id;
    j["modulus_norm"] = modulus_norm.get_str();
    j["lhs"] = {lhs.real(), lhs.imag()};
    j["rhs_terms"] = nlohmann::json::array();
    for (auto& t : rhs_terms)
        j["rhs_terms"].push_back({{"label", t.label}, {"value", {t.value.real(), t.value.imag()}}});
    j["rhs_total"] = {rhs_total.real(), rhs_total.imag()};
    j["residual"] = residual;
    j["seed"] = seed;
    j["mode"] = mode_name(mode);
    if (!note.empty()) j["note"] = note;
    return j.dump();
}

} // namespace zw8
