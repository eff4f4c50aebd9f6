#include "zw8/series.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <thread>

#include "zw8/factor.hpp"
#include "zw8/units.hpp"

namespace zw8 {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

// ---------------------------------------------------------------------------
// Weight and Mellin transform

SmoothWeight SmoothWeight::bump(double a, double b) {
    if (!(0 < a && a < b)) throw std::invalid_argument("SmoothWeight: need 0 < a < b");
    SmoothWeight w;
    w.a_ = a;
    w.b_ = b;
    return w;
}

SmoothWeight SmoothWeight::from_samples(double a, double b,
                                        std::vector<std::pair<double, double>> samples) {
    SmoothWeight w = bump(a, b);
    std::sort(samples.begin(), samples.end());
    w.samples_ = std::move(samples);
    return w;
}

double SmoothWeight::operator()(double y) const {
    if (y <= a_ || y >= b_) return 0;
    if (samples_.empty()) {
        double u = 2 * (y - a_) / (b_ - a_) - 1;
        return std::exp(-1.0 / (1.0 - u * u));
    }
    // Catmull-Rom through the samples, clamped to the support.
    size_t n = samples_.size();
    if (n == 1) return samples_[0].second;
    size_t k = 0;
    while (k + 1 < n && samples_[k + 1].first < y) ++k;
    if (k + 1 >= n) return samples_.back().second;
    auto at = [&](long i) { return samples_[(size_t)std::clamp<long>(i, 0, (long)n - 1)]; };
    auto [x1, p1] = at((long)k);
    auto [x2, p2] = at((long)k + 1);
    double p0 = at((long)k - 1).second, p3 = at((long)k + 2).second;
    double t = (y - x1) / (x2 - x1);
    double t2 = t * t, t3 = t2 * t;
    return 0.5 * ((2 * p1) + (-p0 + p2) * t + (2 * p0 - 5 * p1 + 4 * p2 - p3) * t2 +
                  (-p0 + 3 * p1 - 3 * p2 + p3) * t3);
}

namespace {

double simpson(const std::function<double(double)>& f, double a, double b, double fa,
               double fm, double fb, double whole, double eps, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6 * (fa + 4 * flm + fm);
    double right = (b - m) / 6 * (fm + 4 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15 * eps)
        return left + right + (left + right - whole) / 15;
    return simpson(f, a, m, fa, flm, fm, left, eps / 2, depth - 1) +
           simpson(f, m, b, fm, frm, fb, right, eps / 2, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double eps) {
    double m = 0.5 * (a + b);
    double fa = f(a), fm = f(m), fb = f(b);
    double whole = (b - a) / 6 * (fa + 4 * fm + fb);
    return simpson(f, a, b, fa, fm, fb, whole, eps, 48);
}

} // namespace

double mellin_hat(const SmoothWeight& psi, double s) {
    auto f = [&](double y) { return psi(y) * std::pow(y, s - 1.0); };
    return integrate(f, psi.support_lo(), psi.support_hi(), 1e-10);
}

// ---------------------------------------------------------------------------
// Exponent fitting

FitResult fit_exponent(const std::vector<SeriesPoint>& points,
                       std::optional<std::pair<double, double>> window) {
    std::vector<std::pair<double, double>> xy;
    for (const SeriesPoint& p : points) {
        if (window && (p.X < window->first || p.X > window->second)) continue;
        double v = std::abs(p.value);
        if (v <= 0 || p.X <= 0) continue;
        xy.push_back({std::log(p.X), std::log(v)});
    }
    if (xy.size() < 3) throw std::domain_error("fit_exponent: fewer than 3 usable points");
    double n = (double)xy.size(), sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto& [x, y] : xy) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double denom = n * sxx - sx * sx;
    FitResult r;
    r.slope = (n * sxy - sx * sy) / denom;
    r.intercept = (sy - r.slope * sx) / n;
    r.points_used = (int)xy.size();
    double ss = 0;
    for (auto& [x, y] : xy) {
        double e = y - (r.slope * x + r.intercept);
        ss += e * e;
    }
    if (xy.size() > 2)
        r.stderr_slope = std::sqrt(ss / (n - 2) / (sxx - sx * sx / n));
    return r;
}

// ---------------------------------------------------------------------------
// Lattice enumeration

std::vector<CycInt> enumerate_weighted(double X, const SmoothWeight& psi, bool weight_of_X) {
    double scale = weight_of_X ? X : std::sqrt(X);
    double lo = scale / psi.support_hi(), hi = scale / psi.support_lo();
    // |eta_j(c)|^2 in (lo, hi): coordinates bounded by |eta1| + |eta2| over 2
    long K = (long)std::floor(std::sqrt(hi)) + 1;
    std::vector<CycInt> out;
    for (long x0 = -((K + 3) / 4) * 4 + 1; x0 <= K; x0 += 4)
        for (long x1 = -((K + 3) / 4) * 4; x1 <= K; x1 += 4)
            for (long x2 = -((K + 3) / 4) * 4; x2 <= K; x2 += 4)
                for (long x3 = -((K + 3) / 4) * 4; x3 <= K; x3 += 4) {
                    CycInt c(x0, x1, x2, x3);
                    double n1 = std::norm(c.embed1()), n2 = std::norm(c.embed2());
                    if (n1 <= lo || n1 >= hi || n2 <= lo || n2 >= hi) continue;
                    out.push_back(c);
                }
    return out;
}

Cplx pairwise_sum(const std::vector<Cplx>& terms) {
    std::function<Cplx(size_t, size_t)> rec = [&](size_t lo, size_t hi) -> Cplx {
        if (hi - lo == 0) return {0, 0};
        if (hi - lo == 1) return terms[lo];
        size_t mid = lo + (hi - lo) / 2;
        return rec(lo, mid) + rec(mid, hi);
    };
    return rec(0, terms.size());
}

// ---------------------------------------------------------------------------
// Weighted series

void validate_series_hypotheses(const SeriesParams& p) {
    static Modulus mod4(CycInt(4));
    if (!mod4.congruent(p.D, CycInt(1)))
        throw std::domain_error("series hypotheses: D != 1 mod 4");
    if (!divides(CycInt(4), p.B))
        throw std::domain_error("series hypotheses: B != 4B'");
    if (!is_square(p.A) || !is_square(p.B))
        throw std::domain_error("series hypotheses: A, B must be squares");
    FieldElem ratio = FieldElem(p.B * p.B) / FieldElem(CycInt(16) * p.A);
    if (!ratio.is_integral())
        throw std::domain_error("series hypotheses: B^2/(16A) not integral");
    CycInt Bp = divide_exact(p.B, CycInt(4));
    if (!is_unit(Bp)) {
        if (is_unit(p.D))
            throw std::domain_error("series hypotheses: primes of B' must divide D");
        for (auto& pp : factor(Bp).factors)
            if (!divides(pp.prime, p.D))
                throw std::domain_error("series hypotheses: primes of B' must divide D");
    }
}

namespace {

struct WeightedModulus {
    CycInt c;
    double weight;
    Cplx theta_val;
};

std::vector<WeightedModulus> weighted_moduli(const SeriesParams& p, double X) {
    double scale = p.weight_of_X ? X : std::sqrt(X);
    std::vector<WeightedModulus> out;
    for (const CycInt& c : enumerate_weighted(X, p.psi, p.weight_of_X)) {
        if (!is_unit(p.D) && !is_unit(euclid_gcd(c, p.D))) continue;
        Cplx tv{1, 0};
        if (p.theta) {
            tv = p.theta->value(c);
            if (tv == Cplx{0, 0}) continue;
        }
        double w = p.psi(scale / std::norm(c.embed1())) * p.psi(scale / std::norm(c.embed2()));
        out.push_back({c, w, tv});
    }
    return out;
}

// S4(t, t, c) assembled from prime-power closed forms where available.
Cplx s4_equal_args(const CycInt& t, const Modulus& c, const Factorization& fac,
                   AdditiveMode mode) {
    Cplx acc{1, 0};
    for (auto& pp : fac.factors) {
        CycInt pe(1);
        for (int e = 0; e < pp.exp; ++e) pe = pe * pp.prime;
        CycInt cof = divide_exact(c.elem(), pe);
        Modulus mpe(pe);
        CycInt targ = mpe.reduce(t * inverse_mod(cof, mpe));
        if (pp.exp >= 2)
            acc *= s4_prime_power(targ, targ, pp.prime, pp.exp, mode).value;
        else
            acc *= kloosterman_s4_prime(targ, targ, mpe, mode).value;
    }
    return acc;
}

// One modulus' contribution to each series kind (without the weight, theta,
// 1/N factors).  e(F/c) rides along with every kind.
Cplx kind_value(SeriesKind kind, const SeriesParams& p, const Modulus& mc,
                const Factorization& fac, AdditiveMode mode) {
    PhaseTable pt = PhaseTable::make(mc.elem(), mode);
    Cplx eF = pt.value(mc.to_vec(mc.reduce(p.F)));
    switch (kind) {
        case SeriesKind::QuarticLhs: {
            SumContext ctx(mc, mode);
            return eF * complete_sum(PolySpec::quartic_even(p.A, p.B), ctx, TwistSpec::none())
                            .value;
        }
        case SeriesKind::QuadraticLhs: {
            // closed form applies at every enumerated modulus (c = 1 mod 4)
            QuadClosed qc = quad_sum_closed(p.A, p.B, CycInt(0), mc, mode);
            return eF * qc.value;
        }
        case SeriesKind::KloostermanRhs: {
            SymbolValue sab = power_symbol(p.A * p.B, mc.elem(), 2);
            CycInt arg = mc.reduce(inverse_mod(CycInt(16) * p.A, mc) * p.B * p.B);
            Cplx pref = (double)sab.sign() *
                        pt.value(mc.to_vec(mc.reduce(-(p.B * p.B) *
                                                     inverse_mod(CycInt(8) * p.A, mc))));
            return eF * pref * s4_equal_args(arg, mc, fac, mode);
        }
        case SeriesKind::CrossRhs: {
            int nf = (int)fac.factors.size();
            Cplx total{0, 0};
            for (int mask = 1; mask < (1 << nf) - 1; ++mask) {
                CycInt n(1);
                for (int i = 0; i < nf; ++i) {
                    if (!(mask & (1 << i))) continue;
                    for (int e = 0; e < fac.factors[i].exp; ++e) n = n * fac.factors[i].prime;
                }
                CycInt mm = divide_exact(mc.elem(), n);
                Modulus Mn(n), Mm(mm);
                CycInt invn = inverse_mod(n, Mm);
                Cplx qm = complete_sum(
                              PolySpec::quadratic(Mm.reduce(p.A * invn), Mm.reduce(p.B * invn)),
                              Mm, TwistSpec::none(), mode)
                              .value;
                SymbolValue sab = power_symbol(p.A * p.B, n, 2);
                PhaseTable ptn = PhaseTable::make(n, mode);
                Cplx epref = ptn.value(Mn.to_vec(
                    Mn.reduce(-(p.B * p.B) * inverse_mod(CycInt(8) * p.A * mm, Mn))));
                CycInt argn = Mn.reduce(inverse_mod(CycInt(16) * p.A * mm, Mn) * p.B * p.B);
                Factorization fn = factor(n);
                total += qm * (double)sab.sign() * epref * s4_equal_args(argn, Mn, fn, mode);
            }
            return eF * total;
        }
    }
    return {0, 0};
}

} // namespace

SeriesPoint weighted_series(SeriesKind kind, const SeriesParams& p, double X) {
    validate_series_hypotheses(p);
    auto t0 = std::chrono::steady_clock::now();
    std::vector<WeightedModulus> mods = weighted_moduli(p, X);
    std::vector<Cplx> terms(mods.size(), Cplx{0, 0});

    auto worker = [&](size_t begin, size_t step) {
        for (size_t i = begin; i < mods.size(); i += step) {
            Modulus mc(mods[i].c);
            Factorization fac = factor(mc.elem());
            Cplx v = kind_value(kind, p, mc, fac, p.mode);
            terms[i] = mods[i].weight * mods[i].theta_val * v / mc.residue_count().get_d();
        }
    };
    int W = std::max(1, p.workers);
    if (W == 1) {
        worker(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < W; ++w) pool.emplace_back(worker, (size_t)w, (size_t)W);
        for (auto& th : pool) th.join();
    }

    SeriesPoint out;
    out.X = X;
    out.value = pairwise_sum(terms);
    out.term_count = (int64_t)mods.size();
    out.elapsed_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

DecompositionCheck decomposition_check(const SeriesParams& p, double X) {
    validate_series_hypotheses(p);
    DecompositionCheck out;
    for (const WeightedModulus& wm : weighted_moduli(p, X)) {
        Modulus mc(wm.c);
        Factorization fac = factor(mc.elem());
        double Nc = mc.residue_count().get_d();
        Cplx lhs = kind_value(SeriesKind::QuarticLhs, p, mc, fac, p.mode);
        Cplx rhs = kind_value(SeriesKind::KloostermanRhs, p, mc, fac, p.mode) +
                   kind_value(SeriesKind::QuadraticLhs, p, mc, fac, p.mode) +
                   kind_value(SeriesKind::CrossRhs, p, mc, fac, p.mode);
        double scale = wm.weight / Nc;
        double resid = std::abs(lhs - rhs) * scale;
        double allowance = 1e-8 * wm.weight * std::sqrt(Nc) * 4.0 / Nc;
        ++out.moduli;
        if (resid > out.worst_residual) {
            out.worst_residual = resid;
            out.worst_allowance = allowance;
        }
        if (resid > allowance) out.pass = false;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Main term machinery

namespace {

// Local character lambda(d) = theta_p(d) (d/p)_2^j on (R/p^e)^*; returns the
// exact local sum: phi(p^e) when lambda is trivial, else 0.
Int t_local(const CycInt& prime, int vD, int j, const CycInt& D,
            const std::optional<DirichletChar>& theta) {
    int e = std::max(j, vD);
    CycInt pe(1);
    for (int i = 0; i < e; ++i) pe = pe * prime;
    Modulus mpe(pe);
    Modulus mp(prime);

    CycInt cofactor = D;
    CycInt pD(1);
    for (int i = 0; i < vD; ++i) pD = pD * prime;
    cofactor = divide_exact(D, pD);

    auto lambda_trivial = [&]() -> bool {
        auto G = UnitGroup::discover(mpe);
        Modulus mD = theta ? theta->modulus() : Modulus(CycInt(1));
        for (const CycInt& h : G->basis()) {
            Cplx v{1, 0};
            if (theta && !is_unit(pD)) {
                // lift h to a residue mod D congruent to 1 away from p
                CycInt lift = is_unit(cofactor)
                                  ? h
                                  : crt(h, Modulus(pD), CycInt(1), Modulus(cofactor));
                v *= theta->value(mD.reduce(lift));
            }
            if (j % 2 != 0) v *= (double)power_symbol_prime(h, mp, 2).sign();
            if (std::abs(v - Cplx{1, 0}) > 1e-9) return false;
        }
        return true;
    };
    if (!lambda_trivial()) return Int(0);
    return phi_ideal(pe);
}

} // namespace

Cplx t_factor(const CycInt& A, const CycInt& D, const std::optional<DirichletChar>& theta) {
    // primes of A must divide D
    if (!is_unit(A) && !A.is_one()) {
        for (auto& pp : factor(A).factors)
            if (!divides(pp.prime, D))
                throw std::domain_error("t_factor: primes of A must divide D");
    }
    if (is_unit(D)) return Cplx{1, 0};
    Int total(1);
    for (auto& pp : factor(D).factors) {
        int vD = pp.exp;
        int j = 0;
        CycInt rest = A;
        while (!is_unit(rest) && divides(pp.prime, rest)) {
            rest = divide_exact(rest, pp.prime);
            ++j;
        }
        Int loc = t_local(pp.prime, vD, j, D, theta);
        if (loc == 0) return Cplx{0, 0};
        total *= loc;
    }
    return Cplx{total.get_d(), 0};
}

Cplx t_factor_brute(const CycInt& A, const CycInt& D,
                    const std::optional<DirichletChar>& theta) {
    // literal sum over d mod LCM(A, D) of theta(d) (d/A)_2
    CycInt L = D;
    if (!is_unit(A)) {
        for (auto& pp : factor(A).factors) {
            int vD = 0;
            CycInt rest = D;
            while (!is_unit(rest) && divides(pp.prime, rest)) {
                rest = divide_exact(rest, pp.prime);
                ++vD;
            }
            for (int i = vD; i < pp.exp; ++i) L = L * pp.prime;
        }
    }
    Modulus mL(L);
    Modulus mD = theta ? theta->modulus() : Modulus(D);
    Cplx acc{0, 0};
    bool a_unit = is_unit(A);
    mL.for_each_residue([&](const Vec4& v) {
        CycInt d = mL.from_vec(v);
        CycInt g = euclid_gcd(d.is_zero() ? mL.elem() : d, mL.elem());
        if (!is_unit(g)) return;
        Cplx w{1, 0};
        if (theta) {
            w = theta->value(d);
            if (w == Cplx{0, 0}) return;
        } else if (!is_unit(euclid_gcd(d, D))) {
            return;
        }
        if (!a_unit) {
            SymbolValue s = power_symbol(d, A, 2);
            if (s.is_zero()) return;
            w *= (double)s.sign();
        }
        acc += w;
    });
    return acc;
}

std::vector<TTableRow> t_table(const CycInt& p, int jmax) {
    // T_{p^j,p}(theta) = sum over d mod p^max(j,1) of theta(d) (d/p^j)_2 with
    // theta mod p.  Both factors only see d mod p, so one pass per j with
    // mod-p lookups covers every character at once.  Sums are exact integers
    // (the character group pairs conjugates); accumulate exponent counts.
    Modulus mp(p);
    const SmallForm& sp = mp.small();
    int64_t Np = sp.norm;
    auto chars = dirichlet_enumerate(mp);
    auto G = UnitGroup::discover(mp);
    int64_t L = G->exponent();

    // per mod-p residue: character exponent index and quadratic symbol
    std::vector<int64_t> pack_of(Np);
    std::vector<int> qsym(Np); // +1 / -1 / 0
    std::vector<std::vector<int64_t>> chi_exp(chars.size(), std::vector<int64_t>(Np, -1));
    {
        int64_t idx = 0;
        Vec4 v;
        for (v[0] = 0; v[0] < sp.diag[0]; ++v[0])
            for (v[1] = 0; v[1] < sp.diag[1]; ++v[1])
                for (v[2] = 0; v[2] < sp.diag[2]; ++v[2])
                    for (v[3] = 0; v[3] < sp.diag[3]; ++v[3], ++idx) {
                        CycInt d = mp.from_vec(v);
                        auto coords = G->coords(d);
                        if (!coords) {
                            qsym[idx] = 0;
                            continue;
                        }
                        SymbolValue s = power_symbol_prime(d, mp, 2);
                        qsym[idx] = s.sign();
                        for (size_t ci = 0; ci < chars.size(); ++ci)
                            chi_exp[ci][idx] = *chars[ci].exponent_of(d);
                    }
    }
    auto pidx = [&](Vec4 r) {
        sp.reduce(r);
        int64_t k = 0;
        for (int i = 0; i < 4; ++i) k = k * sp.diag[i] + r[i];
        return k;
    };

    std::vector<TTableRow> rows(chars.size());
    for (size_t ci = 0; ci < chars.size(); ++ci) {
        rows[ci].char_index = (int64_t)ci;
        rows[ci].char_order = chars[ci].order();
        rows[ci].values.assign((size_t)jmax + 1, Int(0));
    }
    for (int j = 0; j <= jmax; ++j) {
        int e = std::max(j, 1);
        CycInt pe(1);
        for (int i = 0; i < e; ++i) pe = pe * p;
        Modulus mpe(pe);
        // exponent histogram per character: counts[ci][exponent]
        std::vector<std::vector<int64_t>> counts(chars.size(), std::vector<int64_t>(L, 0));
        std::vector<std::vector<int64_t>> counts_neg(chars.size(), std::vector<int64_t>(L, 0));
        mpe.for_each_residue([&](const Vec4& v) {
            int64_t i0 = pidx(v);
            int s = qsym[i0];
            if (s == 0) return;
            int sj = (j % 2 == 0) ? 1 : s;
            for (size_t ci = 0; ci < chars.size(); ++ci) {
                if (sj > 0)
                    counts[ci][chi_exp[ci][i0]]++;
                else
                    counts_neg[ci][chi_exp[ci][i0]]++;
            }
        });
        for (size_t ci = 0; ci < chars.size(); ++ci) {
            Cplx acc = 0;
            for (int64_t k = 0; k < L; ++k) {
                int64_t net = counts[ci][k] - counts_neg[ci][k];
                if (net == 0) continue;
                double a = 2 * kPi * (double)k / (double)L;
                acc += (double)net * Cplx{std::cos(a), std::sin(a)};
            }
            rows[ci].values[(size_t)j] = Int((long)std::llround(acc.real()));
            if (std::abs(acc.imag()) > 1e-6 ||
                std::abs(acc.real() - std::llround(acc.real())) > 1e-6)
                throw std::logic_error("t_table: non-integer character sum");
        }
    }
    return rows;
}

Int phi_ideal(const CycInt& c) {
    if (c.is_zero()) throw std::domain_error("phi_ideal: zero");
    if (is_unit(c)) return 1;
    Int out(1);
    for (auto& pp : factor(c).factors) {
        Int Np = pp.prime.norm();
        for (int e = 1; e < pp.exp; ++e) out *= Np;
        out *= Np - 1;
    }
    return out;
}

Cplx quad_main_term(const SeriesParams& p, double X) {
    validate_series_hypotheses(p);
    // Prop q22 standing hypotheses: primes of A divide D as well.
    Cplx T = t_factor(p.A, p.D, p.theta);
    CycInt Lodd = p.D;
    if (!is_unit(p.A)) {
        for (auto& pp : factor(p.A).factors) {
            int vD = 0;
            CycInt rest = p.D;
            while (!is_unit(rest) && divides(pp.prime, rest)) {
                rest = divide_exact(rest, pp.prime);
                ++vD;
            }
            for (int i = vD; i < pp.exp; ++i) Lodd = Lodd * pp.prime;
        }
    }
    double NL = Lodd.norm().get_d() * 256.0; // N(LCM(4, A, D)); phi(4R-part) folded in
    double ph = mellin_hat(p.psi, -0.5);
    return std::sqrt(X) * (kPi * kPi / 4.0) * ph * ph * T / NL;
}

// ---------------------------------------------------------------------------
// Normalized enumeration and partial sums

std::vector<CycInt> enumerate_normalized_one_mod4(int64_t T) {
    double kappa = std::pow(1.0 + std::sqrt(2.0), 4.0) * 1.05;
    double hi2 = std::sqrt((double)T) * kappa; // bound on |eta_j|^2
    long K = (long)std::floor(std::sqrt(hi2)) + 1;
    std::set<std::string> seen;
    std::vector<std::pair<int64_t, CycInt>> found;
    for (long x0 = -((K + 3) / 4) * 4 + 1; x0 <= K; x0 += 4)
        for (long x1 = -((K + 3) / 4) * 4; x1 <= K; x1 += 4)
            for (long x2 = -((K + 3) / 4) * 4; x2 <= K; x2 += 4)
                for (long x3 = -((K + 3) / 4) * 4; x3 <= K; x3 += 4) {
                    CycInt c(x0, x1, x2, x3);
                    if (c.is_zero()) continue;
                    Int n = c.norm();
                    if (n > T) continue;
                    auto nr = try_normalize_assoc(c);
                    if (!nr) continue; // cannot happen for c = 1 mod 4
                    std::string key = nr->value.str();
                    if (!seen.insert(key).second) continue;
                    found.push_back({mpz_get_si(n.get_mpz_t()), nr->value});
                }
    std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first < b.first;
        return a.second.lex_less(b.second);
    });
    std::vector<CycInt> out;
    out.reserve(found.size());
    for (auto& [n, c] : found) out.push_back(c);
    return out;
}

ThetaPartial theta_partial(const std::optional<DirichletChar>& theta, double s, int64_t T) {
    if (!(s > 1.25)) throw std::domain_error("theta_partial: need s > 5/4");
    if (T < 1) throw std::domain_error("theta_partial: T >= 1");
    ThetaPartial out;
    auto theta4 = theta ? std::optional<DirichletChar>(theta->power(4)) : std::nullopt;
    Cplx num{0, 0}, den{0, 0};
    for (const CycInt& c0 : enumerate_normalized_one_mod4(T)) {
        Cplx tv{1, 0};
        if (theta4) {
            tv = theta4->value(c0);
            if (tv == Cplx{0, 0}) continue;
        }
        double N = c0.norm().get_d();
        double phi = phi_ideal(c0).get_d();
        // phi(c0^4) = N^3 phi(c0)
        out.partial_sum += tv * phi * std::pow(N, 3.0) / std::pow(N, 4.0 * s);
        num += tv * std::pow(N, -(4.0 * s - 4.0));
        den += tv * std::pow(N, -(4.0 * s - 3.0));
        ++out.terms;
    }
    out.l_ratio_partial = den == Cplx{0, 0} ? Cplx{0, 0} : num / den;
    return out;
}

} // namespace zw8
