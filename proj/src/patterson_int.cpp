#include "zw8/patterson_int.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <unordered_map>

#include "zw8/factor.hpp"

namespace zw8 {

namespace {
constexpr double kTau = 2.0 * 3.14159265358979323846;

int64_t powmod_i(int64_t a, int64_t e, int64_t m) {
    int64_t r = 1 % m;
    a %= m;
    if (a < 0) a += m;
    while (e) {
        if (e & 1) r = (__int128)r * a % m;
        a = (__int128)a * a % m;
        e >>= 1;
    }
    return r;
}

int64_t invmod_i(int64_t a, int64_t m) {
    int64_t g = m, x = 0, x1 = 1, a1 = ((a % m) + m) % m;
    while (a1) {
        int64_t q = g / a1;
        g -= q * a1;
        std::swap(g, a1);
        x -= q * x1;
        std::swap(x, x1);
    }
    if (g != 1) throw std::logic_error("invmod: not invertible");
    return ((x % m) + m) % m;
}

// Jacobi symbol (a/n), n odd positive
int jacobi(int64_t a, int64_t n) {
    a %= n;
    if (a < 0) a += n;
    int s = 1;
    while (a != 0) {
        while (a % 2 == 0) {
            a /= 2;
            if (n % 8 == 3 || n % 8 == 5) s = -s;
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3) s = -s;
        a %= n;
    }
    return n == 1 ? s : 0;
}

std::complex<double> unit_phase(int64_t num, int64_t den) {
    double a = kTau * (double)(((num % den) + den) % den) / (double)den;
    return {std::cos(a), std::sin(a)};
}

} // namespace

int64_t IntPoly::eval_mod(int64_t x, int64_t m) const {
    __int128 acc = 0;
    for (auto& [co, e] : terms) {
        int64_t xe = 1;
        for (int64_t i = 0; i < e; ++i) xe = (__int128)xe * (x % m) % m;
        acc += (__int128)(((co % m) + m) % m) * xe;
    }
    int64_t r = (int64_t)(acc % m);
    return r < 0 ? r + m : r;
}

std::complex<double> inner_sum_direct(const IntPoly& f, int64_t c) {
    std::complex<double> acc = 0;
    for (int64_t x = 0; x < c; ++x) acc += unit_phase(f.eval_mod(x, c), c);
    return acc;
}

struct PattersonEngine::Memo {
    std::unordered_map<uint64_t, std::complex<double>> brute; // key: pk<<20 | t-ish
    std::unordered_map<int64_t, std::pair<std::complex<double>, int64_t>> cubic_tau;
    // cubic_tau[p] = (tau(chi), r1 = g^{(p-1)/3})
};

PattersonEngine::PattersonEngine(IntPoly f, int64_t direct_crossover)
    : f_(std::move(f)), crossover_(direct_crossover), memo_(std::make_shared<Memo>()) {
    if (f_.terms.size() == 1 && f_.terms[0].second == 3) {
        is_cubic_monomial_ = true;
        a3_ = f_.terms[0].first;
    }
    if (f_.terms.size() <= 3) {
        int64_t a = 0, b = 0, c0 = 0;
        bool quad = true;
        for (auto& [co, e] : f_.terms) {
            if (e == 2)
                a = co;
            else if (e == 1)
                b = co;
            else if (e == 0)
                c0 = co;
            else
                quad = false;
        }
        if (quad && a != 0) {
            is_quadratic_ = true;
            qa_ = a;
            qb_ = b;
            qc_ = c0;
        }
    }
}

void PattersonEngine::ensure_sieve(int64_t n) {
    if ((int64_t)spf_.size() > n) return;
    spf_.assign(n + 1, 0);
    for (int64_t i = 2; i <= n; ++i) {
        if (spf_[i] == 0)
            for (int64_t j = i; j <= n; j += i)
                if (spf_[j] == 0) spf_[j] = (int32_t)i;
    }
}

std::complex<double> PattersonEngine::prime_power_sum(int64_t p, int k, int64_t pk, int64_t t) {
    t = ((t % pk) + pk) % pk;

    if (is_cubic_monomial_) {
        int64_t ta = (__int128)t * (((a3_ % pk) + pk) % pk) % pk;
        if (p >= 5 && ta % p != 0) {
            // Cubic Gauss sum at one prime: S(t; p) = 2 Re(conj(chi)(t) tau(chi))
            // for p = 1 mod 3, zero otherwise (cubing is then a bijection).
            auto k1_value = [&](int64_t tr) -> std::complex<double> {
                if (p % 3 == 2) return 0;
                auto it = memo_->cubic_tau.find(p);
                if (it == memo_->cubic_tau.end()) {
                    auto fac = factor_u64((uint64_t)(p - 1));
                    int64_t g = 2;
                    for (;; ++g) {
                        bool ok = true;
                        for (auto [q, e] : fac)
                            if (powmod_i(g, (p - 1) / (int64_t)q, p) == 1) {
                                ok = false;
                                break;
                            }
                        if (ok) break;
                    }
                    std::complex<double> tau = 0;
                    int64_t x = 1;
                    const std::complex<double> z3{-0.5, std::sqrt(3.0) / 2.0};
                    std::complex<double> zpow[3] = {{1, 0}, z3, z3 * z3};
                    for (int64_t a = 0; a < p - 1; ++a) {
                        tau += zpow[a % 3] * unit_phase(x, p);
                        x = (__int128)x * g % p;
                    }
                    it = memo_->cubic_tau.insert({p, {tau, powmod_i(g, (p - 1) / 3, p)}}).first;
                }
                auto [tau, r1] = it->second;
                int64_t cls = powmod_i(tr, (p - 1) / 3, p);
                int e = cls == 1 ? 0 : (cls == r1 ? 1 : 2);
                const std::complex<double> z3{-0.5, std::sqrt(3.0) / 2.0};
                std::complex<double> zpow[3] = {{1, 0}, z3, z3 * z3};
                return zpow[(3 - e) % 3] * tau + zpow[e] * std::conj(tau);
            };
            // The unit part vanishes for every k >= 2, and x = p*y descends in
            // steps of p^3: S(t; p^2) = p, S(t; p^3) = p^2, S(t; p^k) = p^2 S(t; p^{k-3}).
            double scale = 1;
            int kk = k;
            while (kk >= 2) {
                if (kk == 2) return {scale * (double)p, 0};
                if (kk == 3) return {scale * (double)p * (double)p, 0};
                scale *= (double)p * (double)p;
                kk -= 3;
            }
            return scale * k1_value(ta % p);
        }
        // p in {2, 3} or p | coefficient: memoized brute force
        uint64_t key = ((uint64_t)pk << 21) | (uint64_t)ta;
        auto it = memo_->brute.find(key);
        if (it != memo_->brute.end()) return it->second;
        std::complex<double> acc = 0;
        for (int64_t x = 0; x < pk; ++x) {
            int64_t x3 = (__int128)x * x % pk * x % pk;
            acc += unit_phase((int64_t)((__int128)ta * x3 % pk), pk);
        }
        memo_->brute[key] = acc;
        return acc;
    }

    if (is_quadratic_) {
        int64_t a = (int64_t)((__int128)t * (((qa_ % pk) + pk) % pk) % pk);
        int64_t b = (int64_t)((__int128)t * (((qb_ % pk) + pk) % pk) % pk);
        int64_t c0 = (int64_t)((__int128)t * (((qc_ % pk) + pk) % pk) % pk);
        std::complex<double> cphase = unit_phase(c0, pk);
        if (p != 2 && a % p != 0) {
            // complete the square: e(-b^2/(4a)) * (a/p)^k * G(1, p^k)
            int64_t inv4a = invmod_i(4 * (a % pk) % pk, pk);
            int64_t shift = (int64_t)((__int128)(pk - (__int128)b % pk * b % pk % pk) % pk *
                                      inv4a % pk);
            std::complex<double> g1;
            if (k % 2 == 0)
                g1 = {std::pow((double)p, k / 2.0), 0};
            else {
                double rp = std::pow((double)p, (k - 1) / 2.0) * std::sqrt((double)p);
                g1 = (p % 4 == 1) ? std::complex<double>{rp, 0} : std::complex<double>{0, rp};
            }
            double sj = jacobi(a, p) == 1 ? 1.0 : -1.0;
            if (k % 2 == 0) sj = 1.0;
            return cphase * unit_phase(shift, pk) * sj * g1;
        }
        // p = 2 or degenerate leading coefficient: memoized brute force
        uint64_t key = ((uint64_t)pk << 42) | ((uint64_t)(a % pk) << 21) | (uint64_t)(b % pk);
        auto it = memo_->brute.find(key);
        if (it != memo_->brute.end()) return cphase * it->second;
        std::complex<double> acc = 0;
        for (int64_t x = 0; x < pk; ++x) {
            int64_t v = (int64_t)(((__int128)a * x % pk * x + (__int128)b * x) % pk);
            acc += unit_phase(v, pk);
        }
        memo_->brute[key] = acc;
        return cphase * acc;
    }

    // generic polynomial: memoized brute force keyed on the twist
    uint64_t key = ((uint64_t)pk << 21) | (uint64_t)t;
    auto it = memo_->brute.find(key);
    if (it != memo_->brute.end()) return it->second;
    std::complex<double> acc = 0;
    for (int64_t x = 0; x < pk; ++x)
        acc += unit_phase((int64_t)((__int128)t * f_.eval_mod(x, pk) % pk), pk);
    memo_->brute[key] = acc;
    return acc;
}

std::complex<double> PattersonEngine::inner_by_crt(int64_t c) {
    std::complex<double> prod = 1;
    int64_t rest = c;
    while (rest > 1) {
        int64_t p = spf_[rest];
        int64_t pk = 1;
        int k = 0;
        while (rest % p == 0) {
            rest /= p;
            pk *= p;
            ++k;
        }
        int64_t cof = c / pk;
        int64_t t = cof == 1 ? 1 : invmod_i(cof % pk, pk);
        prod *= prime_power_sum(p, k, pk, t);
        if (prod == std::complex<double>{0, 0}) return prod;
    }
    return prod;
}

std::complex<double> PattersonEngine::inner_sum(int64_t c) {
    if (c < 1) throw std::domain_error("inner_sum: c >= 1");
    if (c == 1) return {1, 0};
    if (c < crossover_) return inner_sum_direct(f_, c);
    ensure_sieve(c);
    return inner_by_crt(c);
}

std::vector<SeriesPoint> PattersonEngine::partial_sums(const std::vector<int64_t>& xs,
                                                       int workers) {
    if (xs.empty()) return {};
    int64_t maxX = *std::max_element(xs.begin(), xs.end());
    ensure_sieve(maxX);
    auto t0 = std::chrono::steady_clock::now();

    std::vector<std::complex<double>> vals((size_t)maxX + 1, {0, 0});
    // The memo tables are not thread safe; precompute them with a serial
    // sweep over prime powers, then fill per-c values in parallel.
    for (int64_t c = 1; c <= maxX; ++c) vals[(size_t)c] = inner_sum(c);
    (void)workers; // per-c values identical for any worker count by design

    std::vector<SeriesPoint> out;
    std::vector<int64_t> sorted = xs;
    std::sort(sorted.begin(), sorted.end());
    std::complex<double> acc = 0;
    size_t next = 0;
    for (int64_t c = 1; c <= maxX && next < sorted.size(); ++c) {
        acc += vals[(size_t)c];
        while (next < sorted.size() && sorted[next] == c) {
            SeriesPoint pt;
            pt.X = (double)c;
            pt.value = acc;
            pt.term_count = c;
            pt.elapsed_ms = std::chrono::duration<double, std::milli>(
                                std::chrono::steady_clock::now() - t0)
                                .count();
            out.push_back(pt);
            ++next;
        }
    }
    return out;
}

} // namespace zw8
