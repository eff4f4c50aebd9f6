#include "zw8/ffield.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "zw8/factor.hpp"

namespace zw8 {

namespace {
constexpr double kTau = 2.0 * 3.14159265358979323846;
}

FpCharTable::FpCharTable(int64_t p, int64_t n) : p_(p), n_(n) {
    if (p < 2 || !is_prime_u64((uint64_t)p)) throw std::domain_error("FpCharTable: p not prime");
    if (n < 1 || (p - 1) % n != 0) throw std::domain_error("FpCharTable: p != 1 mod n");
    auto fac = factor_u64((uint64_t)(p - 1));
    auto powm = [p](int64_t a, int64_t e) {
        int64_t r = 1;
        a %= p;
        while (e) {
            if (e & 1) r = (__int128)r * a % p;
            a = (__int128)a * a % p;
            e >>= 1;
        }
        return r;
    };
    g_ = 1;
    for (int64_t g = 2; g < p; ++g) {
        bool ok = true;
        for (auto [q, e] : fac)
            if (powm(g, (p - 1) / (int64_t)q) == 1) {
                ok = false;
                break;
            }
        if (ok) {
            g_ = g;
            break;
        }
    }
    dlog_.assign(p_, 0);
    int64_t x = 1;
    for (int64_t a = 0; a < p_ - 1; ++a) {
        dlog_[x] = a;
        x = (__int128)x * g_ % p_;
    }
}

int64_t FpCharTable::dlog(int64_t x) const {
    x %= p_;
    if (x < 0) x += p_;
    if (x == 0) throw std::domain_error("dlog of 0");
    return dlog_[x];
}

std::complex<double> FpCharTable::Char::operator()(int64_t x) const {
    int64_t e = exponent_of(x);
    if (e < 0) return {0, 0};
    double a = kTau * (double)e / (double)tab->pm1();
    return {std::cos(a), std::sin(a)};
}

int64_t FpCharTable::Char::exponent_of(int64_t x) const {
    int64_t p = tab->p();
    x %= p;
    if (x < 0) x += p;
    if (x == 0) return -1;
    return (__int128)j * tab->dlog(x) % tab->pm1();
}

int64_t FpCharTable::Char::order() const {
    int64_t m = tab->pm1();
    return m / std::gcd(m, j);
}

bool FpCharTable::Char::is_trivial() const { return j % tab->pm1() == 0; }

FpCharTable::Char FpCharTable::Char::power(int64_t e) const {
    int64_t m = tab->pm1();
    int64_t jj = (int64_t)((__int128)(j % m) * (e % m) % m);
    if (jj < 0) jj += m;
    return {tab, jj};
}

std::vector<FpCharTable::Char> FpCharTable::chars() const {
    std::vector<Char> out;
    int64_t step = pm1() / n_;
    for (int64_t k = 0; k < n_; ++k) out.push_back({this, k * step});
    return out;
}

std::complex<double> FpCharTable::gauss_sum(const Char& chi) const {
    std::complex<double> acc = 0;
    for (int64_t x = 1; x < p_; ++x) {
        int64_t e = chi.exponent_of(x);
        double a = kTau * ((double)e / (double)pm1() + (double)x / (double)p_);
        acc += std::complex<double>{std::cos(a), std::sin(a)};
    }
    return acc;
}

double hd_check(int64_t p, int64_t n, const FpCharTable::Char& chi) {
    const FpCharTable& T = *chi.tab;
    if ((p - 1) % n != 0) throw std::domain_error("hd_check: p != 1 mod n");
    auto gamma = T.char_by_index(T.pm1() / n);
    std::complex<double> lhs = T.gauss_sum(chi.power(n));

    int64_t nn = 1;
    for (int64_t i = 0; i < n; ++i) nn = (__int128)nn * n % p;
    std::complex<double> num = 1, den = 1;
    for (int64_t l = 0; l < n; ++l) {
        num *= T.gauss_sum(chi * gamma.power(l));
        den *= T.gauss_sum(gamma.power(l));
    }
    std::complex<double> rhs = -chi(nn) * num / den;
    return std::abs(lhs - rhs);
}

double hd_check_all(int64_t p, int64_t n) {
    FpCharTable T(p, n);
    double worst = 0;
    for (int64_t j = 0; j < T.pm1(); ++j) {
        double r = hd_check(p, n, T.char_by_index(j));
        worst = std::max(worst, r);
    }
    return worst;
}

} // namespace zw8
