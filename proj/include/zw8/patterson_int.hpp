#pragma once
//
// Patterson sums over Z: S(f, X) = sum_{c <= X} sum_{x mod c} e^{2 pi i f(x)/c}.
// Per-modulus values come from CRT into prime powers with memoized
// prime-power sums; small c fall back to the direct double loop.
//

#include <complex>
#include <cstdint>
#include <vector>

#include "zw8/series.hpp"

namespace zw8 {

// Sparse integer polynomial over Z.
struct IntPoly {
    std::vector<std::pair<int64_t, int64_t>> terms; // (coeff, exponent)

    static IntPoly cubic(int64_t a) { return {{{a, 3}}}; }
    static IntPoly quadratic(int64_t a, int64_t b, int64_t c0) {
        return {{{a, 2}, {b, 1}, {c0, 0}}};
    }
    int64_t eval_mod(int64_t x, int64_t m) const;
};

// Direct evaluation of the inner sum (left-to-right accumulation; this is
// also the oracle path used below the crossover).
std::complex<double> inner_sum_direct(const IntPoly& f, int64_t c);

class PattersonEngine {
public:
    explicit PattersonEngine(IntPoly f, int64_t direct_crossover = 64);

    // Inner sum at one modulus.
    std::complex<double> inner_sum(int64_t c);

    // Cumulative S(f, X) sampled at each X in xs (ascending).  Deterministic
    // for any worker count (workers only parallelize independent inner sums).
    std::vector<SeriesPoint> partial_sums(const std::vector<int64_t>& xs, int workers = 1);

private:
    IntPoly f_;
    int64_t crossover_;
    bool is_cubic_monomial_ = false;
    bool is_quadratic_ = false;
    int64_t a3_ = 0;              // cubic coefficient
    int64_t qa_ = 0, qb_ = 0, qc_ = 0;
    std::vector<int32_t> spf_;    // smallest prime factor sieve

    void ensure_sieve(int64_t n);
    std::complex<double> prime_power_sum(int64_t p, int k, int64_t pk, int64_t t);
    std::complex<double> inner_by_crt(int64_t c);

    // memo tables
    std::vector<std::vector<std::complex<double>>> cubic_tau_; // per prime: {tau(chi), tau(conj chi)} or class sums
    std::vector<int64_t> cubic_tau_prime_;
    struct Memo;
    std::shared_ptr<Memo> memo_;
};

} // namespace zw8
