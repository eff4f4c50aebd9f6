#pragma once
//
// Sums of exponential sums: the smoothed weighted series over Z[w], its
// predicted quadratic main term, lattice enumeration under the compact
// weight, Mellin transforms, exponent fitting, and the partial sums behind
// the pole-detection check.
//

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "zw8/characters.hpp"
#include "zw8/cyc.hpp"
#include "zw8/expsums.hpp"

namespace zw8 {

// Compactly supported weight on (a, b): default bump
// exp(-1/(1-u^2)), u = 2(y-a)/(b-a) - 1, or user samples with cubic
// interpolation.
class SmoothWeight {
public:
    static SmoothWeight bump(double a = 0.5, double b = 2.0);
    static SmoothWeight from_samples(double a, double b,
                                     std::vector<std::pair<double, double>> samples);

    double operator()(double y) const;
    double support_lo() const { return a_; }
    double support_hi() const { return b_; }

private:
    double a_ = 0.5, b_ = 2.0;
    std::vector<std::pair<double, double>> samples_; // empty = default bump
};

// hat(Psi)(s) = int_0^inf Psi(y) y^{s-1} dy, adaptive quadrature to 1e-10.
double mellin_hat(const SmoothWeight& psi, double s);

struct SeriesPoint {
    double X = 0;
    Cplx value{0, 0};
    int64_t term_count = 0;
    double elapsed_ms = 0;
};

struct FitResult {
    double slope = 0;
    double intercept = 0;
    double stderr_slope = 0;
    int points_used = 0;
};

// Least squares of log|value| against log X; throws with fewer than 3
// usable (nonzero) points.  The optional window restricts to X in [lo, hi].
FitResult fit_exponent(const std::vector<SeriesPoint>& points,
                       std::optional<std::pair<double, double>> window = std::nullopt);

// ---------------------------------------------------------------------------
// Weighted series over Z[w]

enum class SeriesKind { QuarticLhs, QuadraticLhs, KloostermanRhs, CrossRhs };

struct SeriesParams {
    CycInt A{4}, B{4}, F{0}, D{1};
    std::optional<DirichletChar> theta; // nullopt = trivial character mod D
    SmoothWeight psi = SmoothWeight::bump();
    AdditiveMode mode = AdditiveMode::PLAIN;
    int workers = 1;
    bool weight_of_X = false; // variant Psi(X/|c|^2) instead of Psi(sqrt X/|c|^2)
};

// Validates the hypotheses of the main theorem; throws naming the violated
// condition.
void validate_series_hypotheses(const SeriesParams& p);

// All c = 1 mod 4 with sqrt(X)/|c^{eta_j}|^2 inside supp(Psi) for both
// embeddings, in lexicographic coordinate order.
std::vector<CycInt> enumerate_weighted(double X, const SmoothWeight& psi,
                                       bool weight_of_X = false);

SeriesPoint weighted_series(SeriesKind kind, const SeriesParams& p, double X);

// Per-modulus check of the composite decomposition under the series weight:
// returns the worst |quartic - (kloosterman + quadratic + cross)| over the
// enumerated moduli, each measured against 1e-8 of the weighted term scale.
struct DecompositionCheck {
    double worst_residual = 0;  // max over c of |lhs_c - rhs_c|
    double worst_allowance = 0; // the allowance at the argmax modulus
    int64_t moduli = 0;
    bool pass = true;
};
DecompositionCheck decomposition_check(const SeriesParams& p, double X);

// Predicted main term of the weighted quadratic series:
//   sqrt(X) * (pi^2/4) * hat(Psi)(-1/2)^2 * T(A,D,theta) / N(LCM(4,A,D)),
// with T the literal character sum below.  (The displayed closed form in the
// source material carries a different constant; the lattice computation pins
// this one, and the acceptance suite checks it against the series.)
Cplx quad_main_term(const SeriesParams& p, double X);

// T_{A,D}(theta) = sum over d mod LCM(A,D) of theta(d) (d/A)_2, evaluated
// as a product of local factors: phi(p^e) when the local character is
// trivial on units (the tabulated nonzero pattern), else 0.
Cplx t_factor(const CycInt& A, const CycInt& D, const std::optional<DirichletChar>& theta);

// The same quantity by literal summation (for verification).
Cplx t_factor_brute(const CycInt& A, const CycInt& D,
                    const std::optional<DirichletChar>& theta);

// Local factor table data for one prime: the computed character sums
// T_{p^j,p}(theta) for j = 0..jmax and every character mod p.
struct TTableRow {
    int64_t char_index;
    int64_t char_order;
    std::vector<Int> values; // exact integers, index j
};
std::vector<TTableRow> t_table(const CycInt& p, int jmax);

// phi of the ideal (c): N(c) prod_{p | c} (1 - 1/N(p)).
Int phi_ideal(const CycInt& c);

// Partial sums behind the pole-detection check: the c0-restricted sum
//   sum phi(c0^4) theta^4(c0) / N(c0)^{4s}
// over canonical c0 = 1 mod 4 of norm at most T, alongside the truncated
// ratio of Dirichlet partial sums for L(4s-4)/L(4s-3) over the same family.
struct ThetaPartial {
    Cplx partial_sum{0, 0};
    Cplx l_ratio_partial{0, 0};
    int64_t terms = 0;
};
ThetaPartial theta_partial(const std::optional<DirichletChar>& theta, double s, int64_t T);

// Canonical representatives c0 = 1 mod 4, one per associate class, with
// N(c0) <= T, ordered by (norm, coordinates).
std::vector<CycInt> enumerate_normalized_one_mod4(int64_t T);

// Deterministic pairwise (tree) summation.
Cplx pairwise_sum(const std::vector<Cplx>& terms);

} // namespace zw8
