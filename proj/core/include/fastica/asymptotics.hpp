#ifndef FASTICA_ASYMPTOTICS_HPP
#define FASTICA_ASYMPTOTICS_HPP

#include <functional>
#include <vector>

#include "fastica/distributions.hpp"
#include "fastica/estimators.hpp"
#include "fastica/nonlinearity.hpp"

namespace fastica {

// Population functionals of one standardized source z under a contrast G:
//
//   nu     = E[G(z)]          sigma2 = Var[g(z)]      lambda = E[g(z) z]
//   mu     = E[g(z)]          delta  = E[g'(z)]       tau    = E[g'(z) z]
//   beta4  = E[z^4]           s      = sign(nu), 0 when |nu| < 1e-10
//
// These drive every asymptotic variance below.
struct MomentSet {
    double nu = 0.0;
    double mu = 0.0;
    double sigma2 = 0.0;
    double lambda = 0.0;
    double delta = 0.0;
    double tau = 0.0;
    double beta4 = 0.0;
    int s = 0;

    // (sigma2 - lambda^2) / (lambda - delta)^2, the per-component efficiency
    // constant. Throws identifiability_error when the component is
    // Gaussian-like under G.
    double alpha() const;

    // |lambda - delta| < 1e-8: the fixed point cannot distinguish this source
    // from a Gaussian.
    bool gaussian_like() const;
};

MomentSet moment_set(const SourceDistribution& dist, const Nonlinearity& nl);

// Relative placement of row index j and column index l for an unmixing-matrix
// entry; for deflation "before" means j was extracted first.
enum class PairPosition { j_before_l, diagonal, j_after_l };

struct AsvPair {
    double asv_jl = 0.0;
    double asv_lj = 0.0;
    double sum = 0.0;  // asv_jl + asv_lj
    double alpha_j = 0.0;
    double alpha_l = 0.0;  // NaN when the component is Gaussian-like
    Method method = Method::defl;
};

// Limiting variances of sqrt(n)-scaled unmixing entries for one source pair.
// Diagonal entries have variance (beta4 - 1)/4 for every method. Off-diagonal:
//
//   defl  asv_jl = alpha_j                        (j extracted before l)
//         asv_jl = alpha_l + 1                    (j extracted after l)
//   sym   asv_jl = (sigma2_j + sigma2_l - lambda_j^2 + delta_l (delta_l - 2 lambda_l))
//                  / (s_j (lambda_j - delta_j) + s_l (lambda_l - delta_l))^2
//   sym2  asv_jl = (nu_j^2 (sigma2_j - lambda_j^2)
//                   + nu_l^2 (sigma2_l + delta_l (delta_l - 2 lambda_l)))
//                  / (nu_j (lambda_j - delta_j) + nu_l (lambda_l - delta_l))^2
//
// Throws identifiability_error when the formula's denominator vanishes (for
// defl: the earlier component Gaussian-like; for sym/sym2: no component
// carries weight).
AsvPair asv(Method method, const MomentSet& mj, const MomentSet& ml, PairPosition position);

// Off-diagonal pair sum with deflation's extraction order resolved by
// decreasing |nu| (ties keep the argument order), matching what the
// deterministic initialization converges to.
double asv_offdiag_sum(Method method, const MomentSet& m1, const MomentSet& m2);

// The same pair sum through the weighted-combination identity
//
//   (w_j/(w_j+w_l))^2 (2 alpha_j + 1) + (w_l/(w_j+w_l))^2 (2 alpha_l + 1)
//
// with weights (1, 0) for defl, (s (lambda - delta)) for sym and
// (nu (lambda - delta)) for sym2. Serves as an internal cross-check of the
// pairwise formulas; requires both components non-Gaussian under G and
// throws identifiability_error otherwise (use asv() for Gaussian partners).
double asv_sum_weighted(Method method, const MomentSet& mj, const MomentSet& ml);

// ARE of method a relative to method b on a two-source model: sum_b / sum_a.
// Values above 1 mean a is more efficient.
double are_from_moments(Method method_a, Method method_b, const MomentSet& m1,
                        const MomentSet& m2);
double are(Method method_a, Method method_b, const SourceDistribution& d1,
           const SourceDistribution& d2, const Nonlinearity& nl);

// Limit of E[n (p-1) D^2]: the sum of all off-diagonal asymptotic variances.
// For defl, components are reordered by decreasing |nu| first.
double expected_mdi_limit(Method method, const std::vector<MomentSet>& moments);
double expected_mdi_limit(Method method, const std::vector<SourceDistribution>& dists,
                          const Nonlinearity& nl);

// E[h(c1 z1 + c2 z2)] for independent sources. Mixture/normal pairs compose
// exactly into one Gaussian mixture; other pairs use nested adaptive
// quadrature with the given per-axis tolerance.
double rotated_expectation(const SourceDistribution& d1, const SourceDistribution& d2,
                           double c1, double c2, const std::function<double(double)>& h,
                           double abs_tol = 1e-8);

struct ConditionCheck {
    bool holds = true;
    double worst_theta = 0.0;
    // Largest value of (achieved objective - bound); positive means violated.
    double worst_margin = 0.0;
};

struct GConditionReport {
    ConditionCheck def;
    ConditionCheck sym;
    ConditionCheck sym2;
    double nu1 = 0.0;
    double nu2 = 0.0;
    int grid = 0;
};

// Sweeps plane rotations U(theta), theta in [0, pi/2], of a bivariate source
// and tests whether the separating rotation globally dominates:
//
//   def   max(|E G(u1' z)|, |E G(u2' z)|) <= max(|nu1|, |nu2|)
//   sym   |E G(u1' z)| + |E G(u2' z)|     <= |nu1| + |nu2|
//   sym2  (E G(u1' z))^2 + (E G(u2' z))^2 <= nu1^2 + nu2^2
//
// A condition fails when its margin exceeds 1e-7 at any grid point.
GConditionReport check_g_conditions(const SourceDistribution& d1, const SourceDistribution& d2,
                                    const Nonlinearity& nl, int grid = 721);

} // namespace fastica

#endif
