#pragma once

#include <cstdint>
#include <vector>

#include "hessquot/hessian_quotient.hpp"
#include "hessquot/spectral.hpp"

namespace hessquot {

/// Per-sample building blocks of the strengthened concavity residual.
///
/// The residual is affine in both tuning parameters:
///   residual(delta_tilde, eps0) = residual0 + delta_tilde * a_coeff - eps0 * eps_den,
/// so one evaluation serves every (delta_tilde, eps0) pair, the closed-form
/// per-sample epsilon solve, and the structural comparisons.
struct ConcavityTerms {
    double residual0 = 0.0;  // residual at delta_tilde = 0, eps0 = 0
    double a_coeff = 0.0;    // sum_{a>=2} F^{aa} xi_aa^2 / lambda_a
    double eps_den = 0.0;    // F^{11} xi_11^2 / lambda_1
    double scale = 0.0;      // F * ||xi||_F^2 / lambda_min
    double j1 = 0.0;
    double j2 = 0.0;
    double i1 = 0.0;         // Newton-surrogate diagonal piece (c-prime estimation)
    double f1_gap_min = 0.0; // min_a (F^{aa} la/l1 - F^{11}) / F^{11}
    double sigma_ratio_min = 0.0; // min_a scaled slack of the one- vs two-deleted ratio bound
    double case2_ratio = 0.0;     // max_{a>=2} |xi_aa/la| * l1/|xi_11|  (inf when xi_11 = 0)
};

/// Terms for any 1 <= k <= n (the k = n case is admitted so the
/// counterexample and the epsilon estimator can use the same path).
[[nodiscard]] ConcavityTerms concavity_terms(const EigenSpectrum& spec, int k,
                                             const SymMatrix& xi_frame);

/// Residual of the strengthened concavity bound
///   -F''[xi,xi] >= (1+eps0) F11 xi11^2/l1 + (1-dt) sum_{a>=2} Faa xi_aa^2/la
///                  - (sum Faa xi_aa)^2/F + sum_{a!=g>=2} Faa xi_ag^2/lg
///                  + (1 + (n-k)/(n-1)) sum_{a>=2} Faa xi_a1^2/l1.
/// Only k <= n-1 is supported; k = n fails by an exact identity (see
/// monge_ampere_counterexample) and is rejected here.
[[nodiscard]] double special_concavity_residual(const EigenSpectrum& spec, int k,
                                                const SymMatrix& xi_frame,
                                                double delta_tilde, double eps0);

struct PointwiseConcavityResult {
    double residual = 0.0;
    double scale = 0.0; // F * ||xi||_F^2 / lambda_min
};

/// Residual of the cross-term-free weakening of the strengthened bound,
///   -F''[xi,xi] >= (1+eps0) F11 xi11^2/l1 + (1-dt) sum_{a>=2} Faa xi_aa^2/la
///                  - (sum Faa xi_aa)^2/F,
/// the form contracted against derivative directions xi = D_i W at grid
/// points. Implied by special_concavity_residual >= 0 since the dropped
/// right-hand terms are nonnegative on the positive cone.
[[nodiscard]] PointwiseConcavityResult pointwise_concavity_residual(const EigenSpectrum& spec,
                                                                    int k,
                                                                    const SymMatrix& xi_frame,
                                                                    double delta_tilde,
                                                                    double eps0);

/// For k = n and xi supported on the top diagonal entry,
///   -F''[xi,xi] - [F11 xi11^2/l1 - (F11 xi11)^2/F] = 0
/// exactly, so no eps0 > 0 can work. Returns the largest scale-normalized
/// identity defect over a deterministic probe set (canonical spectrum plus
/// seeded random spectra); ~1e-15 in practice.
[[nodiscard]] double monge_ampere_counterexample(int n, std::uint64_t seed = 0);

/// Residual of the special-concavity claim at k = n for the unit top-entry
/// perturbation: equals -eps0 * F^{11}/lambda_1 (< 0 for eps0 > 0).
[[nodiscard]] double counterexample_violation_margin(const std::vector<double>& lambda_desc,
                                                     double eps0);

struct ClassicalConcavityResult {
    double residual = 0.0; // (1 - 1/(k-l)) Q'^2/Q - Q''  (>= 0 when Q^{1/(k-l)} is concave)
    double scale = 0.0;    // gross magnitude for tolerance normalization
    double q_value = 0.0;
};

/// Concavity residual of Q = sigma_k/sigma_l at a general symmetric W with
/// eigenvalues in the k-th Garding cone, entirely by finite differences.
[[nodiscard]] ClassicalConcavityResult classical_concavity_residual(const SymMatrix& W,
                                                                    int k, int l,
                                                                    const SymMatrix& xi);

struct GlzResult {
    double residual = 0.0;
    double scale = 0.0;
};

/// Residual of the augmented-Hessian lower bound for sigma_k at a diagonal
/// argument with spectrum lambda:
///   (sigma_k^{ab,gh} + w^{ah} sigma_k^{bg}) xi_ab xi_gh >= (sigma_k^{aa} xi_aa)^2 / sigma_k,
/// with the closed forms sigma_k^{aa} = s1_{k-1}(lambda|a),
/// sigma_k^{aa,bb} = s2_{k-2}(lambda|ab), sigma_k^{ab,ba} = -s2_{k-2}(lambda|ab),
/// w^{ah} = delta^{ah}/lambda_a.
[[nodiscard]] GlzResult glz_residual(const EigenSpectrum& spec, int k,
                                     const SymMatrix& xi_frame);

/// Slack of sigma_{k-1}(kappa|a,0) >= (n-k)/(n-1) * sigma_{k-1}(kappa|a)
/// for alpha in [1, n); nonnegative on the positive cone because deleting the
/// smallest entry maximizes the one-deleted polynomial.
[[nodiscard]] double sigma_ratio_gap(const EigenSpectrum& spec, int k, int alpha);

/// Derived balancing constants: delta0 solves c'(1-delta0)^2 = dt*delta0^2,
/// and eps_proof_sq = dt*delta0^2 is the proof-side epsilon.
struct BalanceParams {
    double delta0 = 0.0;
    double eps_proof_sq = 0.0;
};
[[nodiscard]] BalanceParams balance_params(double delta_tilde, double c_prime);

} // namespace hessquot
