#pragma once

#include <utility>
#include <vector>

#include "hessquot/spectral.hpp"
#include "hessquot/symfunc.hpp"

namespace hessquot {

/// Pieces of the second-derivative quadratic form of F = sigma_n/sigma_{n-k}
/// in eigenvalue coordinates (kappa = 1/lambda), evaluated at a diagonal
/// argument against an eigenframe perturbation xi.
///
/// total_quadform is assembled from the decomposition
///   sigma_k(kappa)^2 * F''[xi,xi] = -(i1_prime + i2 + i3),
/// total_quadform_direct sums the raw contraction term by term; the two are
/// equal up to roundoff and tested against each other. i3 is stored in its
/// cancellation-free rewritten form, i3_definitional in the raw form.
struct QuadFormBreakdown {
    double i1_prime = 0.0;
    double i1 = 0.0; // Newton-Maclaurin lower-bound surrogate of i1_prime
    double i2 = 0.0;
    double i3 = 0.0;
    double i3_definitional = 0.0;
    double j1 = 0.0; // sum_{a>=2} F^{aa} xi_a1^2 / lambda_1
    double j2 = 0.0; // sum_{g>=2} F^{11} xi_1g^2 / lambda_g
    double j3 = 0.0; // sum_{a!=g, a,g>=2} F^{aa} xi_ag^2 / lambda_g
    double k1 = 0.0; // sum_{a>=2} sigma_{k-1}(kappa|a1) kappa_a^2 xi_a1^2 / (sigma_k^2 lambda_1)
    double total_quadform = 0.0;
    double total_quadform_direct = 0.0;
    double grad_contraction = 0.0; // sum_a F^{aa} xi_aa
    double trace_f = 0.0;          // sum_a F^{aa}
    double f_value = 0.0;
    double sigma_k = 0.0;          // sigma_k(kappa)
    /// Sum of absolute magnitudes of the direct-route terms; the natural
    /// scale against which roundoff in the near-cancelling routes is judged.
    double roundoff_scale = 0.0;
};

/// F(W) = sigma_n(lambda)/sigma_{n-k}(lambda) = 1/sigma_k(kappa).
[[nodiscard]] double F_value(const EigenSpectrum& spec, int k);

/// Diagonal first derivatives F^{aa} = sigma_{k-1}(kappa|a) kappa_a^2 / sigma_k^2.
/// Off-diagonal first derivatives vanish at a diagonal argument.
[[nodiscard]] std::vector<double> F_gradient_diag(const EigenSpectrum& spec, int k);

/// Full quadratic-form breakdown at a diagonal argument; xi_frame must be
/// expressed in the eigenframe of spec (see rotate_to_frame).
[[nodiscard]] QuadFormBreakdown F_quadform(const EigenSpectrum& spec, int k,
                                           const SymMatrix& xi_frame);

/// Both sides of the diagonal-perturbation identity
///   sum_{a!=b} s2_{k-2} ka^2 kb^2 xi_a xi_b + sum_a s1_{k-1} ka^3 xi_a^2
///       - (sum_a s1_{k-1} ka^2 xi_a)^2 / sigma_k
///   = (1/(2 sigma_k)) sum_{a!=b} (s1_{k-1}(ab)^2 - s_k(ab) s_{k-2}(ab))
///         ka kb (ka xi_a - kb xi_b)^2,
/// where s*(ab) are two-deleted polynomials of kappa. Returns (left, right).
[[nodiscard]] std::pair<double, double> diag_identity_sides(
    const EigenSpectrum& spec, int k, const std::vector<double>& xi_diag);

/// d^2/dt^2 F(W + t xi) at t = 0 by a 5-point central stencil with step
/// h = 1e-4 (1 + max|W|)/(1 + max|xi|). If the stencil leaves the positive
/// cone the step is halved once, then a domain error is thrown.
[[nodiscard]] double F_quadform_fd(const SymMatrix& W, int k, const SymMatrix& xi);

/// F^{aa} lambda_a / lambda_1 - F^{11} for alpha in [1, n); nonnegative on
/// the positive cone. alpha is 0-based (0 is the top eigenvalue).
[[nodiscard]] double f1_monotonicity_gap(const EigenSpectrum& spec, int k, int alpha);

/// F of a descending positive eigenvalue list (no frame needed).
[[nodiscard]] double F_value_from_lambda(const std::vector<double>& lambda_desc, int k);

} // namespace hessquot
