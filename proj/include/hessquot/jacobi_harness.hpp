#pragma once

// Desk-scale checks of the pointwise differential inequality for
// b = log(1 + lambda_1(W(x))) contracted against F^{ab}, on flat periodic
// grids. The harness evaluates inequalities on given fields; it never solves
// an equation. f(x) := F(W(x)) is always a derived field, so the forcing
// terms built from f are honest.

#include <string>
#include <utility>
#include <vector>

#include "hessquot/grid/fields.hpp"
#include "hessquot/spectral.hpp"

namespace hessquot {

/// Maximum over grid points and index triples of |D_k w_ij - D_i w_jk|
/// (4th-order centered differences, periodic). For W = (hessian of u) +
/// constant this is pure truncation error and shrinks at 4th order.
[[nodiscard]] double codazzi_defect(const grid::SymTensorField& w);

struct JacobiPointReport {
    long long point = 0; // flat row-major index
    int ix = 0, iy = 0, iz = 0;
    double lambda1 = 0.0;
    double gap = 0.0; // lambda1 - lambda2
    double b = 0.0;   // log(1 + lambda1)
    double diffusion = 0.0;        // sum F^{ab} b_ab
    double grad_contraction = 0.0; // sum F^{ab} b_a b_b
    double trace_f = 0.0;          // sum of the F^{aa} eigenvalue derivatives
    double grad_f_term = 0.0;      // |grad f|^2 / (f (lambda1 + 1))
    double hess_f_term = 0.0;      // Frobenius |hess f| / (lambda1 + 1)

    [[nodiscard]] double residual_at(double eps, double c) const {
        return diffusion - eps * grad_contraction + c * trace_f + grad_f_term + hess_f_term;
    }
};

struct JacobiFieldResult {
    std::vector<JacobiPointReport> reports; // gap-passing points, index order
    long long total_points = 0;
    long long excluded_points = 0; // failed the relative gap filter
};

/// Evaluates the report at every point where lambda1 - lambda2 >=
/// gap_min * lambda1 (simple top eigenvalue; points below the threshold are
/// excluded and counted). Any point with W outside the positive cone throws
/// a domain error naming the point.
[[nodiscard]] JacobiFieldResult jacobi_point_reports(const grid::SymTensorField& w, int k,
                                                     double gap_min);

/// Least C with residual_at(eps, C) >= 0 at every reported point (affine
/// solve per point; may be negative). Throws if no point passes the filter.
[[nodiscard]] double min_constant_C(const JacobiFieldResult& result, double eps);
[[nodiscard]] double min_constant_C(const grid::SymTensorField& w, int k, double eps,
                                    double gap_min);

/// Chain rule for B = log(D + b): computes the Hessian of B two ways —
/// composing with the pre-scaled gradient, and the displayed closed form
/// B_ab = b_ab/(D+b) - b_a b_b/(D+b)^2 — and returns (max entrywise
/// difference, max entrywise magnitude). The difference is pure roundoff.
[[nodiscard]] std::pair<double, double> b_to_B_check(double lambda1, double D,
                                                     const std::vector<double>& b_grad,
                                                     const SymMatrix& b_hess);

/// Arithmetic of the transformed inequality: if the b-side residual
/// diffusion - eps*grad + c*trace_f + forcing >= 0 holds and
/// sqrt(D + b) > 2/eps + c (with eps <= 2 and D + b >= 1), then
///   sum F B_ab >= (eps/2)(D+b) sum F B_a B_b - (c*trace_f + forcing)/(D+b).
/// Returns the slack of that transformed inequality (>= -1e-12*scale).
[[nodiscard]] double b_transform_slack(double eps, double c, double D, double b,
                                       double diffusion, double grad_contraction,
                                       double trace_f, double forcing);

/// lambda1(diag(lambda) + t*xi) minus the second-order expansion
/// lambda1 + t*xi11 + t^2 * sum_{b>=2} xi_1b^2/(lambda1 - lambda_b);
/// o(t^2) for a simple top eigenvalue, and nonnegative up to o(t^2) terms
/// (the top eigenvalue is a max, so the expansion is an envelope from below).
[[nodiscard]] double lambda1_envelope_defect(const EigenSpectrum& spec, const SymMatrix& xi_frame,
                                             double t);

/// Absorption slack a^2 - (1-theta) b^2 + (1/theta - 1) d^2, nonnegative
/// whenever |a - b| <= d and theta in (0,1).
[[nodiscard]] double absorption_slack(double a, double b, double theta, double d);

} // namespace hessquot
