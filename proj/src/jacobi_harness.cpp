#include "hessquot/jacobi_harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "hessquot/hessian_quotient.hpp"

namespace hessquot {

using grid::GridShape;
using grid::ScalarField;
using grid::SymTensorField;

namespace {

ScalarField component(const SymTensorField& w, int a, int b) {
    ScalarField out(w.shape);
    const long long total = w.shape.points();
    for (long long p = 0; p < total; ++p) out.at(p) = w.at(p, a, b);
    return out;
}

SymMatrix matrix_at(const SymTensorField& w, long long p) {
    const int d = w.shape.dim;
    SymMatrix m(d);
    for (int a = 0; a < d; ++a) {
        for (int b = a; b < d; ++b) m.set(a, b, w.at(p, a, b));
    }
    return m;
}

void point_coords(const GridShape& s, long long p, int* i, int* j, int* k) {
    *k = static_cast<int>(p % s.n[2]);
    const long long q = p / s.n[2];
    *j = static_cast<int>(q % s.n[1]);
    *i = static_cast<int>(q / s.n[1]);
}

} // namespace

double codazzi_defect(const SymTensorField& w) {
    grid::validate_shape(w.shape);
    const int d = w.shape.dim;
    // dw[axis][comp] = D_axis w_comp as scalar fields.
    std::vector<std::vector<ScalarField>> dw(static_cast<std::size_t>(d));
    for (int ax = 0; ax < d; ++ax) {
        for (int a = 0; a < d; ++a) {
            for (int b = a; b < d; ++b) {
                dw[static_cast<std::size_t>(ax)].push_back(d1(component(w, a, b), ax));
            }
        }
    }
    auto comp = [&](int ax, int a, int b) -> const ScalarField& {
        if (a > b) std::swap(a, b);
        return dw[static_cast<std::size_t>(ax)]
                 [static_cast<std::size_t>(a * d - a * (a - 1) / 2 + (b - a))];
    };
    double worst = 0.0;
    const long long total = w.shape.points();
    for (int k = 0; k < d; ++k) {
        for (int i = 0; i < d; ++i) {
            for (int j = 0; j < d; ++j) {
                const ScalarField& lhs = comp(k, i, j);
                const ScalarField& rhs = comp(i, j, k);
                for (long long p = 0; p < total; ++p) {
                    worst = std::max(worst, std::abs(lhs.at(p) - rhs.at(p)));
                }
            }
        }
    }
    return worst;
}

JacobiFieldResult jacobi_point_reports(const SymTensorField& w, int k, double gap_min) {
    grid::validate_shape(w.shape);
    const int d = w.shape.dim;
    if (k < 1 || k > d) throw std::invalid_argument("jacobi harness: k out of range");
    if (!(gap_min >= 0.0)) throw std::invalid_argument("jacobi harness: gap_min must be >= 0");
    const long long total = w.shape.points();

    // Pass 1: pointwise spectra -> lambda1, gap, b, f fields. A cone failure
    // anywhere is an error before any derivative is trusted.
    ScalarField lam1(w.shape), gap(w.shape), bfield(w.shape), ffield(w.shape);
    for (long long p = 0; p < total; ++p) {
        const EigenSpectrum es = eigh_desc(matrix_at(w, p));
        if (!es.positive_definite) {
            int i, j, kk;
            point_coords(w.shape, p, &i, &j, &kk);
            throw std::domain_error(
                "jacobi harness: W outside the positive cone at point (" + std::to_string(i) +
                "," + std::to_string(j) + (d == 3 ? "," + std::to_string(kk) : "") + ")");
        }
        lam1.at(p) = es.lambda[0];
        gap.at(p) = es.gap;
        bfield.at(p) = std::log1p(es.lambda[0]);
        ffield.at(p) = F_value(es, k);
    }

    // Pass 2: derivative fields of b and f.
    std::vector<ScalarField> bg, fg;
    for (int a = 0; a < d; ++a) {
        bg.push_back(d1(bfield, a));
        fg.push_back(d1(ffield, a));
    }
    std::vector<ScalarField> bh, fh; // packed upper triangle order
    for (int a = 0; a < d; ++a) {
        for (int b = a; b < d; ++b) {
            bh.push_back(a == b ? d2(bfield, a) : d1(d1(bfield, a), b));
            fh.push_back(a == b ? d2(ffield, a) : d1(d1(ffield, a), b));
        }
    }
    auto packed = [d](int a, int b) {
        if (a > b) std::swap(a, b);
        return a * d - a * (a - 1) / 2 + (b - a);
    };

    JacobiFieldResult result;
    result.total_points = total;
    for (long long p = 0; p < total; ++p) {
        if (gap.at(p) < gap_min * lam1.at(p)) {
            ++result.excluded_points;
            continue;
        }
        const EigenSpectrum es = eigh_desc(matrix_at(w, p));
        const std::vector<double> faa = F_gradient_diag(es, k);

        // F^{ab} in the ambient frame: Q diag(faa) Q^T.
        double fmat[3][3] = {};
        for (int a = 0; a < d; ++a) {
            for (int b = 0; b < d; ++b) {
                double acc = 0.0;
                for (int t = 0; t < d; ++t) {
                    acc += es.frame[static_cast<std::size_t>(a * d + t)] *
                           faa[static_cast<std::size_t>(t)] *
                           es.frame[static_cast<std::size_t>(b * d + t)];
                }
                fmat[a][b] = acc;
            }
        }

        JacobiPointReport r;
        r.point = p;
        point_coords(w.shape, p, &r.ix, &r.iy, &r.iz);
        r.lambda1 = lam1.at(p);
        r.gap = gap.at(p);
        r.b = bfield.at(p);
        double grad_f_sq = 0.0, hess_f_frob = 0.0;
        for (int a = 0; a < d; ++a) {
            grad_f_sq += fg[static_cast<std::size_t>(a)].at(p) *
                         fg[static_cast<std::size_t>(a)].at(p);
            r.trace_f += faa[static_cast<std::size_t>(a)];
            for (int b = 0; b < d; ++b) {
                const double bab = bh[static_cast<std::size_t>(packed(a, b))].at(p);
                const double fab = fh[static_cast<std::size_t>(packed(a, b))].at(p);
                r.diffusion += fmat[a][b] * bab;
                r.grad_contraction += fmat[a][b] * bg[static_cast<std::size_t>(a)].at(p) *
                                      bg[static_cast<std::size_t>(b)].at(p);
                hess_f_frob += fab * fab;
            }
        }
        r.grad_f_term = grad_f_sq / (ffield.at(p) * (r.lambda1 + 1.0));
        r.hess_f_term = std::sqrt(hess_f_frob) / (r.lambda1 + 1.0);
        result.reports.push_back(r);
    }
    return result;
}

double min_constant_C(const JacobiFieldResult& result, double eps) {
    if (result.reports.empty()) {
        throw std::domain_error("min_constant_C: every point failed the gap filter");
    }
    double cmin = -std::numeric_limits<double>::infinity();
    for (const auto& r : result.reports) {
        // residual_at(eps, C) = 0  <=>  C = (eps*grad - diffusion - forcing)/trace_f
        cmin = std::max(cmin, (eps * r.grad_contraction - r.diffusion - r.grad_f_term -
                               r.hess_f_term) /
                                  r.trace_f);
    }
    return cmin;
}

double min_constant_C(const SymTensorField& w, int k, double eps, double gap_min) {
    return min_constant_C(jacobi_point_reports(w, k, gap_min), eps);
}

std::pair<double, double> b_to_B_check(double lambda1, double D,
                                       const std::vector<double>& b_grad,
                                       const SymMatrix& b_hess) {
    const int d = b_hess.n();
    if (static_cast<int>(b_grad.size()) != d) {
        throw std::invalid_argument("b_to_B_check: gradient size mismatch");
    }
    const double b = std::log1p(lambda1);
    const double den = D + b;
    if (!(den > 0.0)) throw std::domain_error("b_to_B_check: D + b must be positive");

    // Route 1 scales the gradient first and corrects the Hessian with the
    // already-scaled gradient; route 2 is the displayed closed form with the
    // squared denominator. Entrywise they agree up to roundoff.
    double defect = 0.0;
    double scale = 0.0;
    std::vector<double> bg_scaled(static_cast<std::size_t>(d));
    for (int a = 0; a < d; ++a) {
        bg_scaled[static_cast<std::size_t>(a)] = b_grad[static_cast<std::size_t>(a)] / den;
        scale = std::max(scale, std::abs(bg_scaled[static_cast<std::size_t>(a)]));
    }
    for (int a = 0; a < d; ++a) {
        for (int g = 0; g < d; ++g) {
            const double v1 = b_hess.at(a, g) / den - bg_scaled[static_cast<std::size_t>(a)] *
                                                          bg_scaled[static_cast<std::size_t>(g)];
            const double v2 = b_hess.at(a, g) / den - b_grad[static_cast<std::size_t>(a)] *
                                                          b_grad[static_cast<std::size_t>(g)] /
                                                          (den * den);
            defect = std::max(defect, std::abs(v1 - v2));
            scale = std::max({scale, std::abs(v1), std::abs(v2)});
        }
    }
    return {defect, scale};
}

double b_transform_slack(double eps, double c, double D, double b, double diffusion,
                         double grad_contraction, double trace_f, double forcing) {
    if (!(eps > 0.0 && eps <= 2.0)) {
        throw std::invalid_argument("b_transform_slack: need 0 < eps <= 2");
    }
    const double den = D + b;
    if (!(den >= 1.0)) throw std::invalid_argument("b_transform_slack: need D + b >= 1");
    if (!(std::sqrt(den) > 2.0 / eps + c)) {
        throw std::invalid_argument("b_transform_slack: need sqrt(D + b) > 2/eps + c");
    }
    // B-side quantities for B = log(D + b).
    const double diff_B = diffusion / den - grad_contraction / (den * den);
    const double grad_B = grad_contraction / (den * den);
    return diff_B - ((eps / 2.0) * den * grad_B - (c * trace_f + forcing) / den);
}

double lambda1_envelope_defect(const EigenSpectrum& spec, const SymMatrix& xi_frame, double t) {
    const int n = spec.n;
    if (xi_frame.n() != n) throw std::invalid_argument("lambda1_envelope_defect: size mismatch");
    if (n >= 2 && !(spec.gap > 0.0)) {
        throw std::domain_error("lambda1_envelope_defect: top eigenvalue must be simple");
    }
    SymMatrix m(n);
    for (int a = 0; a < n; ++a) {
        for (int b = a; b < n; ++b) {
            m.set(a, b, (a == b ? spec.lambda[static_cast<std::size_t>(a)] : 0.0) +
                            t * xi_frame.at(a, b));
        }
    }
    const EigenSpectrum pert = eigh_desc(m);
    double expansion = spec.lambda[0] + t * xi_frame.at(0, 0);
    for (int b = 1; b < n; ++b) {
        expansion += t * t * xi_frame.at(0, b) * xi_frame.at(0, b) /
                     (spec.lambda[0] - spec.lambda[static_cast<std::size_t>(b)]);
    }
    return pert.lambda[0] - expansion;
}

double absorption_slack(double a, double b, double theta, double d) {
    if (!(theta > 0.0 && theta < 1.0)) {
        throw std::invalid_argument("absorption_slack: theta must be in (0,1)");
    }
    return a * a - (1.0 - theta) * b * b + (1.0 / theta - 1.0) * d * d;
}

} // namespace hessquot
