#include "hessquot/hessian_quotient.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace hessquot {

namespace {

void validate_domain(const EigenSpectrum& spec, int k) {
    if (spec.n < 1) throw std::invalid_argument("hessian quotient: empty spectrum");
    if (k < 1 || k > spec.n) {
        throw std::invalid_argument("hessian quotient: k must satisfy 1 <= k <= n, got k=" +
                                    std::to_string(k) + " n=" + std::to_string(spec.n));
    }
    if (!spec.positive_definite) {
        throw std::domain_error("hessian quotient: spectrum has a non-positive eigenvalue");
    }
}

} // namespace

double F_value(const EigenSpectrum& spec, int k) {
    validate_domain(spec, k);
    const SigmaTable t(spec.kappa);
    return 1.0 / t.sigma(k);
}

double F_value_from_lambda(const std::vector<double>& lambda_desc, int k) {
    return F_value(spectrum_from_lambda(lambda_desc), k);
}

std::vector<double> F_gradient_diag(const EigenSpectrum& spec, int k) {
    validate_domain(spec, k);
    const int n = spec.n;
    const SigmaTable t(spec.kappa);
    const double s = t.sigma(k);
    std::vector<double> g(static_cast<std::size_t>(n));
    for (int a = 0; a < n; ++a) {
        const double ka = spec.kappa[static_cast<std::size_t>(a)];
        g[static_cast<std::size_t>(a)] = t.sigma1(k - 1, a) * ka * ka / (s * s);
    }
    return g;
}

QuadFormBreakdown F_quadform(const EigenSpectrum& spec, int k, const SymMatrix& xi) {
    validate_domain(spec, k);
    const int n = spec.n;
    if (xi.n() != n) throw std::invalid_argument("F_quadform: xi size mismatch");

    const std::vector<double>& kp = spec.kappa;
    const std::vector<double>& lm = spec.lambda;
    const SigmaTable t(kp);
    const double s = t.sigma(k);
    const double cnk = k >= 2 ? newton_constant(n - 2, k) : 1.0;

    QuadFormBreakdown out;
    out.sigma_k = s;
    out.f_value = 1.0 / s;

    std::vector<double> faa(static_cast<std::size_t>(n));
    for (int a = 0; a < n; ++a) {
        const double ka = kp[static_cast<std::size_t>(a)];
        faa[static_cast<std::size_t>(a)] = t.sigma1(k - 1, a) * ka * ka / (s * s);
        out.trace_f += faa[static_cast<std::size_t>(a)];
        out.grad_contraction += faa[static_cast<std::size_t>(a)] * xi.at(a, a);
    }

    // i1_prime / i1: diagonal-diagonal part via the two-deleted Newton gaps.
    double i1p = 0.0, i1 = 0.0;
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            const double ka = kp[static_cast<std::size_t>(a)];
            const double kb = kp[static_cast<std::size_t>(b)];
            const double s1ab = t.sigma2(k - 1, a, b);
            const double gap = s1ab * s1ab - t.sigma2(k, a, b) * t.sigma2(k - 2, a, b);
            const double d = ka * xi.at(a, a) - kb * xi.at(b, b);
            const double w = ka * kb * d * d;
            i1p += gap * w;
            i1 += cnk * (s1ab * s1ab) * w;
        }
    }
    out.i1_prime = i1p / s; // ordered-pair double counting cancels the 1/2
    out.i1 = i1 / s;

    // i2: purely diagonal part.
    double diag_cubed = 0.0, diag_sq = 0.0;
    for (int a = 0; a < n; ++a) {
        const double ka = kp[static_cast<std::size_t>(a)];
        const double s1 = t.sigma1(k - 1, a);
        const double xd = xi.at(a, a);
        diag_cubed += s1 * ka * ka * ka * xd * xd;
        diag_sq += s1 * ka * ka * xd;
    }
    out.i2 = diag_cubed - diag_sq * diag_sq / s;

    // i3: off-diagonal part, rewritten (cancellation-free) and raw.
    double i3 = 0.0, i3_def = 0.0;
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            const double ka = kp[static_cast<std::size_t>(a)];
            const double kb = kp[static_cast<std::size_t>(b)];
            const double la = lm[static_cast<std::size_t>(a)];
            const double lb = lm[static_cast<std::size_t>(b)];
            const double x2 = xi.at(a, b) * xi.at(a, b);
            const double s1a = t.sigma1(k - 1, a);
            const double s1b = t.sigma1(k - 1, b);
            const double s1ab = t.sigma2(k - 1, a, b);
            const double kk = ka * ka * kb * kb;
            i3 += ((s1a + s1ab) * lb + (s1b + s1ab) * la) * kk * x2;
            i3_def += 2.0 * (-t.sigma2(k - 2, a, b) * kk + s1a * ka * ka * kb + s1b * kb * kb * ka) * x2;
        }
    }
    out.i3 = i3;
    out.i3_definitional = i3_def;

    out.total_quadform = -(out.i1_prime + out.i2 + out.i3) / (s * s);

    // Direct contraction of the derivative tensor, term by term, plus the
    // gross magnitude of those terms (roundoff envelope).
    double t1 = 0.0, t2 = 0.0, t3 = 0.0, gross = 0.0;
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            const double kk = kp[static_cast<std::size_t>(a)] * kp[static_cast<std::size_t>(a)] *
                              kp[static_cast<std::size_t>(b)] * kp[static_cast<std::size_t>(b)];
            const double s2ab = t.sigma2(k - 2, a, b);
            const double dd = 2.0 * s2ab * kk * xi.at(a, a) * xi.at(b, b);
            const double oo = 2.0 * s2ab * kk * xi.at(a, b) * xi.at(a, b);
            t1 -= dd;
            t2 += oo;
            gross += std::abs(dd) + std::abs(oo);
        }
    }
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            const double ka = kp[static_cast<std::size_t>(a)];
            const double kb = kp[static_cast<std::size_t>(b)];
            const double w = 2.0 * t.sigma1(k - 1, a) * ka * ka * kb * xi.at(a, b) * xi.at(a, b);
            t3 -= w;
            gross += std::abs(w);
        }
    }
    const double t4 = 2.0 * diag_sq * diag_sq / s;
    gross += std::abs(t4);
    out.total_quadform_direct = (t1 + t2 + t3 + t4) / (s * s);
    out.roundoff_scale = gross / (s * s);

    // J/K comparison terms (all referenced to the top eigenvalue, index 0).
    if (n >= 2) {
        const double l1 = lm[0];
        for (int a = 1; a < n; ++a) {
            const double xa1 = xi.at(a, 0);
            out.j1 += faa[static_cast<std::size_t>(a)] * xa1 * xa1 / l1;
            out.j2 += faa[0] * xa1 * xa1 / lm[static_cast<std::size_t>(a)];
            const double ka = kp[static_cast<std::size_t>(a)];
            out.k1 += t.sigma2(k - 1, a, 0) * ka * ka * xa1 * xa1 / (s * s * l1);
        }
        for (int a = 1; a < n; ++a) {
            for (int b = 1; b < n; ++b) {
                if (a == b) continue;
                const double xab = xi.at(a, b);
                out.j3 += faa[static_cast<std::size_t>(a)] * xab * xab /
                          lm[static_cast<std::size_t>(b)];
            }
        }
    }
    return out;
}

std::pair<double, double> diag_identity_sides(const EigenSpectrum& spec, int k,
                                                const std::vector<double>& xi_diag) {
    validate_domain(spec, k);
    const int n = spec.n;
    if (static_cast<int>(xi_diag.size()) != n) {
        throw std::invalid_argument("diag_identity_sides: xi_diag size mismatch");
    }
    const std::vector<double>& kp = spec.kappa;
    const SigmaTable t(kp);
    const double s = t.sigma(k);

    double cross = 0.0, cubed = 0.0, sq = 0.0;
    for (int a = 0; a < n; ++a) {
        const double ka = kp[static_cast<std::size_t>(a)];
        const double xa = xi_diag[static_cast<std::size_t>(a)];
        cubed += t.sigma1(k - 1, a) * ka * ka * ka * xa * xa;
        sq += t.sigma1(k - 1, a) * ka * ka * xa;
        for (int b = a + 1; b < n; ++b) {
            const double kb = kp[static_cast<std::size_t>(b)];
            cross += 2.0 * t.sigma2(k - 2, a, b) * ka * ka * kb * kb * xa *
                     xi_diag[static_cast<std::size_t>(b)];
        }
    }
    const double left = cross + cubed - sq * sq / s;

    double right = 0.0;
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            const double ka = kp[static_cast<std::size_t>(a)];
            const double kb = kp[static_cast<std::size_t>(b)];
            const double s1ab = t.sigma2(k - 1, a, b);
            const double gap = s1ab * s1ab - t.sigma2(k, a, b) * t.sigma2(k - 2, a, b);
            const double d = ka * xi_diag[static_cast<std::size_t>(a)] -
                             kb * xi_diag[static_cast<std::size_t>(b)];
            right += gap * ka * kb * d * d; // unordered pair, so the 1/2 cancels
        }
    }
    right /= s;
    return {left, right};
}

namespace {

double f_of_matrix(const SymMatrix& W, int k, bool* ok) {
    const EigenSpectrum es = eigh_desc(W);
    if (!es.positive_definite) {
        *ok = false;
        return 0.0;
    }
    *ok = true;
    const SigmaTable t(es.kappa);
    return 1.0 / t.sigma(k);
}

} // namespace

double F_quadform_fd(const SymMatrix& W, int k, const SymMatrix& xi) {
    if (W.n() != xi.n()) throw std::invalid_argument("F_quadform_fd: size mismatch");
    if (k < 1 || k > W.n()) throw std::invalid_argument("F_quadform_fd: k out of range");
    double h = 1e-4 * (1.0 + W.max_abs()) / (1.0 + xi.max_abs());
    for (int attempt = 0; attempt < 2; ++attempt) {
        bool ok = true;
        double f[5];
        for (int s = -2; s <= 2; ++s) {
            SymMatrix Ws(W.n());
            for (int i = 0; i < W.n(); ++i) {
                for (int j = i; j < W.n(); ++j) {
                    Ws.set(i, j, W.at(i, j) + static_cast<double>(s) * h * xi.at(i, j));
                }
            }
            bool point_ok = true;
            f[s + 2] = f_of_matrix(Ws, k, &point_ok);
            if (!point_ok) {
                ok = false;
                break;
            }
        }
        if (ok) {
            return (-f[0] + 16.0 * f[1] - 30.0 * f[2] + 16.0 * f[3] - f[4]) / (12.0 * h * h);
        }
        h *= 0.5;
    }
    throw std::domain_error("F_quadform_fd: stencil leaves the positive cone");
}

double f1_monotonicity_gap(const EigenSpectrum& spec, int k, int alpha) {
    validate_domain(spec, k);
    if (alpha < 1 || alpha >= spec.n) {
        throw std::invalid_argument("f1_monotonicity_gap: alpha must be in [1, n)");
    }
    const std::vector<double> g = F_gradient_diag(spec, k);
    return g[static_cast<std::size_t>(alpha)] * spec.lambda[static_cast<std::size_t>(alpha)] /
               spec.lambda[0] -
           g[0];
}

} // namespace hessquot
