#include "hessquot/concavity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace hessquot {

ConcavityTerms concavity_terms(const EigenSpectrum& spec, int k, const SymMatrix& xi) {
    const int n = spec.n;
    const QuadFormBreakdown bd = F_quadform(spec, k, xi); // validates domain
    const SigmaTable t(spec.kappa);
    const std::vector<double> faa = F_gradient_diag(spec, k);

    ConcavityTerms out;
    out.j1 = bd.j1;
    out.j2 = bd.j2;
    out.i1 = bd.i1;
    out.scale = bd.f_value * xi.frobenius_sq() / spec.lambda[static_cast<std::size_t>(n - 1)];
    out.eps_den = faa[0] * xi.at(0, 0) * xi.at(0, 0) / spec.lambda[0];

    double a_coeff = 0.0;
    for (int a = 1; a < n; ++a) {
        a_coeff += faa[static_cast<std::size_t>(a)] * xi.at(a, a) * xi.at(a, a) /
                   spec.lambda[static_cast<std::size_t>(a)];
    }
    out.a_coeff = a_coeff;

    const double lhs = -bd.total_quadform;
    const double coef = n >= 2 ? 1.0 + static_cast<double>(n - k) / static_cast<double>(n - 1)
                               : 1.0;
    out.residual0 = lhs - out.eps_den - a_coeff +
                    bd.grad_contraction * bd.grad_contraction / bd.f_value - bd.j3 -
                    coef * bd.j1;

    double f1min = std::numeric_limits<double>::infinity();
    double srmin = std::numeric_limits<double>::infinity();
    double c2max = 0.0;
    const double x00 = xi.at(0, 0);
    const double ratio = n >= 2 ? static_cast<double>(n - k) / static_cast<double>(n - 1) : 0.0;
    for (int a = 1; a < n; ++a) {
        const double fa = faa[static_cast<std::size_t>(a)];
        const double la = spec.lambda[static_cast<std::size_t>(a)];
        f1min = std::min(f1min, (fa * la / spec.lambda[0] - faa[0]) / faa[0]);
        const double s1a = t.sigma1(k - 1, a);
        srmin = std::min(srmin, (t.sigma2(k - 1, a, 0) - ratio * s1a) / s1a);
        const double num = std::abs(xi.at(a, a) / la) * spec.lambda[0];
        c2max = std::max(c2max, x00 != 0.0 ? num / std::abs(x00)
                                           : (num > 0.0
                                                  ? std::numeric_limits<double>::infinity()
                                                  : 0.0));
    }
    out.f1_gap_min = n >= 2 ? f1min : 0.0;
    out.sigma_ratio_min = n >= 2 ? srmin : 0.0;
    out.case2_ratio = n >= 2 ? c2max : 0.0;
    return out;
}

double special_concavity_residual(const EigenSpectrum& spec, int k, const SymMatrix& xi,
                                  double delta_tilde, double eps0) {
    if (k >= spec.n) {
        throw std::invalid_argument(
            "special_concavity_residual: requires k <= n-1; the k = n case fails by an "
            "exact identity (see monge_ampere_counterexample)");
    }
    if (!(delta_tilde > 0.0 && delta_tilde <= 1.0)) {
        throw std::invalid_argument("special_concavity_residual: delta_tilde must be in (0, 1]");
    }
    if (!(eps0 >= 0.0)) {
        throw std::invalid_argument("special_concavity_residual: eps0 must be >= 0");
    }
    const ConcavityTerms t = concavity_terms(spec, k, xi);
    return t.residual0 + delta_tilde * t.a_coeff - eps0 * t.eps_den;
}

PointwiseConcavityResult pointwise_concavity_residual(const EigenSpectrum& spec, int k,
                                                      const SymMatrix& xi, double delta_tilde,
                                                      double eps0) {
    if (k >= spec.n) {
        throw std::invalid_argument(
            "pointwise_concavity_residual: requires k <= n-1; the k = n case fails by an "
            "exact identity (see monge_ampere_counterexample)");
    }
    if (!(delta_tilde > 0.0 && delta_tilde <= 1.0)) {
        throw std::invalid_argument("pointwise_concavity_residual: delta_tilde must be in (0, 1]");
    }
    if (!(eps0 >= 0.0)) {
        throw std::invalid_argument("pointwise_concavity_residual: eps0 must be >= 0");
    }
    const int n = spec.n;
    const QuadFormBreakdown bd = F_quadform(spec, k, xi);
    const std::vector<double> faa = F_gradient_diag(spec, k);

    const double eps_den = faa[0] * xi.at(0, 0) * xi.at(0, 0) / spec.lambda[0];
    double a_coeff = 0.0;
    for (int a = 1; a < n; ++a) {
        a_coeff += faa[static_cast<std::size_t>(a)] * xi.at(a, a) * xi.at(a, a) /
                   spec.lambda[static_cast<std::size_t>(a)];
    }
    PointwiseConcavityResult out;
    out.residual = -bd.total_quadform - (1.0 + eps0) * eps_den - (1.0 - delta_tilde) * a_coeff +
                   bd.grad_contraction * bd.grad_contraction / bd.f_value;
    out.scale = bd.f_value * xi.frobenius_sq() / spec.lambda[static_cast<std::size_t>(n - 1)];
    return out;
}

double monge_ampere_counterexample(int n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("monge_ampere_counterexample: n < 1");
    std::vector<std::vector<double>> probes;
    std::vector<double> canonical(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) canonical[static_cast<std::size_t>(i)] = n - i;
    probes.push_back(canonical);
    std::mt19937_64 eng(seed ^ 0x9e3779b97f4a7c15ull);
    for (int p = 0; p < 8; ++p) {
        std::vector<double> lam(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            const double u = (eng() >> 11) * 0x1.0p-53;
            lam[static_cast<std::size_t>(i)] = std::exp(std::log(1e-1) + u * std::log(1e2));
        }
        std::sort(lam.begin(), lam.end(), std::greater<>());
        probes.push_back(lam);
    }

    double worst = 0.0;
    for (const auto& lam : probes) {
        const EigenSpectrum spec = spectrum_from_lambda(lam);
        SymMatrix xi(n);
        xi.set(0, 0, 1.0);
        const QuadFormBreakdown bd = F_quadform(spec, n, xi);
        const double f11 = F_gradient_diag(spec, n)[0];
        const double lhs = -bd.total_quadform;
        const double bracket = f11 / spec.lambda[0] - f11 * f11 / bd.f_value;
        const double scale = std::max({f11 / spec.lambda[0], f11 * f11 / bd.f_value,
                                       std::abs(lhs), bd.roundoff_scale});
        worst = std::max(worst, std::abs(lhs - bracket) / scale);
    }
    return worst;
}

double counterexample_violation_margin(const std::vector<double>& lambda_desc, double eps0) {
    const EigenSpectrum spec = spectrum_from_lambda(lambda_desc);
    SymMatrix xi(spec.n);
    xi.set(0, 0, 1.0);
    const ConcavityTerms t = concavity_terms(spec, spec.n, xi);
    return t.residual0 - eps0 * t.eps_den;
}

namespace {

double quotient_of_matrix(const SymMatrix& M, int k, int l, bool* ok) {
    const EigenSpectrum es = eigh_desc(M);
    if (!in_gamma_cone(es.lambda, k)) {
        *ok = false;
        return 0.0;
    }
    const std::vector<double> v = sigma_dp(es.lambda);
    *ok = true;
    return v[static_cast<std::size_t>(k)] / v[static_cast<std::size_t>(l)];
}

} // namespace

ClassicalConcavityResult classical_concavity_residual(const SymMatrix& W, int k, int l,
                                                      const SymMatrix& xi) {
    const int n = W.n();
    if (xi.n() != n) throw std::invalid_argument("classical_concavity_residual: size mismatch");
    if (!(k > l && l >= 0 && k <= n)) {
        throw std::invalid_argument("classical_concavity_residual: need 0 <= l < k <= n");
    }
    bool ok = true;
    const double q0 = quotient_of_matrix(W, k, l, &ok);
    if (!ok) throw std::domain_error("classical_concavity_residual: W outside the cone");

    auto shifted = [&](double t) {
        SymMatrix M(n);
        for (int i = 0; i < n; ++i) {
            for (int j = i; j < n; ++j) M.set(i, j, W.at(i, j) + t * xi.at(i, j));
        }
        return M;
    };

    const double base = (1.0 + W.max_abs()) / (1.0 + xi.max_abs());
    double h1 = 1e-5 * base;
    double h2 = 1e-4 * base;
    for (int attempt = 0; attempt < 2; ++attempt) {
        bool all_ok = true;
        double qp = 0.0, qm = 0.0, f[5] = {0, 0, 0, 0, 0};
        qp = quotient_of_matrix(shifted(h1), k, l, &ok);
        all_ok = all_ok && ok;
        if (all_ok) {
            qm = quotient_of_matrix(shifted(-h1), k, l, &ok);
            all_ok = all_ok && ok;
        }
        for (int s = -2; s <= 2 && all_ok; ++s) {
            f[s + 2] = quotient_of_matrix(shifted(s * h2), k, l, &ok);
            all_ok = all_ok && ok;
        }
        if (all_ok) {
            const double dq = (qp - qm) / (2.0 * h1);
            const double d2q =
                (-f[0] + 16.0 * f[1] - 30.0 * f[2] + 16.0 * f[3] - f[4]) / (12.0 * h2 * h2);
            const double cc = 1.0 - 1.0 / static_cast<double>(k - l);
            ClassicalConcavityResult out;
            out.q_value = q0;
            out.residual = cc * dq * dq / q0 - d2q;
            const double xw = xi.max_abs() / (1.0 + W.max_abs());
            // The last term is the roundoff envelope of a second difference
            // at step h2 (value noise eps*|Q| divided by h2^2).
            out.scale = std::abs(d2q) + cc * dq * dq / q0 + std::abs(q0) * xw * xw +
                        std::abs(q0) * 1e-13 / (h2 * h2);
            return out;
        }
        h1 *= 0.5;
        h2 *= 0.5;
    }
    throw std::domain_error("classical_concavity_residual: stencil leaves the cone");
}

GlzResult glz_residual(const EigenSpectrum& spec, int k, const SymMatrix& xi) {
    const int n = spec.n;
    if (xi.n() != n) throw std::invalid_argument("glz_residual: size mismatch");
    if (k < 1 || k > n) throw std::invalid_argument("glz_residual: k out of range");
    if (!in_gamma_cone(spec.lambda, k)) {
        throw std::domain_error("glz_residual: spectrum outside the k-th cone");
    }
    for (double l : spec.lambda) {
        if (l == 0.0) throw std::domain_error("glz_residual: zero eigenvalue");
    }
    const SigmaTable t(spec.lambda);

    double lhs_pairs = 0.0, lhs_aug = 0.0, rhs_num = 0.0, gross = 0.0;
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            const double s2 = t.sigma2(k - 2, a, b);
            const double term =
                2.0 * s2 * (xi.at(a, a) * xi.at(b, b) - xi.at(a, b) * xi.at(a, b));
            lhs_pairs += term;
            gross += std::abs(2.0 * s2 * xi.at(a, a) * xi.at(b, b)) +
                     std::abs(2.0 * s2 * xi.at(a, b) * xi.at(a, b));
        }
    }
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            const double term = t.sigma1(k - 1, b) * xi.at(a, b) * xi.at(a, b) /
                                spec.lambda[static_cast<std::size_t>(a)];
            lhs_aug += term;
            gross += std::abs(term);
        }
        rhs_num += t.sigma1(k - 1, a) * xi.at(a, a);
    }
    const double rhs = rhs_num * rhs_num / t.sigma(k);
    gross += std::abs(rhs);

    GlzResult out;
    out.residual = lhs_pairs + lhs_aug - rhs;
    out.scale = gross;
    return out;
}

double sigma_ratio_gap(const EigenSpectrum& spec, int k, int alpha) {
    const int n = spec.n;
    if (n < 2) throw std::invalid_argument("sigma_ratio_gap: n < 2");
    if (alpha < 1 || alpha >= n) {
        throw std::invalid_argument("sigma_ratio_gap: alpha must be in [1, n)");
    }
    if (k < 1 || k > n) throw std::invalid_argument("sigma_ratio_gap: k out of range");
    if (!spec.positive_definite) throw std::domain_error("sigma_ratio_gap: non-positive spectrum");
    const SigmaTable t(spec.kappa);
    const double ratio = static_cast<double>(n - k) / static_cast<double>(n - 1);
    return t.sigma2(k - 1, alpha, 0) - ratio * t.sigma1(k - 1, alpha);
}

BalanceParams balance_params(double delta_tilde, double c_prime) {
    if (!(delta_tilde > 0.0)) throw std::invalid_argument("balance_params: delta_tilde <= 0");
    if (!(c_prime >= 0.0)) throw std::invalid_argument("balance_params: c_prime < 0");
    BalanceParams out;
    const double sc = std::sqrt(c_prime);
    const double sd = std::sqrt(delta_tilde);
    out.delta0 = sc > 0.0 ? sc / (sd + sc) : 0.0;
    out.eps_proof_sq = delta_tilde * out.delta0 * out.delta0;
    return out;
}

} // namespace hessquot
