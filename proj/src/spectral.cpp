#include "hessquot/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace hessquot {

SymMatrix SymMatrix::identity(int n) {
    SymMatrix m(n);
    for (int i = 0; i < n; ++i) m.set(i, i, 1.0);
    return m;
}

SymMatrix SymMatrix::from_upper(int n, const std::vector<double>& upper) {
    if (n < 1) throw std::invalid_argument("SymMatrix::from_upper: n < 1");
    const std::size_t want = static_cast<std::size_t>(n) * (n + 1) / 2;
    if (upper.size() != want) {
        throw std::invalid_argument("SymMatrix::from_upper: expected " +
                                    std::to_string(want) + " entries, got " +
                                    std::to_string(upper.size()));
    }
    SymMatrix m(n);
    std::size_t p = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) m.set(i, j, upper[p++]);
    }
    return m;
}

std::vector<double> SymMatrix::upper() const {
    std::vector<double> u;
    u.reserve(static_cast<std::size_t>(n_) * (n_ + 1) / 2);
    for (int i = 0; i < n_; ++i) {
        for (int j = i; j < n_; ++j) u.push_back(at(i, j));
    }
    return u;
}

double SymMatrix::max_abs() const {
    double m = 0.0;
    for (double v : a_) m = std::max(m, std::abs(v));
    return m;
}

double SymMatrix::frobenius_sq() const {
    double s = 0.0;
    for (double v : a_) s += v * v;
    return s;
}

namespace {

void check_square_finite(const SymMatrix& W) {
    if (W.n() < 1) throw std::invalid_argument("eigh_desc: empty matrix");
    for (int i = 0; i < W.n(); ++i) {
        for (int j = 0; j < W.n(); ++j) {
            if (!std::isfinite(W.at(i, j))) {
                throw std::invalid_argument("eigh_desc: non-finite entry");
            }
        }
    }
}

} // namespace

EigenSpectrum eigh_desc(const SymMatrix& W) {
    check_square_finite(W);
    const int n = W.n();
    std::vector<double> a(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) a[static_cast<std::size_t>(i) * n + j] = W.at(i, j);
    }
    std::vector<double> q(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) q[static_cast<std::size_t>(i) * n + i] = 1.0;

    auto A = [&](int i, int j) -> double& { return a[static_cast<std::size_t>(i) * n + j]; };
    auto Q = [&](int i, int j) -> double& { return q[static_cast<std::size_t>(i) * n + j]; };

    const double tol = 1e-14 * std::max(W.max_abs(), 1e-300);
    const int max_sweeps = 64;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p) {
            for (int r = p + 1; r < n; ++r) off = std::max(off, std::abs(A(p, r)));
        }
        if (off <= tol) break;
        for (int p = 0; p < n - 1; ++p) {
            for (int r = p + 1; r < n; ++r) {
                const double apr = A(p, r);
                if (std::abs(apr) <= tol * 1e-2) continue;
                const double theta = (A(r, r) - A(p, p)) / (2.0 * apr);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const double tau = s / (1.0 + c);
                const double app = A(p, p), arr = A(r, r);
                A(p, p) = app - t * apr;
                A(r, r) = arr + t * apr;
                A(p, r) = 0.0;
                A(r, p) = 0.0;
                for (int i = 0; i < n; ++i) {
                    if (i != p && i != r) {
                        const double aip = A(i, p), air = A(i, r);
                        A(i, p) = aip - s * (air + tau * aip);
                        A(p, i) = A(i, p);
                        A(i, r) = air + s * (aip - tau * air);
                        A(r, i) = A(i, r);
                    }
                    const double qip = Q(i, p), qir = Q(i, r);
                    Q(i, p) = qip - s * (qir + tau * qip);
                    Q(i, r) = qir + s * (qip - tau * qir);
                }
            }
        }
    }

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return A(i, i) > A(j, j); });

    EigenSpectrum out;
    out.n = n;
    out.lambda.resize(static_cast<std::size_t>(n));
    out.kappa.resize(static_cast<std::size_t>(n));
    out.frame.resize(static_cast<std::size_t>(n) * n);
    out.positive_definite = true;
    for (int col = 0; col < n; ++col) {
        const int src = order[static_cast<std::size_t>(col)];
        const double lam = A(src, src);
        out.lambda[static_cast<std::size_t>(col)] = lam;
        out.kappa[static_cast<std::size_t>(col)] =
            lam != 0.0 ? 1.0 / lam : std::numeric_limits<double>::infinity();
        if (!(lam > 0.0)) out.positive_definite = false;
        for (int i = 0; i < n; ++i) {
            out.frame[static_cast<std::size_t>(i) * n + col] = Q(i, src);
        }
    }
    out.gap = n > 1 ? out.lambda[0] - out.lambda[1] : 0.0;
    return out;
}

EigenSpectrum spectrum_from_lambda(const std::vector<double>& lambda_desc) {
    if (lambda_desc.empty()) {
        throw std::invalid_argument("spectrum_from_lambda: empty list");
    }
    const int n = static_cast<int>(lambda_desc.size());
    for (int i = 0; i + 1 < n; ++i) {
        if (lambda_desc[static_cast<std::size_t>(i)] <
            lambda_desc[static_cast<std::size_t>(i) + 1]) {
            throw std::invalid_argument("spectrum_from_lambda: not descending");
        }
    }
    EigenSpectrum out;
    out.n = n;
    out.lambda = lambda_desc;
    out.kappa.resize(static_cast<std::size_t>(n));
    out.positive_definite = true;
    for (int i = 0; i < n; ++i) {
        const double lam = lambda_desc[static_cast<std::size_t>(i)];
        if (!std::isfinite(lam)) throw std::invalid_argument("spectrum_from_lambda: non-finite");
        if (!(lam > 0.0)) out.positive_definite = false;
        out.kappa[static_cast<std::size_t>(i)] =
            lam != 0.0 ? 1.0 / lam : std::numeric_limits<double>::infinity();
    }
    out.frame.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) out.frame[static_cast<std::size_t>(i) * n + i] = 1.0;
    out.gap = n > 1 ? out.lambda[0] - out.lambda[1] : 0.0;
    return out;
}

SymMatrix rotate_to_frame(const SymMatrix& xi, const EigenSpectrum& spec) {
    const int n = spec.n;
    if (xi.n() != n) throw std::invalid_argument("rotate_to_frame: size mismatch");
    // R = Q^T xi Q
    std::vector<double> tmp(static_cast<std::size_t>(n) * n, 0.0); // xi * Q
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int k = 0; k < n; ++k) {
                s += xi.at(i, k) * spec.frame[static_cast<std::size_t>(k) * n + j];
            }
            tmp[static_cast<std::size_t>(i) * n + j] = s;
        }
    }
    SymMatrix r(n);
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            double s = 0.0, s2 = 0.0;
            for (int k = 0; k < n; ++k) {
                s += spec.frame[static_cast<std::size_t>(k) * n + i] *
                     tmp[static_cast<std::size_t>(k) * n + j];
                s2 += spec.frame[static_cast<std::size_t>(k) * n + j] *
                      tmp[static_cast<std::size_t>(k) * n + i];
            }
            r.set(i, j, 0.5 * (s + s2));
        }
    }
    return r;
}

SymMatrix rotate_from_frame_diag(const std::vector<double>& d, const EigenSpectrum& spec) {
    const int n = spec.n;
    if (static_cast<int>(d.size()) != n) {
        throw std::invalid_argument("rotate_from_frame_diag: size mismatch");
    }
    SymMatrix m(n);
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            double s = 0.0;
            for (int k = 0; k < n; ++k) {
                s += spec.frame[static_cast<std::size_t>(i) * n + k] *
                     d[static_cast<std::size_t>(k)] *
                     spec.frame[static_cast<std::size_t>(j) * n + k];
            }
            m.set(i, j, s);
        }
    }
    return m;
}

} // namespace hessquot
