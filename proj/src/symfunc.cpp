#include "hessquot/symfunc.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace hessquot {

namespace {

void check_finite(const std::vector<double>& x) {
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!std::isfinite(x[i])) {
            throw std::invalid_argument("symfunc: entry " + std::to_string(i) +
                                        " is not finite");
        }
    }
}

// In-place DP: after feeding x_0..x_{m-1}, v[j] = sigma_j of the fed entries.
void feed(std::vector<double>& v, double x) {
    for (std::size_t j = v.size() - 1; j >= 1; --j) {
        v[j] += x * v[j - 1];
    }
}

std::vector<double> sigma_of(const std::vector<double>& x, std::size_t skip_a,
                             std::size_t skip_b, std::size_t degree_cap) {
    std::vector<double> v(degree_cap + 1, 0.0);
    v[0] = 1.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (i == skip_a || i == skip_b) continue;
        feed(v, x[i]);
    }
    return v;
}

constexpr std::size_t kNoSkip = static_cast<std::size_t>(-1);

} // namespace

std::vector<double> sigma_dp(const std::vector<double>& x) {
    if (x.empty()) throw std::invalid_argument("sigma_dp: empty vector");
    check_finite(x);
    return sigma_of(x, kNoSkip, kNoSkip, x.size());
}

SigmaTable::SigmaTable(const std::vector<double>& x)
    : n_(static_cast<int>(x.size())) {
    if (x.empty()) throw std::invalid_argument("SigmaTable: empty vector");
    check_finite(x);

    const std::size_t n = x.size();
    values_ = sigma_of(x, kNoSkip, kNoSkip, n);

    if (n >= 2) {
        deleted1_.assign(n * n, 0.0); // [alpha][j], j = 0..n-1
        for (std::size_t a = 0; a < n; ++a) {
            std::vector<double> row = sigma_of(x, a, kNoSkip, n - 1);
            for (std::size_t j = 0; j < n; ++j) deleted1_[a * n + j] = row[j];
        }
    } else {
        deleted1_.assign(1, 1.0); // sigma_0 of the empty vector
    }

    if (n >= 2) {
        const std::size_t npairs = n * (n - 1) / 2;
        const std::size_t width = n - 1; // j = 0..n-2
        deleted2_.assign(npairs * width, 0.0);
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = a + 1; b < n; ++b) {
                const std::size_t p = b * (b - 1) / 2 + a; // must mirror sigma2()
                std::vector<double> row = sigma_of(x, a, b, n - 2);
                for (std::size_t j = 0; j + 1 < n; ++j) {
                    deleted2_[p * width + j] = row[j];
                }
            }
        }
    }
}

double SigmaTable::sigma(int j) const {
    if (j < 0 || j > n_) return 0.0;
    return values_[static_cast<std::size_t>(j)];
}

double SigmaTable::sigma1(int j, int alpha) const {
    if (alpha < 0 || alpha >= n_) {
        throw std::invalid_argument("SigmaTable::sigma1: index out of range");
    }
    if (j < 0 || j > n_ - 1) return 0.0;
    if (n_ == 1) return j == 0 ? 1.0 : 0.0;
    return deleted1_[static_cast<std::size_t>(alpha) * n_ + j];
}

double SigmaTable::sigma2(int j, int alpha, int beta) const {
    if (alpha < 0 || alpha >= n_ || beta < 0 || beta >= n_ || alpha == beta) {
        throw std::invalid_argument("SigmaTable::sigma2: bad index pair");
    }
    if (j < 0 || j > n_ - 2) return 0.0;
    const std::size_t a = static_cast<std::size_t>(alpha < beta ? alpha : beta);
    const std::size_t b = static_cast<std::size_t>(alpha < beta ? beta : alpha);
    const std::size_t pair = b * (b - 1) / 2 + a;
    const std::size_t width = static_cast<std::size_t>(n_) - 1;
    return deleted2_[pair * width + j];
}

SigmaTable sigma_table(const std::vector<double>& x) { return SigmaTable(x); }

bool in_gamma_cone(const std::vector<double>& x, int k) {
    if (x.empty()) throw std::invalid_argument("in_gamma_cone: empty vector");
    if (k < 1 || k > static_cast<int>(x.size())) {
        throw std::invalid_argument("in_gamma_cone: k out of range");
    }
    const std::vector<double> v = sigma_dp(x);
    for (int m = 1; m <= k; ++m) {
        if (!(v[static_cast<std::size_t>(m)] > 0.0)) return false;
    }
    return true;
}

double newton_maclaurin_gap(const std::vector<double>& x, int k) {
    if (x.empty()) throw std::invalid_argument("newton_maclaurin_gap: empty vector");
    const int m = static_cast<int>(x.size());
    // k = 1 is legitimate under the sigma_j := 0 convention: the gap is
    // sigma_0^2 - sigma_1 * sigma_{-1} = 1.
    if (k < 1 || k > m + 2) {
        throw std::invalid_argument("newton_maclaurin_gap: k out of range");
    }
    const std::vector<double> v = sigma_dp(x);
    auto s = [&](int j) -> double {
        return (j < 0 || j > m) ? 0.0 : v[static_cast<std::size_t>(j)];
    };
    return s(k - 1) * s(k - 1) - s(k) * s(k - 2);
}

double binomial(int m, int j) {
    if (j < 0 || j > m || m < 0) return 0.0;
    double r = 1.0;
    if (j > m - j) j = m - j;
    for (int i = 1; i <= j; ++i) {
        r = r * static_cast<double>(m - j + i) / static_cast<double>(i);
    }
    return r;
}

double newton_constant(int m, int k) {
    // k = 1 is legitimate: the sigma_{k-2} factor is absent and the sharp
    // constant degenerates to 1.
    if (m < 0 || k < 1) throw std::invalid_argument("newton_constant: bad m or k");
    const double denom = binomial(m, k - 1);
    if (denom == 0.0) return 1.0; // sigma_{k-1} vanishes identically: gap == 0 == rhs
    return 1.0 - binomial(m, k) * binomial(m, k - 2) / (denom * denom);
}

} // namespace hessquot
