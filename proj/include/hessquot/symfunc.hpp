#pragma once

#include <vector>

namespace hessquot {

/// Elementary symmetric polynomials sigma_j(x) together with their one- and
/// two-deleted variants sigma_j(x|a) and sigma_j(x|ab).
///
/// Everything is evaluated by the division-free dynamic-programming
/// recurrence; deleted tables re-run the DP over the reduced vector instead
/// of dividing roots out of the full polynomial, so entries close to zero
/// cost accuracy nowhere.
///
/// Index convention: entries are addressed 0-based. Degrees outside the
/// meaningful range return 0 (and sigma_0 == 1 by convention).
class SigmaTable {
public:
    explicit SigmaTable(const std::vector<double>& x);

    [[nodiscard]] int n() const { return n_; }

    /// sigma_j of the full vector.
    [[nodiscard]] double sigma(int j) const;

    /// sigma_j(x | alpha): entry alpha removed.
    [[nodiscard]] double sigma1(int j, int alpha) const;

    /// sigma_j(x | alpha beta): entries alpha != beta removed.
    [[nodiscard]] double sigma2(int j, int alpha, int beta) const;

private:
    int n_ = 0;
    std::vector<double> values_;    // j = 0..n
    std::vector<double> deleted1_;  // [alpha][j], j = 0..n-1
    std::vector<double> deleted2_;  // [pair(alpha<beta)][j], j = 0..n-2
};

/// sigma_0..sigma_n of x in one DP pass.
[[nodiscard]] std::vector<double> sigma_dp(const std::vector<double>& x);

[[nodiscard]] SigmaTable sigma_table(const std::vector<double>& x);

/// Garding cone membership: sigma_m(x) > 0 for every m = 1..k.
[[nodiscard]] bool in_gamma_cone(const std::vector<double>& x, int k);

/// sigma_{k-1}(x)^2 - sigma_k(x) sigma_{k-2}(x), with sigma_j := 0 outside
/// the degree range. Nonnegative for entrywise-positive x.
[[nodiscard]] double newton_maclaurin_gap(const std::vector<double>& x, int k);

/// Binomial coefficient as a double; 0 outside 0 <= j <= m.
[[nodiscard]] double binomial(int m, int j);

/// Sharp constant c such that
///   sigma_{k-1}(x)^2 - sigma_k(x) sigma_{k-2}(x) >= c * sigma_{k-1}(x)^2
/// for all positive vectors x of length m, attained at equal entries:
///   c = 1 - C(m,k) C(m,k-2) / C(m,k-1)^2.
[[nodiscard]] double newton_constant(int m, int k);

} // namespace hessquot
