#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "hessquot/campaigns.hpp"
#include "hessquot/symfunc.hpp"

using namespace hessquot;

namespace {

// Brute-force sigma_j by summing all j-subsets. Independent of the DP path.
double sigma_brute(const std::vector<double>& x, int j) {
    const int n = static_cast<int>(x.size());
    if (j < 0 || j > n) return 0.0;
    if (j == 0) return 1.0;
    double total = 0.0;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        if (__builtin_popcount(mask) != j) continue;
        double p = 1.0;
        for (int i = 0; i < n; ++i) {
            if (mask & (1u << i)) p *= x[static_cast<std::size_t>(i)];
        }
        total += p;
    }
    return total;
}

std::vector<double> random_positive(Rng& rng, int n) {
    std::vector<double> x(static_cast<std::size_t>(n));
    for (auto& v : x) v = rng.log_uniform(1e-2, 1e2);
    return x;
}

} // namespace

TEST_CASE("sigma values of (1,2,3)") {
    SigmaTable t({1.0, 2.0, 3.0});
    CHECK(t.n() == 3);
    CHECK(t.sigma(0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(t.sigma(1) == doctest::Approx(6.0).epsilon(1e-15));
    CHECK(t.sigma(2) == doctest::Approx(11.0).epsilon(1e-15));
    CHECK(t.sigma(3) == doctest::Approx(6.0).epsilon(1e-15));

    // out-of-range degrees are hard zeros
    CHECK(t.sigma(-1) == 0.0);
    CHECK(t.sigma(4) == 0.0);
    CHECK(t.sigma1(3, 0) == 0.0);
    CHECK(t.sigma2(2, 0, 1) == 0.0);

    // one-deleted values by hand: delete entry 0 -> (2,3)
    CHECK(t.sigma1(1, 0) == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(t.sigma1(2, 0) == doctest::Approx(6.0).epsilon(1e-15));
    // delete entry 2 -> (1,2)
    CHECK(t.sigma1(1, 2) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(t.sigma1(2, 2) == doctest::Approx(2.0).epsilon(1e-15));
    // two-deleted: remove entries 0,1 -> (3)
    CHECK(t.sigma2(1, 0, 1) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(t.sigma2(1, 1, 0) == doctest::Approx(3.0).epsilon(1e-15)); // symmetric in the pair
    CHECK(t.sigma2(0, 0, 2) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("sigma_dp matches the subset-sum brute force") {
    Rng rng(101);
    for (int n = 1; n <= 8; ++n) {
        for (int rep = 0; rep < 20; ++rep) {
            std::vector<double> x(static_cast<std::size_t>(n));
            for (auto& v : x) v = rng.normal(); // signed entries on purpose
            const auto s = sigma_dp(x);
            REQUIRE(static_cast<int>(s.size()) == n + 1);
            for (int j = 0; j <= n; ++j) {
                const double want = sigma_brute(x, j);
                CHECK(s[static_cast<std::size_t>(j)] ==
                      doctest::Approx(want).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("deletion recurrences tie the table together") {
    Rng rng(7);
    for (int n = 2; n <= 7; ++n) {
        for (int rep = 0; rep < 25; ++rep) {
            const auto x = random_positive(rng, n);
            SigmaTable t(x);
            for (int j = 0; j <= n; ++j) {
                for (int a = 0; a < n; ++a) {
                    // sigma_j(x) = sigma_j(x|a) + x_a sigma_{j-1}(x|a)
                    const double lhs = t.sigma(j);
                    const double rhs =
                        t.sigma1(j, a) + x[static_cast<std::size_t>(a)] * t.sigma1(j - 1, a);
                    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
                    for (int b = 0; b < n; ++b) {
                        if (b == a) continue;
                        // sigma_j(x|a) = sigma_j(x|ab) + x_b sigma_{j-1}(x|ab)
                        const double l1 = t.sigma1(j, a);
                        const double r1 = t.sigma2(j, a, b) +
                                          x[static_cast<std::size_t>(b)] * t.sigma2(j - 1, a, b);
                        CHECK(l1 == doctest::Approx(r1).epsilon(1e-12));
                    }
                }
            }
        }
    }
}

TEST_CASE("gamma cone membership") {
    CHECK(in_gamma_cone({1.0, 1.0, 1.0}, 3));
    // sigma_1 = 9 > 0, sigma_2 = 15 > 0, sigma_3 = -25 < 0: in Gamma_2 only
    CHECK(in_gamma_cone({-1.0, 5.0, 5.0}, 2));
    CHECK_FALSE(in_gamma_cone({-1.0, 5.0, 5.0}, 3));
    CHECK(in_gamma_cone({-1.0, -1.0, 5.0}, 1)); // sigma_1 = 3 > 0
    CHECK_FALSE(in_gamma_cone({0.0, 1.0}, 2)); // sigma_2 = 0 is not strict
}

TEST_CASE("binomial coefficients") {
    CHECK(binomial(5, 2) == 10.0);
    CHECK(binomial(0, 0) == 1.0);
    CHECK(binomial(7, 7) == 1.0);
    CHECK(binomial(3, 5) == 0.0);
    CHECK(binomial(3, -1) == 0.0);
    CHECK(binomial(10, 4) == 210.0);
}

TEST_CASE("newton gap is nonnegative on positive vectors") {
    Rng rng(33);
    for (int n = 2; n <= 8; ++n) {
        for (int k = 1; k <= n; ++k) {
            for (int rep = 0; rep < 40; ++rep) {
                const auto x = random_positive(rng, n);
                CHECK(newton_maclaurin_gap(x, k) >= 0.0);
            }
        }
    }
    // k = 1 degenerates to sigma_0^2 = 1
    CHECK(newton_maclaurin_gap({3.0, 4.0}, 1) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("sharp newton constant: floor over positive vectors, equality at equal entries") {
    for (int m = 2; m <= 6; ++m) {
        for (int k = 2; k <= m; ++k) {
            const double c = newton_constant(m, k);
            CHECK(c > 0.0);
            CHECK(c <= 1.0);

            // equality witness: all-equal entries
            std::vector<double> ones(static_cast<std::size_t>(m), 1.0);
            SigmaTable t(ones);
            const double g = newton_maclaurin_gap(ones, k);
            const double s1 = t.sigma(k - 1);
            CHECK(g == doctest::Approx(c * s1 * s1).epsilon(1e-12));

            // floor: random sweep stays above c * sigma_{k-1}^2
            Rng rng(static_cast<std::uint64_t>(100 * m + k));
            for (int rep = 0; rep < 200; ++rep) {
                const auto x = random_positive(rng, m);
                SigmaTable tx(x);
                const double s = tx.sigma(k - 1);
                CHECK(newton_maclaurin_gap(x, k) >= c * s * s * (1.0 - 1e-12));
            }
        }
    }
}

TEST_CASE("newton constant edge cases") {
    // k = 1: the sigma_{k-2} factor is absent, constant degenerates to 1
    CHECK(newton_constant(4, 1) == 1.0);
    CHECK(newton_constant(1, 1) == 1.0);
    // explicit value: m = 3, k = 2: 1 - C(3,2) C(3,0) / C(3,1)^2 = 1 - 3/9
    CHECK(newton_constant(3, 2) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK_THROWS_AS((void)newton_constant(-1, 2), std::exception);
    CHECK_THROWS_AS((void)newton_constant(3, 0), std::exception);
}
