#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstring>
#include <string>
#include <vector>

#include "hessquot/campaigns.hpp"
#include "hessquot/concavity.hpp"
#include "hessquot/kernels/residual_kernels.hpp"
#include "hessquot/spectral.hpp"

using namespace hessquot;
using namespace hessquot::kernels;

namespace {

struct TheoremBuffers {
    std::vector<double> r0, a, e, sc, j1, j2, f1, sr, i1, c2, fv;
    explicit TheoremBuffers(long long count)
        : r0(static_cast<std::size_t>(count)), a(r0.size()), e(r0.size()), sc(r0.size()),
          j1(r0.size()), j2(r0.size()), f1(r0.size()), sr(r0.size()), i1(r0.size()),
          c2(r0.size()), fv(r0.size()) {}
    [[nodiscard]] TheoremOut out() {
        TheoremOut o;
        o.r0 = r0.data();
        o.a_coeff = a.data();
        o.eps_den = e.data();
        o.scale = sc.data();
        o.j1 = j1.data();
        o.j2 = j2.data();
        o.f1min = f1.data();
        o.srmin = sr.data();
        o.i1 = i1.data();
        o.case2max = c2.data();
        o.fval = fv.data();
        return o;
    }
};

bool bytes_equal(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() &&
           std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

// deterministic inputs shared by the equivalence runs
void fill_inputs(int n, long long count, std::vector<double>& lambda, std::vector<double>& xi) {
    SamplerConfig cfg;
    cfg.n = n;
    cfg.k = 1;
    cfg.samples = count;
    cfg.seed = 97;
    SampleStream stream(cfg, 0);
    lambda.resize(static_cast<std::size_t>(count * n));
    xi.resize(static_cast<std::size_t>(count * packed_size(n)));
    for (long long i = 0; i < count; ++i) {
        stream.next(lambda.data() + i * n, xi.data() + i * packed_size(n));
    }
}

} // namespace

TEST_CASE("batch argument validation") {
    TheoremBuffers buf(1);
    std::vector<double> lam = {2.0, 1.0};
    std::vector<double> xi = {1.0, 0.0, 0.0};
    CHECK_THROWS_AS(theorem_batch(1, 1, lam.data(), xi.data(), 1, buf.out()),
                    std::invalid_argument);
    CHECK_THROWS_AS(theorem_batch(13, 1, lam.data(), xi.data(), 1, buf.out()),
                    std::invalid_argument);
    CHECK_THROWS_AS(theorem_batch(2, 0, lam.data(), xi.data(), 1, buf.out()),
                    std::invalid_argument);
    CHECK_THROWS_AS(theorem_batch(2, 3, lam.data(), xi.data(), 1, buf.out()),
                    std::invalid_argument);
    std::vector<double> res(1), sc(1);
    CHECK_THROWS_AS(glz_batch(2, 3, lam.data(), xi.data(), 1, res.data(), sc.data()),
                    std::invalid_argument);
}

TEST_CASE("backend bookkeeping") {
    const Backend original = active_backend();
    CHECK(std::string(backend_name(Backend::scalar)) == "scalar");
    CHECK(std::string(backend_name(Backend::simd)) == "simd");
    set_backend(Backend::scalar);
    CHECK(active_backend() == Backend::scalar);
    if (simd_available()) {
        set_backend(Backend::simd);
        CHECK(active_backend() == Backend::simd);
    } else {
        CHECK_THROWS_AS(set_backend(Backend::simd), std::exception);
    }
    set_backend(original);
}

TEST_CASE("scalar and wide kernels produce bit-identical columns") {
    if (!simd_available()) {
        MESSAGE("no wide backend on this machine; equivalence vacuously skipped");
        return;
    }
    for (int n : {2, 3, 5, 8, 12}) {
        for (int k = 1; k <= n; k += (n > 3 ? 2 : 1)) {
            const long long count = 257; // deliberately not a multiple of the pack width
            std::vector<double> lambda, xi;
            fill_inputs(n, count, lambda, xi);

            TheoremBuffers a(count), b(count);
            theorem_batch_scalar(n, k, lambda.data(), xi.data(), count, a.out());
            theorem_batch_simd(n, k, lambda.data(), xi.data(), count, b.out());
            CHECK(bytes_equal(a.r0, b.r0));
            CHECK(bytes_equal(a.a, b.a));
            CHECK(bytes_equal(a.e, b.e));
            CHECK(bytes_equal(a.sc, b.sc));
            CHECK(bytes_equal(a.j1, b.j1));
            CHECK(bytes_equal(a.j2, b.j2));
            CHECK(bytes_equal(a.f1, b.f1));
            CHECK(bytes_equal(a.sr, b.sr));
            CHECK(bytes_equal(a.i1, b.i1));
            CHECK(bytes_equal(a.c2, b.c2));
            CHECK(bytes_equal(a.fv, b.fv));

            std::vector<double> r1(static_cast<std::size_t>(count)), s1(r1.size());
            std::vector<double> r2(r1.size()), s2(r1.size());
            glz_batch_scalar(n, k, lambda.data(), xi.data(), count, r1.data(), s1.data());
            glz_batch_simd(n, k, lambda.data(), xi.data(), count, r2.data(), s2.data());
            CHECK(bytes_equal(r1, r2));
            CHECK(bytes_equal(s1, s2));
        }
    }
}

TEST_CASE("dispatching entry point honors the selected backend") {
    const Backend original = active_backend();
    const long long count = 33;
    std::vector<double> lambda, xi;
    fill_inputs(3, count, lambda, xi);

    TheoremBuffers direct(count), routed(count);
    theorem_batch_scalar(3, 2, lambda.data(), xi.data(), count, direct.out());
    set_backend(Backend::scalar);
    theorem_batch(3, 2, lambda.data(), xi.data(), count, routed.out());
    set_backend(original);
    CHECK(bytes_equal(direct.r0, routed.r0));
    CHECK(bytes_equal(direct.sc, routed.sc));
}

TEST_CASE("glz batch agrees with the module-path residual") {
    const long long count = 40;
    const int n = 4, k = 2;
    std::vector<double> lambda, xi;
    fill_inputs(n, count, lambda, xi);
    std::vector<double> res(static_cast<std::size_t>(count)), sc(res.size());
    glz_batch(n, k, lambda.data(), xi.data(), count, res.data(), sc.data());

    for (long long i = 0; i < count; ++i) {
        std::vector<double> lam(lambda.begin() + i * n, lambda.begin() + (i + 1) * n);
        const EigenSpectrum spec = spectrum_from_lambda(lam);
        SymMatrix x(n);
        for (int a = 0; a < n; ++a) {
            for (int b = a; b < n; ++b) {
                x.set(a, b, xi[static_cast<std::size_t>(i * packed_size(n) + packed_index(n, a, b))]);
            }
        }
        const GlzResult g = glz_residual(spec, k, x);
        const auto u = static_cast<std::size_t>(i);
        CHECK(res[u] == doctest::Approx(g.residual).epsilon(1e-9));
        CHECK(sc[u] == doctest::Approx(g.scale).epsilon(1e-9));
    }
}
