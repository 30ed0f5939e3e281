// Wide-pack instantiation of the batch kernels. On x86 this translation unit
// is compiled with -mavx2; callers must gate on simd_available() before
// entering (the dispatcher in residual_kernels.cpp does).

#include "hessquot/kernels/residual_kernels.hpp"

#include "hessquot/symfunc.hpp"
#include "residual_kernels_impl.hpp"

namespace hessquot::kernels {

#if defined(HESSQUOT_HAVE_WIDE_PACK)

void theorem_batch_simd(int n, int k, const double* lambda, const double* xi, long long count,
                        const TheoremOut& out) {
    detail::check_batch_args(n, k);
    const double cnk = newton_constant(n - 2, k);
    const double ratio = n > 1 ? static_cast<double>(n - k) / static_cast<double>(n - 1) : 0.0;
    const double coef = 1.0 + ratio;
    const long long w = PackWide::width;
    long long i = 0;
    for (; i + w <= count; i += w) {
        detail::theorem_group<PackWide>(n, k, cnk, ratio, coef, lambda, xi, i, out);
    }
    for (; i < count; ++i) {
        detail::theorem_group<PackScalar>(n, k, cnk, ratio, coef, lambda, xi, i, out);
    }
}

void glz_batch_simd(int n, int k, const double* lambda, const double* xi, long long count,
                    double* residual, double* scale) {
    detail::check_batch_args(n, k);
    const long long w = PackWide::width;
    long long i = 0;
    for (; i + w <= count; i += w) {
        detail::glz_group<PackWide>(n, k, lambda, xi, i, residual, scale);
    }
    for (; i < count; ++i) {
        detail::glz_group<PackScalar>(n, k, lambda, xi, i, residual, scale);
    }
}

#else

void theorem_batch_simd(int n, int k, const double* lambda, const double* xi, long long count,
                        const TheoremOut& out) {
    theorem_batch_scalar(n, k, lambda, xi, count, out);
}

void glz_batch_simd(int n, int k, const double* lambda, const double* xi, long long count,
                    double* residual, double* scale) {
    glz_batch_scalar(n, k, lambda, xi, count, residual, scale);
}

#endif

} // namespace hessquot::kernels
