#include "hessquot/kernels/residual_kernels.hpp"

#include <cstdlib>
#include <cstring>
#include <stdexcept>
#include <string>

#include "hessquot/symfunc.hpp"
#include "residual_kernels_impl.hpp"

namespace hessquot::kernels {

namespace {

struct TheoremConsts {
    double cnk;
    double ratio;
    double coef;
};

TheoremConsts theorem_consts(int n, int k) {
    TheoremConsts c;
    c.cnk = newton_constant(n - 2, k);
    c.ratio = n > 1 ? static_cast<double>(n - k) / static_cast<double>(n - 1) : 0.0;
    c.coef = 1.0 + c.ratio;
    return c;
}

} // namespace

void theorem_batch_scalar(int n, int k, const double* lambda, const double* xi, long long count,
                          const TheoremOut& out) {
    detail::check_batch_args(n, k);
    const TheoremConsts c = theorem_consts(n, k);
    for (long long i = 0; i < count; ++i) {
        detail::theorem_group<PackScalar>(n, k, c.cnk, c.ratio, c.coef, lambda, xi, i, out);
    }
}

void glz_batch_scalar(int n, int k, const double* lambda, const double* xi, long long count,
                      double* residual, double* scale) {
    detail::check_batch_args(n, k);
    for (long long i = 0; i < count; ++i) {
        detail::glz_group<PackScalar>(n, k, lambda, xi, i, residual, scale);
    }
}

bool simd_available() {
#if defined(__AVX2__) || defined(__aarch64__)
    return true;
#elif defined(__x86_64__) || defined(__i386__)
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

namespace {

Backend initial_backend() {
    if (const char* env = std::getenv("HESSQUOT_KERNEL")) {
        if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
        if (std::strcmp(env, "simd") == 0) {
            if (!simd_available())
                throw std::runtime_error("HESSQUOT_KERNEL=simd but no wide kernel is available");
            return Backend::simd;
        }
        if (*env != '\0') throw std::runtime_error(std::string("unknown HESSQUOT_KERNEL value: ") + env);
    }
    return simd_available() ? Backend::simd : Backend::scalar;
}

Backend& backend_slot() {
    static Backend b = initial_backend();
    return b;
}

} // namespace

Backend active_backend() { return backend_slot(); }

void set_backend(Backend b) {
    if (b == Backend::simd && !simd_available())
        throw std::runtime_error("wide kernel requested but not available on this machine");
    backend_slot() = b;
}

const char* backend_name(Backend b) { return b == Backend::simd ? "simd" : "scalar"; }

void theorem_batch(int n, int k, const double* lambda, const double* xi, long long count,
                   const TheoremOut& out) {
    if (active_backend() == Backend::simd)
        theorem_batch_simd(n, k, lambda, xi, count, out);
    else
        theorem_batch_scalar(n, k, lambda, xi, count, out);
}

void glz_batch(int n, int k, const double* lambda, const double* xi, long long count,
               double* residual, double* scale) {
    if (active_backend() == Backend::simd)
        glz_batch_simd(n, k, lambda, xi, count, residual, scale);
    else
        glz_batch_scalar(n, k, lambda, xi, count, residual, scale);
}

} // namespace hessquot::kernels
