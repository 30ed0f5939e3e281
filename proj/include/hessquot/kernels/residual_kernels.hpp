#pragma once

#include <cstdint>

namespace hessquot::kernels {

/// Hard cap on the matrix dimension handled by the batched kernels (the
/// campaign sweeps stay well below it; the scalar module path has no cap).
inline constexpr int kMaxN = 12;

/// Per-sample outputs of the strengthened-concavity batch kernel. All arrays
/// have `count` entries.
struct TheoremOut {
    double* r0 = nullptr;       // residual at delta_tilde = 0, eps0 = 0
    double* a_coeff = nullptr;  // delta_tilde coefficient
    double* eps_den = nullptr;  // F^{11} xi11^2 / lambda1
    double* scale = nullptr;    // F ||xi||_F^2 / lambda_min
    double* j1 = nullptr;
    double* j2 = nullptr;
    double* f1min = nullptr;    // min_a scaled top-eigenvalue monotonicity slack
    double* srmin = nullptr;    // min_a scaled sigma-ratio slack
    double* i1 = nullptr;       // Newton-surrogate diagonal piece
    double* case2max = nullptr; // max_a |xi_aa/la| * l1/|xi11|
    double* fval = nullptr;     // F(lambda) = 1/sigma_k(kappa)
};

/// Input layout: lambda[i*n + a] descending per sample; xi[i*m + p] packed
/// upper triangle (row-major), m = n(n+1)/2.
void theorem_batch(int n, int k, const double* lambda, const double* xi, long long count,
                   const TheoremOut& out);

void glz_batch(int n, int k, const double* lambda, const double* xi, long long count,
               double* residual, double* scale);

enum class Backend { scalar, simd };

/// True when a wide backend exists for this build/CPU.
bool simd_available();

/// Backend used by theorem_batch/glz_batch: the HESSQUOT_KERNEL environment
/// variable ("scalar"/"simd") wins, otherwise SIMD when available.
Backend active_backend();
void set_backend(Backend b);
const char* backend_name(Backend b);

/// Direct entry points for the equivalence tests.
void theorem_batch_scalar(int n, int k, const double* lambda, const double* xi, long long count,
                          const TheoremOut& out);
void glz_batch_scalar(int n, int k, const double* lambda, const double* xi, long long count,
                      double* residual, double* scale);
void theorem_batch_simd(int n, int k, const double* lambda, const double* xi, long long count,
                        const TheoremOut& out);
void glz_batch_simd(int n, int k, const double* lambda, const double* xi, long long count,
                    double* residual, double* scale);

} // namespace hessquot::kernels
