#pragma once

#include <vector>

namespace hessquot {

/// Dense symmetric matrix with full row-major storage. set() writes both
/// triangles so the invariant a(i,j) == a(j,i) holds exactly.
class SymMatrix {
public:
    SymMatrix() = default;
    explicit SymMatrix(int n) : n_(n), a_(static_cast<std::size_t>(n) * n, 0.0) {}

    static SymMatrix identity(int n);
    /// Build from the packed upper triangle (row-major: w11, w12, ..., w22, ...).
    static SymMatrix from_upper(int n, const std::vector<double>& upper);

    [[nodiscard]] int n() const { return n_; }
    [[nodiscard]] double at(int i, int j) const {
        return a_[static_cast<std::size_t>(i) * n_ + j];
    }
    void set(int i, int j, double v) {
        a_[static_cast<std::size_t>(i) * n_ + j] = v;
        a_[static_cast<std::size_t>(j) * n_ + i] = v;
    }

    [[nodiscard]] std::vector<double> upper() const;
    [[nodiscard]] double max_abs() const;
    [[nodiscard]] double frobenius_sq() const;

private:
    int n_ = 0;
    std::vector<double> a_;
};

/// Eigen-decomposition of a symmetric matrix with eigenvalues sorted in
/// descending order. frame is the orthogonal matrix Q (row-major) whose
/// columns are eigenvectors: W = Q diag(lambda) Q^T.
///
/// Index 0 always refers to the top eigenvalue; kappa[a] = 1/lambda[a] is
/// ascending when the matrix is positive definite.
struct EigenSpectrum {
    int n = 0;
    std::vector<double> lambda; // descending
    std::vector<double> kappa;  // reciprocals
    std::vector<double> frame;  // Q, row-major n*n
    double gap = 0.0;           // lambda[0] - lambda[1] (0 when n == 1)
    bool positive_definite = false;
};

/// Cyclic Jacobi rotations iterated until the largest off-diagonal entry is
/// at most 1e-14 * max|W|, then eigenpairs are sorted descending.
[[nodiscard]] EigenSpectrum eigh_desc(const SymMatrix& W);

/// Spectrum with a prescribed descending eigenvalue list and identity frame.
/// Used by samplers that draw eigenvalues directly.
[[nodiscard]] EigenSpectrum spectrum_from_lambda(const std::vector<double>& lambda_desc);

/// Q^T xi Q, re-symmetrized exactly. Expresses an ambient-frame symmetric
/// perturbation in the eigenframe of spec.
[[nodiscard]] SymMatrix rotate_to_frame(const SymMatrix& xi, const EigenSpectrum& spec);

/// Q diag(d) Q^T for a diagonal-in-frame matrix (rotates back to ambient).
[[nodiscard]] SymMatrix rotate_from_frame_diag(const std::vector<double>& d,
                                               const EigenSpectrum& spec);

} // namespace hessquot
