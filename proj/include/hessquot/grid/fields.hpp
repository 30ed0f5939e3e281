#pragma once

// Periodic scalar/tensor fields on uniform 2-d and 3-d grids with 4th-order
// centered difference stencils. Everything here is flat-space: derivatives
// are plain coordinate derivatives and the grid wraps around.

#include <array>
#include <functional>
#include <string>
#include <vector>

namespace hessquot::grid {

struct GridShape {
    int dim = 2;
    std::array<int, 3> n = {8, 8, 1};       // points per axis (1 beyond dim)
    std::array<double, 3> h = {1.0, 1.0, 1.0}; // spacing per axis

    [[nodiscard]] long long points() const {
        return static_cast<long long>(n[0]) * n[1] * n[2];
    }
    [[nodiscard]] long long index(int i, int j, int k) const {
        return (static_cast<long long>(i) * n[1] + j) * n[2] + k;
    }
    [[nodiscard]] bool same_as(const GridShape& o) const {
        return dim == o.dim && n == o.n && h == o.h;
    }
};

/// Uniform periodic grid over [0, 2*pi)^dim with `points` samples per axis.
[[nodiscard]] GridShape torus_shape(int dim, int points);

void validate_shape(const GridShape& s); // dim in {2,3}, counts >= 8, h > 0

struct ScalarField {
    GridShape shape;
    std::vector<double> v; // row-major, axis 0 slowest

    ScalarField() = default;
    explicit ScalarField(const GridShape& s)
        : shape(s), v(static_cast<std::size_t>(s.points()), 0.0) {}
    [[nodiscard]] double at(long long p) const { return v[static_cast<std::size_t>(p)]; }
    double& at(long long p) { return v[static_cast<std::size_t>(p)]; }
};

struct SymTensorField {
    GridShape shape;
    // Packed upper triangle per point: dim 2 -> (11,12,22); dim 3 ->
    // (11,12,13,22,23,33). values[p*comps + c].
    std::vector<double> values;

    SymTensorField() = default;
    explicit SymTensorField(const GridShape& s);
    [[nodiscard]] int comps() const { return shape.dim * (shape.dim + 1) / 2; }
    [[nodiscard]] int comp_index(int a, int b) const; // a <= b after swap
    [[nodiscard]] double at(long long p, int a, int b) const;
    void set(long long p, int a, int b, double val);
};

/// Samples fn(x) on the grid (x = index * spacing per axis).
[[nodiscard]] ScalarField sample_scalar(const GridShape& s,
                                        const std::function<double(double, double, double)>& fn);

/// 4th-order centered first derivative along `axis` (periodic wrap).
[[nodiscard]] ScalarField d1(const ScalarField& f, int axis);
/// 4th-order centered second derivative along `axis`.
[[nodiscard]] ScalarField d2(const ScalarField& f, int axis);

/// W = (second derivatives of u) + chi. Mixed entries are first-derivative
/// compositions applied in a fixed (a then b, a < b) order so the result is
/// symmetric exactly.
[[nodiscard]] SymTensorField hessian_field(const ScalarField& u, const SymTensorField& chi);

/// Built-in field families, parsed from "name" or "name:key=val,key=val".
///   constant: u = 0,                          chi = c*Id
///   cosine:   u = a*cos(x1)*cos(x2)[*cos(x3)], chi = diag(2,1) / diag(4,2,1)
///   bumps:    u = a*(sin x1 sin x2 [+ sin x2 sin x3]), chi = diag(4, 2[, 1])
/// The cosine/bumps diagonals are staggered so the top eigenvalue stays
/// simple with a uniform gap on the whole torus (the derivative fields of
/// log(1 + lambda_1) are then honestly smooth), and both potentials carry
/// every mixed third derivative, so discrete Codazzi defects are honest
/// truncation error.
struct FieldSpec {
    std::string family = "cosine";
    double a = 0.3;
    double c = 2.0;
};
[[nodiscard]] FieldSpec parse_field_spec(const std::string& text);
[[nodiscard]] SymTensorField build_family_field(const FieldSpec& spec, int dim, int points);

/// CSV exchange format: header x1,x2[,x3],w11,w12,... rows in row-major grid
/// order with x = index * spacing.
void write_tensor_csv(const SymTensorField& f, const std::string& path);
[[nodiscard]] SymTensorField read_tensor_csv(const std::string& path);

} // namespace hessquot::grid
