#include "hessquot/grid/fields.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace hessquot::grid {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

void decompose(const GridShape& s, long long p, int* i, int* j, int* k) {
    *k = static_cast<int>(p % s.n[2]);
    const long long q = p / s.n[2];
    *j = static_cast<int>(q % s.n[1]);
    *i = static_cast<int>(q / s.n[1]);
}

int wrap(int i, int n) {
    i %= n;
    return i < 0 ? i + n : i;
}

long long shifted(const GridShape& s, long long p, int axis, int delta) {
    int c[3];
    decompose(s, p, &c[0], &c[1], &c[2]);
    c[axis] = wrap(c[axis] + delta, s.n[axis]);
    return s.index(c[0], c[1], c[2]);
}

} // namespace

GridShape torus_shape(int dim, int points) {
    GridShape s;
    s.dim = dim;
    for (int a = 0; a < 3; ++a) {
        s.n[static_cast<std::size_t>(a)] = a < dim ? points : 1;
        s.h[static_cast<std::size_t>(a)] = a < dim ? kTwoPi / points : 1.0;
    }
    validate_shape(s);
    return s;
}

void validate_shape(const GridShape& s) {
    if (s.dim != 2 && s.dim != 3) throw std::invalid_argument("grid: dim must be 2 or 3");
    for (int a = 0; a < s.dim; ++a) {
        if (s.n[static_cast<std::size_t>(a)] < 8) {
            throw std::invalid_argument("grid: need at least 8 points per axis");
        }
        if (!(s.h[static_cast<std::size_t>(a)] > 0.0)) {
            throw std::invalid_argument("grid: spacing must be positive");
        }
    }
    if (s.dim == 2 && s.n[2] != 1) throw std::invalid_argument("grid: 2-d shape needs n[2] = 1");
}

SymTensorField::SymTensorField(const GridShape& s)
    : shape(s),
      values(static_cast<std::size_t>(s.points()) * static_cast<std::size_t>(comps()), 0.0) {}

int SymTensorField::comp_index(int a, int b) const {
    if (a > b) std::swap(a, b);
    const int d = shape.dim;
    return a * d - a * (a - 1) / 2 + (b - a);
}

double SymTensorField::at(long long p, int a, int b) const {
    return values[static_cast<std::size_t>(p) * comps() + comp_index(a, b)];
}

void SymTensorField::set(long long p, int a, int b, double val) {
    values[static_cast<std::size_t>(p) * comps() + comp_index(a, b)] = val;
}

ScalarField sample_scalar(const GridShape& s,
                          const std::function<double(double, double, double)>& fn) {
    validate_shape(s);
    ScalarField f(s);
    const long long total = s.points();
    for (long long p = 0; p < total; ++p) {
        int i, j, k;
        decompose(s, p, &i, &j, &k);
        f.at(p) = fn(i * s.h[0], j * s.h[1], k * s.h[2]);
    }
    return f;
}

ScalarField d1(const ScalarField& f, int axis) {
    if (axis < 0 || axis >= f.shape.dim) throw std::invalid_argument("d1: axis out of range");
    ScalarField out(f.shape);
    const double inv = 1.0 / (12.0 * f.shape.h[static_cast<std::size_t>(axis)]);
    const long long total = f.shape.points();
    for (long long p = 0; p < total; ++p) {
        const double fm2 = f.at(shifted(f.shape, p, axis, -2));
        const double fm1 = f.at(shifted(f.shape, p, axis, -1));
        const double fp1 = f.at(shifted(f.shape, p, axis, 1));
        const double fp2 = f.at(shifted(f.shape, p, axis, 2));
        out.at(p) = (-fp2 + 8.0 * fp1 - 8.0 * fm1 + fm2) * inv;
    }
    return out;
}

ScalarField d2(const ScalarField& f, int axis) {
    if (axis < 0 || axis >= f.shape.dim) throw std::invalid_argument("d2: axis out of range");
    ScalarField out(f.shape);
    const double h = f.shape.h[static_cast<std::size_t>(axis)];
    const double inv = 1.0 / (12.0 * h * h);
    const long long total = f.shape.points();
    for (long long p = 0; p < total; ++p) {
        const double fm2 = f.at(shifted(f.shape, p, axis, -2));
        const double fm1 = f.at(shifted(f.shape, p, axis, -1));
        const double f0 = f.at(p);
        const double fp1 = f.at(shifted(f.shape, p, axis, 1));
        const double fp2 = f.at(shifted(f.shape, p, axis, 2));
        out.at(p) = (-fp2 + 16.0 * fp1 - 30.0 * f0 + 16.0 * fm1 - fm2) * inv;
    }
    return out;
}

SymTensorField hessian_field(const ScalarField& u, const SymTensorField& chi) {
    if (!u.shape.same_as(chi.shape)) throw std::invalid_argument("hessian_field: grid mismatch");
    validate_shape(u.shape);
    const int d = u.shape.dim;
    SymTensorField w(u.shape);
    const long long total = u.shape.points();
    for (int a = 0; a < d; ++a) {
        for (int b = a; b < d; ++b) {
            const ScalarField dd = a == b ? d2(u, a) : d1(d1(u, a), b);
            for (long long p = 0; p < total; ++p) {
                w.set(p, a, b, dd.at(p) + chi.at(p, a, b));
            }
        }
    }
    return w;
}

FieldSpec parse_field_spec(const std::string& text) {
    FieldSpec spec;
    const auto colon = text.find(':');
    spec.family = text.substr(0, colon);
    if (spec.family != "constant" && spec.family != "cosine" && spec.family != "bumps") {
        throw std::invalid_argument("field spec: unknown family '" + spec.family +
                                    "' (expected constant, cosine, or bumps)");
    }
    if (colon == std::string::npos) return spec;
    std::stringstream rest(text.substr(colon + 1));
    std::string item;
    while (std::getline(rest, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("field spec: expected key=value, got '" + item + "'");
        }
        const std::string key = item.substr(0, eq);
        double val = 0.0;
        try {
            std::size_t used = 0;
            val = std::stod(item.substr(eq + 1), &used);
            if (used != item.size() - eq - 1) throw std::invalid_argument("trailing junk");
        } catch (const std::exception&) {
            throw std::invalid_argument("field spec: bad numeric value in '" + item + "'");
        }
        if (key == "a") {
            spec.a = val;
        } else if (key == "c") {
            spec.c = val;
        } else {
            throw std::invalid_argument("field spec: unknown key '" + key + "'");
        }
    }
    return spec;
}

SymTensorField build_family_field(const FieldSpec& spec, int dim, int points) {
    const GridShape s = torus_shape(dim, points);
    ScalarField u(s);
    SymTensorField chi(s);
    const long long total = s.points();

    if (spec.family == "constant") {
        for (long long p = 0; p < total; ++p) {
            for (int a = 0; a < dim; ++a) chi.set(p, a, a, spec.c);
        }
    } else if (spec.family == "cosine") {
        // Product form: all mixed third derivatives are active, so the
        // discrete Codazzi defect is honest truncation error rather than
        // roundoff, and the least admissible forcing constant is generic.
        u = sample_scalar(s, [&](double x1, double x2, double x3) {
            double val = spec.a * std::cos(x1) * std::cos(x2);
            if (dim == 3) val *= std::cos(x3);
            return val;
        });
        const double diag[3] = {dim == 3 ? 4.0 : 2.0, dim == 3 ? 2.0 : 1.0, 1.0};
        for (long long p = 0; p < total; ++p) {
            for (int a = 0; a < dim; ++a) chi.set(p, a, a, diag[a]);
        }
    } else { // bumps
        u = sample_scalar(s, [&](double x1, double x2, double x3) {
            double val = spec.a * std::sin(x1) * std::sin(x2);
            if (dim == 3) val += spec.a * std::sin(x2) * std::sin(x3);
            return val;
        });
        const double diag[3] = {4.0, 2.0, 1.0};
        for (long long p = 0; p < total; ++p) {
            for (int a = 0; a < dim; ++a) chi.set(p, a, a, diag[a]);
        }
    }
    return hessian_field(u, chi);
}

void write_tensor_csv(const SymTensorField& f, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out.precision(17);
    const int d = f.shape.dim;
    out << "x1,x2";
    if (d == 3) out << ",x3";
    for (int a = 0; a < d; ++a) {
        for (int b = a; b < d; ++b) out << ",w" << (a + 1) << (b + 1);
    }
    out << "\n";
    const long long total = f.shape.points();
    for (long long p = 0; p < total; ++p) {
        int i, j, k;
        decompose(f.shape, p, &i, &j, &k);
        out << i * f.shape.h[0] << "," << j * f.shape.h[1];
        if (d == 3) out << "," << k * f.shape.h[2];
        for (int a = 0; a < d; ++a) {
            for (int b = a; b < d; ++b) out << "," << f.at(p, a, b);
        }
        out << "\n";
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

namespace {

std::vector<double> distinct_sorted(std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    return xs;
}

} // namespace

SymTensorField read_tensor_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::string header;
    if (!std::getline(in, header)) throw std::runtime_error("empty CSV: " + path);

    std::vector<std::string> cols;
    {
        std::stringstream ss(header);
        std::string c;
        while (std::getline(ss, c, ',')) cols.push_back(c);
    }
    int dim = 0;
    if (cols.size() >= 5 && cols[0] == "x1" && cols[1] == "x2") {
        dim = (cols.size() >= 3 && cols[2] == "x3") ? 3 : 2;
    }
    const int comps = dim * (dim + 1) / 2;
    if (dim == 0 || static_cast<int>(cols.size()) != dim + comps) {
        throw std::runtime_error("CSV header must be x1,x2[,x3],w11,w12,...: " + path);
    }

    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        if (static_cast<int>(row.size()) != dim + comps) {
            throw std::runtime_error("CSV row has wrong column count: " + path);
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::runtime_error("CSV has no data rows: " + path);

    GridShape s;
    s.dim = dim;
    long long expect = 1;
    for (int a = 0; a < dim; ++a) {
        std::vector<double> xs;
        xs.reserve(rows.size());
        for (const auto& r : rows) xs.push_back(r[static_cast<std::size_t>(a)]);
        const std::vector<double> u = distinct_sorted(xs);
        if (u.size() < 2) throw std::runtime_error("CSV axis has fewer than 2 coordinates");
        s.n[static_cast<std::size_t>(a)] = static_cast<int>(u.size());
        s.h[static_cast<std::size_t>(a)] = u[1] - u[0];
        expect *= static_cast<long long>(u.size());
    }
    if (expect != static_cast<long long>(rows.size())) {
        throw std::runtime_error("CSV rows do not fill the coordinate grid: " + path);
    }
    validate_shape(s);

    SymTensorField f(s);
    for (long long p = 0; p < static_cast<long long>(rows.size()); ++p) {
        const auto& r = rows[static_cast<std::size_t>(p)];
        int c = 0;
        for (int a = 0; a < dim; ++a) {
            for (int b = a; b < dim; ++b) {
                f.set(p, a, b, r[static_cast<std::size_t>(dim + c)]);
                ++c;
            }
        }
    }
    return f;
}

} // namespace hessquot::grid
