#pragma once

// Shared template body for the batched residual kernels. Included by the
// scalar TU and by the wide (AVX2/NEON) TU; every lane executes exactly the
// same operation sequence, so the two instantiations agree bit for bit.

#include <limits>
#include <stdexcept>

#include "hessquot/kernels/pack.hpp"
#include "hessquot/kernels/residual_kernels.hpp"

namespace hessquot::kernels {

namespace detail {

inline void check_batch_args(int n, int k) {
    if (n < 2 || n > kMaxN) throw std::invalid_argument("kernel batch: n out of range");
    if (k < 1 || k > n) throw std::invalid_argument("kernel batch: k out of range");
}

// Sigma tables for one group of P::width samples. Degree j lives at slot
// j + 1 so that degree -1 reads a hard zero; slots beyond the natural top
// degree stay zero as well, which keeps every access branch-free.
template <class P>
struct SigmaPack {
    P sig[kMaxN + 2];
    P d1[kMaxN][kMaxN + 2];
    P d2[kMaxN * (kMaxN - 1) / 2][kMaxN + 2];
};

inline int pair_row(int a, int b) { // requires a < b
    return b * (b - 1) / 2 + a;
}

template <class P>
inline void dp_row(P* row, const P* x, int n, int skip_a, int skip_b) {
    row[0] = P::set1(0.0);
    row[1] = P::set1(1.0);
    for (int j = 2; j < kMaxN + 2; ++j) row[j] = P::set1(0.0);
    for (int i = 0; i < n; ++i) {
        if (i == skip_a || i == skip_b) continue;
        for (int j = n + 1; j >= 2; --j) row[j] += x[i] * row[j - 1];
    }
}

template <class P>
inline void build_tables(SigmaPack<P>& t, const P* x, int n) {
    dp_row(t.sig, x, n, -1, -1);
    for (int a = 0; a < n; ++a) dp_row(t.d1[a], x, n, a, -1);
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) dp_row(t.d2[pair_row(a, b)], x, n, a, b);
    }
}

inline int xi_index(int n, int a, int b) { // packed upper triangle, a <= b
    return a * n - a * (a - 1) / 2 + (b - a);
}

// One group of P::width consecutive samples starting at `base`.
template <class P>
void theorem_group(int n, int k, double cnk, double ratio, double coef, const double* lambda,
                   const double* xi, long long base, const TheoremOut& out) {
    const int m = n * (n + 1) / 2;
    P lam[kMaxN], kap[kMaxN], x[kMaxN * (kMaxN + 1) / 2];
    const P one = P::set1(1.0);
    for (int a = 0; a < n; ++a) {
        lam[a] = P::gather(lambda + base * n + a, n);
        kap[a] = one / lam[a];
    }
    for (int p = 0; p < m; ++p) x[p] = P::gather(xi + base * m + p, m);

    SigmaPack<P> t;
    build_tables(t, kap, n);
    auto S = [&](int j) { return t.sig[j + 1]; };
    auto S1 = [&](int j, int a) { return t.d1[a][j + 1]; };
    auto S2 = [&](int j, int a, int b) {
        return t.d2[pair_row(a < b ? a : b, a < b ? b : a)][j + 1];
    };
    auto X = [&](int a, int b) { return x[xi_index(n, a < b ? a : b, a < b ? b : a)]; };

    const P s = S(k);
    const P skk = s * s;

    P faa[kMaxN];
    for (int a = 0; a < n; ++a) faa[a] = S1(k - 1, a) * kap[a] * kap[a] / skk;

    // Diagonal-difference pieces: exact (i1p) and Newton-surrogate (i1).
    P i1p = P::set1(0.0), i1 = P::set1(0.0);
    const P cnk_p = P::set1(cnk);
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            const P s1ab = S2(k - 1, a, b);
            const P gap = s1ab * s1ab - S2(k, a, b) * S2(k - 2, a, b);
            const P d = kap[a] * X(a, a) - kap[b] * X(b, b);
            const P w = kap[a] * kap[b] * d * d;
            i1p += gap * w;
            i1 += cnk_p * (s1ab * s1ab) * w;
        }
    }
    i1p = i1p / s;
    i1 = i1 / s;

    P diag3 = P::set1(0.0), diagsq = P::set1(0.0);
    for (int a = 0; a < n; ++a) {
        const P s1 = S1(k - 1, a);
        const P xd = X(a, a);
        diag3 += s1 * kap[a] * kap[a] * kap[a] * xd * xd;
        diagsq += s1 * kap[a] * kap[a] * xd;
    }
    const P i2 = diag3 - diagsq * diagsq / s;

    P i3 = P::set1(0.0);
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            const P x2 = X(a, b) * X(a, b);
            const P s1ab = S2(k - 1, a, b);
            const P kk = kap[a] * kap[a] * kap[b] * kap[b];
            i3 += ((S1(k - 1, a) + s1ab) * lam[b] + (S1(k - 1, b) + s1ab) * lam[a]) * kk * x2;
        }
    }

    const P lhs = (i1p + i2 + i3) / skk;

    P grad = P::set1(0.0), acoef = P::set1(0.0), j1 = P::set1(0.0), j2 = P::set1(0.0),
      j3 = P::set1(0.0), frob = P::set1(0.0);
    for (int a = 0; a < n; ++a) {
        grad += faa[a] * X(a, a);
        frob += X(a, a) * X(a, a);
        for (int b = a + 1; b < n; ++b) frob += P::set1(2.0) * X(a, b) * X(a, b);
    }
    for (int a = 1; a < n; ++a) {
        const P xa1 = X(a, 0);
        acoef += faa[a] * X(a, a) * X(a, a) / lam[a];
        j1 += faa[a] * xa1 * xa1 / lam[0];
        j2 += faa[0] * xa1 * xa1 / lam[a];
    }
    for (int a = 1; a < n; ++a) {
        for (int b = 1; b < n; ++b) {
            if (a == b) continue;
            j3 += faa[a] * X(a, b) * X(a, b) / lam[b];
        }
    }
    const P eps_den = faa[0] * X(0, 0) * X(0, 0) / lam[0];

    const P r0 = lhs - eps_den - acoef + grad * grad * s - j3 - P::set1(coef) * j1;
    const P scale = frob / (s * lam[n - 1]);

    P f1min = P::set1(std::numeric_limits<double>::infinity());
    P srmin = P::set1(std::numeric_limits<double>::infinity());
    P c2num = P::set1(0.0);
    const P ratio_p = P::set1(ratio);
    for (int a = 1; a < n; ++a) {
        f1min = P::min(f1min, (faa[a] * lam[a] / lam[0] - faa[0]) / faa[0]);
        const P s1a = S1(k - 1, a);
        srmin = P::min(srmin, (S2(k - 1, a, 0) - ratio_p * s1a) / s1a);
        c2num = P::max(c2num, P::abs(X(a, a)) * lam[0] / lam[a]);
    }
    const P c2max = c2num / P::abs(X(0, 0));
    const P fv = one / s;

    r0.store(out.r0 + base);
    acoef.store(out.a_coeff + base);
    eps_den.store(out.eps_den + base);
    scale.store(out.scale + base);
    j1.store(out.j1 + base);
    j2.store(out.j2 + base);
    f1min.store(out.f1min + base);
    srmin.store(out.srmin + base);
    i1.store(out.i1 + base);
    c2max.store(out.case2max + base);
    fv.store(out.fval + base);
}

template <class P>
void glz_group(int n, int k, const double* lambda, const double* xi, long long base,
               double* residual, double* scale) {
    const int m = n * (n + 1) / 2;
    P lam[kMaxN], x[kMaxN * (kMaxN + 1) / 2];
    for (int a = 0; a < n; ++a) lam[a] = P::gather(lambda + base * n + a, n);
    for (int p = 0; p < m; ++p) x[p] = P::gather(xi + base * m + p, m);

    SigmaPack<P> t;
    build_tables(t, lam, n);
    auto S = [&](int j) { return t.sig[j + 1]; };
    auto S1 = [&](int j, int a) { return t.d1[a][j + 1]; };
    auto S2 = [&](int j, int a, int b) {
        return t.d2[pair_row(a < b ? a : b, a < b ? b : a)][j + 1];
    };
    auto X = [&](int a, int b) { return x[xi_index(n, a < b ? a : b, a < b ? b : a)]; };

    P lhs = P::set1(0.0), gross = P::set1(0.0), rhs_num = P::set1(0.0);
    const P two = P::set1(2.0);
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            const P s2 = S2(k - 2, a, b);
            const P dd = two * s2 * X(a, a) * X(b, b);
            const P oo = two * s2 * X(a, b) * X(a, b);
            lhs += dd - oo;
            gross += P::abs(dd) + P::abs(oo);
        }
    }
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            const P term = S1(k - 1, b) * X(a, b) * X(a, b) / lam[a];
            lhs += term;
            gross += P::abs(term);
        }
        rhs_num += S1(k - 1, a) * X(a, a);
    }
    const P rhs = rhs_num * rhs_num / S(k);
    gross += P::abs(rhs);

    const P res = lhs - rhs;
    res.store(residual + base);
    gross.store(scale + base);
}

} // namespace detail

} // namespace hessquot::kernels
