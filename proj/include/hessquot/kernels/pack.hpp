#pragma once

#include <cmath>

#if defined(__AVX2__)
#include <immintrin.h>
#elif defined(__aarch64__)
#include <arm_neon.h>
#endif

namespace hessquot::kernels {

// SIMD lane abstraction for the batched residual kernels. Only +,-,*,/,
// min, max and abs are provided: the kernels are written so every lane of
// the wide pack performs exactly the same operation sequence as PackScalar,
// which makes scalar and SIMD results bit-identical (no FMA, no libm).

struct PackScalar {
    static constexpr int width = 1;
    double v;

    static PackScalar set1(double x) { return {x}; }
    static PackScalar load(const double* p) { return {*p}; }
    static PackScalar gather(const double* p, long long stride) {
        (void)stride;
        return {*p};
    }
    void store(double* p) const { *p = v; }

    friend PackScalar operator+(PackScalar a, PackScalar b) { return {a.v + b.v}; }
    friend PackScalar operator-(PackScalar a, PackScalar b) { return {a.v - b.v}; }
    friend PackScalar operator*(PackScalar a, PackScalar b) { return {a.v * b.v}; }
    friend PackScalar operator/(PackScalar a, PackScalar b) { return {a.v / b.v}; }
    PackScalar& operator+=(PackScalar o) {
        v += o.v;
        return *this;
    }
    PackScalar& operator-=(PackScalar o) {
        v -= o.v;
        return *this;
    }

    // Matches the x86/NEON min/max semantics ((a op b) ? a : b).
    static PackScalar min(PackScalar a, PackScalar b) { return {a.v < b.v ? a.v : b.v}; }
    static PackScalar max(PackScalar a, PackScalar b) { return {a.v > b.v ? a.v : b.v}; }
    static PackScalar abs(PackScalar a) { return {std::fabs(a.v)}; }
};

#if defined(__AVX2__)

struct PackAvx2 {
    static constexpr int width = 4;
    __m256d v;

    static PackAvx2 set1(double x) { return {_mm256_set1_pd(x)}; }
    static PackAvx2 load(const double* p) { return {_mm256_loadu_pd(p)}; }
    static PackAvx2 gather(const double* p, long long stride) {
        return {_mm256_setr_pd(p[0], p[stride], p[2 * stride], p[3 * stride])};
    }
    void store(double* p) const { _mm256_storeu_pd(p, v); }

    friend PackAvx2 operator+(PackAvx2 a, PackAvx2 b) { return {_mm256_add_pd(a.v, b.v)}; }
    friend PackAvx2 operator-(PackAvx2 a, PackAvx2 b) { return {_mm256_sub_pd(a.v, b.v)}; }
    friend PackAvx2 operator*(PackAvx2 a, PackAvx2 b) { return {_mm256_mul_pd(a.v, b.v)}; }
    friend PackAvx2 operator/(PackAvx2 a, PackAvx2 b) { return {_mm256_div_pd(a.v, b.v)}; }
    PackAvx2& operator+=(PackAvx2 o) {
        v = _mm256_add_pd(v, o.v);
        return *this;
    }
    PackAvx2& operator-=(PackAvx2 o) {
        v = _mm256_sub_pd(v, o.v);
        return *this;
    }

    static PackAvx2 min(PackAvx2 a, PackAvx2 b) { return {_mm256_min_pd(a.v, b.v)}; }
    static PackAvx2 max(PackAvx2 a, PackAvx2 b) { return {_mm256_max_pd(a.v, b.v)}; }
    static PackAvx2 abs(PackAvx2 a) {
        const __m256d mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffll));
        return {_mm256_and_pd(a.v, mask)};
    }
};

using PackWide = PackAvx2;
#define HESSQUOT_HAVE_WIDE_PACK 1

#elif defined(__aarch64__)

struct PackNeon {
    static constexpr int width = 2;
    float64x2_t v;

    static PackNeon set1(double x) { return {vdupq_n_f64(x)}; }
    static PackNeon load(const double* p) { return {vld1q_f64(p)}; }
    static PackNeon gather(const double* p, long long stride) {
        float64x2_t r = vdupq_n_f64(p[0]);
        r = vsetq_lane_f64(p[stride], r, 1);
        return {r};
    }
    void store(double* p) const { vst1q_f64(p, v); }

    friend PackNeon operator+(PackNeon a, PackNeon b) { return {vaddq_f64(a.v, b.v)}; }
    friend PackNeon operator-(PackNeon a, PackNeon b) { return {vsubq_f64(a.v, b.v)}; }
    friend PackNeon operator*(PackNeon a, PackNeon b) { return {vmulq_f64(a.v, b.v)}; }
    friend PackNeon operator/(PackNeon a, PackNeon b) { return {vdivq_f64(a.v, b.v)}; }
    PackNeon& operator+=(PackNeon o) {
        v = vaddq_f64(v, o.v);
        return *this;
    }
    PackNeon& operator-=(PackNeon o) {
        v = vsubq_f64(v, o.v);
        return *this;
    }

    static PackNeon min(PackNeon a, PackNeon b) {
        // bitwise-select form of (a < b) ? a : b, matching PackScalar
        uint64x2_t lt = vcltq_f64(a.v, b.v);
        return {vbslq_f64(lt, a.v, b.v)};
    }
    static PackNeon max(PackNeon a, PackNeon b) {
        uint64x2_t gt = vcgtq_f64(a.v, b.v);
        return {vbslq_f64(gt, a.v, b.v)};
    }
    static PackNeon abs(PackNeon a) { return {vabsq_f64(a.v)}; }
};

using PackWide = PackNeon;
#define HESSQUOT_HAVE_WIDE_PACK 1

#endif

} // namespace hessquot::kernels
