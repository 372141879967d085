// NEON kernel variants for aarch64, mirroring the AVX2 file. NEON is
// mandatory on aarch64 so there is no runtime capability check. vmaxq and the
// unfused mul/add sequences keep elementwise kernels and vecmat bit-identical
// to the scalar reference.

#if defined(__aarch64__)

#include <arm_neon.h>

#include <cstddef>

#include "kernel_table.hpp"

namespace boxverify::kernels {

namespace {

double dot_neon(const double* a, const double* b, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
        acc = vaddq_f64(acc, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
    double r = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
    for (; i < n; ++i)
        r += a[i] * b[i];
    return r;
}

void matvec_neon(const double* W, std::size_t rows, std::size_t cols, const double* x,
                 double* y) {
    for (std::size_t r = 0; r < rows; ++r)
        y[r] = dot_neon(W + r * cols, x, cols);
}

void axpy_neon(double a, const double* x, double* y, std::size_t n) {
    float64x2_t va = vdupq_n_f64(a);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
        vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), vmulq_f64(va, vld1q_f64(x + i))));
    for (; i < n; ++i)
        y[i] += a * x[i];
}

void vecmat_neon(const double* x, const double* W, std::size_t rows, std::size_t cols,
                 double* y) {
    for (std::size_t c = 0; c < cols; ++c)
        y[c] = 0.0;
    for (std::size_t r = 0; r < rows; ++r)
        axpy_neon(x[r], W + r * cols, y, cols);
}

void add_neon(const double* a, const double* b, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
        vst1q_f64(out + i, vaddq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
    for (; i < n; ++i)
        out[i] = a[i] + b[i];
}

void sub_neon(const double* a, const double* b, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
        vst1q_f64(out + i, vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
    for (; i < n; ++i)
        out[i] = a[i] - b[i];
}

void mul_neon(const double* a, const double* b, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
        vst1q_f64(out + i, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
    for (; i < n; ++i)
        out[i] = a[i] * b[i];
}

void div_neon(const double* a, const double* b, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
        vst1q_f64(out + i, vdivq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
    for (; i < n; ++i)
        out[i] = a[i] / b[i];
}

void relu_neon(const double* in, double* out, std::size_t n) {
    float64x2_t zero = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t v = vld1q_f64(in + i);
        // select v where v > 0, else 0; NaN compares false and maps to 0
        uint64x2_t m = vcgtq_f64(v, zero);
        vst1q_f64(out + i, vbslq_f64(m, v, zero));
    }
    for (; i < n; ++i)
        out[i] = in[i] > 0.0 ? in[i] : 0.0;
}

double sq_dist_neon(const double* a, const double* b, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t d = vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
        acc = vaddq_f64(acc, vmulq_f64(d, d));
    }
    double r = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
    for (; i < n; ++i) {
        const double d = a[i] - b[i];
        r += d * d;
    }
    return r;
}

}  // namespace

const KernelTable& neon_table() {
    static const KernelTable t = {matvec_neon, vecmat_neon, dot_neon, axpy_neon,
                                  add_neon,    sub_neon,    mul_neon, div_neon,
                                  relu_neon,   sq_dist_neon};
    return t;
}

}  // namespace boxverify::kernels

#endif  // aarch64
