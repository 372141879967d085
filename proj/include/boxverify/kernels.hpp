#pragma once

#include <cstddef>

// Numeric inner loops shared by the inference engine, the sampler and the
// optimizer. Every operation has a scalar reference implementation and, where
// the hardware provides it, a SIMD variant (AVX2 on x86-64, NEON on aarch64).
// The variant is picked once at startup from CPU capabilities; the
// BOXVERIFY_KERNELS environment variable (scalar|avx2|neon|auto) or
// force_backend() can override the choice. Elementwise kernels and vecmat are
// bit-identical across backends; reduction kernels (dot, matvec, sq_dist) may
// differ in the last few ulps because SIMD lanes change the summation order.
namespace boxverify::kernels {

enum class Backend { Scalar, Avx2, Neon };

Backend active_backend();
bool backend_available(Backend b);
void force_backend(Backend b);  // throws std::invalid_argument if unavailable
const char* backend_name(Backend b);

// y = W x with W row-major (rows x cols); x: cols, y: rows.
void matvec(const double* W, std::size_t rows, std::size_t cols, const double* x, double* y);
// y = x^T W with W row-major (rows x cols); x: rows, y: cols.
void vecmat(const double* x, const double* W, std::size_t rows, std::size_t cols, double* y);

double dot(const double* a, const double* b, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);  // y += a*x

void add(const double* a, const double* b, double* out, std::size_t n);
void sub(const double* a, const double* b, double* out, std::size_t n);
void mul(const double* a, const double* b, double* out, std::size_t n);
void div(const double* a, const double* b, double* out, std::size_t n);
void relu(const double* in, double* out, std::size_t n);

double sq_dist(const double* a, const double* b, std::size_t n);

// libm loops, identical on every backend
void sigmoid(const double* in, double* out, std::size_t n);
void tanh(const double* in, double* out, std::size_t n);

}  // namespace boxverify::kernels
