#include "boxverify/kernels.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <stdexcept>

#include "kernel_table.hpp"

namespace boxverify::kernels {

namespace {

// --- scalar reference kernels ---
// Accumulations run strictly left to right; these define the reference
// results the SIMD variants are tested against.

void matvec_scalar(const double* W, std::size_t rows, std::size_t cols, const double* x,
                   double* y) {
    for (std::size_t r = 0; r < rows; ++r) {
        const double* row = W + r * cols;
        double acc = 0.0;
        for (std::size_t c = 0; c < cols; ++c)
            acc += row[c] * x[c];
        y[r] = acc;
    }
}

void vecmat_scalar(const double* x, const double* W, std::size_t rows, std::size_t cols,
                   double* y) {
    for (std::size_t c = 0; c < cols; ++c)
        y[c] = 0.0;
    for (std::size_t r = 0; r < rows; ++r) {
        const double* row = W + r * cols;
        const double xr = x[r];
        for (std::size_t c = 0; c < cols; ++c)
            y[c] += xr * row[c];
    }
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        acc += a[i] * b[i];
    return acc;
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        y[i] += a * x[i];
}

void add_scalar(const double* a, const double* b, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        out[i] = a[i] + b[i];
}

void sub_scalar(const double* a, const double* b, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        out[i] = a[i] - b[i];
}

void mul_scalar(const double* a, const double* b, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        out[i] = a[i] * b[i];
}

void div_scalar(const double* a, const double* b, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        out[i] = a[i] / b[i];
}

void relu_scalar(const double* in, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        out[i] = in[i] > 0.0 ? in[i] : 0.0;
}

double sq_dist_scalar(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

Backend detect_backend() {
    if (const char* env = std::getenv("BOXVERIFY_KERNELS")) {
        if (std::strcmp(env, "scalar") == 0)
            return Backend::Scalar;
#if defined(__x86_64__) || defined(_M_X64)
        if (std::strcmp(env, "avx2") == 0 && avx2_supported())
            return Backend::Avx2;
#endif
#if defined(__aarch64__)
        if (std::strcmp(env, "neon") == 0)
            return Backend::Neon;
#endif
        // unknown or unavailable value falls through to auto detection
    }
#if defined(__x86_64__) || defined(_M_X64)
    if (avx2_supported())
        return Backend::Avx2;
#endif
#if defined(__aarch64__)
    return Backend::Neon;
#endif
    return Backend::Scalar;
}

const KernelTable* table_for(Backend b) {
    switch (b) {
    case Backend::Scalar:
        return &scalar_table();
#if defined(__x86_64__) || defined(_M_X64)
    case Backend::Avx2:
        return &avx2_table();
#endif
#if defined(__aarch64__)
    case Backend::Neon:
        return &neon_table();
#endif
    default:
        return nullptr;
    }
}

struct Dispatch {
    std::atomic<const KernelTable*> table;
    std::atomic<Backend> backend;
    Dispatch() {
        Backend b = detect_backend();
        backend.store(b);
        table.store(table_for(b));
    }
};

Dispatch& dispatch() {
    static Dispatch d;
    return d;
}

const KernelTable& tab() {
    return *dispatch().table.load(std::memory_order_relaxed);
}

}  // namespace

const KernelTable& scalar_table() {
    static const KernelTable t = {matvec_scalar, vecmat_scalar, dot_scalar, axpy_scalar,
                                  add_scalar,    sub_scalar,    mul_scalar, div_scalar,
                                  relu_scalar,   sq_dist_scalar};
    return t;
}

Backend active_backend() {
    return dispatch().backend.load(std::memory_order_relaxed);
}

bool backend_available(Backend b) {
    return table_for(b) != nullptr;
}

void force_backend(Backend b) {
    const KernelTable* t = table_for(b);
    if (!t)
        throw std::invalid_argument("kernel backend not available on this machine");
    dispatch().table.store(t);
    dispatch().backend.store(b);
}

const char* backend_name(Backend b) {
    switch (b) {
    case Backend::Scalar:
        return "scalar";
    case Backend::Avx2:
        return "avx2";
    case Backend::Neon:
        return "neon";
    }
    return "?";
}

void matvec(const double* W, std::size_t rows, std::size_t cols, const double* x, double* y) {
    tab().matvec(W, rows, cols, x, y);
}
void vecmat(const double* x, const double* W, std::size_t rows, std::size_t cols, double* y) {
    tab().vecmat(x, W, rows, cols, y);
}
double dot(const double* a, const double* b, std::size_t n) {
    return tab().dot(a, b, n);
}
void axpy(double a, const double* x, double* y, std::size_t n) {
    tab().axpy(a, x, y, n);
}
void add(const double* a, const double* b, double* out, std::size_t n) {
    tab().add(a, b, out, n);
}
void sub(const double* a, const double* b, double* out, std::size_t n) {
    tab().sub(a, b, out, n);
}
void mul(const double* a, const double* b, double* out, std::size_t n) {
    tab().mul(a, b, out, n);
}
void div(const double* a, const double* b, double* out, std::size_t n) {
    tab().div(a, b, out, n);
}
void relu(const double* in, double* out, std::size_t n) {
    tab().relu(in, out, n);
}
double sq_dist(const double* a, const double* b, std::size_t n) {
    return tab().sq_dist(a, b, n);
}

void sigmoid(const double* in, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        out[i] = 1.0 / (1.0 + std::exp(-in[i]));
}

void tanh(const double* in, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        out[i] = std::tanh(in[i]);
}

}  // namespace boxverify::kernels
