#pragma once

#include <cstddef>

namespace boxverify::kernels {

struct KernelTable {
    void (*matvec)(const double*, std::size_t, std::size_t, const double*, double*);
    void (*vecmat)(const double*, const double*, std::size_t, std::size_t, double*);
    double (*dot)(const double*, const double*, std::size_t);
    void (*axpy)(double, const double*, double*, std::size_t);
    void (*add)(const double*, const double*, double*, std::size_t);
    void (*sub)(const double*, const double*, double*, std::size_t);
    void (*mul)(const double*, const double*, double*, std::size_t);
    void (*div)(const double*, const double*, double*, std::size_t);
    void (*relu)(const double*, double*, std::size_t);
    double (*sq_dist)(const double*, const double*, std::size_t);
};

const KernelTable& scalar_table();

#if defined(__x86_64__) || defined(_M_X64)
bool avx2_supported();
const KernelTable& avx2_table();
#endif

#if defined(__aarch64__)
const KernelTable& neon_table();
#endif

}  // namespace boxverify::kernels
