#include "coopt/linalg.hpp"

#include <cmath>
#include <cstring>

namespace coopt {
namespace kernels {

static inline void eliminate_row(double* dst, const double* src, double factor, std::size_t ncols) {
    for (std::size_t c = 0; c < ncols; ++c)
        dst[c] -= factor * src[c];
}

void eliminate_serial(double* tab, std::size_t ncols, int nrows, int pivot_row,
                      const double* alpha, const double* pivot_row_data) {
    for (int i = 0; i < nrows; ++i) {
        if (i == pivot_row) continue;
        const double f = alpha[i];
        if (f == 0.0) continue;
        eliminate_row(tab + static_cast<std::size_t>(i) * ncols, pivot_row_data, f, ncols);
    }
}

void eliminate_omp(double* tab, std::size_t ncols, int nrows, int pivot_row,
                   const double* alpha, const double* pivot_row_data) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < nrows; ++i) {
        if (i == pivot_row) continue;
        const double f = alpha[i];
        if (f == 0.0) continue;
        eliminate_row(tab + static_cast<std::size_t>(i) * ncols, pivot_row_data, f, ncols);
    }
}

void eliminate(bool parallel, double* tab, std::size_t ncols, int nrows, int pivot_row,
               const double* alpha, const double* pivot_row_data) {
    if (parallel)
        eliminate_omp(tab, ncols, nrows, pivot_row, alpha, pivot_row_data);
    else
        eliminate_serial(tab, ncols, nrows, pivot_row, alpha, pivot_row_data);
}

namespace {

template <bool Parallel>
bool lu_factor_impl(double* a, int n, int* piv) {
    const std::size_t N = static_cast<std::size_t>(n);
    for (int k = 0; k < n; ++k) {
        int p = k;
        double best = std::fabs(a[static_cast<std::size_t>(k) * N + k]);
        for (int i = k + 1; i < n; ++i) {
            const double v = std::fabs(a[static_cast<std::size_t>(i) * N + k]);
            if (v > best) { best = v; p = i; }
        }
        piv[k] = p;
        if (best < 1e-13) return false;
        if (p != k) {
            double* rk = a + static_cast<std::size_t>(k) * N;
            double* rp = a + static_cast<std::size_t>(p) * N;
            for (std::size_t c = 0; c < N; ++c) std::swap(rk[c], rp[c]);
        }
        const double inv = 1.0 / a[static_cast<std::size_t>(k) * N + k];
        const double* rowk = a + static_cast<std::size_t>(k) * N;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (Parallel && n - k > 64)
#endif
        for (int i = k + 1; i < n; ++i) {
            double* rowi = a + static_cast<std::size_t>(i) * N;
            const double l = rowi[k] * inv;
            rowi[k] = l;
            if (l == 0.0) continue;
            for (int c = k + 1; c < n; ++c)
                rowi[c] -= l * rowk[c];
        }
    }
    return true;
}

} // namespace

bool lu_factor_serial(double* a, int n, int* piv) { return lu_factor_impl<false>(a, n, piv); }
bool lu_factor_omp(double* a, int n, int* piv) { return lu_factor_impl<true>(a, n, piv); }
bool lu_factor(bool parallel, double* a, int n, int* piv) {
    return parallel ? lu_factor_omp(a, n, piv) : lu_factor_serial(a, n, piv);
}

void lu_solve(const double* lu, int n, const int* piv, double* b) {
    const std::size_t N = static_cast<std::size_t>(n);
    // Full rows are swapped during factorization, so the whole permutation
    // applies before the triangular solves.
    for (int k = 0; k < n; ++k)
        if (piv[k] != k) std::swap(b[k], b[piv[k]]);
    for (int k = 0; k < n; ++k) {
        const double bk = b[k];
        if (bk == 0.0) continue;
        for (int i = k + 1; i < n; ++i)
            b[i] -= lu[static_cast<std::size_t>(i) * N + k] * bk;
    }
    for (int k = n - 1; k >= 0; --k) {
        double s = b[k];
        const double* rowk = lu + static_cast<std::size_t>(k) * N;
        for (int c = k + 1; c < n; ++c) s -= rowk[c] * b[c];
        b[k] = s / rowk[k];
    }
}

void lu_solve_transpose(const double* lu, int n, const int* piv, double* b) {
    const std::size_t N = static_cast<std::size_t>(n);
    // (PA)^T y' = ... : solve U^T z = b, then L^T w = z, then undo permutation.
    for (int k = 0; k < n; ++k) {
        double s = b[k];
        for (int i = 0; i < k; ++i) s -= lu[static_cast<std::size_t>(i) * N + k] * b[i];
        b[k] = s / lu[static_cast<std::size_t>(k) * N + k];
    }
    for (int k = n - 1; k >= 0; --k) {
        double s = b[k];
        for (int i = k + 1; i < n; ++i) s -= lu[static_cast<std::size_t>(i) * N + k] * b[i];
        b[k] = s;
    }
    for (int k = n - 1; k >= 0; --k)
        if (piv[k] != k) std::swap(b[k], b[piv[k]]);
}

} // namespace kernels

LuSolver::LuSolver(const Matrix& m, bool parallel) {
    n_ = m.rows;
    lu_ = m.a;
    piv_.assign(n_, 0);
    ok_ = (m.rows == m.cols) && kernels::lu_factor(parallel, lu_.data(), n_, piv_.data());
}

void LuSolver::solve(double* b) const { kernels::lu_solve(lu_.data(), n_, piv_.data(), b); }
void LuSolver::solve_transpose(double* b) const {
    kernels::lu_solve_transpose(lu_.data(), n_, piv_.data(), b);
}

} // namespace coopt
