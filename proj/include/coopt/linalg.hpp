#ifndef COOPT_LINALG_HPP
#define COOPT_LINALG_HPP

#include <cstddef>
#include <vector>

namespace coopt {

/// Dense row-major matrix, sized once.
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> a;

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0.0) {}

    double& at(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
    double at(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }
    double* row(int r) { return a.data() + static_cast<size_t>(r) * cols; }
    const double* row(int r) const { return a.data() + static_cast<size_t>(r) * cols; }
};

// Hot numeric kernels. Every kernel ships a serial reference and an OpenMP
// variant; both produce bit-identical results (rows are updated independently,
// no reassociated reductions), which the test suite asserts.
namespace kernels {

// Gaussian elimination step on a dense tableau: for every row i != pivot_row
// with alpha[i] != 0, row_i -= alpha[i] * pivot_row_data. beta (one value per
// row) is updated alongside when not null.
void eliminate_serial(double* tab, std::size_t ncols, int nrows, int pivot_row,
                      const double* alpha, const double* pivot_row_data);
void eliminate_omp(double* tab, std::size_t ncols, int nrows, int pivot_row,
                   const double* alpha, const double* pivot_row_data);
void eliminate(bool parallel, double* tab, std::size_t ncols, int nrows, int pivot_row,
               const double* alpha, const double* pivot_row_data);

// In-place LU with partial pivoting; piv[k] = row swapped into position k.
// Returns false when a pivot underflows (singular matrix).
bool lu_factor_serial(double* a, int n, int* piv);
bool lu_factor_omp(double* a, int n, int* piv);
bool lu_factor(bool parallel, double* a, int n, int* piv);

// Solve LU x = b in place using a factorization from lu_factor.
void lu_solve(const double* lu, int n, const int* piv, double* b);
// Solve transposed system LU^T x = b in place.
void lu_solve_transpose(const double* lu, int n, const int* piv, double* b);

} // namespace kernels

/// LU-backed dense solver kept around for repeated right-hand sides.
class LuSolver {
public:
    // Factors a copy of m. ok() reports singularity.
    explicit LuSolver(const Matrix& m, bool parallel = true);
    bool ok() const { return ok_; }
    int size() const { return n_; }
    // b has n entries; overwritten with the solution.
    void solve(double* b) const;
    void solve_transpose(double* b) const;

private:
    int n_ = 0;
    bool ok_ = false;
    std::vector<double> lu_;
    std::vector<int> piv_;
};

} // namespace coopt

#endif
