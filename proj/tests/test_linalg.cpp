#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "coopt/linalg.hpp"
#include "support.hpp"

#include <cstring>

using namespace coopt;

TEST_CASE("lu solve matches the independent elimination oracle") {
    support::Rng rng(123);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = rng.integer(2, 12);
        // Alternate between diagonally dominant matrices and general ones with
        // zeroed leading diagonal entries, so row pivoting is exercised.
        const bool dominant = trial % 2 == 0;
        Matrix m(n, n);
        std::vector<std::vector<double>> a(n, std::vector<double>(n));
        std::vector<double> b(n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                a[i][j] = rng.uniform(-1, 1);
                m.at(i, j) = a[i][j];
            }
            if (dominant) {
                m.at(i, i) += n;
                a[i][i] += n;
            }
            b[i] = rng.uniform(-10, 10);
        }
        if (!dominant) {
            m.at(0, 0) = a[0][0] = 0.0;
            if (n > 2) m.at(1, 1) = a[1][1] = 0.0;
        }
        LuSolver lu(m);
        REQUIRE(lu.ok());
        std::vector<double> x = b;
        lu.solve(x.data());
        const std::vector<double> ref = support::gauss_solve(a, b);
        for (int i = 0; i < n; ++i) CHECK(x[i] == doctest::Approx(ref[i]).epsilon(1e-10));

        // transpose solve: A^T y = b
        std::vector<std::vector<double>> at(n, std::vector<double>(n));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) at[i][j] = a[j][i];
        std::vector<double> y = b;
        lu.solve_transpose(y.data());
        const std::vector<double> refT = support::gauss_solve(at, b);
        for (int i = 0; i < n; ++i) CHECK(y[i] == doctest::Approx(refT[i]).epsilon(1e-10));
    }
}

TEST_CASE("singular matrix detected") {
    Matrix m(3, 3);
    for (int j = 0; j < 3; ++j) { m.at(0, j) = 1; m.at(1, j) = 2; m.at(2, j) = j; }
    LuSolver lu(m);
    CHECK_FALSE(lu.ok());
}

TEST_CASE("serial and OpenMP kernels are bit-identical") {
    support::Rng rng(77);
    const int m = 61, n = 113;
    std::vector<double> tab(m * n), alpha(m), prow(n);
    for (auto& v : tab) v = rng.uniform(-1, 1);
    for (auto& v : alpha) v = rng.uniform(-1, 1);
    for (auto& v : prow) v = rng.uniform(-1, 1);
    std::vector<double> a = tab, b = tab;
    kernels::eliminate_serial(a.data(), n, m, 13, alpha.data(), prow.data());
    kernels::eliminate_omp(b.data(), n, m, 13, alpha.data(), prow.data());
    CHECK(std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);

    const int nn = 120;
    Matrix mm(nn, nn);
    for (auto& v : mm.a) v = rng.uniform(-1, 1);
    for (int i = 0; i < nn; ++i) mm.at(i, i) += nn;
    std::vector<double> lu1 = mm.a, lu2 = mm.a;
    std::vector<int> p1(nn), p2(nn);
    REQUIRE(kernels::lu_factor_serial(lu1.data(), nn, p1.data()));
    REQUIRE(kernels::lu_factor_omp(lu2.data(), nn, p2.data()));
    CHECK(std::memcmp(lu1.data(), lu2.data(), lu1.size() * sizeof(double)) == 0);
    CHECK(p1 == p2);
}
