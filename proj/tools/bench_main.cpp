// Kernel benchmark: serial reference vs OpenMP variants of the hot paths
// (tableau elimination, dense LU, Monte Carlo sample evaluation). Results must
// be bit-identical between the two; the tool verifies that while timing.

#include "coopt/linalg.hpp"
#include "coopt/montecarlo.hpp"

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstring>
#include <vector>

using namespace coopt;

namespace {

double now_ms() {
    using namespace std::chrono;
    return duration<double, std::milli>(steady_clock::now().time_since_epoch()).count();
}

std::uint64_t splitmix(std::uint64_t& s) {
    s += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double u01(std::uint64_t& s) { return double(splitmix(s) >> 11) * 0x1.0p-53; }

bool identical(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

void bench_eliminate(int m, int n, int reps) {
    std::uint64_t s = 42;
    std::vector<double> tab(static_cast<size_t>(m) * n), alpha(m), prow(n);
    for (auto& v : tab) v = u01(s) - 0.5;
    for (auto& v : alpha) v = u01(s) - 0.5;
    for (auto& v : prow) v = u01(s) - 0.5;

    std::vector<double> t_ser = tab, t_omp = tab;
    double ser = 0, omp_t = 0;
    for (int r = 0; r < reps; ++r) {
        double t0 = now_ms();
        kernels::eliminate_serial(t_ser.data(), n, m, m / 2, alpha.data(), prow.data());
        ser += now_ms() - t0;
        t0 = now_ms();
        kernels::eliminate_omp(t_omp.data(), n, m, m / 2, alpha.data(), prow.data());
        omp_t += now_ms() - t0;
    }
    std::printf("eliminate   %5dx%-5d  serial %8.2f ms  omp %8.2f ms  speedup %.2fx  identical %s\n",
                m, n, ser, omp_t, ser / omp_t, identical(t_ser, t_omp) ? "yes" : "NO");
}

void bench_lu(int n, int reps) {
    std::uint64_t s = 99;
    Matrix a(n, n);
    for (auto& v : a.a) v = u01(s) - 0.5;
    for (int i = 0; i < n; ++i) a.at(i, i) += n; // diagonally dominant

    double ser = 0, omp_t = 0;
    std::vector<double> lu_ser, lu_omp;
    for (int r = 0; r < reps; ++r) {
        std::vector<double> w = a.a;
        std::vector<int> piv(n);
        double t0 = now_ms();
        kernels::lu_factor_serial(w.data(), n, piv.data());
        ser += now_ms() - t0;
        lu_ser = w;
        w = a.a;
        t0 = now_ms();
        kernels::lu_factor_omp(w.data(), n, piv.data());
        omp_t += now_ms() - t0;
        lu_omp = w;
    }
    std::printf("lu_factor   %5dx%-5d  serial %8.2f ms  omp %8.2f ms  speedup %.2fx  identical %s\n",
                n, n, ser, omp_t, ser / omp_t, identical(lu_ser, lu_omp) ? "yes" : "NO");
}

void bench_mc(int samples, int periods, int reps) {
    // Table-lookup evaluation, the inner loop of run_simulation.
    std::uint64_t s = 7;
    const int K = 8;
    std::vector<double> probs(K, 0.04);
    std::vector<double> table(static_cast<size_t>(periods) * K);
    for (auto& v : table) v = u01(s) * 100.0;

    auto eval = [&](bool parallel, std::vector<double>& out) {
        out.assign(samples, 0.0);
#pragma omp parallel for schedule(static) if (parallel)
        for (int i = 0; i < samples; ++i) {
            const Realization r = sample_realization(7, i, probs, periods);
            double c = 0.0;
            for (int t = 0; t < periods; ++t)
                if (r.period_scenario[t] >= 0) c += table[t * K + r.period_scenario[t]];
            out[i] = c;
        }
    };
    std::vector<double> a, b;
    double ser = 0, omp_t = 0;
    for (int r = 0; r < reps; ++r) {
        double t0 = now_ms();
        eval(false, a);
        ser += now_ms() - t0;
        t0 = now_ms();
        eval(true, b);
        omp_t += now_ms() - t0;
    }
    std::printf("mc_eval     %5dx%-5d  serial %8.2f ms  omp %8.2f ms  speedup %.2fx  identical %s\n",
                samples, periods, ser, omp_t, ser / omp_t, identical(a, b) ? "yes" : "NO");
}

} // namespace

int main(int argc, char** argv) {
    int scale = argc > 1 ? std::atoi(argv[1]) : 1;
    if (scale < 1) scale = 1;
    std::printf("threads: %d\n", omp_get_max_threads());
    bench_eliminate(1000 * scale, 2000 * scale, 20);
    bench_lu(600 * scale, 3);
    bench_mc(200000 * scale, 24, 10);
    return 0;
}
