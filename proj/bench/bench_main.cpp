// Benchmark: OpenMP kernels against their serial reference implementations.
//
//   ./latfrac-bench [--size small|medium|large]

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstring>
#include <string>

#include "latfrac/experiments.hpp"
#include "latfrac/hardy.hpp"
#include "latfrac/operators.hpp"
#include "latfrac/rng.hpp"

using namespace latfrac;

namespace {

double now_s() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

double rel_diff(double a, double b) {
    const double scale = std::max({std::fabs(a), std::fabs(b), 1e-300});
    return std::fabs(a - b) / scale;
}

LatticeSequence random_dense(int n, std::int64_t radius, std::uint64_t seed) {
    Rng rng(seed);
    CubeWindow w{LatticeIndex(static_cast<std::size_t>(n), 0), radius};
    std::vector<double> vals(static_cast<std::size_t>(w.cardinality()));
    for (auto& v : vals) v = rng.uniform_pm1();
    return LatticeSequence::dense(std::move(w), std::move(vals));
}

void row(const char* name, double serial_s, double parallel_s, double worst_err) {
    std::printf("%-28s %10.3fs %10.3fs %8.2fx   worst rel err %.2e\n", name, serial_s, parallel_s,
                serial_s / parallel_s, worst_err);
}

}  // namespace

int main(int argc, char** argv) {
    apply_thread_cap_from_env();
    std::string size = "medium";
    for (int i = 1; i + 1 < argc + 1; ++i)
        if (argv[i] && std::strcmp(argv[i], "--size") == 0 && i + 1 < argc) size = argv[i + 1];

    std::int64_t op_in = 16, op_out = 160, mx_in = 48, hd_in = 10, hd_out = 128;
    if (size == "small") {
        op_in = 8;
        op_out = 64;
        mx_in = 24;
        hd_in = 6;
        hd_out = 48;
    } else if (size == "large") {
        op_in = 24;
        op_out = 280;
        mx_in = 72;
        hd_in = 14;
        hd_out = 256;
    }

    std::printf("latfrac benchmark (threads: %d, size: %s)\n", omp_get_max_threads(), size.c_str());
    std::printf("%-28s %11s %11s %9s\n", "kernel", "serial", "parallel", "speedup");

    {
        FractionalSpec spec;
        spec.n = 2;
        spec.alpha = 0.5;
        spec.exponents = {0.75, 0.75};
        spec.matrices = {IntegerMatrix(2, {1, 0, 0, 1}), IntegerMatrix(2, {1, 1, 0, 1})};
        const auto b = random_dense(2, op_in, 1);
        const CubeWindow out{{0, 0}, op_out};
        double t0 = now_s();
        const auto serial = ref::apply_T(spec, b, out);
        const double ts = now_s() - t0;
        t0 = now_s();
        const auto parallel = apply_T(spec, b, out);
        const double tp = now_s() - t0;
        double worst = 0.0;
        for (std::int64_t off = 0; off < out.cardinality(); ++off)
            worst = std::max(worst, rel_diff(serial.values()[static_cast<std::size_t>(off)],
                                             parallel.values.values()[static_cast<std::size_t>(off)]));
        row("series operator (2-d)", ts, tp, worst);
    }

    {
        const auto b = random_dense(2, mx_in, 2);
        const CubeWindow out{{0, 0}, mx_in + 8};
        double t0 = now_s();
        const auto slow = fractional_maximal(b, 0.5, out);
        const double ts = now_s() - t0;
        t0 = now_s();
        const auto fast = fractional_maximal_fast(b, 0.5, out);
        const double tp = now_s() - t0;
        double worst = 0.0;
        for (std::int64_t off = 0; off < out.cardinality(); ++off)
            worst = std::max(worst, rel_diff(slow.values()[static_cast<std::size_t>(off)],
                                             fast.values()[static_cast<std::size_t>(off)]));
        row("fractional maximal (2-d)", ts, tp, worst);
    }

    {
        const auto b = random_dense(1, hd_in, 3);
        const DilationGrid grid;
        const CubeWindow out{{0}, hd_out};
        double t0 = now_s();
        const auto serial = ref::hardy_maximal(b, grid, out);
        const double ts = now_s() - t0;
        t0 = now_s();
        const auto parallel = hardy_maximal(b, grid, out);
        const double tp = now_s() - t0;
        double worst = 0.0;
        for (std::int64_t off = 0; off < out.cardinality(); ++off)
            worst = std::max(worst, rel_diff(serial.values()[static_cast<std::size_t>(off)],
                                             parallel.values()[static_cast<std::size_t>(off)]));
        row("dilation maximal (1-d)", ts, tp, worst);
    }

    return 0;
}
