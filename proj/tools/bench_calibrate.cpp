// Compares the serial reference path (n_threads = 1) against the OpenMP
// parallel path of the calibration loop: wall time and cutoff agreement.
// The two must produce bit-identical cutoffs regardless of thread count.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#include <omp.h>

#include "evt/anomaly.hpp"
#include "evt/mvgp.hpp"

int main(int argc, char** argv) {
    int n_datasets = 60;
    if (argc > 1) n_datasets = std::atoi(argv[1]);
    if (n_datasets < 4) {
        std::fprintf(stderr, "usage: bench_calibrate [n_datasets >= 4]\n");
        return 2;
    }

    evt::MvGpModel model;
    model.family.kind = evt::GeneratorKind::kGumbel;
    model.family.alpha = {2.22, 10.37, 3.21};
    model.family.beta = {0.0, 0.84, 0.59};

    evt::CalibrationConfig config;
    config.sim.seed = 42;
    config.sim.n_datasets = n_datasets;

    auto run = [&](int threads) {
        config.n_threads = threads;
        const auto t0 = std::chrono::steady_clock::now();
        const evt::AnomalyCalibration cal = evt::calibrate(model, config);
        const auto t1 = std::chrono::steady_clock::now();
        const double sec = std::chrono::duration<double>(t1 - t0).count();
        std::printf("threads=%-2d  %8.2f s  (%d datasets, %d failed fits)\n", threads, sec,
                    cal.n_datasets, cal.n_failed_fits);
        return cal;
    };

    std::printf("calibration benchmark, %d datasets\n", n_datasets);
    const auto serial = run(1);
    const auto parallel = run(0);

    bool identical = serial.cutoffs.size() == parallel.cutoffs.size();
    if (identical)
        for (auto sit = serial.cutoffs.begin(), pit = parallel.cutoffs.begin();
             sit != serial.cutoffs.end(); ++sit, ++pit)
            identical = identical && sit->first == pit->first && sit->second == pit->second;
    std::printf("cutoffs identical: %s\n", identical ? "yes" : "NO");
    std::printf("omp max threads: %d\n", omp_get_max_threads());
    return identical ? 0 : 3;
}
