// Times the serial multi-start superserial kernel against the OpenMP one
// on identical inputs and checks that both return bit-identical fits.

#include <chrono>
#include <cstdio>
#include <random>

#include "scalefit/fitting.hpp"
#include "scalefit/models.hpp"

#if defined(_OPENMP)
#include <omp.h>
#endif

using namespace scalefit;

namespace {

NormalizedSeries noisy_capacity(int points, unsigned seed) {
    const auto model = ModelParams::superserial(6.85e-3, 3.13e-4);
    std::mt19937 rng(seed);
    std::normal_distribution<double> noise(0.0, 0.4);
    NormalizedSeries series;
    series.base_n = 1;
    int n = 1;
    for (int i = 0; i < points; ++i) {
        series.points.push_back({n, std::max(0.2, eval_capacity(model, n) + noise(rng))});
        const unsigned step = std::min(400u, static_cast<unsigned>(n / 2 + 1));
        n += 1 + static_cast<int>(rng() % step);
    }
    return series;
}

double time_fit(const NormalizedSeries& series, const SuperSerialOptions& options,
                SuperSerialFit& out, int repeats) {
    double best = 1e300;
    for (int r = 0; r < repeats; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        out = fit_superserial(series, options);
        const auto dt =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                .count();
        if (dt < best) best = dt;
    }
    return best;
}

}  // namespace

int main() {
#if defined(_OPENMP)
    std::printf("OpenMP enabled, max threads = %d\n", omp_get_max_threads());
#else
    std::printf("built without OpenMP; both variants run serially\n");
#endif

    std::printf("%-28s %12s %12s %9s  %s\n", "case (grid x grid, refine)", "serial ms",
                "parallel ms", "speedup", "identical");

    struct Case {
        int grid, refine, points;
    };
    for (const auto& [grid, refine, points] :
         {Case{50, 16, 40}, Case{96, 64, 40}, Case{160, 160, 60}, Case{224, 224, 200}}) {
        const auto series = noisy_capacity(points, 4u * static_cast<unsigned>(grid + refine));

        SuperSerialOptions serial;
        serial.grid = grid;
        serial.refine_top = refine;
        serial.parallel = false;
        SuperSerialOptions parallel = serial;
        parallel.parallel = true;

        SuperSerialFit fs, fp;
        const int repeats = grid <= 100 ? 5 : 2;
        const double ts = time_fit(series, serial, fs, repeats);
        const double tp = time_fit(series, parallel, fp, repeats);

        char label[64];
        std::snprintf(label, sizeof label, "%dx%d refine %d, %d pts", grid, grid, refine, points);
        std::printf("%-28s %12.2f %12.2f %8.2fx  %s\n", label, ts, tp, ts / tp,
                    fs == fp ? "yes" : "NO");
    }
    return 0;
}
