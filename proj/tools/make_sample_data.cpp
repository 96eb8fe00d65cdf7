// Regenerates the synthetic datasets under data/. The series are
// math-generated, not measurements: throughput follows an exact power law
// with a saturating tail, and replicate noise is a fixed zero-sum pattern
// so per-N means stay exactly on the generating curve.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "scalefit/ingest.hpp"
#include "scalefit/types.hpp"

namespace {

using scalefit::RunRecord;

// Zero-sum multiplicative jitter applied across the 6 replicates.
constexpr double kJitter[6] = {-0.005, -0.003, -0.001, 0.001, 0.003, 0.005};

// One throughput-driven run: compute_s is chosen so that
// simulated_units / (compute_s / 86400) == throughput exactly (up to fp).
RunRecord run_from_throughput(int n, int replicate, double throughput, double units,
                              double init_s, double final_s) {
    RunRecord r;
    r.n_cores = n;
    r.replicate = replicate;
    r.simulated_units = units;
    r.compute_s = units * 86400.0 / throughput;
    r.init_s = init_s;
    r.final_s = final_s;
    return r;
}

std::vector<RunRecord> climate_runs(const std::vector<int>& cores, double b, double a,
                                    int freeze_above, double tail_factor, double units,
                                    double init0, double init_exp_down, int init_pivot,
                                    double init_exp_up) {
    std::vector<RunRecord> runs;
    for (int n : cores) {
        double y = b * std::pow(static_cast<double>(n), a);
        if (n > freeze_above)
            y = tail_factor * b * std::pow(static_cast<double>(freeze_above), a);
        double init = n <= init_pivot
                          ? init0 * std::pow(static_cast<double>(n), -init_exp_down)
                          : init0 * std::pow(static_cast<double>(init_pivot), -init_exp_down) *
                                std::pow(static_cast<double>(n) / init_pivot, init_exp_up);
        for (int rep = 0; rep < 6; ++rep) {
            const double jit = 1.0 + kJitter[rep];
            runs.push_back(run_from_throughput(n, rep, y * jit, units, init * jit, 1.5));
        }
    }
    return runs;
}

std::vector<RunRecord> md_runs() {
    // Single-replicate molecular-dynamics style series: 1.2 ns simulated,
    // throughput in ns/day following 2.4 * N^0.56 at every tested N.
    const std::vector<int> cores = {1, 2, 8, 16, 32, 48, 96, 144, 192, 256};
    std::vector<RunRecord> runs;
    for (int n : cores) {
        const double y = 2.4 * std::pow(static_cast<double>(n), 0.56);
        const double init = 60.0 * std::pow(static_cast<double>(n), -0.2) + 30.0;
        runs.push_back(run_from_throughput(n, 0, y, 1.2, init, 0.0));
    }
    return runs;
}

void write(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
    if (!out) {
        std::cerr << "failed to write " << path << "\n";
        std::exit(1);
    }
    std::cout << "wrote " << path.string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    const std::filesystem::path dir = argc > 1 ? argv[1] : "data";
    std::filesystem::create_directories(dir);

    // Low-resolution style: N = 1..1024 doubling, throughput 0.19 * N^0.77
    // simulated years/day, frozen at the N=512 level for N=1024.
    const std::vector<int> lowres_cores = {1, 2, 4, 8, 16, 32, 64, 128, 256, 512, 1024};
    write(dir / "lowres_runs.csv",
          scalefit::write_runs_csv(climate_runs(lowres_cores, 0.19, 0.77, 512, 1.0,
                                                5.0 / 365.0, 110.0, 0.5, 64, 0.4)));

    // High-resolution style: no serial run is possible, N = 32..2048,
    // throughput 1.9e-3 * N^0.91 with a 12% shortfall at N=2048.
    const std::vector<int> highres_cores = {32, 64, 128, 256, 512, 1024, 2048};
    write(dir / "highres_runs.csv",
          scalefit::write_runs_csv(climate_runs(highres_cores, 1.9e-3, 0.91, 1024,
                                                0.88 * std::pow(2.0, 0.91), 5.0 / 365.0,
                                                600.0, 0.25, 64, 0.3)));

    write(dir / "desmond_runs.csv", scalefit::write_runs_csv(md_runs()));

    // Fig-4 style resource breakdown for the low-resolution runs.
    write(dir / "breakdown_lowres.csv",
          "n_cores,cpu_pct,mpi_pct,io_pct\n"
          "1,99.5,0,0.5\n"
          "2,97,2.4,0.6\n"
          "4,94,5.2,0.8\n"
          "8,89,10.2,0.8\n"
          "16,82,17.1,0.9\n"
          "32,73,26.1,0.9\n"
          "64,62,37,1\n");

    return 0;
}
