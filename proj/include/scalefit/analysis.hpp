#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "scalefit/fitting.hpp"
#include "scalefit/metrics.hpp"
#include "scalefit/types.hpp"

namespace scalefit {

/// Where the observed series falls away from its power fit.
struct SaturationResult {
    std::optional<int> saturation_n;
    // (observed - fitted) / fitted at every point of the series
    std::vector<std::pair<int, double>> relative_deviation_at;
    double threshold = 0.0;
};

/// saturation_n is the smallest tested N whose relative deviation is below
/// -threshold and stays below it for all larger tested N; one noisy dip
/// does not count. Absent when the series never persistently departs.
SaturationResult detect_saturation(const MetricSeries& series, const PowerLawFit& fit,
                                   double threshold = 0.10);
SaturationResult detect_saturation(const NormalizedSeries& series, const PowerLawFit& fit,
                                   double threshold = 0.10);

enum class Rationale {
    power_fit_saturation,  // last tested N before the observed roll-off
    superserial_nc,        // integer argmax of the fitted superserial capacity
    efficiency_floor,      // largest N whose efficiency clears the floor
    largest_tested,        // fallback: no saturation observed anywhere
};

const char* rationale_name(Rationale r);

struct Recommendation {
    int optimal_n = 0;
    Rationale rationale = Rationale::largest_tested;
    std::string supporting;  // which fits/series backed the choice
    std::string warning;     // nonempty when the recommendation is weak
};

/// Everything recommend() may draw on.
struct FitSet {
    std::optional<PowerLawFit> power;
    std::optional<SuperSerialFit> superserial;
    std::optional<NormalizedSeries> capacity;  // for the efficiency-floor rule
};

/// Pick the core count with the most efficient balance. Observed-data
/// rationales win over model-extrapolated ones: saturation first, then the
/// superserial critical point, then the efficiency floor, then the largest
/// tested N with a warning. Throws ValidationError when no fit is supplied.
Recommendation recommend(const FitSet& fits, const SaturationResult& saturation,
                         std::optional<double> efficiency_floor = std::nullopt);

enum class BoundKind { cpu_bound, mpi_bound, io_bound };

const char* bound_kind_name(BoundKind kind);

struct BoundClass {
    int n_cores = 0;
    BoundKind kind = BoundKind::cpu_bound;
};

/// Class of the largest percentage; ties resolve cpu > mpi > io.
BoundClass classify_bound(const BreakdownRecord& record);

struct EfficiencyRow {
    int n_cores = 0;
    double efficiency = 0.0;
    // E(N)/E(N_prev) against the previous tested N; absent on the first row
    std::optional<double> scalability_ratio;
};

/// Efficiency and consecutive-N scalability ratios for a capacity series.
std::vector<EfficiencyRow> efficiency_table(const NormalizedSeries& capacity);

}  // namespace scalefit
