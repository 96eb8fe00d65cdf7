#pragma once

#include <string>
#include <vector>

namespace scalefit {

/// Seconds per day; all "per day" unit conversions use exactly this factor.
inline constexpr double kSecondsPerDay = 86400.0;

/// One benchmark execution. Wall-clock phases are in seconds;
/// simulated_units is the amount of simulated work the run covered
/// (e.g. simulated days or nanoseconds), in whatever unit the experiment
/// uses consistently.
struct RunRecord {
    int n_cores = 0;
    int replicate = 0;
    double init_s = 0.0;
    double compute_s = 0.0;
    double final_s = 0.0;
    double simulated_units = 0.0;

    double total_s() const { return init_s + compute_s + final_s; }

    bool operator==(const RunRecord&) const = default;
};

/// Replicate statistics for one core count.
/// count == 0 marks a synthesized (interpolated) point.
struct SeriesPoint {
    int n_cores = 0;
    double mean = 0.0;
    double stddev = 0.0;
    int count = 1;

    bool operator==(const SeriesPoint&) const = default;
};

/// Ordered (N, value) points with per-N replicate statistics.
/// Invariant: n_cores strictly increasing across points.
struct MetricSeries {
    std::string label;
    std::string unit;
    std::vector<SeriesPoint> points;

    bool operator==(const MetricSeries&) const = default;
};

/// Percentage split of total run time into computation, message passing
/// and I/O, as extracted from a profiling report.
struct BreakdownRecord {
    int n_cores = 0;
    double cpu_pct = 0.0;
    double mpi_pct = 0.0;
    double io_pct = 0.0;

    bool operator==(const BreakdownRecord&) const = default;
};

/// Derived per-run quantity a series can be built from.
enum class MetricKind {
    init_s,        // initialization phase seconds
    compute_s,     // main compute phase seconds
    total_s,       // init + compute + final
    compute_rate,  // compute seconds per simulated unit
    throughput,    // simulated units per day of compute time
};

const char* metric_kind_name(MetricKind kind);
const char* metric_kind_unit(MetricKind kind);

}  // namespace scalefit
