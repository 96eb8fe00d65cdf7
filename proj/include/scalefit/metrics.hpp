#pragma once

#include <vector>

#include "scalefit/types.hpp"

namespace scalefit {

/// A (N, value) point of a normalized series.
struct CapacityPoint {
    int n_cores = 0;
    double value = 0.0;

    bool operator==(const CapacityPoint&) const = default;
};

/// Series normalized so that the value at base_n is exactly 1.
/// This is the scaling capacity C(N) when built from throughput.
struct NormalizedSeries {
    int base_n = 0;
    std::vector<CapacityPoint> points;

    bool operator==(const NormalizedSeries&) const = default;
};

/// Time reduction ratio t_base / t_n for a fixed-size workload.
double speedup(double t_base_s, double t_n_s);

/// Scaling capacity: every mean divided by the mean at base_n, so the
/// base point maps to exactly 1 and a well-scaling system increases with N.
/// base_n need not be 1; when no serial run exists, normalize by the
/// smallest feasible run. Throws ValidationError if base_n is absent.
NormalizedSeries scaleup(const MetricSeries& series, int base_n);

/// value / n_cores, where value is a speedup or a scaling capacity.
/// Equals 1 for an ideal system.
double efficiency(double capacity_or_speedup, int n_cores);

/// Ratio of two efficiency estimates E(N2)/E(N1); the caller guarantees
/// N2 > N1. Equals 1 for an ideally scalable system.
double scalability_ratio(double e_n2, double e_n1);

/// Processor-hours spent per simulated unit: n_cores * 24 / throughput,
/// with throughput in simulated units per day.
double model_cost(int n_cores, double throughput);

}  // namespace scalefit
