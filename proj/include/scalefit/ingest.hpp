#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "scalefit/types.hpp"

namespace scalefit {

enum class RunFormat { runs_csv, runs_json };

/// Parse benchmark run records from a stream in the declared format.
///
/// runs-csv schema: header `n_cores,replicate,init_s,compute_s,final_s,simulated_units`,
/// UTF-8, comma-delimited, `.` decimal separator. runs-json is an array of
/// objects with the same six keys. Rows are returned in input order;
/// replicates sharing a core count are kept separate.
///
/// Throws ParseError (with line number for CSV) on malformed rows and
/// ValidationError on non-positive n_cores / compute_s / simulated_units.
std::vector<RunRecord> parse_runs(std::istream& source, RunFormat format);

/// Serialize to the runs-csv schema. Doubles are written in shortest
/// round-trip form, so parse(write(records)) == records bit for bit.
std::string write_runs_csv(const std::vector<RunRecord>& records);

/// Group records by core count and reduce a derived per-replicate value to
/// mean / sample standard deviation / count per N. The derived value is
/// computed per replicate first:
///   compute_rate = compute_s / simulated_units          (s per unit)
///   throughput   = simulated_units / (compute_s / 86400) (units per day)
/// Init and final phases are excluded from both rates; use total_s for
/// whole-run timings. Output points are sorted by ascending n_cores.
MetricSeries aggregate(const std::vector<RunRecord>& records, MetricKind value);

/// Parse breakdown-csv: header `n_cores,cpu_pct,mpi_pct,io_pct`.
/// Each percentage must lie in [0,100] and each row must sum to
/// 100 +/- 1 (tolerance for rounding in source reports).
std::vector<BreakdownRecord> parse_breakdown(std::istream& source);

/// series-csv: header `n_cores,mean,stddev,count`. The interchange format
/// for pre-aggregated series; values round-trip bit-identically.
MetricSeries parse_series_csv(std::istream& source);
std::string write_series_csv(const MetricSeries& series);

/// Densify a series to every integer N in [n_min, n_max] by linear
/// interpolation between bracketing observed points. Observed points pass
/// through unchanged (including those outside the range); synthesized
/// points carry count = 0. No extrapolation: the range must lie within
/// the observed span, and the series needs at least two points.
MetricSeries augment_linear(const MetricSeries& series, int n_min, int n_max);

/// Enforce the MetricSeries ordering invariant (strictly increasing N,
/// nonnegative stddev, stddev 0 where count <= 1). Throws ValidationError.
void validate_series(const MetricSeries& series, bool allow_synthetic = true);

}  // namespace scalefit
