#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "scalefit/analysis.hpp"
#include "scalefit/fitting.hpp"
#include "scalefit/metrics.hpp"
#include "scalefit/types.hpp"

namespace scalefit {

/// Direction used to normalize the metric series into an increasing,
/// base-anchored series: throughput normalizes as value/base (capacity),
/// time-like metrics as base/value (speedup).
enum class Normalization { capacity, speedup };

const char* normalization_name(Normalization n);

/// Full configuration of one analysis run. Echoed verbatim into the
/// report so any result can be reproduced from input + report alone.
struct AnalyzeConfig {
    MetricKind metric = MetricKind::throughput;
    std::optional<int> base_n;  // default: smallest tested N
    std::optional<std::pair<int, int>> fit_range;
    double saturation_threshold = 0.10;
    bool superserial = false;
    SuperSerialOptions superserial_options;
    std::optional<double> efficiency_floor;
    PowerFitOptions power_options;
    std::optional<std::pair<int, int>> augment;  // densify before fitting
    bool deterministic = false;
};

struct InputInfo {
    std::string path;
    std::string format;
    std::string digest;  // fnv1a-64 of the raw input bytes
    std::size_t records = 0;
    std::size_t points = 0;
};

struct AnalysisReport {
    int schema_version = 1;
    std::string generated_at;  // empty (omitted) in deterministic mode
    InputInfo input;
    AnalyzeConfig config;
    MetricSeries series;
    Normalization normalization = Normalization::capacity;
    NormalizedSeries capacity;
    PowerLawFit power_fit;                    // fit of the normalized series
    PowerLawFit power_fit_raw;                // fit of the raw metric series
    std::optional<SuperSerialFit> superserial_fit;
    std::string superserial_omitted;          // reason when absent
    SaturationResult saturation;
    std::vector<EfficiencyRow> efficiency;
    Recommendation recommendation;
    std::vector<BoundClass> bound_classes;
    std::string bounds_omitted;               // reason when no breakdown given
    std::vector<std::pair<int, double>> cost_curve;  // proc-hours per unit
    std::string cost_omitted;
    std::vector<std::string> warnings;
};

/// Run the whole pipeline on an aggregated series: normalize by base_n,
/// power fit, saturation scan, optional superserial fit, efficiency table,
/// recommendation, cost curve. Breakdown records, when given, add bound
/// classification. The input block is filled from `input`.
AnalysisReport analyze(const MetricSeries& series, const AnalyzeConfig& config,
                       const InputInfo& input,
                       const std::vector<BreakdownRecord>& breakdown = {});

/// The structured report file: a single JSON object, schema-versioned,
/// fixed key order, all floating-point fields at 9 significant digits.
/// Byte-identical for identical input + configuration.
std::string report_to_json(const AnalysisReport& report);

/// Human-readable summary of the same content.
std::string report_summary_text(const AnalysisReport& report);

/// 16-hex-digit FNV-1a 64 content digest, prefixed "fnv1a64:".
std::string content_digest(std::string_view bytes);

}  // namespace scalefit
