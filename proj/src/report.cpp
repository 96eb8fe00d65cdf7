#include "scalefit/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <ctime>

#include "scalefit/error.hpp"
#include "scalefit/ingest.hpp"
#include "scalefit/models.hpp"

namespace scalefit {

namespace {

// All report numbers go through this: 9 significant digits, locale-free.
std::string num9(double v) {
    if (std::isnan(v)) return "\"nan\"";
    if (std::isinf(v)) return v > 0 ? "\"inf\"" : "\"-inf\"";
    char buf[40];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 9);
    return std::string(buf, ptr);
}

std::string quoted(std::string_view s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    out += '"';
    return out;
}

std::string power_fit_json(const PowerLawFit& fit) {
    std::string s = "{\"a\":" + num9(fit.a) + ",\"b\":" + num9(fit.b) +
                    ",\"r_squared\":" + num9(fit.r_squared) + ",\"fit_range\":[" +
                    std::to_string(fit.fit_range.first) + "," +
                    std::to_string(fit.fit_range.second) + "],\"residuals_log\":[";
    for (std::size_t i = 0; i < fit.residuals.size(); ++i) {
        if (i) s += ',';
        s += "[" + std::to_string(fit.residuals[i].first) + "," +
             num9(fit.residuals[i].second) + "]";
    }
    s += "]}";
    return s;
}

NormalizedSeries normalize_series(const MetricSeries& series, int base_n, Normalization mode) {
    if (mode == Normalization::capacity) return scaleup(series, base_n);

    const SeriesPoint* base = nullptr;
    for (const auto& p : series.points)
        if (p.n_cores == base_n) base = &p;
    if (!base)
        throw ValidationError("base point absent: no point at N=" + std::to_string(base_n));
    NormalizedSeries out;
    out.base_n = base_n;
    out.points.reserve(series.points.size());
    for (const auto& p : series.points) {
        if (!(p.mean > 0.0))
            throw ValidationError("metric values must be positive to normalize, got " +
                                  std::to_string(p.mean) + " at N=" + std::to_string(p.n_cores));
        out.points.push_back({p.n_cores, base->mean / p.mean});
    }
    return out;
}

}  // namespace

const char* normalization_name(Normalization n) {
    return n == Normalization::capacity ? "capacity" : "speedup";
}

std::string content_digest(std::string_view bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
    return buf;
}

AnalysisReport analyze(const MetricSeries& series, const AnalyzeConfig& config,
                       const InputInfo& input, const std::vector<BreakdownRecord>& breakdown) {
    validate_series(series);
    if (series.points.empty()) throw ValidationError("no records");

    AnalysisReport report;
    report.input = input;
    report.config = config;
    if (!config.deterministic) {
        std::time_t now = std::time(nullptr);
        char buf[32];
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
        report.generated_at = buf;
    }

    report.series = config.augment
                        ? augment_linear(series, config.augment->first, config.augment->second)
                        : series;

    const int base_n = config.base_n.value_or(report.series.points.front().n_cores);
    report.normalization = config.metric == MetricKind::throughput ? Normalization::capacity
                                                                   : Normalization::speedup;
    report.capacity = normalize_series(report.series, base_n, report.normalization);

    // The capacity fit keeps replicate counts alongside the normalized values
    // so the optional count weighting applies to both fits.
    MetricSeries capacity_with_counts;
    capacity_with_counts.label = "normalized";
    for (std::size_t i = 0; i < report.capacity.points.size(); ++i)
        capacity_with_counts.points.push_back({report.capacity.points[i].n_cores,
                                               report.capacity.points[i].value, 0.0,
                                               report.series.points[i].count});

    report.power_fit = fit_powerlaw(capacity_with_counts, config.fit_range, config.power_options);
    report.power_fit_raw = fit_powerlaw(report.series, config.fit_range, config.power_options);

    report.saturation =
        detect_saturation(report.capacity, report.power_fit, config.saturation_threshold);

    if (config.superserial) {
        if (report.normalization != Normalization::capacity) {
            report.superserial_omitted = "superserial fit applies to capacity series only";
        } else {
            try {
                report.superserial_fit =
                    fit_superserial(report.capacity, config.superserial_options);
            } catch (const FitError& e) {
                report.superserial_omitted = e.what();
                report.warnings.push_back(std::string("superserial fit omitted: ") + e.what());
            }
        }
    } else {
        report.superserial_omitted = "not requested";
    }

    report.efficiency = efficiency_table(report.capacity);

    FitSet fits;
    fits.power = report.power_fit;
    fits.superserial = report.superserial_fit;
    fits.capacity = report.capacity;
    report.recommendation = recommend(fits, report.saturation, config.efficiency_floor);
    if (!report.recommendation.warning.empty())
        report.warnings.push_back(report.recommendation.warning);

    if (!breakdown.empty()) {
        for (const auto& r : breakdown) report.bound_classes.push_back(classify_bound(r));
    } else {
        report.bounds_omitted = "no breakdown input";
    }

    if (config.metric == MetricKind::throughput) {
        for (const auto& p : report.series.points)
            if (p.count != 0) report.cost_curve.emplace_back(p.n_cores, model_cost(p.n_cores, p.mean));
    } else {
        report.cost_omitted = "cost curve is defined for the throughput metric";
    }

    if (report.superserial_fit && report.superserial_fit->degenerate)
        report.warnings.push_back("superserial fit has a parameter at a search bound");

    return report;
}

std::string report_to_json(const AnalysisReport& r) {
    std::string s = "{";
    s += "\"schema_version\":" + std::to_string(r.schema_version);
    s += ",\"tool\":\"scalefit\"";
    if (!r.generated_at.empty()) s += ",\"generated_at\":" + quoted(r.generated_at);

    s += ",\"input\":{\"path\":" + quoted(r.input.path) + ",\"format\":" + quoted(r.input.format) +
         ",\"digest\":" + quoted(r.input.digest) + ",\"records\":" +
         std::to_string(r.input.records) + ",\"points\":" + std::to_string(r.input.points) + "}";

    const auto& c = r.config;
    s += ",\"config\":{";
    s += "\"metric\":" + quoted(metric_kind_name(c.metric));
    s += ",\"base_n\":" + std::to_string(c.base_n.value_or(r.capacity.base_n));
    s += ",\"fit_range\":";
    if (c.fit_range)
        s += "[" + std::to_string(c.fit_range->first) + "," + std::to_string(c.fit_range->second) +
             "]";
    else
        s += "null";
    s += ",\"saturation_threshold\":" + num9(c.saturation_threshold);
    s += ",\"superserial\":" + std::string(c.superserial ? "true" : "false");
    s += ",\"superserial_bounds\":[" + num9(c.superserial_options.bounds.first) + "," +
         num9(c.superserial_options.bounds.second) + "]";
    s += ",\"superserial_grid\":" + std::to_string(c.superserial_options.grid);
    s += ",\"superserial_refine_top\":" + std::to_string(c.superserial_options.refine_top);
    s += ",\"superserial_max_iterations\":" + std::to_string(c.superserial_options.max_iterations);
    s += ",\"superserial_step_tolerance\":" + num9(c.superserial_options.step_tolerance);
    s += ",\"efficiency_floor\":";
    s += c.efficiency_floor ? num9(*c.efficiency_floor) : "null";
    s += ",\"weight_by_count\":" + std::string(c.power_options.weight_by_count ? "true" : "false");
    s += ",\"augment\":";
    if (c.augment)
        s += "[" + std::to_string(c.augment->first) + "," + std::to_string(c.augment->second) + "]";
    else
        s += "null";
    s += ",\"deterministic\":" + std::string(c.deterministic ? "true" : "false");
    s += "}";

    s += ",\"series\":{\"label\":" + quoted(r.series.label) + ",\"unit\":" + quoted(r.series.unit) +
         ",\"points\":[";
    for (std::size_t i = 0; i < r.series.points.size(); ++i) {
        const auto& p = r.series.points[i];
        if (i) s += ',';
        s += "{\"n_cores\":" + std::to_string(p.n_cores) + ",\"mean\":" + num9(p.mean) +
             ",\"stddev\":" + num9(p.stddev) + ",\"count\":" + std::to_string(p.count) + "}";
    }
    s += "]}";

    s += ",\"normalization\":" + quoted(normalization_name(r.normalization));
    s += ",\"capacity\":{\"base_n\":" + std::to_string(r.capacity.base_n) + ",\"points\":[";
    for (std::size_t i = 0; i < r.capacity.points.size(); ++i) {
        if (i) s += ',';
        s += "[" + std::to_string(r.capacity.points[i].n_cores) + "," +
             num9(r.capacity.points[i].value) + "]";
    }
    s += "]}";

    s += ",\"power_fit\":" + power_fit_json(r.power_fit);
    s += ",\"power_fit_raw\":" + power_fit_json(r.power_fit_raw);

    s += ",\"superserial_fit\":";
    if (r.superserial_fit) {
        const auto& f = *r.superserial_fit;
        const int nc_int = superserial_nc(f.sigma, f.gamma).n_int;
        s += "{\"sigma\":" + num9(f.sigma) + ",\"gamma\":" + num9(f.gamma) +
             ",\"sigma_ci\":" + num9(f.sigma_ci) + ",\"gamma_ci\":" + num9(f.gamma_ci) +
             ",\"n_c\":" + num9(f.n_c) + ",\"n_c_int\":" + std::to_string(nc_int) +
             ",\"sum_sq_residual\":" + num9(f.sum_sq_residual) +
             ",\"sigma_at_bound\":" + (f.sigma_at_bound ? "true" : "false") +
             ",\"gamma_at_bound\":" + (f.gamma_at_bound ? "true" : "false") +
             ",\"degenerate\":" + (f.degenerate ? "true" : "false") + "}";
    } else {
        s += "{\"omitted\":" + quoted(r.superserial_omitted) + "}";
    }

    s += ",\"saturation\":{\"threshold\":" + num9(r.saturation.threshold) + ",\"saturation_n\":";
    s += r.saturation.saturation_n ? std::to_string(*r.saturation.saturation_n) : "null";
    s += ",\"deviations\":[";
    for (std::size_t i = 0; i < r.saturation.relative_deviation_at.size(); ++i) {
        const auto& [n, d] = r.saturation.relative_deviation_at[i];
        if (i) s += ',';
        s += "[" + std::to_string(n) + "," + num9(d) + "]";
    }
    s += "]}";

    s += ",\"efficiency_table\":[";
    for (std::size_t i = 0; i < r.efficiency.size(); ++i) {
        const auto& row = r.efficiency[i];
        if (i) s += ',';
        s += "{\"n_cores\":" + std::to_string(row.n_cores) +
             ",\"efficiency\":" + num9(row.efficiency) + ",\"scalability_ratio\":";
        s += row.scalability_ratio ? num9(*row.scalability_ratio) : "null";
        s += "}";
    }
    s += "]";

    s += ",\"recommendation\":{\"optimal_n\":" + std::to_string(r.recommendation.optimal_n) +
         ",\"rationale\":" + quoted(rationale_name(r.recommendation.rationale)) +
         ",\"supporting\":" + quoted(r.recommendation.supporting) + ",\"warning\":";
    s += r.recommendation.warning.empty() ? "null" : quoted(r.recommendation.warning);
    s += "}";

    s += ",\"bound_classes\":";
    if (!r.bound_classes.empty()) {
        s += "[";
        for (std::size_t i = 0; i < r.bound_classes.size(); ++i) {
            if (i) s += ',';
            s += "{\"n_cores\":" + std::to_string(r.bound_classes[i].n_cores) +
                 ",\"class\":" + quoted(bound_kind_name(r.bound_classes[i].kind)) + "}";
        }
        s += "]";
    } else {
        s += "{\"omitted\":" + quoted(r.bounds_omitted) + "}";
    }

    s += ",\"cost_curve\":";
    if (!r.cost_curve.empty()) {
        s += "[";
        for (std::size_t i = 0; i < r.cost_curve.size(); ++i) {
            if (i) s += ',';
            s += "[" + std::to_string(r.cost_curve[i].first) + "," + num9(r.cost_curve[i].second) +
                 "]";
        }
        s += "]";
    } else {
        s += "{\"omitted\":" + quoted(r.cost_omitted) + "}";
    }

    s += ",\"warnings\":[";
    for (std::size_t i = 0; i < r.warnings.size(); ++i) {
        if (i) s += ',';
        s += quoted(r.warnings[i]);
    }
    s += "]}";
    s += '\n';
    return s;
}

std::string report_summary_text(const AnalysisReport& r) {
    auto n6 = [](double v) {
        if (std::isnan(v)) return std::string("nan");
        if (std::isinf(v)) return std::string(v > 0 ? "inf" : "-inf");
        char buf[32];
        auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 6);
        return std::string(buf, ptr);
    };

    std::string s;
    s += "scalefit analysis of " + r.input.path + " (" + r.input.format + ", " +
         std::to_string(r.input.points) + " points)\n";
    s += "  metric " + r.series.label;
    if (!r.series.unit.empty()) s += " [" + r.series.unit + "]";
    s += ", normalization " + std::string(normalization_name(r.normalization)) + " with base N=" +
         std::to_string(r.capacity.base_n) + "\n";

    s += "  power fit (normalized): value = " + n6(r.power_fit.b) + " * N^" + n6(r.power_fit.a) +
         "   r2=" + n6(r.power_fit.r_squared) + "  range [" +
         std::to_string(r.power_fit.fit_range.first) + "," +
         std::to_string(r.power_fit.fit_range.second) + "]\n";
    s += "  power fit (raw):        value = " + n6(r.power_fit_raw.b) + " * N^" +
         n6(r.power_fit_raw.a) + "   r2=" + n6(r.power_fit_raw.r_squared) + "\n";

    if (r.superserial_fit) {
        const auto& f = *r.superserial_fit;
        s += "  superserial fit: sigma=" + n6(f.sigma) + " +/- " + n6(f.sigma_ci) +
             ", gamma=" + n6(f.gamma) + " +/- " + n6(f.gamma_ci) + ", N_c=" + n6(f.n_c);
        if (f.degenerate) s += "  [degenerate]";
        s += "\n";
    } else {
        s += "  superserial fit: omitted (" + r.superserial_omitted + ")\n";
    }

    if (r.saturation.saturation_n)
        s += "  saturation: N=" + std::to_string(*r.saturation.saturation_n) + " (threshold " +
             n6(r.saturation.threshold) + ")\n";
    else
        s += "  saturation: none at threshold " + n6(r.saturation.threshold) + "\n";

    s += "  recommendation: N=" + std::to_string(r.recommendation.optimal_n) + " (" +
         rationale_name(r.recommendation.rationale) + "; " + r.recommendation.supporting + ")\n";

    s += "  efficiency:";
    for (const auto& row : r.efficiency) {
        s += " E(" + std::to_string(row.n_cores) + ")=" + n6(row.efficiency);
        if (row.scalability_ratio) s += "/SC=" + n6(*row.scalability_ratio);
    }
    s += "\n";

    if (!r.bound_classes.empty()) {
        s += "  bound classes:";
        for (const auto& b : r.bound_classes)
            s += " N=" + std::to_string(b.n_cores) + ":" + bound_kind_name(b.kind);
        s += "\n";
    }
    for (const auto& w : r.warnings) s += "  warning: " + w + "\n";
    return s;
}

}  // namespace scalefit
