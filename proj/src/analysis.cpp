#include "scalefit/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "scalefit/error.hpp"
#include "scalefit/models.hpp"

namespace scalefit {

namespace {

SaturationResult detect_saturation_impl(const std::vector<std::pair<int, double>>& observed,
                                        const PowerLawFit& fit, double threshold) {
    if (!(threshold > 0.0)) throw ValidationError("saturation threshold must be positive");

    SaturationResult result;
    result.threshold = threshold;
    result.relative_deviation_at.reserve(observed.size());
    for (const auto& [n, value] : observed) {
        const double fitted = fit.predict(static_cast<double>(n));
        result.relative_deviation_at.emplace_back(n, (value - fitted) / fitted);
    }

    // Smallest N below -threshold that stays below it for all larger N.
    const auto& dev = result.relative_deviation_at;
    std::size_t first_bad = dev.size();
    for (std::size_t i = dev.size(); i-- > 0;) {
        if (dev[i].second < -threshold)
            first_bad = i;
        else
            break;
    }
    if (first_bad < dev.size()) result.saturation_n = dev[first_bad].first;
    return result;
}

}  // namespace

SaturationResult detect_saturation(const MetricSeries& series, const PowerLawFit& fit,
                                   double threshold) {
    std::vector<std::pair<int, double>> observed;
    observed.reserve(series.points.size());
    for (const auto& p : series.points) observed.emplace_back(p.n_cores, p.mean);
    return detect_saturation_impl(observed, fit, threshold);
}

SaturationResult detect_saturation(const NormalizedSeries& series, const PowerLawFit& fit,
                                   double threshold) {
    std::vector<std::pair<int, double>> observed;
    observed.reserve(series.points.size());
    for (const auto& p : series.points) observed.emplace_back(p.n_cores, p.value);
    return detect_saturation_impl(observed, fit, threshold);
}

const char* rationale_name(Rationale r) {
    switch (r) {
        case Rationale::power_fit_saturation: return "power-fit-saturation";
        case Rationale::superserial_nc: return "superserial-nc";
        case Rationale::efficiency_floor: return "efficiency-floor";
        case Rationale::largest_tested: return "largest-tested";
    }
    return "?";
}

Recommendation recommend(const FitSet& fits, const SaturationResult& saturation,
                         std::optional<double> efficiency_floor) {
    if (!fits.power && !fits.superserial) throw ValidationError("no fits supplied");

    Recommendation rec;

    if (saturation.saturation_n) {
        // Largest tested N strictly below the saturation point.
        int best = 0;
        for (const auto& [n, dev] : saturation.relative_deviation_at)
            if (n < *saturation.saturation_n) best = std::max(best, n);
        if (best > 0) {
            rec.optimal_n = best;
            rec.rationale = Rationale::power_fit_saturation;
            rec.supporting = "power fit deviation threshold " +
                             std::to_string(saturation.threshold) + " crossed at N=" +
                             std::to_string(*saturation.saturation_n);
            return rec;
        }
        // Saturation at the very first tested point leaves nothing below it;
        // fall through to the model-based rules.
    }

    if (fits.superserial) {
        const auto cp = superserial_nc(fits.superserial->sigma, fits.superserial->gamma);
        rec.optimal_n = cp.n_int;
        rec.rationale = Rationale::superserial_nc;
        rec.supporting = "superserial capacity peaks at N_c=" + std::to_string(cp.n_int);
        if (fits.superserial->degenerate)
            rec.warning = "superserial fit is degenerate (parameter at search bound)";
        return rec;
    }

    if (efficiency_floor && fits.capacity) {
        int best = 0;
        for (const auto& p : fits.capacity->points)
            if (efficiency(p.value, p.n_cores) >= *efficiency_floor) best = std::max(best, p.n_cores);
        if (best > 0) {
            rec.optimal_n = best;
            rec.rationale = Rationale::efficiency_floor;
            rec.supporting = "largest tested N with efficiency >= " +
                             std::to_string(*efficiency_floor);
            return rec;
        }
        // No point clears the floor; fall through to the largest tested N.
    }

    int largest = 0;
    for (const auto& [n, dev] : saturation.relative_deviation_at) largest = std::max(largest, n);
    if (largest == 0 && fits.capacity)
        for (const auto& p : fits.capacity->points) largest = std::max(largest, p.n_cores);
    if (largest == 0) throw ValidationError("no tested core counts available");
    rec.optimal_n = largest;
    rec.rationale = Rationale::largest_tested;
    rec.supporting = "largest tested N";
    rec.warning = "no saturation observed within the tested range; scaling may continue";
    return rec;
}

const char* bound_kind_name(BoundKind kind) {
    switch (kind) {
        case BoundKind::cpu_bound: return "cpu-bound";
        case BoundKind::mpi_bound: return "mpi-bound";
        case BoundKind::io_bound: return "io-bound";
    }
    return "?";
}

BoundClass classify_bound(const BreakdownRecord& record) {
    // Ties resolve in cpu > mpi > io priority order.
    BoundKind kind = BoundKind::cpu_bound;
    double best = record.cpu_pct;
    if (record.mpi_pct > best) {
        best = record.mpi_pct;
        kind = BoundKind::mpi_bound;
    }
    if (record.io_pct > best) kind = BoundKind::io_bound;
    return {record.n_cores, kind};
}

std::vector<EfficiencyRow> efficiency_table(const NormalizedSeries& capacity) {
    if (capacity.points.size() < 2)
        throw ValidationError("efficiency table needs at least 2 points");
    std::vector<EfficiencyRow> rows;
    rows.reserve(capacity.points.size());
    for (std::size_t i = 0; i < capacity.points.size(); ++i) {
        const auto& p = capacity.points[i];
        EfficiencyRow row;
        row.n_cores = p.n_cores;
        row.efficiency = efficiency(p.value, p.n_cores);
        if (i > 0) row.scalability_ratio = scalability_ratio(row.efficiency, rows.back().efficiency);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace scalefit
