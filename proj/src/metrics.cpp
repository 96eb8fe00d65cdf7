#include "scalefit/metrics.hpp"

#include <string>

#include "scalefit/error.hpp"

namespace scalefit {

double speedup(double t_base_s, double t_n_s) {
    if (!(t_base_s > 0.0) || !(t_n_s > 0.0))
        throw ValidationError("speedup needs positive times");
    return t_base_s / t_n_s;
}

NormalizedSeries scaleup(const MetricSeries& series, int base_n) {
    const SeriesPoint* base = nullptr;
    for (const auto& p : series.points)
        if (p.n_cores == base_n) base = &p;
    if (!base)
        throw ValidationError("base point absent: no point at N=" + std::to_string(base_n));
    if (!(base->mean > 0.0)) throw ValidationError("base point value must be positive");

    NormalizedSeries out;
    out.base_n = base_n;
    out.points.reserve(series.points.size());
    for (const auto& p : series.points)
        out.points.push_back({p.n_cores, p.mean / base->mean});
    return out;
}

double efficiency(double capacity_or_speedup, int n_cores) {
    if (!(capacity_or_speedup > 0.0)) throw ValidationError("efficiency needs a positive value");
    if (n_cores < 1) throw ValidationError("efficiency needs a positive core count");
    return capacity_or_speedup / static_cast<double>(n_cores);
}

double scalability_ratio(double e_n2, double e_n1) {
    if (!(e_n2 > 0.0) || !(e_n1 > 0.0))
        throw ValidationError("scalability ratio needs positive efficiencies");
    return e_n2 / e_n1;
}

double model_cost(int n_cores, double throughput) {
    if (n_cores < 1) throw ValidationError("model cost needs a positive core count");
    if (!(throughput > 0.0)) throw ValidationError("model cost needs positive throughput");
    return static_cast<double>(n_cores) * 24.0 / throughput;
}

}  // namespace scalefit
