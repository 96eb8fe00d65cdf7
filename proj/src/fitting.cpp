#include "scalefit/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "scalefit/error.hpp"
#include "scalefit/models.hpp"

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace scalefit {

namespace {

struct FitPoint {
    int n_cores;
    double value;
    double weight;
};

PowerLawFit fit_powerlaw_impl(const std::vector<FitPoint>& all,
                              std::optional<std::pair<int, int>> range) {
    std::vector<FitPoint> pts;
    for (const auto& p : all) {
        if (range && (p.n_cores < range->first || p.n_cores > range->second)) continue;
        if (p.weight <= 0.0) continue;
        pts.push_back(p);
    }

    int distinct = 0;
    for (std::size_t i = 0; i < pts.size(); ++i)
        if (i == 0 || pts[i].n_cores != pts[i - 1].n_cores) ++distinct;
    if (distinct < 2) throw FitError("fewer than 2 distinct-N points");

    double sw = 0.0, sx = 0.0, sy = 0.0;
    for (const auto& p : pts) {
        if (!(p.value > 0.0))
            throw FitError("non-positive value at N=" + std::to_string(p.n_cores) +
                           "; logarithm undefined");
        sw += p.weight;
        sx += p.weight * std::log(static_cast<double>(p.n_cores));
        sy += p.weight * std::log(p.value);
    }
    const double xbar = sx / sw;
    const double ybar = sy / sw;

    double sxx = 0.0, sxy = 0.0;
    for (const auto& p : pts) {
        const double dx = std::log(static_cast<double>(p.n_cores)) - xbar;
        const double dy = std::log(p.value) - ybar;
        sxx += p.weight * dx * dx;
        sxy += p.weight * dx * dy;
    }

    PowerLawFit fit;
    fit.a = sxy / sxx;
    const double intercept = ybar - fit.a * xbar;
    fit.b = std::exp(intercept);
    fit.fit_range = range ? *range
                          : std::pair<int, int>{pts.front().n_cores, pts.back().n_cores};

    double ss_res = 0.0, ss_tot = 0.0;
    fit.residuals.reserve(pts.size());
    for (const auto& p : pts) {
        const double x = std::log(static_cast<double>(p.n_cores));
        const double y = std::log(p.value);
        const double r = y - (intercept + fit.a * x);
        fit.residuals.emplace_back(p.n_cores, r);
        ss_res += p.weight * r * r;
        ss_tot += p.weight * (y - ybar) * (y - ybar);
    }
    fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

double clamp_to(double v, std::pair<double, double> bounds) {
    return std::min(std::max(v, bounds.first), bounds.second);
}

void check_superserial_inputs(const std::vector<CapacityPoint>& points,
                              const SuperSerialOptions& opt) {
    if (points.size() < 3) throw FitError("superserial fit needs at least 3 points");
    for (const auto& p : points) {
        if (p.n_cores < 1) throw FitError("non-positive core count");
        if (!(p.value > 0.0))
            throw FitError("non-positive value at N=" + std::to_string(p.n_cores));
    }
    if (!(opt.bounds.first > 0.0) || !(opt.bounds.second > opt.bounds.first) ||
        opt.bounds.second > 1.0)
        throw ValidationError("superserial bounds must satisfy 0 < lo < hi <= 1");
    if (opt.grid < 2) throw ValidationError("multi-start grid needs at least 2 nodes per axis");
    if (opt.refine_top < 1) throw ValidationError("refine_top must be positive");
    if (opt.max_iterations < 1) throw ValidationError("iteration cap must be positive");
}

}  // namespace

double PowerLawFit::predict(double n) const { return b * std::pow(n, a); }

PowerLawFit fit_powerlaw(const MetricSeries& series, std::optional<std::pair<int, int>> range,
                         const PowerFitOptions& options) {
    std::vector<FitPoint> pts;
    pts.reserve(series.points.size());
    for (const auto& p : series.points)
        pts.push_back({p.n_cores, p.mean,
                       options.weight_by_count ? static_cast<double>(p.count) : 1.0});
    return fit_powerlaw_impl(pts, range);
}

PowerLawFit fit_powerlaw(const NormalizedSeries& series, std::optional<std::pair<int, int>> range,
                         const PowerFitOptions& options) {
    (void)options;  // no replicate counts survive normalization; all weights equal
    std::vector<FitPoint> pts;
    pts.reserve(series.points.size());
    for (const auto& p : series.points) pts.push_back({p.n_cores, p.value, 1.0});
    return fit_powerlaw_impl(pts, range);
}

namespace detail {

double superserial_objective(double sigma, double gamma,
                             const std::vector<CapacityPoint>& points) {
    double ss = 0.0;
    for (const auto& p : points) {
        const double n = static_cast<double>(p.n_cores);
        const double d = 1.0 + sigma * ((n - 1.0) + gamma * n * (n - 1.0));
        const double r = n / d - p.value;
        ss += r * r;
    }
    return ss;
}

namespace {

std::vector<GridStart> make_grid_nodes(std::pair<double, double> bounds, int grid) {
    const double llo = std::log(bounds.first);
    const double lhi = std::log(bounds.second);
    std::vector<double> axis(grid);
    for (int i = 0; i < grid; ++i)
        axis[i] = std::exp(llo + (lhi - llo) * static_cast<double>(i) /
                                     static_cast<double>(grid - 1));
    axis.front() = bounds.first;
    axis.back() = bounds.second;

    std::vector<GridStart> nodes(static_cast<std::size_t>(grid) * grid);
    for (int i = 0; i < grid; ++i)
        for (int j = 0; j < grid; ++j)
            nodes[static_cast<std::size_t>(i) * grid + j] = {axis[i], axis[j], 0.0};
    return nodes;
}

}  // namespace

std::vector<GridStart> scan_grid_serial(const std::vector<CapacityPoint>& points,
                                        std::pair<double, double> bounds, int grid) {
    auto nodes = make_grid_nodes(bounds, grid);
    for (auto& node : nodes)
        node.objective = superserial_objective(node.sigma, node.gamma, points);
    return nodes;
}

std::vector<GridStart> scan_grid_parallel(const std::vector<CapacityPoint>& points,
                                          std::pair<double, double> bounds, int grid) {
    auto nodes = make_grid_nodes(bounds, grid);
    const std::int64_t total = static_cast<std::int64_t>(nodes.size());
#if defined(_OPENMP)
#pragma omp parallel for schedule(static)
#endif
    for (std::int64_t k = 0; k < total; ++k) {
        auto& node = nodes[static_cast<std::size_t>(k)];
        node.objective = superserial_objective(node.sigma, node.gamma, points);
    }
    return nodes;
}

RefineResult refine_gauss_newton(const std::vector<CapacityPoint>& points,
                                 std::pair<double, double> bounds, double sigma0, double gamma0,
                                 int max_iterations, double step_tolerance) {
    double s = clamp_to(sigma0, bounds);
    double g = clamp_to(gamma0, bounds);
    double obj = superserial_objective(s, g, points);

    RefineResult result{s, g, obj, false};
    for (int iter = 0; iter < max_iterations; ++iter) {
        // Normal equations for the Gauss-Newton step J'J d = -J'r
        double a11 = 0.0, a12 = 0.0, a22 = 0.0, b1 = 0.0, b2 = 0.0;
        for (const auto& p : points) {
            const double n = static_cast<double>(p.n_cores);
            const double d = 1.0 + s * ((n - 1.0) + g * n * (n - 1.0));
            const double c = n / d;
            const double r = c - p.value;
            const double js = -n * (n - 1.0) * (1.0 + g * n) / (d * d);
            const double jg = -s * n * n * (n - 1.0) / (d * d);
            a11 += js * js;
            a12 += js * jg;
            a22 += jg * jg;
            b1 += js * r;
            b2 += jg * r;
        }
        const double det = a11 * a22 - a12 * a12;
        if (!(det > 0.0) || !std::isfinite(det)) break;
        const double ds = (-b1 * a22 + b2 * a12) / det;
        const double dg = (-b2 * a11 + b1 * a12) / det;

        double ns = s, ng = g, nobj = obj;
        bool accepted = false;
        double step = 1.0;
        for (int halving = 0; halving < 40; ++halving, step *= 0.5) {
            const double cs = clamp_to(s + step * ds, bounds);
            const double cg = clamp_to(g + step * dg, bounds);
            const double cobj = superserial_objective(cs, cg, points);
            if (cobj < obj) {
                ns = cs;
                ng = cg;
                nobj = cobj;
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            // No descent possible: stationary (or pinned at a bound).
            result.converged = true;
            break;
        }
        const bool small_step = std::abs(ns - s) < step_tolerance * std::abs(s) &&
                                std::abs(ng - g) < step_tolerance * std::abs(g);
        s = ns;
        g = ng;
        obj = nobj;
        result = {s, g, obj, small_step};
        if (small_step) break;
    }
    return result;
}

std::vector<RefineResult> refine_starts_serial(const std::vector<CapacityPoint>& points,
                                               std::pair<double, double> bounds,
                                               const std::vector<GridStart>& starts,
                                               int max_iterations, double step_tolerance) {
    std::vector<RefineResult> out(starts.size());
    for (std::size_t i = 0; i < starts.size(); ++i)
        out[i] = refine_gauss_newton(points, bounds, starts[i].sigma, starts[i].gamma,
                                     max_iterations, step_tolerance);
    return out;
}

std::vector<RefineResult> refine_starts_parallel(const std::vector<CapacityPoint>& points,
                                                 std::pair<double, double> bounds,
                                                 const std::vector<GridStart>& starts,
                                                 int max_iterations, double step_tolerance) {
    std::vector<RefineResult> out(starts.size());
    const std::int64_t total = static_cast<std::int64_t>(starts.size());
#if defined(_OPENMP)
#pragma omp parallel for schedule(dynamic)
#endif
    for (std::int64_t i = 0; i < total; ++i) {
        const auto k = static_cast<std::size_t>(i);
        out[k] = refine_gauss_newton(points, bounds, starts[k].sigma, starts[k].gamma,
                                     max_iterations, step_tolerance);
    }
    return out;
}

}  // namespace detail

SuperSerialFit fit_superserial(const NormalizedSeries& series, const SuperSerialOptions& options) {
    check_superserial_inputs(series.points, options);
    const auto& points = series.points;
    const auto bounds = options.bounds;

    auto nodes = options.parallel ? detail::scan_grid_parallel(points, bounds, options.grid)
                                  : detail::scan_grid_serial(points, bounds, options.grid);

    // Best starts first; ordering breaks ties by smaller sigma, then gamma,
    // so the selection is reproducible regardless of execution order.
    auto better = [](const detail::GridStart& x, const detail::GridStart& y) {
        if (x.objective != y.objective) return x.objective < y.objective;
        if (x.sigma != y.sigma) return x.sigma < y.sigma;
        return x.gamma < y.gamma;
    };
    const std::size_t top = std::min<std::size_t>(static_cast<std::size_t>(options.refine_top),
                                                  nodes.size());
    std::vector<detail::GridStart> starts(nodes);
    std::partial_sort(starts.begin(), starts.begin() + static_cast<std::ptrdiff_t>(top),
                      starts.end(), better);
    starts.resize(top);

    auto refined = options.parallel
                       ? detail::refine_starts_parallel(points, bounds, starts,
                                                        options.max_iterations,
                                                        options.step_tolerance)
                       : detail::refine_starts_serial(points, bounds, starts,
                                                      options.max_iterations,
                                                      options.step_tolerance);

    std::size_t best = 0;
    auto better_r = [](const detail::RefineResult& x, const detail::RefineResult& y) {
        if (x.objective != y.objective) return x.objective < y.objective;
        if (x.sigma != y.sigma) return x.sigma < y.sigma;
        return x.gamma < y.gamma;
    };
    for (std::size_t i = 1; i < refined.size(); ++i)
        if (better_r(refined[i], refined[best])) best = i;
    const auto& win = refined[best];
    if (!win.converged)
        throw FitError("superserial fit did not converge within " +
                       std::to_string(options.max_iterations) + " iterations");

    SuperSerialFit fit;
    fit.sigma = win.sigma;
    fit.gamma = win.gamma;
    fit.sum_sq_residual = win.objective;
    fit.sigma_at_bound = win.sigma <= bounds.first * (1.0 + 1e-9) ||
                         win.sigma >= bounds.second * (1.0 - 1e-9);
    fit.gamma_at_bound = win.gamma <= bounds.first * (1.0 + 1e-9) ||
                         win.gamma >= bounds.second * (1.0 - 1e-9);
    fit.degenerate = fit.sigma_at_bound || fit.gamma_at_bound;

    // One-standard-error half-widths from the 2x2 linearized covariance
    // (J'J)^-1 at the optimum, residual variance taken as 1.
    double a11 = 0.0, a12 = 0.0, a22 = 0.0;
    for (const auto& p : points) {
        const double n = static_cast<double>(p.n_cores);
        const double d = 1.0 + fit.sigma * ((n - 1.0) + fit.gamma * n * (n - 1.0));
        const double js = -n * (n - 1.0) * (1.0 + fit.gamma * n) / (d * d);
        const double jg = -fit.sigma * n * n * (n - 1.0) / (d * d);
        a11 += js * js;
        a12 += js * jg;
        a22 += jg * jg;
    }
    const double det = a11 * a22 - a12 * a12;
    if (det > 0.0 && std::isfinite(det)) {
        fit.sigma_ci = std::sqrt(a22 / det);
        fit.gamma_ci = std::sqrt(a11 / det);
    } else {
        fit.sigma_ci = std::numeric_limits<double>::infinity();
        fit.gamma_ci = std::numeric_limits<double>::infinity();
    }

    fit.n_c = superserial_nc(fit.sigma, fit.gamma).n_real;
    return fit;
}

}  // namespace scalefit
