#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "scalefit/metrics.hpp"
#include "scalefit/types.hpp"

namespace scalefit {

/// Result of the log-log least-squares power fit value = b * N^a.
struct PowerLawFit {
    double a = 0.0;
    double b = 0.0;
    double r_squared = 0.0;  // in log space, over the fitted points
    // log-space residual ln(observed) - (ln b + a ln N), one per fitted point
    std::vector<std::pair<int, double>> residuals;
    std::pair<int, int> fit_range{0, 0};

    double predict(double n) const;

    bool operator==(const PowerLawFit&) const = default;
};

struct PowerFitOptions {
    // Weight each point by its replicate count instead of equally.
    // Synthetic points (count = 0) then drop out of the fit.
    bool weight_by_count = false;
};

/// Ordinary least squares of ln(value) against ln(N): slope = a,
/// intercept = ln(b). Points outside `range` (inclusive) are excluded;
/// by default all points are fitted and weighted equally, synthetic ones
/// included. Needs >= 2 points with distinct N inside the range, all
/// values positive.
PowerLawFit fit_powerlaw(const MetricSeries& series,
                         std::optional<std::pair<int, int>> range = std::nullopt,
                         const PowerFitOptions& options = {});
PowerLawFit fit_powerlaw(const NormalizedSeries& series,
                         std::optional<std::pair<int, int>> range = std::nullopt,
                         const PowerFitOptions& options = {});

/// Result of the bounded nonlinear least-squares superserial fit.
struct SuperSerialFit {
    double sigma = 0.0;
    double gamma = 0.0;
    // Symmetric one-standard-error half-widths from the linearized
    // covariance at the optimum (unit residual variance).
    double sigma_ci = 0.0;
    double gamma_ci = 0.0;
    double n_c = 0.0;  // real critical core count for the fitted parameters
    double sum_sq_residual = 0.0;
    // A parameter pinned at a search bound marks a degenerate fit: the
    // optimum lies outside (or on the edge of) the search box.
    bool sigma_at_bound = false;
    bool gamma_at_bound = false;
    bool degenerate = false;

    bool operator==(const SuperSerialFit&) const = default;
};

struct SuperSerialOptions {
    std::pair<double, double> bounds{1e-5, 0.5};  // box for both sigma and gamma
    int grid = 50;        // multi-start grid nodes per axis (log-spaced)
    int refine_top = 16;  // Gauss-Newton refinements, from the best grid starts
    int max_iterations = 200;
    double step_tolerance = 1e-10;  // relative step in both parameters
    bool parallel = true;           // use the OpenMP kernel when available
};

/// Fit sigma and gamma of the superserial model to a normalized capacity
/// series by minimizing the sum of squared residuals over the bounded box.
/// Multi-start from a log-spaced grid followed by damped Gauss-Newton
/// refinement; selection is by lowest objective, ties broken by smaller
/// sigma, then smaller gamma, so results are deterministic and identical
/// between the serial and parallel paths. Needs >= 3 points.
SuperSerialFit fit_superserial(const NormalizedSeries& series,
                               const SuperSerialOptions& options = {});

namespace detail {

/// Sum of squared residuals of the superserial capacity against the points.
double superserial_objective(double sigma, double gamma,
                             const std::vector<CapacityPoint>& points);

struct GridStart {
    double sigma = 0.0;
    double gamma = 0.0;
    double objective = 0.0;
};

/// Evaluate the objective at every node of a grid x grid log-spaced lattice
/// over the bounds. Node order is row-major in (sigma, gamma) and identical
/// between the two variants; the parallel one only distributes the loop.
std::vector<GridStart> scan_grid_serial(const std::vector<CapacityPoint>& points,
                                        std::pair<double, double> bounds, int grid);
std::vector<GridStart> scan_grid_parallel(const std::vector<CapacityPoint>& points,
                                          std::pair<double, double> bounds, int grid);

struct RefineResult {
    double sigma = 0.0;
    double gamma = 0.0;
    double objective = 0.0;
    bool converged = false;
};

/// Damped Gauss-Newton from one start, with steps clamped into the bounds.
RefineResult refine_gauss_newton(const std::vector<CapacityPoint>& points,
                                 std::pair<double, double> bounds, double sigma0,
                                 double gamma0, int max_iterations, double step_tolerance);

/// Refine each start; output index i corresponds to starts[i] in both variants.
std::vector<RefineResult> refine_starts_serial(const std::vector<CapacityPoint>& points,
                                               std::pair<double, double> bounds,
                                               const std::vector<GridStart>& starts,
                                               int max_iterations, double step_tolerance);
std::vector<RefineResult> refine_starts_parallel(const std::vector<CapacityPoint>& points,
                                                 std::pair<double, double> bounds,
                                                 const std::vector<GridStart>& starts,
                                                 int max_iterations, double step_tolerance);

}  // namespace detail

}  // namespace scalefit
