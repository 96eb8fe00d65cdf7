#include <algorithm>
#include <cmath>
#include <random>

#include <doctest.h>

#include "scalefit/error.hpp"
#include "scalefit/fitting.hpp"
#include "scalefit/models.hpp"

using namespace scalefit;

namespace {

MetricSeries power_series(double a, double b, const std::vector<int>& cores) {
    MetricSeries s;
    for (int n : cores) s.points.push_back({n, b * std::pow(n, a), 0.0, 1});
    return s;
}

NormalizedSeries superserial_series(double sigma, double gamma, const std::vector<int>& cores) {
    const auto p = ModelParams::superserial(sigma, gamma);
    NormalizedSeries s;
    s.base_n = cores.front();
    for (int n : cores) s.points.push_back({n, eval_capacity(p, n)});
    return s;
}

const std::vector<int> kPow2To512 = {1, 2, 4, 8, 16, 32, 64, 128, 256, 512};
const std::vector<int> kPow2To1024 = {1, 2, 4, 8, 16, 32, 64, 128, 256, 512, 1024};

}  // namespace

TEST_CASE("power fit recovers exact generating coefficients") {
    const auto fit = fit_powerlaw(power_series(0.77, 1.28, kPow2To512));
    CHECK(std::abs(fit.a - 0.77) <= 1e-9);
    CHECK(std::abs(fit.b - 1.28) <= 1e-9);
    CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fit.fit_range == std::pair<int, int>{1, 512});
}

TEST_CASE("identity series fits a=1 b=1 r2=1") {
    const auto fit = fit_powerlaw(power_series(1.0, 1.0, {1, 3, 7, 20, 100}));
    CHECK(std::abs(fit.a - 1.0) <= 1e-12);
    CHECK(std::abs(fit.b - 1.0) <= 1e-12);
    CHECK(fit.r_squared == doctest::Approx(1.0));
}

TEST_CASE("raw and normalized series share the exponent") {
    const auto raw = power_series(0.77, 0.19, kPow2To512);
    const auto raw_fit = fit_powerlaw(raw);
    CHECK(std::abs(raw_fit.a - 0.77) <= 1e-9);
    CHECK(std::abs(raw_fit.b - 0.19) <= 1e-9);

    auto norm = scaleup(raw, 1);
    const auto norm_fit = fit_powerlaw(norm);
    CHECK(std::abs(norm_fit.a - raw_fit.a) <= 1e-9);
    CHECK(std::abs(norm_fit.b - 1.0) <= 1e-9);  // base value 1 at N=1
}

TEST_CASE("molecular-dynamics style grid recovers a=0.56") {
    const auto fit =
        fit_powerlaw(power_series(0.56, 2.4, {1, 2, 8, 16, 32, 48, 96, 144, 192, 256}));
    CHECK(std::abs(fit.a - 0.56) <= 1e-9);
}

TEST_CASE("fit range excludes outside points and residuals cover inside ones") {
    auto series = power_series(0.77, 1.28, kPow2To1024);
    series.points.back().mean *= 0.5;  // spoil the last point
    const auto fit = fit_powerlaw(series, std::pair{1, 512});
    CHECK(std::abs(fit.a - 0.77) <= 1e-9);
    CHECK(fit.residuals.size() == 10);
    for (const auto& [n, r] : fit.residuals) {
        CHECK(n <= 512);
        CHECK(std::abs(r) <= 1e-12);
    }
}

TEST_CASE("fit errors are reported") {
    CHECK_THROWS_WITH_AS(fit_powerlaw(power_series(1.0, 1.0, {64})),
                         doctest::Contains("fewer than 2 distinct-N"), FitError);
    MetricSeries bad;
    bad.points = {{1, 1.0, 0, 1}, {2, -3.0, 0, 1}};
    CHECK_THROWS_WITH_AS(fit_powerlaw(bad), doctest::Contains("non-positive"), FitError);
    CHECK_THROWS_AS(fit_powerlaw(power_series(1.0, 1.0, kPow2To512), std::pair{2000, 4000}),
                    FitError);
}

TEST_CASE("count weighting drops synthetic points") {
    auto series = power_series(0.8, 2.0, {1, 4, 16, 64});
    for (auto& p : series.points) p.count = 6;
    series.points.push_back({100, 123.0, 0.0, 0});  // synthetic, off the law
    std::sort(series.points.begin(), series.points.end(),
              [](const SeriesPoint& x, const SeriesPoint& y) { return x.n_cores < y.n_cores; });

    PowerFitOptions weighted{.weight_by_count = true};
    const auto wfit = fit_powerlaw(series, std::nullopt, weighted);
    CHECK(std::abs(wfit.a - 0.8) <= 1e-9);
    CHECK(wfit.residuals.size() == 4);

    const auto ufit = fit_powerlaw(series);  // equal weight includes the outlier
    CHECK(std::abs(ufit.a - 0.8) > 1e-6);
    CHECK(ufit.residuals.size() == 5);
}

TEST_CASE("scaling the values scales only b") {
    const auto base = power_series(0.62, 3.7, {2, 5, 11, 64, 300});
    const auto fit1 = fit_powerlaw(base);
    for (double k : {0.001, 0.5, 42.0}) {
        auto scaled = base;
        for (auto& p : scaled.points) p.mean *= k;
        const auto fit2 = fit_powerlaw(scaled);
        CHECK(std::abs(fit2.a - fit1.a) <= 1e-12);
        CHECK(std::abs(fit2.b - k * fit1.b) <= 1e-12 * k * fit1.b);
    }
}

TEST_CASE("scaling the core counts rescales b by c^-a") {
    const auto base = power_series(0.62, 3.7, {2, 5, 11, 64, 300});
    const auto fit1 = fit_powerlaw(base);
    const int c = 3;
    auto scaled = base;
    for (auto& p : scaled.points) p.n_cores *= c;
    const auto fit2 = fit_powerlaw(scaled);
    CHECK(std::abs(fit2.a - fit1.a) <= 1e-12);
    CHECK(fit2.b == doctest::Approx(fit1.b * std::pow(c, -fit1.a)).epsilon(1e-12));
}

TEST_CASE("exact recovery holds for random coefficients and subsets") {
    std::mt19937 rng(20240601);
    std::uniform_real_distribution<double> ua(-1.5, 1.5);
    std::uniform_real_distribution<double> ub(1e-4, 1e3);
    for (int trial = 0; trial < 100; ++trial) {
        const double a = ua(rng), b = ub(rng);
        std::vector<int> cores;
        int n = 1 + static_cast<int>(rng() % 4);
        const int count = 2 + static_cast<int>(rng() % 9);
        while (static_cast<int>(cores.size()) < count) {
            cores.push_back(n);
            n += 1 + static_cast<int>(rng() % (2 * n));
        }
        const auto fit = fit_powerlaw(power_series(a, b, cores));
        CHECK(std::abs(fit.a - a) <= 1e-9);
        CHECK(std::abs(fit.b - b) <= 1e-9 * std::max(1.0, b));
    }
}

TEST_CASE("superserial fit recovers exact parameters") {
    const double sigma = 6.85e-3, gamma = 3.13e-4;
    const auto fit = fit_superserial(superserial_series(sigma, gamma, kPow2To1024));
    CHECK(std::abs(fit.sigma - sigma) <= 0.01 * sigma);
    CHECK(std::abs(fit.gamma - gamma) <= 0.01 * gamma);
    CHECK(!fit.degenerate);
    CHECK(fit.sum_sq_residual <= 1e-12);
    // consistency between the reported critical point and the parameters
    CHECK(std::abs(fit.n_c - superserial_nc(fit.sigma, fit.gamma).n_real) <= 1e-9 * fit.n_c);
}

TEST_CASE("superserial fit is deterministic and kernel-independent") {
    const auto series = superserial_series(4.2e-3, 8.0e-4, kPow2To1024);
    SuperSerialOptions serial_opts;
    serial_opts.parallel = false;
    SuperSerialOptions parallel_opts;
    parallel_opts.parallel = true;

    const auto f1 = fit_superserial(series, serial_opts);
    const auto f2 = fit_superserial(series, serial_opts);
    const auto f3 = fit_superserial(series, parallel_opts);
    CHECK(f1 == f2);
    CHECK(f1 == f3);
}

TEST_CASE("serial and parallel kernels agree node for node") {
    const auto series = superserial_series(2.5e-3, 1.0e-3, kPow2To1024);
    const std::pair<double, double> bounds{1e-5, 0.5};
    const auto grid_s = detail::scan_grid_serial(series.points, bounds, 23);
    const auto grid_p = detail::scan_grid_parallel(series.points, bounds, 23);
    REQUIRE(grid_s.size() == grid_p.size());
    for (std::size_t i = 0; i < grid_s.size(); ++i) {
        CHECK(grid_s[i].sigma == grid_p[i].sigma);
        CHECK(grid_s[i].gamma == grid_p[i].gamma);
        CHECK(grid_s[i].objective == grid_p[i].objective);
    }

    const auto ref_s = detail::refine_starts_serial(series.points, bounds, grid_s, 200, 1e-10);
    const auto ref_p = detail::refine_starts_parallel(series.points, bounds, grid_s, 200, 1e-10);
    REQUIRE(ref_s.size() == ref_p.size());
    for (std::size_t i = 0; i < ref_s.size(); ++i) {
        CHECK(ref_s[i].sigma == ref_p[i].sigma);
        CHECK(ref_s[i].gamma == ref_p[i].gamma);
        CHECK(ref_s[i].objective == ref_p[i].objective);
    }
}

TEST_CASE("returned optimum dominates a 50x50 grid scan") {
    std::mt19937 rng(31337);
    std::normal_distribution<double> noise(0.0, 0.5);
    auto series = superserial_series(6.85e-3, 3.13e-4, kPow2To1024);
    for (auto& p : series.points) p.value = std::max(0.1, p.value + noise(rng));

    const auto fit = fit_superserial(series);
    const auto grid = detail::scan_grid_serial(series.points, {1e-5, 0.5}, 50);
    for (const auto& node : grid) CHECK(fit.sum_sq_residual <= node.objective);
}

TEST_CASE("pure amdahl data pins gamma at the lower bound") {
    NormalizedSeries series;
    const auto p = ModelParams::amdahl(0.02);
    series.base_n = 1;
    for (int n : kPow2To1024) series.points.push_back({n, eval_capacity(p, n)});
    const auto fit = fit_superserial(series);
    CHECK(fit.gamma_at_bound);
    CHECK(fit.degenerate);
    CHECK(fit.gamma == doctest::Approx(1e-5).epsilon(1e-6));
    CHECK(std::abs(fit.sigma - 0.02) <= 0.01 * 0.02);
}

TEST_CASE("superserial fit validates its inputs") {
    NormalizedSeries two;
    two.base_n = 1;
    two.points = {{1, 1.0}, {2, 1.9}};
    CHECK_THROWS_AS(fit_superserial(two), FitError);

    auto series = superserial_series(6.85e-3, 3.13e-4, kPow2To1024);
    SuperSerialOptions bad;
    bad.bounds = {0.5, 0.1};
    CHECK_THROWS_AS(fit_superserial(series, bad), ValidationError);
    bad.bounds = {0.0, 0.5};
    CHECK_THROWS_AS(fit_superserial(series, bad), ValidationError);
}
