#include <cmath>

#include <doctest.h>

#include "scalefit/analysis.hpp"
#include "scalefit/error.hpp"
#include "scalefit/models.hpp"

using namespace scalefit;

namespace {

NormalizedSeries capacity_from_powerlaw(double a, const std::vector<int>& cores) {
    NormalizedSeries s;
    s.base_n = cores.front();
    for (int n : cores) s.points.push_back({n, std::pow(n, a)});
    return s;
}

// Power-law capacity up to 512, value frozen at the 512 level beyond.
NormalizedSeries frozen_tail_series(double a) {
    NormalizedSeries s;
    s.base_n = 1;
    for (int n : {1, 2, 4, 8, 16, 32, 64, 128, 256, 512})
        s.points.push_back({n, std::pow(n, a)});
    for (int n : {1024, 2048}) s.points.push_back({n, std::pow(512.0, a)});
    return s;
}

const std::vector<int> kPow2To2048 = {1, 2, 4, 8, 16, 32, 64, 128, 256, 512, 1024, 2048};

}  // namespace

TEST_CASE("exact power-law data never saturates") {
    const auto series = capacity_from_powerlaw(0.77, kPow2To2048);
    const auto fit = fit_powerlaw(series);
    for (double threshold : {1e-9, 1e-6, 1e-3, 0.1, 0.5}) {
        const auto sat = detect_saturation(series, fit, threshold);
        CHECK(!sat.saturation_n.has_value());
        REQUIRE(sat.relative_deviation_at.size() == series.points.size());
        for (const auto& [n, dev] : sat.relative_deviation_at) CHECK(std::abs(dev) <= 1e-12);
    }
}

TEST_CASE("a frozen tail saturates at the first frozen point") {
    const auto series = frozen_tail_series(0.77);
    const auto fit = fit_powerlaw(series, std::pair{1, 512});
    const auto sat = detect_saturation(series, fit);
    REQUIRE(sat.saturation_n.has_value());
    CHECK(*sat.saturation_n == 1024);
    // frozen value sits (1/2)^0.77 = -41% below the extrapolated fit
    CHECK(sat.relative_deviation_at[10].second == doctest::Approx(std::pow(2.0, -0.77) - 1.0));
}

TEST_CASE("saturation requires persistence") {
    auto series = capacity_from_powerlaw(0.8, kPow2To2048);
    series.points[6].value *= 0.7;  // one dip at N=64, recovers after
    const auto fit = fit_powerlaw(series, std::pair{1, 32});
    const auto sat = detect_saturation(series, fit, 0.10);
    CHECK(!sat.saturation_n.has_value());
}

TEST_CASE("declining tail saturates at the first post-peak point") {
    NormalizedSeries series;
    series.base_n = 1;
    for (int n : {1, 2, 4, 8, 16, 32, 64, 128, 256, 512})
        series.points.push_back({n, std::pow(n, 0.77)});
    series.points.push_back({1024, 0.8 * std::pow(512.0, 0.77)});  // retrograde
    const auto fit = fit_powerlaw(series, std::pair{1, 512});
    const auto sat = detect_saturation(series, fit);
    REQUIRE(sat.saturation_n.has_value());
    CHECK(*sat.saturation_n == 1024);
}

TEST_CASE("recommend prefers the observed saturation point") {
    const auto series = frozen_tail_series(0.77);
    const auto fit = fit_powerlaw(series, std::pair{1, 512});
    const auto sat = detect_saturation(series, fit);
    FitSet fits;
    fits.power = fit;
    fits.capacity = series;
    const auto rec = recommend(fits, sat);
    CHECK(rec.optimal_n == 512);
    CHECK(rec.rationale == Rationale::power_fit_saturation);
}

TEST_CASE("recommend falls back to the superserial critical point") {
    SuperSerialFit ss;
    ss.sigma = 6.85e-3;
    ss.gamma = 3.13e-4;
    ss.n_c = superserial_nc(ss.sigma, ss.gamma).n_real;
    FitSet fits;
    fits.superserial = ss;
    SaturationResult no_sat;
    no_sat.threshold = 0.1;
    const auto rec = recommend(fits, no_sat);
    CHECK(rec.optimal_n == 681);
    CHECK(rec.rationale == Rationale::superserial_nc);
}

TEST_CASE("recommend honors an efficiency floor") {
    const auto series = capacity_from_powerlaw(0.77, {1, 2, 4, 8, 16, 32});
    const auto fit = fit_powerlaw(series);
    const auto sat = detect_saturation(series, fit);
    FitSet fits;
    fits.power = fit;
    fits.capacity = series;
    const auto rec = recommend(fits, sat, 0.5);
    // efficiency N^(0.77-1) >= 0.5 up to N=20; largest tested is 16
    CHECK(rec.optimal_n == 16);
    CHECK(rec.rationale == Rationale::efficiency_floor);
}

TEST_CASE("recommend warns when nothing saturates") {
    const auto series = capacity_from_powerlaw(0.9, {1, 2, 4, 8});
    const auto fit = fit_powerlaw(series);
    const auto sat = detect_saturation(series, fit);
    FitSet fits;
    fits.power = fit;
    fits.capacity = series;
    const auto rec = recommend(fits, sat);
    CHECK(rec.optimal_n == 8);
    CHECK(rec.rationale == Rationale::largest_tested);
    CHECK(!rec.warning.empty());

    CHECK_THROWS_AS(recommend(FitSet{}, sat), ValidationError);
}

TEST_CASE("raising the threshold never lowers the recommendation") {
    const auto series = frozen_tail_series(0.77);
    const auto fit = fit_powerlaw(series, std::pair{1, 512});
    int prev_optimal = 0;
    for (double threshold : {0.01, 0.05, 0.10, 0.30, 0.45}) {
        const auto sat = detect_saturation(series, fit, threshold);
        FitSet fits;
        fits.power = fit;
        fits.capacity = series;
        const auto rec = recommend(fits, sat);
        CHECK(rec.optimal_n >= prev_optimal);
        prev_optimal = rec.optimal_n;
    }
}

TEST_CASE("bound classification picks the largest share") {
    CHECK(classify_bound({64, 62, 37, 1}).kind == BoundKind::cpu_bound);
    CHECK(classify_bound({128, 30, 69, 1}).kind == BoundKind::mpi_bound);
    CHECK(classify_bound({16, 20, 30, 50}).kind == BoundKind::io_bound);
}

TEST_CASE("bound classification tie-breaks cpu > mpi > io") {
    CHECK(classify_bound({8, 49.5, 49.5, 1}).kind == BoundKind::cpu_bound);
    CHECK(classify_bound({8, 1, 49.5, 49.5}).kind == BoundKind::mpi_bound);
    CHECK(classify_bound({8, 33.4, 33.3, 33.3}).kind == BoundKind::cpu_bound);
}

TEST_CASE("bound classification is permutation consistent") {
    const double shares[3] = {61.0, 37.5, 1.5};
    const BoundKind by_slot[3] = {BoundKind::cpu_bound, BoundKind::mpi_bound,
                                  BoundKind::io_bound};
    int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    for (auto& perm : perms) {
        BreakdownRecord r{4, shares[perm[0]], shares[perm[1]], shares[perm[2]]};
        // largest share (61.0) lands in the slot holding index 0
        int largest_slot = 0;
        while (perm[largest_slot] != 0) ++largest_slot;
        CHECK(classify_bound(r).kind == by_slot[largest_slot]);
    }
}

TEST_CASE("efficiency table of a linear system is flat at 1") {
    NormalizedSeries series;
    series.base_n = 1;
    series.points = {{1, 1.0}, {2, 2.0}, {4, 4.0}};
    const auto rows = efficiency_table(series);
    REQUIRE(rows.size() == 3);
    for (const auto& row : rows) CHECK(row.efficiency == 1.0);
    CHECK(!rows[0].scalability_ratio.has_value());
    CHECK(*rows[1].scalability_ratio == 1.0);
    CHECK(*rows[2].scalability_ratio == 1.0);
}

TEST_CASE("power-law capacity gives constant consecutive scalability") {
    const double a = 0.77;
    const auto series = capacity_from_powerlaw(a, {1, 2, 4, 8, 16, 32, 64, 128, 256, 512});
    const auto rows = efficiency_table(series);
    const double expected = std::pow(2.0, a - 1.0);  // ~0.853 for doubling grids
    for (std::size_t i = 1; i < rows.size(); ++i)
        CHECK(std::abs(*rows[i].scalability_ratio - expected) <= 1e-9);
}

TEST_CASE("declining tails plunge below unit scalability") {
    auto series = frozen_tail_series(0.77);
    series.points.back().value *= 0.8;
    const auto rows = efficiency_table(series);
    const auto& tail = rows[rows.size() - 1];
    const auto& before = rows[rows.size() - 2];
    CHECK(*before.scalability_ratio < 1.0);
    CHECK(*tail.scalability_ratio < *before.scalability_ratio);
}
