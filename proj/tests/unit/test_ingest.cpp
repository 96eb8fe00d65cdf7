#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <doctest.h>

#include "scalefit/error.hpp"
#include "scalefit/ingest.hpp"

using namespace scalefit;

namespace {

std::vector<RunRecord> parse_csv(const std::string& text) {
    std::istringstream in(text);
    return parse_runs(in, RunFormat::runs_csv);
}

constexpr const char* kHeader = "n_cores,replicate,init_s,compute_s,final_s,simulated_units\n";

}  // namespace

TEST_CASE("runs-csv row maps fields directly") {
    auto records = parse_csv(std::string(kHeader) + "64,0,18,1408,2,5\n");
    REQUIRE(records.size() == 1);
    CHECK(records[0] == RunRecord{64, 0, 18.0, 1408.0, 2.0, 5.0});
    CHECK(records[0].total_s() == doctest::Approx(1428.0));
}

TEST_CASE("runs-csv rejects non-positive fields") {
    CHECK_THROWS_WITH_AS(parse_csv(std::string(kHeader) + "0,0,18,1408,2,5\n"),
                         doctest::Contains("non-positive core count"), ValidationError);
    CHECK_THROWS_AS(parse_csv(std::string(kHeader) + "4,0,18,0,2,5\n"), ValidationError);
    CHECK_THROWS_AS(parse_csv(std::string(kHeader) + "4,0,18,1408,2,-1\n"), ValidationError);
}

TEST_CASE("runs-csv reports the offending line") {
    const std::string text = std::string(kHeader) + "4,0,18,1408,2,5\n4,1,18,14x8,2,5\n";
    CHECK_THROWS_WITH_AS(parse_csv(text), doctest::Contains("line 3"), ParseError);
    CHECK_THROWS_WITH_AS(parse_csv(std::string(kHeader) + "4,0,18,1408,2\n"),
                         doctest::Contains("expected 6 fields"), ParseError);
    CHECK_THROWS_AS(parse_csv("bad,header\n1,0,1,1,1,1\n"), ParseError);
    CHECK_THROWS_AS(parse_csv(""), ParseError);
}

TEST_CASE("replicates at the same core count stay separate") {
    std::string text = kHeader;
    for (int rep = 0; rep < 6; ++rep)
        text += "64," + std::to_string(rep) + ",18,140" + std::to_string(rep) + ",2,5\n";
    auto records = parse_csv(text);
    REQUIRE(records.size() == 6);
    for (int rep = 0; rep < 6; ++rep) CHECK(records[rep].replicate == rep);
}

TEST_CASE("runs-json parses the same six keys") {
    std::istringstream in(R"([{"n_cores":64,"replicate":0,"init_s":18,"compute_s":1408,
        "final_s":2,"simulated_units":5}])");
    auto records = parse_runs(in, RunFormat::runs_json);
    REQUIRE(records.size() == 1);
    CHECK(records[0] == RunRecord{64, 0, 18.0, 1408.0, 2.0, 5.0});

    std::istringstream missing(R"([{"n_cores":64}])");
    CHECK_THROWS_WITH_AS(parse_runs(missing, RunFormat::runs_json),
                         doctest::Contains("missing key"), ParseError);
    std::istringstream notarray(R"({"n_cores":64})");
    CHECK_THROWS_AS(parse_runs(notarray, RunFormat::runs_json), ParseError);
}

TEST_CASE("aggregate groups replicates into mean/stddev/count") {
    std::string text = kHeader;
    const double computes[] = {1400, 1403, 1406, 1410, 1413, 1416};
    for (int rep = 0; rep < 6; ++rep)
        text += "64," + std::to_string(rep) + ",18," + std::to_string(computes[rep]) + ",2,5\n";
    auto series = aggregate(parse_csv(text), MetricKind::compute_s);
    REQUIRE(series.points.size() == 1);
    CHECK(series.points[0].n_cores == 64);
    CHECK(series.points[0].count == 6);
    CHECK(series.points[0].mean == doctest::Approx(1408.0));  // (1400+...+1416)/6
    CHECK(series.points[0].stddev > 0.0);
}

TEST_CASE("compute rate is seconds per simulated unit, compute phase only") {
    auto series = aggregate(parse_csv(std::string(kHeader) + "1,0,110,8000,2,5\n"),
                            MetricKind::compute_rate);
    REQUIRE(series.points.size() == 1);
    CHECK(series.points[0].mean == doctest::Approx(1600.0).epsilon(1e-12));
    CHECK(series.points[0].stddev == 0.0);
    CHECK(series.points[0].count == 1);
}

TEST_CASE("throughput is simulated units per day of compute") {
    auto series = aggregate(parse_csv(std::string(kHeader) + "8,0,10,43200,1,2\n"),
                            MetricKind::throughput);
    REQUIRE(series.points.size() == 1);
    CHECK(series.points[0].mean == doctest::Approx(4.0).epsilon(1e-12));  // 2/(43200/86400)
}

TEST_CASE("aggregate rejects empty input") {
    CHECK_THROWS_AS(aggregate({}, MetricKind::throughput), ValidationError);
}

TEST_CASE("throughput times compute rate is one day per day") {
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> compute(10.0, 1e5);
    std::uniform_real_distribution<double> units(0.01, 50.0);
    for (int i = 0; i < 200; ++i) {
        RunRecord r{1 + static_cast<int>(rng() % 2048), 0, 0.0, compute(rng), 0.0, units(rng)};
        const auto rate = aggregate({r}, MetricKind::compute_rate).points[0].mean;
        const auto tput = aggregate({r}, MetricKind::throughput).points[0].mean;
        CHECK(std::abs(tput * rate - kSecondsPerDay) <= 1e-9 * kSecondsPerDay);
    }
}

TEST_CASE("aggregation is permutation invariant") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> compute(100.0, 2000.0);
    std::vector<RunRecord> records;
    for (int n : {1, 2, 4, 8, 16})
        for (int rep = 0; rep < 5; ++rep)
            records.push_back({n, rep, 10.0 + rep, compute(rng), 1.0, 5.0});

    const auto base = aggregate(records, MetricKind::throughput);
    for (int trial = 0; trial < 10; ++trial) {
        std::shuffle(records.begin(), records.end(), rng);
        CHECK(aggregate(records, MetricKind::throughput) == base);
    }
}

TEST_CASE("runs-csv round-trips bit-identically") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(1e-6, 1e6);
    std::vector<RunRecord> records;
    for (int i = 0; i < 50; ++i)
        records.push_back({1 + static_cast<int>(rng() % 4096), static_cast<int>(rng() % 6),
                           u(rng), u(rng), u(rng), u(rng)});
    const std::string text = write_runs_csv(records);
    std::istringstream in(text);
    auto reparsed = parse_runs(in, RunFormat::runs_csv);
    CHECK(reparsed == records);
    CHECK(write_runs_csv(reparsed) == text);
}

TEST_CASE("series-csv round-trips and validates") {
    MetricSeries series;
    series.points = {{1, 0.19, 0.001, 6}, {2, 0.3242, 0.002, 6}, {512, 23.375, 0.0, 1}};
    const std::string text = write_series_csv(series);
    std::istringstream in(text);
    auto reparsed = parse_series_csv(in);
    CHECK(reparsed.points == series.points);

    std::istringstream bad("n_cores,mean,stddev,count\n4,1.0,0,1\n2,2.0,0,1\n");
    CHECK_THROWS_WITH_AS(parse_series_csv(bad), doctest::Contains("strictly increasing"),
                         ValidationError);
}

TEST_CASE("breakdown rows validate percentages and sum") {
    std::istringstream ok("n_cores,cpu_pct,mpi_pct,io_pct\n64,62,37,1\n1,99.5,0,0.5\n");
    auto records = parse_breakdown(ok);
    REQUIRE(records.size() == 2);
    CHECK(records[0] == BreakdownRecord{64, 62.0, 37.0, 1.0});
    CHECK(records[1] == BreakdownRecord{1, 99.5, 0.0, 0.5});

    std::istringstream badsum("n_cores,cpu_pct,mpi_pct,io_pct\n8,50,30,10\n");
    CHECK_THROWS_WITH_AS(parse_breakdown(badsum), doctest::Contains("sum outside"),
                         ValidationError);
    std::istringstream badpct("n_cores,cpu_pct,mpi_pct,io_pct\n8,120,-30,10\n");
    CHECK_THROWS_AS(parse_breakdown(badpct), ValidationError);
}

TEST_CASE("augment_linear densifies with synthetic count-0 points") {
    MetricSeries series;
    series.points = {{100, 50.0, 0.5, 6}, {200, 70.0, 0.5, 6}};
    auto dense = augment_linear(series, 100, 200);
    REQUIRE(dense.points.size() == 101);
    CHECK(dense.points.front() == series.points.front());  // observed pass through
    CHECK(dense.points.back() == series.points.back());
    const auto& mid = dense.points[50];
    CHECK(mid.n_cores == 150);
    CHECK(mid.mean == 60.0);  // exact midpoint
    CHECK(mid.count == 0);
    CHECK(mid.stddev == 0.0);
}

TEST_CASE("augment_linear keeps observed points outside the range") {
    MetricSeries series;
    series.points = {{1, 1.0, 0, 1}, {64, 30.0, 0, 1}, {128, 50.0, 0, 1}, {256, 80.0, 0, 1}};
    auto dense = augment_linear(series, 128, 256);
    CHECK(dense.points.front().n_cores == 1);
    CHECK(dense.points[1].n_cores == 64);
    REQUIRE(dense.points.size() == 2 + 129);
    for (std::size_t i = 2; i < dense.points.size(); ++i)
        CHECK(dense.points[i].n_cores == 128 + static_cast<int>(i) - 2);
}

TEST_CASE("augment_linear refuses extrapolation") {
    MetricSeries series;
    series.points = {{100, 50.0, 0, 1}, {200, 70.0, 0, 1}};
    CHECK_THROWS_WITH_AS(augment_linear(series, 1, 99), doctest::Contains("no extrapolation"),
                         ValidationError);
    CHECK_THROWS_AS(augment_linear(series, 150, 201), ValidationError);
    MetricSeries single;
    single.points = {{100, 50.0, 0, 1}};
    CHECK_THROWS_AS(augment_linear(single, 100, 100), ValidationError);
}

TEST_CASE("augment_linear is idempotent on dense ranges") {
    MetricSeries series;
    series.points = {{10, 5.0, 0, 3}, {13, 6.5, 0, 3}, {20, 11.0, 0, 3}};
    auto once = augment_linear(series, 10, 20);
    auto twice = augment_linear(once, 10, 20);
    CHECK(once == twice);
}
