#include "scalefit/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "scalefit/error.hpp"

namespace scalefit {

namespace {

constexpr const char* kRunsHeader = "n_cores,replicate,init_s,compute_s,final_s,simulated_units";
constexpr const char* kBreakdownHeader = "n_cores,cpu_pct,mpi_pct,io_pct";
constexpr const char* kSeriesHeader = "n_cores,mean,stddev,count";

std::string error_at(const std::string& msg, std::size_t line) {
    return line ? "line " + std::to_string(line) + ": " + msg : msg;
}

std::string chomp(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = line.find(',', start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

int parse_int_field(const std::string& field, const char* name, std::size_t line) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size())
        throw ParseError(std::string("malformed integer for ") + name + ": '" + field + "'", line);
    return value;
}

double parse_double_field(const std::string& field, const char* name, std::size_t line) {
    double value = 0.0;
    auto [ptr, ec] =
        std::from_chars(field.data(), field.data() + field.size(), value, std::chars_format::general);
    if (ec != std::errc{} || ptr != field.data() + field.size())
        throw ParseError(std::string("malformed number for ") + name + ": '" + field + "'", line);
    return value;
}

void append_shortest(std::string& out, double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, ptr);
}

void check_record(const RunRecord& r, std::size_t line) {
    if (r.n_cores < 1) throw ValidationError(error_at("non-positive core count", line));
    if (!(r.compute_s > 0.0)) throw ValidationError(error_at("non-positive compute_s", line));
    if (!(r.simulated_units > 0.0))
        throw ValidationError(error_at("non-positive simulated_units", line));
    if (r.replicate < 0) throw ValidationError(error_at("negative replicate index", line));
    if (!(r.init_s >= 0.0)) throw ValidationError(error_at("negative init_s", line));
    if (!(r.final_s >= 0.0)) throw ValidationError(error_at("negative final_s", line));
}

std::vector<RunRecord> parse_runs_csv(std::istream& source) {
    std::string line;
    std::size_t lineno = 0;
    if (!std::getline(source, line)) throw ParseError("empty input, expected header");
    ++lineno;
    if (chomp(line) != kRunsHeader)
        throw ParseError(std::string("expected header '") + kRunsHeader + "'", lineno);

    std::vector<RunRecord> records;
    while (std::getline(source, line)) {
        ++lineno;
        line = chomp(line);
        if (line.empty()) continue;
        auto fields = split_fields(line);
        if (fields.size() != 6)
            throw ParseError("expected 6 fields, got " + std::to_string(fields.size()), lineno);
        RunRecord r;
        r.n_cores = parse_int_field(fields[0], "n_cores", lineno);
        r.replicate = parse_int_field(fields[1], "replicate", lineno);
        r.init_s = parse_double_field(fields[2], "init_s", lineno);
        r.compute_s = parse_double_field(fields[3], "compute_s", lineno);
        r.final_s = parse_double_field(fields[4], "final_s", lineno);
        r.simulated_units = parse_double_field(fields[5], "simulated_units", lineno);
        check_record(r, lineno);
        records.push_back(r);
    }
    return records;
}

std::vector<RunRecord> parse_runs_json(std::istream& source) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(source);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_array()) throw ParseError("expected a JSON array of run objects");

    static constexpr const char* keys[] = {"n_cores",   "replicate", "init_s",
                                           "compute_s", "final_s",   "simulated_units"};
    std::vector<RunRecord> records;
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const auto& obj = doc[i];
        if (!obj.is_object())
            throw ParseError("element " + std::to_string(i) + " is not an object");
        for (const char* key : keys)
            if (!obj.contains(key))
                throw ParseError("element " + std::to_string(i) + " missing key '" + key + "'");
        RunRecord r;
        try {
            r.n_cores = obj.at("n_cores").get<int>();
            r.replicate = obj.at("replicate").get<int>();
            r.init_s = obj.at("init_s").get<double>();
            r.compute_s = obj.at("compute_s").get<double>();
            r.final_s = obj.at("final_s").get<double>();
            r.simulated_units = obj.at("simulated_units").get<double>();
        } catch (const nlohmann::json::exception& e) {
            throw ParseError("element " + std::to_string(i) + ": " + e.what());
        }
        check_record(r, 0);
        records.push_back(r);
    }
    return records;
}

double derive_value(const RunRecord& r, MetricKind kind) {
    switch (kind) {
        case MetricKind::init_s: return r.init_s;
        case MetricKind::compute_s: return r.compute_s;
        case MetricKind::total_s: return r.total_s();
        case MetricKind::compute_rate: return r.compute_s / r.simulated_units;
        case MetricKind::throughput: return r.simulated_units / (r.compute_s / kSecondsPerDay);
    }
    throw ValidationError("unknown metric kind");
}

}  // namespace

const char* metric_kind_name(MetricKind kind) {
    switch (kind) {
        case MetricKind::init_s: return "init";
        case MetricKind::compute_s: return "compute";
        case MetricKind::total_s: return "total";
        case MetricKind::compute_rate: return "compute-rate";
        case MetricKind::throughput: return "throughput";
    }
    return "?";
}

const char* metric_kind_unit(MetricKind kind) {
    switch (kind) {
        case MetricKind::compute_rate: return "s/unit";
        case MetricKind::throughput: return "units/day";
        default: return "s";
    }
}

std::vector<RunRecord> parse_runs(std::istream& source, RunFormat format) {
    return format == RunFormat::runs_csv ? parse_runs_csv(source) : parse_runs_json(source);
}

std::string write_runs_csv(const std::vector<RunRecord>& records) {
    std::string out = kRunsHeader;
    out += '\n';
    for (const auto& r : records) {
        out += std::to_string(r.n_cores);
        out += ',';
        out += std::to_string(r.replicate);
        out += ',';
        append_shortest(out, r.init_s);
        out += ',';
        append_shortest(out, r.compute_s);
        out += ',';
        append_shortest(out, r.final_s);
        out += ',';
        append_shortest(out, r.simulated_units);
        out += '\n';
    }
    return out;
}

MetricSeries aggregate(const std::vector<RunRecord>& records, MetricKind value) {
    if (records.empty()) throw ValidationError("no records to aggregate");

    // Values are sorted within each group before summing so the result is
    // independent of input order, bit for bit.
    std::map<int, std::vector<double>> groups;
    for (const auto& r : records) groups[r.n_cores].push_back(derive_value(r, value));

    MetricSeries series;
    series.label = metric_kind_name(value);
    series.unit = metric_kind_unit(value);
    for (auto& [n, values] : groups) {
        std::sort(values.begin(), values.end());
        double sum = 0.0;
        for (double v : values) sum += v;
        const double mean = sum / static_cast<double>(values.size());
        double stddev = 0.0;
        if (values.size() > 1) {
            double ss = 0.0;
            for (double v : values) ss += (v - mean) * (v - mean);
            stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
        }
        series.points.push_back({n, mean, stddev, static_cast<int>(values.size())});
    }
    return series;
}

std::vector<BreakdownRecord> parse_breakdown(std::istream& source) {
    std::string line;
    std::size_t lineno = 0;
    if (!std::getline(source, line)) throw ParseError("empty input, expected header");
    ++lineno;
    if (chomp(line) != kBreakdownHeader)
        throw ParseError(std::string("expected header '") + kBreakdownHeader + "'", lineno);

    std::vector<BreakdownRecord> records;
    while (std::getline(source, line)) {
        ++lineno;
        line = chomp(line);
        if (line.empty()) continue;
        auto fields = split_fields(line);
        if (fields.size() != 4)
            throw ParseError("expected 4 fields, got " + std::to_string(fields.size()), lineno);
        BreakdownRecord r;
        r.n_cores = parse_int_field(fields[0], "n_cores", lineno);
        r.cpu_pct = parse_double_field(fields[1], "cpu_pct", lineno);
        r.mpi_pct = parse_double_field(fields[2], "mpi_pct", lineno);
        r.io_pct = parse_double_field(fields[3], "io_pct", lineno);
        if (r.n_cores < 1) throw ValidationError(error_at("non-positive core count", lineno));
        for (double pct : {r.cpu_pct, r.mpi_pct, r.io_pct})
            if (!(pct >= 0.0 && pct <= 100.0))
                throw ValidationError(error_at("percentage outside [0,100]", lineno));
        const double sum = r.cpu_pct + r.mpi_pct + r.io_pct;
        if (sum < 99.0 || sum > 101.0)
            throw ValidationError(error_at("percentage sum outside [99,101]", lineno));
        records.push_back(r);
    }
    return records;
}

MetricSeries parse_series_csv(std::istream& source) {
    std::string line;
    std::size_t lineno = 0;
    if (!std::getline(source, line)) throw ParseError("empty input, expected header");
    ++lineno;
    if (chomp(line) != kSeriesHeader)
        throw ParseError(std::string("expected header '") + kSeriesHeader + "'", lineno);

    MetricSeries series;
    while (std::getline(source, line)) {
        ++lineno;
        line = chomp(line);
        if (line.empty()) continue;
        auto fields = split_fields(line);
        if (fields.size() != 4)
            throw ParseError("expected 4 fields, got " + std::to_string(fields.size()), lineno);
        SeriesPoint p;
        p.n_cores = parse_int_field(fields[0], "n_cores", lineno);
        p.mean = parse_double_field(fields[1], "mean", lineno);
        p.stddev = parse_double_field(fields[2], "stddev", lineno);
        p.count = parse_int_field(fields[3], "count", lineno);
        if (p.n_cores < 1) throw ValidationError(error_at("non-positive core count", lineno));
        if (!(p.stddev >= 0.0)) throw ValidationError(error_at("negative stddev", lineno));
        if (p.count < 0) throw ValidationError(error_at("negative count", lineno));
        if (!series.points.empty() && p.n_cores <= series.points.back().n_cores)
            throw ValidationError(error_at("n_cores not strictly increasing", lineno));
        series.points.push_back(p);
    }
    return series;
}

std::string write_series_csv(const MetricSeries& series) {
    std::string out = kSeriesHeader;
    out += '\n';
    for (const auto& p : series.points) {
        out += std::to_string(p.n_cores);
        out += ',';
        append_shortest(out, p.mean);
        out += ',';
        append_shortest(out, p.stddev);
        out += ',';
        out += std::to_string(p.count);
        out += '\n';
    }
    return out;
}

MetricSeries augment_linear(const MetricSeries& series, int n_min, int n_max) {
    validate_series(series);
    if (series.points.size() < 2)
        throw ValidationError("augment_linear needs at least 2 observed points");
    if (n_min > n_max) throw ValidationError("empty augmentation range");
    const int lo = series.points.front().n_cores;
    const int hi = series.points.back().n_cores;
    if (n_min < lo || n_max > hi)
        throw ValidationError("augmentation range [" + std::to_string(n_min) + "," +
                              std::to_string(n_max) + "] outside observed span [" +
                              std::to_string(lo) + "," + std::to_string(hi) +
                              "]; no extrapolation");

    MetricSeries out;
    out.label = series.label;
    out.unit = series.unit;
    std::size_t seg = 0;  // segment [points[seg], points[seg+1]] brackets n
    auto interpolate = [&](int n) -> double {
        while (series.points[seg + 1].n_cores < n) ++seg;
        const auto& a = series.points[seg];
        const auto& b = series.points[seg + 1];
        const double t = static_cast<double>(n - a.n_cores) /
                         static_cast<double>(b.n_cores - a.n_cores);
        return a.mean + (b.mean - a.mean) * t;
    };

    std::size_t next_obs = 0;
    for (int n = lo; n <= hi; ++n) {
        const bool observed =
            next_obs < series.points.size() && series.points[next_obs].n_cores == n;
        if (observed) {
            out.points.push_back(series.points[next_obs]);
            ++next_obs;
        } else if (n >= n_min && n <= n_max) {
            out.points.push_back({n, interpolate(n), 0.0, 0});
        }
    }
    return out;
}

void validate_series(const MetricSeries& series, bool allow_synthetic) {
    int prev = 0;
    for (const auto& p : series.points) {
        if (p.n_cores < 1) throw ValidationError("non-positive core count in series");
        if (p.n_cores <= prev) throw ValidationError("n_cores not strictly increasing in series");
        if (!(p.stddev >= 0.0)) throw ValidationError("negative stddev in series");
        if (p.count < (allow_synthetic ? 0 : 1)) throw ValidationError("invalid point count");
        if (p.count <= 1 && p.stddev != 0.0)
            throw ValidationError("stddev must be 0 for single-replicate points");
        prev = p.n_cores;
    }
}

}  // namespace scalefit
