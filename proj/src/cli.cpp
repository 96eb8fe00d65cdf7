#include "scalefit/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "scalefit/analysis.hpp"
#include "scalefit/error.hpp"
#include "scalefit/fitting.hpp"
#include "scalefit/ingest.hpp"
#include "scalefit/report.hpp"
#include "scalefit/svg_plot.hpp"

namespace scalefit {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("read failure on '" + path + "'");
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << content;
    out.flush();
    if (!out) throw IoError("write failure on '" + path + "'");
}

std::pair<int, int> parse_int_range(const std::string& text, const char* flag) {
    const auto pos = text.find(':');
    if (pos == std::string::npos || pos == 0 || pos + 1 >= text.size())
        throw ValidationError(std::string(flag) + " expects lo:hi, got '" + text + "'");
    try {
        return {std::stoi(text.substr(0, pos)), std::stoi(text.substr(pos + 1))};
    } catch (const std::exception&) {
        throw ValidationError(std::string(flag) + " expects integer lo:hi, got '" + text + "'");
    }
}

std::pair<double, double> parse_real_range(const std::string& text, const char* flag) {
    const auto pos = text.find(':');
    if (pos == std::string::npos || pos == 0 || pos + 1 >= text.size())
        throw ValidationError(std::string(flag) + " expects lo:hi, got '" + text + "'");
    try {
        return {std::stod(text.substr(0, pos)), std::stod(text.substr(pos + 1))};
    } catch (const std::exception&) {
        throw ValidationError(std::string(flag) + " expects numeric lo:hi, got '" + text + "'");
    }
}

MetricKind metric_from_name(const std::string& name) {
    if (name == "throughput") return MetricKind::throughput;
    if (name == "compute-rate") return MetricKind::compute_rate;
    if (name == "init") return MetricKind::init_s;
    if (name == "total") return MetricKind::total_s;
    if (name == "compute") return MetricKind::compute_s;
    throw ValidationError("unknown metric '" + name + "'");
}

struct CommonOptions {
    std::string input;
    std::string format = "runs-csv";
    std::string metric = "throughput";
    std::string out;
};

MetricSeries load_series(const CommonOptions& opts, const std::string& bytes,
                         std::size_t* record_count) {
    std::istringstream in(bytes);
    if (opts.format == "series-csv") {
        MetricSeries series = parse_series_csv(in);
        series.label = opts.metric;
        series.unit = metric_kind_unit(metric_from_name(opts.metric));
        std::size_t records = 0;
        for (const auto& p : series.points) records += static_cast<std::size_t>(p.count);
        if (record_count) *record_count = records;
        return series;
    }
    const auto records = parse_runs(
        in, opts.format == "runs-json" ? RunFormat::runs_json : RunFormat::runs_csv);
    if (records.empty()) throw ValidationError("no records");
    if (record_count) *record_count = records.size();
    return aggregate(records, metric_from_name(opts.metric));
}

int cmd_ingest(const CommonOptions& opts) {
    const std::string bytes = read_file(opts.input);
    std::istringstream in(bytes);
    const auto records = parse_runs(
        in, opts.format == "runs-json" ? RunFormat::runs_json : RunFormat::runs_csv);
    if (records.empty()) throw ValidationError("no records");
    const auto series = aggregate(records, metric_from_name(opts.metric));
    write_file(opts.out, write_series_csv(series));
    std::cout << "parsed " << records.size() << " records; wrote " << series.points.size()
              << " " << series.label << " points to " << opts.out << "\n";
    return exit_ok;
}

struct AnalyzeFlags {
    CommonOptions common;
    int base_n = 0;  // 0: smallest tested N
    std::string fit_range;
    double saturation_threshold = 0.10;
    bool superserial = false;
    std::string bounds;
    double efficiency_floor = -1.0;  // <0: unset
    std::string breakdown_path;
    std::string augment;
    bool weight_by_count = false;
    int max_iterations = 200;
    int grid = 50;
    int refine_top = 16;
    bool serial_fit = false;
    bool deterministic = false;
};

AnalysisReport build_report(const AnalyzeFlags& flags) {
    const std::string bytes = read_file(flags.common.input);
    std::size_t record_count = 0;
    const MetricSeries series = load_series(flags.common, bytes, &record_count);

    AnalyzeConfig config;
    config.metric = metric_from_name(flags.common.metric);
    if (flags.base_n > 0) config.base_n = flags.base_n;
    if (!flags.fit_range.empty())
        config.fit_range = parse_int_range(flags.fit_range, "--fit-range");
    config.saturation_threshold = flags.saturation_threshold;
    config.superserial = flags.superserial;
    if (!flags.bounds.empty())
        config.superserial_options.bounds = parse_real_range(flags.bounds, "--bounds");
    config.superserial_options.grid = flags.grid;
    config.superserial_options.refine_top = flags.refine_top;
    config.superserial_options.max_iterations = flags.max_iterations;
    config.superserial_options.parallel = !flags.serial_fit;
    if (flags.efficiency_floor >= 0.0) config.efficiency_floor = flags.efficiency_floor;
    config.power_options.weight_by_count = flags.weight_by_count;
    if (!flags.augment.empty()) config.augment = parse_int_range(flags.augment, "--augment");
    config.deterministic = flags.deterministic;

    std::vector<BreakdownRecord> breakdown;
    if (!flags.breakdown_path.empty()) {
        std::istringstream in(read_file(flags.breakdown_path));
        breakdown = parse_breakdown(in);
    }

    InputInfo input;
    input.path = flags.common.input;
    input.format = flags.common.format;
    input.digest = content_digest(bytes);
    input.records = record_count;
    input.points = series.points.size();

    return analyze(series, config, input, breakdown);
}

int cmd_analyze(const AnalyzeFlags& flags) {
    const AnalysisReport report = build_report(flags);
    const std::string out = flags.common.out.empty() ? "report.json" : flags.common.out;
    write_file(out, report_to_json(report));
    std::cout << report_summary_text(report);
    std::cout << "report written to " << out << "\n";
    return exit_ok;
}

struct PlotFlags {
    std::string report_path;
    std::vector<std::string> series_paths;
    std::string out;
    std::string title = "scaling";
};

PowerLawFit fit_from_json(const nlohmann::json& j) {
    PowerLawFit fit;
    fit.a = j.at("a").get<double>();
    fit.b = j.at("b").get<double>();
    fit.r_squared = j.at("r_squared").get<double>();
    fit.fit_range = {j.at("fit_range")[0].get<int>(), j.at("fit_range")[1].get<int>()};
    return fit;
}

int cmd_plot(const PlotFlags& flags) {
    std::vector<PlotSeries> series;
    PlotOptions options;
    options.title = flags.title;
    options.x_label = "cores";

    if (!flags.report_path.empty()) {
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(read_file(flags.report_path));
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError(std::string("invalid report JSON: ") + e.what());
        }
        try {
            PlotSeries ps;
            ps.name = doc.at("series").at("label").get<std::string>();
            for (const auto& pt : doc.at("capacity").at("points"))
                ps.points.emplace_back(pt[0].get<double>(), pt[1].get<double>());
            ps.fit = fit_from_json(doc.at("power_fit"));
            series.push_back(std::move(ps));
            const auto& sat = doc.at("saturation").at("saturation_n");
            if (!sat.is_null()) options.saturation_n = sat.get<int>();
            options.y_label = "normalized " + series.front().name;
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(std::string("report JSON missing expected fields: ") + e.what());
        }
    }

    for (const auto& path : flags.series_paths) {
        std::istringstream in(read_file(path));
        const MetricSeries ms = parse_series_csv(in);
        PlotSeries ps;
        ps.name = path;
        for (const auto& p : ms.points)
            ps.points.emplace_back(static_cast<double>(p.n_cores), p.mean);
        bool fittable = ps.points.size() >= 2;
        for (const auto& [n, v] : ps.points) fittable = fittable && v > 0.0;
        if (fittable) ps.fit = fit_powerlaw(ms);
        series.push_back(std::move(ps));
        if (options.y_label.empty()) options.y_label = "value";
    }

    if (series.empty()) throw ValidationError("plot needs --report or --series input");

    // Data tables are always written, even when the graphic is refused.
    for (std::size_t i = 0; i < series.size(); ++i) {
        const std::string path =
            flags.out + (i == 0 ? "" : "_s" + std::to_string(i + 1)) + ".csv";
        write_file(path, plot_data_csv(series[i].points, series[i].fit));
        std::cout << "plot data written to " << path << "\n";
    }

    const std::string svg = render_loglog_svg(series, options);
    write_file(flags.out + ".svg", svg);
    std::cout << "plot written to " << flags.out << ".svg\n";
    return exit_ok;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"scalability assessment from short benchmark runs", "scalefit"};
    app.set_config("--config", "", "read options from an INI/TOML file");
    app.require_subcommand(1);

    CommonOptions ingest_opts;
    auto* ingest = app.add_subcommand("ingest", "parse runs and write an aggregated series file");
    ingest->add_option("input", ingest_opts.input, "runs file")->required();
    ingest->add_option("--format", ingest_opts.format, "input format")
        ->check(CLI::IsMember({"runs-csv", "runs-json"}))
        ->capture_default_str();
    ingest->add_option("--metric", ingest_opts.metric, "derived metric to aggregate")
        ->check(CLI::IsMember({"throughput", "compute-rate", "init", "total", "compute"}))
        ->capture_default_str();
    ingest->add_option("--out", ingest_opts.out, "output series-csv path")->required();

    AnalyzeFlags an;
    auto* analyze_cmd = app.add_subcommand("analyze", "full scalability analysis and report");
    analyze_cmd->add_option("input", an.common.input, "runs or series file")->required();
    analyze_cmd->add_option("--format", an.common.format, "input format")
        ->check(CLI::IsMember({"runs-csv", "runs-json", "series-csv"}))
        ->capture_default_str();
    analyze_cmd->add_option("--metric", an.common.metric, "metric to analyze")
        ->check(CLI::IsMember({"throughput", "compute-rate", "init", "total", "compute"}))
        ->capture_default_str();
    analyze_cmd->add_option("--base-n", an.base_n, "normalization base core count (default: smallest tested)");
    analyze_cmd->add_option("--fit-range", an.fit_range, "restrict the power fit to lo:hi cores");
    analyze_cmd->add_option("--saturation-threshold", an.saturation_threshold,
                            "relative deviation marking saturation")
        ->capture_default_str();
    analyze_cmd->add_flag("--superserial", an.superserial, "also fit the superserial model");
    analyze_cmd->add_option("--bounds", an.bounds, "superserial parameter search box lo:hi");
    analyze_cmd->add_option("--efficiency-floor", an.efficiency_floor,
                            "recommend the largest N with efficiency above this floor");
    analyze_cmd->add_option("--breakdown", an.breakdown_path, "breakdown-csv for bound classification");
    analyze_cmd->add_option("--augment", an.augment, "densify the series to integer N in lo:hi");
    analyze_cmd->add_flag("--weight-by-count", an.weight_by_count,
                          "weight the power fit by replicate count");
    analyze_cmd->add_option("--max-iter", an.max_iterations, "superserial iteration cap")
        ->capture_default_str();
    analyze_cmd->add_option("--grid", an.grid, "superserial multi-start grid per axis")
        ->capture_default_str();
    analyze_cmd->add_option("--refine-top", an.refine_top, "starts refined by Gauss-Newton")
        ->capture_default_str();
    analyze_cmd->add_flag("--serial-fit", an.serial_fit, "force the serial fitting kernel");
    analyze_cmd->add_flag("--deterministic", an.deterministic,
                          "pin timestamps for byte-identical reports");
    analyze_cmd->add_option("--out", an.common.out, "report path (default report.json)");

    PlotFlags plot_flags;
    auto* plot = app.add_subcommand("plot", "emit plot data and a log-log SVG chart");
    plot->add_option("--report", plot_flags.report_path, "analysis report to plot");
    plot->add_option("--series", plot_flags.series_paths, "series-csv to plot (repeatable)");
    plot->add_option("--out", plot_flags.out, "output path prefix")->required();
    plot->add_option("--title", plot_flags.title, "chart title")->capture_default_str();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_input_error;
    }

    try {
        if (ingest->parsed()) return cmd_ingest(ingest_opts);
        if (analyze_cmd->parsed()) return cmd_analyze(an);
        return cmd_plot(plot_flags);
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_io_error;
    } catch (const FitError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_fit_error;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_input_error;
    }
}

int run_cli(int argc, const char* const* argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run_cli(args);
}

}  // namespace scalefit
