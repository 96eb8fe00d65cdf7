#include "scalefit/svg_plot.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "scalefit/error.hpp"

namespace scalefit {

namespace {

std::string px(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 2);
    return std::string(buf, ptr);
}

std::string gnum(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 6);
    return std::string(buf, ptr);
}

void append_shortest(std::string& out, double v) {
    if (std::isnan(v)) {
        out += "nan";
        return;
    }
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, ptr);
}

constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b"};

}  // namespace

std::string plot_data_csv(const std::vector<std::pair<double, double>>& points,
                          const std::optional<PowerLawFit>& fit) {
    std::string out = "n_cores,observed,fitted,deviation_pct\n";
    for (const auto& [n, observed] : points) {
        const double fitted = fit ? fit->predict(n) : std::nan("");
        const double dev = fit ? 100.0 * (observed - fitted) / fitted : std::nan("");
        append_shortest(out, n);
        out += ',';
        append_shortest(out, observed);
        out += ',';
        append_shortest(out, fitted);
        out += ',';
        append_shortest(out, dev);
        out += '\n';
    }
    return out;
}

std::string render_loglog_svg(const std::vector<PlotSeries>& series, const PlotOptions& options) {
    std::size_t total = 0;
    double x_lo = 0, x_hi = 0, y_lo = 0, y_hi = 0;
    bool first = true;
    for (const auto& s : series) {
        for (const auto& [x, y] : s.points) {
            if (!(x > 0.0) || !(y > 0.0))
                throw ValidationError("log-log plot needs positive coordinates");
            if (first) {
                x_lo = x_hi = x;
                y_lo = y_hi = y;
                first = false;
            } else {
                x_lo = std::min(x_lo, x);
                x_hi = std::max(x_hi, x);
                y_lo = std::min(y_lo, y);
                y_hi = std::max(y_hi, y);
            }
            ++total;
        }
    }
    if (total < 2) throw ValidationError("insufficient points for a plot (need at least 2)");

    // Leave room for the linear reference and fit lines.
    if (options.linear_reference && !series.empty() && !series.front().points.empty()) {
        const auto& [x0, y0] = series.front().points.front();
        y_hi = std::max(y_hi, y0 * (x_hi / x0));
    }

    double lx0 = std::log10(x_lo), lx1 = std::log10(x_hi);
    double ly0 = std::log10(y_lo), ly1 = std::log10(y_hi);
    if (lx1 - lx0 < 1e-12) lx1 = lx0 + 1.0;
    if (ly1 - ly0 < 1e-12) ly1 = ly0 + 1.0;
    const double pad_x = 0.05 * (lx1 - lx0);
    const double pad_y = 0.05 * (ly1 - ly0);
    lx0 -= pad_x;
    lx1 += pad_x;
    ly0 -= pad_y;
    ly1 += pad_y;

    const double ml = 72, mr = 24, mt = 36, mb = 52;
    const double w = options.width, h = options.height;
    const double pw = w - ml - mr, ph = h - mt - mb;

    auto sx = [&](double x) { return ml + (std::log10(x) - lx0) / (lx1 - lx0) * pw; };
    auto sy = [&](double y) { return mt + ph - (std::log10(y) - ly0) / (ly1 - ly0) * ph; };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + px(w) + "\" height=\"" + px(h) +
           "\" viewBox=\"0 0 " + px(w) + " " + px(h) + "\">\n";
    svg += "<rect width=\"" + px(w) + "\" height=\"" + px(h) + "\" fill=\"white\"/>\n";
    svg += "<text x=\"" + px(w / 2) + "\" y=\"20\" text-anchor=\"middle\" font-family=\"sans-serif\""
           " font-size=\"14\">" + options.title + "</text>\n";

    // Decade gridlines and tick labels.
    for (int e = static_cast<int>(std::ceil(lx0)); e <= static_cast<int>(std::floor(lx1)); ++e) {
        const double x = sx(std::pow(10.0, e));
        svg += "<line x1=\"" + px(x) + "\" y1=\"" + px(mt) + "\" x2=\"" + px(x) + "\" y2=\"" +
               px(mt + ph) + "\" stroke=\"#dddddd\"/>\n";
        svg += "<text x=\"" + px(x) + "\" y=\"" + px(mt + ph + 16) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
               gnum(std::pow(10.0, e)) + "</text>\n";
    }
    for (int e = static_cast<int>(std::ceil(ly0)); e <= static_cast<int>(std::floor(ly1)); ++e) {
        const double y = sy(std::pow(10.0, e));
        svg += "<line x1=\"" + px(ml) + "\" y1=\"" + px(y) + "\" x2=\"" + px(ml + pw) + "\" y2=\"" +
               px(y) + "\" stroke=\"#dddddd\"/>\n";
        svg += "<text x=\"" + px(ml - 6) + "\" y=\"" + px(y + 4) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" +
               gnum(std::pow(10.0, e)) + "</text>\n";
    }

    svg += "<rect x=\"" + px(ml) + "\" y=\"" + px(mt) + "\" width=\"" + px(pw) + "\" height=\"" +
           px(ph) + "\" fill=\"none\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + px(ml + pw / 2) + "\" y=\"" + px(h - 10) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" +
           options.x_label + "</text>\n";
    svg += "<text x=\"16\" y=\"" + px(mt + ph / 2) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 16 " +
           px(mt + ph / 2) + ")\">" + options.y_label + "</text>\n";

    // Linear-scaling reference through the first observed point, slope 1.
    if (options.linear_reference && !series.empty() && !series.front().points.empty()) {
        const auto& [x0, y0] = series.front().points.front();
        const double xa = std::pow(10.0, lx0 + 1e-9), xb = std::pow(10.0, lx1 - 1e-9);
        auto clip_y = [&](double x) { return y0 * (x / x0); };
        svg += "<line x1=\"" + px(sx(xa)) + "\" y1=\"" + px(sy(clip_y(xa))) + "\" x2=\"" +
               px(sx(xb)) + "\" y2=\"" + px(sy(clip_y(xb))) +
               "\" stroke=\"#888888\" stroke-dasharray=\"10,6\"/>\n";
    }

    if (options.saturation_n) {
        const double x = sx(static_cast<double>(*options.saturation_n));
        svg += "<line x1=\"" + px(x) + "\" y1=\"" + px(mt) + "\" x2=\"" + px(x) + "\" y2=\"" +
               px(mt + ph) + "\" stroke=\"#e08000\" stroke-dasharray=\"2,3\"/>\n";
        svg += "<text x=\"" + px(x + 4) + "\" y=\"" + px(mt + 14) +
               "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#e08000\">saturation N=" +
               std::to_string(*options.saturation_n) + "</text>\n";
    }

    for (std::size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        const char* color = kColors[si % (sizeof kColors / sizeof kColors[0])];

        if (s.fit && !s.points.empty()) {
            // Power-fit line across the span of this series.
            double fx0 = s.points.front().first, fx1 = s.points.front().first;
            for (const auto& [x, y] : s.points) {
                fx0 = std::min(fx0, x);
                fx1 = std::max(fx1, x);
            }
            std::string path;
            const int segments = 64;
            for (int k = 0; k <= segments; ++k) {
                const double lx = std::log10(fx0) +
                                  (std::log10(fx1) - std::log10(fx0)) * k / segments;
                const double x = std::pow(10.0, lx);
                const double y = s.fit->predict(x);
                path += (k == 0 ? "M" : " L");
                path += px(sx(x)) + " " + px(sy(y));
            }
            svg += "<path d=\"" + path + "\" fill=\"none\" stroke=\"" + color +
                   "\" stroke-dasharray=\"4,3\"/>\n";
        }

        for (const auto& [x, y] : s.points) {
            const double cx = sx(x), cy = sy(y);
            switch (si % 3) {
                case 0:
                    svg += "<circle cx=\"" + px(cx) + "\" cy=\"" + px(cy) +
                           "\" r=\"3.5\" fill=\"" + color + "\"/>\n";
                    break;
                case 1:
                    svg += "<rect x=\"" + px(cx - 3) + "\" y=\"" + px(cy - 3) +
                           "\" width=\"6\" height=\"6\" fill=\"" + color + "\"/>\n";
                    break;
                default:
                    svg += "<path d=\"M" + px(cx) + " " + px(cy - 4) + " L" + px(cx + 4) + " " +
                           px(cy + 3) + " L" + px(cx - 4) + " " + px(cy + 3) + " Z\" fill=\"" +
                           color + "\"/>\n";
            }
        }

        std::string label = s.name;
        if (s.fit)
            label += "  fit " + gnum(s.fit->b) + "*N^" + gnum(s.fit->a);
        svg += "<text x=\"" + px(ml + 10) + "\" y=\"" + px(mt + 16 + 15 * static_cast<double>(si)) +
               "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" + color + "\">" + label +
               "</text>\n";
    }

    svg += "</svg>\n";
    return svg;
}

}  // namespace scalefit
