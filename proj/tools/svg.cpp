#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hetq/io.hpp"

namespace hetq::cli {
namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 500.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;
constexpr std::size_t kMaxVertices = 2000;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string fmt(double v) { return format_number(v, 6); }

// "nice" tick spacing: 1, 2 or 5 times a power of ten
double tick_step(double span) {
    if (!(span > 0.0)) return 1.0;
    const double raw = span / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double r = raw / mag;
    return (r < 1.5 ? 1.0 : r < 3.5 ? 2.0 : r < 7.5 ? 5.0 : 10.0) * mag;
}

}  // namespace

std::string render_line_chart(const std::string& title, const std::string& x_label, const std::string& y_label,
                              const std::vector<Series>& series) {
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, s.y[i]);
            ymax = std::max(ymax, s.y[i]);
        }
    }
    if (!std::isfinite(xmin)) xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;
    if (xmax == xmin) xmax = xmin + 1.0;
    if (ymax - ymin < 1e-12) {
        ymin -= 0.5;
        ymax += 0.5;
    } else {
        const double pad = 0.05 * (ymax - ymin);
        ymin -= pad;
        ymax += pad;
    }

    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    auto px = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * plot_w; };
    auto py = [&](double y) { return kTop + (ymax - y) / (ymax - ymin) * plot_h; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 500\" width=\"800\" height=\"500\" "
           "font-family=\"sans-serif\" font-size=\"12\">\n";
    svg << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"500\" fill=\"white\"/>\n";
    svg << "<text x=\"400\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << escape(title) << "</text>\n";

    const double xs = tick_step(xmax - xmin);
    for (double v = std::ceil(xmin / xs) * xs; v <= xmax + 1e-9 * xs; v += xs) {
        svg << "<line x1=\"" << fmt(px(v)) << "\" y1=\"" << fmt(kTop) << "\" x2=\"" << fmt(px(v)) << "\" y2=\""
            << fmt(kTop + plot_h) << "\" stroke=\"#e0e0e0\"/>\n";
        svg << "<text x=\"" << fmt(px(v)) << "\" y=\"" << fmt(kTop + plot_h + 18) << "\" text-anchor=\"middle\">"
            << fmt(std::abs(v) < 1e-12 * xs ? 0.0 : v) << "</text>\n";
    }
    const double ys = tick_step(ymax - ymin);
    for (double v = std::ceil(ymin / ys) * ys; v <= ymax + 1e-9 * ys; v += ys) {
        svg << "<line x1=\"" << fmt(kLeft) << "\" y1=\"" << fmt(py(v)) << "\" x2=\"" << fmt(kLeft + plot_w)
            << "\" y2=\"" << fmt(py(v)) << "\" stroke=\"#e0e0e0\"/>\n";
        svg << "<text x=\"" << fmt(kLeft - 8) << "\" y=\"" << fmt(py(v) + 4) << "\" text-anchor=\"end\">"
            << fmt(std::abs(v) < 1e-12 * ys ? 0.0 : v) << "</text>\n";
    }
    svg << "<rect x=\"" << fmt(kLeft) << "\" y=\"" << fmt(kTop) << "\" width=\"" << fmt(plot_w) << "\" height=\""
        << fmt(plot_h) << "\" fill=\"none\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << fmt(kLeft + plot_w / 2) << "\" y=\"" << fmt(kHeight - 15)
        << "\" text-anchor=\"middle\">" << escape(x_label) << "</text>\n";
    svg << "<text x=\"20\" y=\"" << fmt(kTop + plot_h / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
        << fmt(kTop + plot_h / 2) << ")\">" << escape(y_label) << "</text>\n";

    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const char* color = kPalette[k % std::size(kPalette)];
        const std::size_t stride = s.x.size() <= kMaxVertices ? 1 : (s.x.size() + kMaxVertices - 1) / kMaxVertices;
        svg << "<path fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" d=\"";
        for (std::size_t i = 0; i < s.x.size(); i += stride) {
            svg << (i == 0 ? 'M' : 'L') << fmt(px(s.x[i])) << ',' << fmt(py(s.y[i])) << ' ';
        }
        if (!s.x.empty() && (s.x.size() - 1) % stride != 0) {
            svg << 'L' << fmt(px(s.x.back())) << ',' << fmt(py(s.y.back()));
        }
        svg << "\"/>\n";
        const double ly = kTop + 16 + 16 * static_cast<double>(k);
        svg << "<line x1=\"" << fmt(kLeft + plot_w - 150) << "\" y1=\"" << fmt(ly) << "\" x2=\""
            << fmt(kLeft + plot_w - 125) << "\" y2=\"" << fmt(ly) << "\" stroke=\"" << color
            << "\" stroke-width=\"2\"/>\n";
        svg << "<text x=\"" << fmt(kLeft + plot_w - 120) << "\" y=\"" << fmt(ly + 4) << "\">" << escape(s.label)
            << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace hetq::cli
