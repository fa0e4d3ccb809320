#pragma once

#include <string>
#include <vector>

namespace hetq::cli {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

/// Static line chart in a fixed 800x500 viewBox. Each series is thinned to at
/// most 2000 vertices.
[[nodiscard]] std::string render_line_chart(const std::string& title, const std::string& x_label,
                                            const std::string& y_label, const std::vector<Series>& series);

}  // namespace hetq::cli
