#pragma once

#include <span>
#include <string>

namespace avgbin::harness {

// Self-contained SVG line chart of one series, axes scaled to the data.
std::string svg_line_chart(std::span<const double> x, std::span<const double> y, const std::string& title,
                           const std::string& x_label, const std::string& y_label);

}  // namespace avgbin::harness
