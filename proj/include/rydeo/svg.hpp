#pragma once

#include <string>
#include <vector>

namespace rydeo::svg {

struct Series {
    std::string label;
    std::string color = "#1f77b4";
    const std::vector<double>* x = nullptr;
    const std::vector<double>* y = nullptr;
};

// Self-contained line plot with axes, ticks and labels. Output is
// deterministic for identical inputs.
std::string line_plot(const std::string& title, const std::string& x_label,
                      const std::string& y_label,
                      const std::vector<Series>& series, int width = 860,
                      int height = 520);

}  // namespace rydeo::svg
