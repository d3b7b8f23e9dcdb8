#include "rydeo/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "rydeo/errors.hpp"

namespace rydeo::svg {
namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

struct Range {
    double lo = 0.0;
    double hi = 1.0;
};

Range padded(double lo, double hi) {
    if (!(std::isfinite(lo) && std::isfinite(hi))) {
        throw ValidationError("svg: non-finite data range");
    }
    if (lo == hi) {
        const double pad = (lo == 0.0) ? 1.0 : std::abs(lo) * 0.1;
        return {lo - pad, hi + pad};
    }
    const double pad = (hi - lo) * 0.05;
    return {lo - pad, hi + pad};
}

// Round tick spacing to 1/2/5 times a power of ten.
std::vector<double> ticks(const Range& r, int target) {
    const double raw = (r.hi - r.lo) / std::max(target, 2);
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        if (m * mag >= raw) {
            step = m * mag;
            break;
        }
    }
    std::vector<double> out;
    double t = std::ceil(r.lo / step) * step;
    for (; t <= r.hi + step * 1e-9; t += step) {
        out.push_back(std::abs(t) < step * 1e-9 ? 0.0 : t);
    }
    return out;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

std::string line_plot(const std::string& title, const std::string& x_label,
                      const std::string& y_label,
                      const std::vector<Series>& series, int width,
                      int height) {
    if (series.empty()) throw ValidationError("svg: no series");
    double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
    double y_lo = x_lo, y_hi = -x_lo;
    for (const auto& s : series) {
        if (!s.x || !s.y || s.x->size() != s.y->size() || s.x->empty()) {
            throw ValidationError("svg: malformed series");
        }
        // Checked per sample: NaN would slip through the min/max below.
        for (double v : *s.x) {
            if (!std::isfinite(v)) throw ValidationError("svg: non-finite data");
            x_lo = std::min(x_lo, v);
            x_hi = std::max(x_hi, v);
        }
        for (double v : *s.y) {
            if (!std::isfinite(v)) throw ValidationError("svg: non-finite data");
            y_lo = std::min(y_lo, v);
            y_hi = std::max(y_hi, v);
        }
    }
    const Range xr = padded(x_lo, x_hi);
    const Range yr = padded(y_lo, y_hi);

    const double ml = 84, mr = 24, mt = 42, mb = 58;
    const double pw = width - ml - mr, ph = height - mt - mb;
    auto px = [&](double v) { return ml + (v - xr.lo) / (xr.hi - xr.lo) * pw; };
    auto py = [&](double v) { return mt + (yr.hi - v) / (yr.hi - yr.lo) * ph; };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
        << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " "
        << height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"15\">" << escape(title)
        << "</text>\n";

    for (double t : ticks(xr, 7)) {
        const double x = px(t);
        out << "<line x1=\"" << fmt(x) << "\" y1=\"" << fmt(mt) << "\" x2=\""
            << fmt(x) << "\" y2=\"" << fmt(mt + ph)
            << "\" stroke=\"#dddddd\"/>\n";
        out << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(mt + ph + 18)
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
            << "font-size=\"11\">" << fmt(t) << "</text>\n";
    }
    for (double t : ticks(yr, 6)) {
        const double y = py(t);
        out << "<line x1=\"" << fmt(ml) << "\" y1=\"" << fmt(y) << "\" x2=\""
            << fmt(ml + pw) << "\" y2=\"" << fmt(y)
            << "\" stroke=\"#dddddd\"/>\n";
        out << "<text x=\"" << fmt(ml - 6) << "\" y=\"" << fmt(y + 4)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
            << "font-size=\"11\">" << fmt(t) << "</text>\n";
    }
    out << "<rect x=\"" << fmt(ml) << "\" y=\"" << fmt(mt) << "\" width=\""
        << fmt(pw) << "\" height=\"" << fmt(ph)
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    out << "<text x=\"" << width / 2 << "\" y=\"" << height - 14
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        << "font-size=\"13\">" << escape(x_label) << "</text>\n";
    out << "<text x=\"20\" y=\"" << height / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        << "font-size=\"13\" transform=\"rotate(-90 20 " << height / 2
        << ")\">" << escape(y_label) << "</text>\n";

    int legend_row = 0;
    for (const auto& s : series) {
        out << "<polyline fill=\"none\" stroke=\"" << s.color
            << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x->size(); ++i) {
            if (i) out << ' ';
            out << fmt(px((*s.x)[i])) << ',' << fmt(py((*s.y)[i]));
        }
        out << "\"/>\n";
        if (!s.label.empty() && series.size() > 1) {
            const double ly = mt + 16 + 16 * legend_row++;
            out << "<line x1=\"" << fmt(ml + pw - 150) << "\" y1=\"" << fmt(ly)
                << "\" x2=\"" << fmt(ml + pw - 126) << "\" y2=\"" << fmt(ly)
                << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"/>\n";
            out << "<text x=\"" << fmt(ml + pw - 120) << "\" y=\"" << fmt(ly + 4)
                << "\" font-family=\"sans-serif\" font-size=\"11\">"
                << escape(s.label) << "</text>\n";
        }
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace rydeo::svg
