#include "bqlab/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace bq::plot {

namespace {

constexpr double width = 640, height = 440;
constexpr double left = 80, right = 30, top = 40, bottom = 60;
const char* const palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string escape(const std::string& s)
{
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

struct Axis {
    bool log;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    bool usable(double v) const { return std::isfinite(v) && (!log || v > 0); }
    double map(double v) const { return log ? std::log10(v) : v; }
    void include(double v)
    {
        if (!usable(v)) return;
        lo = std::min(lo, map(v));
        hi = std::max(hi, map(v));
    }
    void finish()
    {
        if (!(lo <= hi)) lo = 0, hi = 1;
        if (hi - lo < 1e-12) lo -= 0.5, hi += 0.5;
        const double pad = 0.05 * (hi - lo);
        lo -= pad;
        hi += pad;
    }
    double frac(double v) const { return (map(v) - lo) / (hi - lo); }
    std::vector<double> ticks() const
    {
        std::vector<double> out;
        if (log) {
            for (int e = static_cast<int>(std::ceil(lo)); e <= std::floor(hi); ++e)
                out.push_back(std::pow(10.0, e));
            if (out.size() < 2) out = {std::pow(10.0, lo + 0.05 * (hi - lo) / 1.1), std::pow(10.0, hi - 0.05 * (hi - lo) / 1.1)};
            return out;
        }
        const double span = hi - lo;
        const double step0 = std::pow(10.0, std::floor(std::log10(span / 5)));
        double step = step0;
        for (double m : {1.0, 2.0, 5.0, 10.0})
            if (span / (m * step0) <= 6) {
                step = m * step0;
                break;
            }
        for (double v = std::ceil(lo / step) * step; v <= hi; v += step) out.push_back(std::abs(v) < 1e-14 * step ? 0.0 : v);
        return out;
    }
};

} // namespace

std::string render_svg(const PlotSpec& spec)
{
    Axis ax{spec.log_x}, ay{spec.log_y};
    for (const auto& s : spec.series)
        for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i)
            if (ax.usable(s.x[i]) && ay.usable(s.y[i])) {
                ax.include(s.x[i]);
                ay.include(s.y[i]);
            }
    ax.finish();
    ay.finish();
    const double pw = width - left - right, ph = height - top - bottom;
    auto px = [&](double v) { return left + ax.frac(v) * pw; };
    auto py = [&](double v) { return top + (1.0 - ay.frac(v)) * ph; };

    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
      << escape(spec.title) << "</text>\n";
    o << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (double t : ax.ticks()) {
        const double x = px(t);
        o << "<line x1=\"" << num(x) << "\" y1=\"" << top + ph << "\" x2=\"" << num(x) << "\" y2=\""
          << top + ph + 5 << "\" stroke=\"black\"/>\n";
        o << "<text x=\"" << num(x) << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\">"
          << num(t) << "</text>\n";
    }
    for (double t : ay.ticks()) {
        const double y = py(t);
        o << "<line x1=\"" << left - 5 << "\" y1=\"" << num(y) << "\" x2=\"" << left << "\" y2=\""
          << num(y) << "\" stroke=\"black\"/>\n";
        o << "<text x=\"" << left - 8 << "\" y=\"" << num(y + 4) << "\" text-anchor=\"end\">"
          << num(t) << "</text>\n";
    }
    o << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 15 << "\" text-anchor=\"middle\">"
      << escape(spec.xlabel) << "</text>\n";
    o << "<text transform=\"translate(18," << top + ph / 2
      << ") rotate(-90)\" text-anchor=\"middle\">" << escape(spec.ylabel) << "</text>\n";

    for (std::size_t k = 0; k < spec.series.size(); ++k) {
        const Series& s = spec.series[k];
        const char* colour = palette[k % 5];
        std::string pts;
        for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
            if (!ax.usable(s.x[i]) || !ay.usable(s.y[i])) continue;
            pts += num(px(s.x[i])) + "," + num(py(s.y[i])) + " ";
            if (s.markers)
                o << "<circle cx=\"" << num(px(s.x[i])) << "\" cy=\"" << num(py(s.y[i]))
                  << "\" r=\"3.5\" fill=\"" << colour << "\"/>\n";
        }
        if (!s.markers && !pts.empty())
            o << "<polyline points=\"" << pts << "\" fill=\"none\" stroke=\"" << colour
              << "\" stroke-width=\"1.5\"/>\n";
        const double ly = top + 16 + 16 * k;
        o << "<text x=\"" << left + pw - 10 << "\" y=\"" << ly << "\" text-anchor=\"end\" fill=\""
          << colour << "\">" << escape(s.label) << "</text>\n";
    }
    o << "</svg>\n";
    return o.str();
}

void write_svg(const std::string& path, const PlotSpec& spec)
{
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write plot file " + path);
    f << render_svg(spec);
}

} // namespace bq::plot
