#include "osilp/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "osilp/errors.hpp"

namespace osilp {
namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
constexpr int kPaletteN = 8;

constexpr double kW = 860.0, kH = 540.0;
constexpr double kML = 78.0, kMR = 24.0, kMT = 46.0, kMB = 58.0;

std::string esc(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string num(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// Round a raw step to 1/2/5 times a power of ten.
double nice_step(double raw) {
    if (!(raw > 0.0)) return 1.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double frac = raw / mag;
    double n = 10.0;
    if (frac <= 1.0) n = 1.0;
    else if (frac <= 2.0) n = 2.0;
    else if (frac <= 5.0) n = 5.0;
    return n * mag;
}

struct Axis {
    double lo = 0.0, hi = 1.0;
    bool log10 = false;

    double frac(double v) const {
        double a = lo, b = hi, x = v;
        if (log10) { a = std::log10(lo); b = std::log10(hi); x = std::log10(v); }
        if (!(b > a)) return 0.5;
        return (x - a) / (b - a);
    }
};

void tick_values(const Axis& ax, std::vector<double>& out) {
    out.clear();
    if (ax.log10) {
        // decade ticks; subdivide with 2 and 5 when few decades
        const int e0 = static_cast<int>(std::floor(std::log10(ax.lo)));
        const int e1 = static_cast<int>(std::ceil(std::log10(ax.hi)));
        const bool dense = (e1 - e0) <= 3;
        for (int e = e0; e <= e1; ++e) {
            const double base = std::pow(10.0, e);
            for (double mult : {1.0, 2.0, 5.0}) {
                if (!dense && mult != 1.0) continue;
                const double v = mult * base;
                if (v >= ax.lo * (1 - 1e-12) && v <= ax.hi * (1 + 1e-12)) out.push_back(v);
            }
        }
        std::sort(out.begin(), out.end());
        return;
    }
    const double step = nice_step((ax.hi - ax.lo) / 5.0);
    double v = std::ceil(ax.lo / step) * step;
    for (; v <= ax.hi + 0.5 * step; v += step) {
        double t = v;
        if (std::fabs(t) < 1e-12 * step) t = 0.0;
        out.push_back(t);
        if (out.size() > 40) break;
    }
}

}  // namespace

void write_svg_plot(const std::string& path, const std::string& title,
                    const std::string& xlabel, const std::string& ylabel,
                    const std::vector<PlotSeries>& series, bool log_x) {
    const double inf = std::numeric_limits<double>::infinity();
    double xmin = inf, xmax = -inf, ymin = inf, ymax = -inf;
    bool any = false;
    for (const auto& s : series) {
        if (s.x.size() != s.y.size()) throw dim_error("svg: x/y length mismatch");
        if (!s.lo.empty() && (s.lo.size() != s.x.size() || s.hi.size() != s.x.size()))
            throw dim_error("svg: band length mismatch");
        for (size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            any = true;
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            double yl = s.y[i], yh = s.y[i];
            if (!s.lo.empty() && std::isfinite(s.lo[i])) yl = std::min(yl, s.lo[i]);
            if (!s.hi.empty() && std::isfinite(s.hi[i])) yh = std::max(yh, s.hi[i]);
            ymin = std::min(ymin, yl);
            ymax = std::max(ymax, yh);
        }
    }
    if (!any) { xmin = 0; xmax = 1; ymin = 0; ymax = 1; }
    if (log_x && !(xmin > 0.0)) log_x = false;

    Axis ax, ay;
    ax.log10 = log_x;
    if (log_x) {
        ax.lo = xmin / 1.05;
        ax.hi = xmax * 1.05;
        if (!(ax.hi > ax.lo)) { ax.lo = xmin * 0.5; ax.hi = xmax * 2.0; }
    } else {
        double pad = 0.05 * (xmax - xmin);
        if (!(pad > 0.0)) pad = (xmax == 0.0) ? 1.0 : 0.1 * std::fabs(xmax);
        ax.lo = xmin - pad;
        ax.hi = xmax + pad;
    }
    {
        double pad = 0.07 * (ymax - ymin);
        if (!(pad > 0.0)) pad = (ymax == 0.0) ? 1.0 : 0.1 * std::fabs(ymax);
        ay.lo = ymin - pad;
        ay.hi = ymax + pad;
    }

    const double pw = kW - kML - kMR, ph = kH - kMT - kMB;
    auto X = [&](double v) { return kML + pw * ax.frac(v); };
    auto Y = [&](double v) { return kMT + ph * (1.0 - ay.frac(v)); };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
       << "\" viewBox=\"0 0 " << kW << " " << kH << "\">\n";
    os << "<rect width=\"" << kW << "\" height=\"" << kH << "\" fill=\"white\"/>\n";
    os << "<text x=\"" << kW / 2 << "\" y=\"26\" text-anchor=\"middle\" "
          "font-family=\"sans-serif\" font-size=\"16\">" << esc(title) << "</text>\n";

    std::vector<double> ticks;
    tick_values(ax, ticks);
    for (double v : ticks) {
        const double px = X(v);
        os << "<line x1=\"" << num(px) << "\" y1=\"" << num(kMT) << "\" x2=\"" << num(px)
           << "\" y2=\"" << num(kMT + ph) << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
        os << "<text x=\"" << num(px) << "\" y=\"" << num(kMT + ph + 18)
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << num(v)
           << "</text>\n";
    }
    tick_values(ay, ticks);
    for (double v : ticks) {
        const double py = Y(v);
        os << "<line x1=\"" << num(kML) << "\" y1=\"" << num(py) << "\" x2=\"" << num(kML + pw)
           << "\" y2=\"" << num(py) << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
        os << "<text x=\"" << num(kML - 6) << "\" y=\"" << num(py + 4)
           << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << num(v)
           << "</text>\n";
    }

    os << "<rect x=\"" << kML << "\" y=\"" << kMT << "\" width=\"" << pw << "\" height=\"" << ph
       << "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
    os << "<text x=\"" << kML + pw / 2 << "\" y=\"" << kH - 14
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << esc(xlabel)
       << "</text>\n";
    os << "<text x=\"20\" y=\"" << kMT + ph / 2
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
          "transform=\"rotate(-90 20 " << kMT + ph / 2 << ")\">" << esc(ylabel) << "</text>\n";

    for (size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        const char* color = kPalette[si % kPaletteN];
        if (!s.lo.empty() && s.x.size() >= 2) {
            os << "<path d=\"";
            for (size_t i = 0; i < s.x.size(); ++i)
                os << (i == 0 ? 'M' : 'L') << num(X(s.x[i])) << ' ' << num(Y(s.lo[i]));
            for (size_t i = s.x.size(); i-- > 0;) os << 'L' << num(X(s.x[i])) << ' ' << num(Y(s.hi[i]));
            os << "Z\" fill=\"" << color << "\" fill-opacity=\"0.15\" stroke=\"none\"/>\n";
        }
        if (s.x.size() >= 2) {
            os << "<path d=\"";
            for (size_t i = 0; i < s.x.size(); ++i)
                os << (i == 0 ? 'M' : 'L') << num(X(s.x[i])) << ' ' << num(Y(s.y[i]));
            os << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.8\"/>\n";
        }
        for (size_t i = 0; i < s.x.size(); ++i)
            os << "<circle cx=\"" << num(X(s.x[i])) << "\" cy=\"" << num(Y(s.y[i]))
               << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    }

    // legend, top-right inside the frame
    const double lx = kML + pw - 180, ly0 = kMT + 12;
    for (size_t si = 0; si < series.size(); ++si) {
        const double ly = ly0 + 18.0 * static_cast<double>(si);
        const char* color = kPalette[si % kPaletteN];
        os << "<line x1=\"" << num(lx) << "\" y1=\"" << num(ly) << "\" x2=\"" << num(lx + 26)
           << "\" y2=\"" << num(ly) << "\" stroke=\"" << color << "\" stroke-width=\"2.5\"/>\n";
        os << "<text x=\"" << num(lx + 32) << "\" y=\"" << num(ly + 4)
           << "\" font-family=\"sans-serif\" font-size=\"12\">" << esc(series[si].name)
           << "</text>\n";
    }
    os << "</svg>\n";

    std::ofstream f(path, std::ios::binary);
    if (!f) throw config_error("svg: cannot open for writing: " + path);
    f << os.str();
    if (!f) throw config_error("svg: write failed: " + path);
}

}  // namespace osilp
