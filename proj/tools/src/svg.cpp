#include "modelavg_cli/svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "modelavg/format.hpp"

namespace modelavg::cli {

namespace {

constexpr double kWidth = 720, kHeight = 460;
constexpr double kLeft = 70, kRight = 170, kTop = 40, kBottom = 60;

std::string escape(const std::string& s) {
    std::string out;
    for (char ch : s) {
        switch (ch) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += ch;
        }
    }
    return out;
}

const char* dasharray(LineStyle s) {
    switch (s) {
    case LineStyle::Dashed: return "8,5";
    case LineStyle::Dotted: return "2,4";
    case LineStyle::DotDash: return "10,4,2,4";
    case LineStyle::Solid: break;
    }
    return nullptr;
}

double nice_step(double span, int target) {
    const double raw = span / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double f : {1.0, 2.0, 2.5, 5.0})
        if (raw <= f * mag) return f * mag;
    return 10.0 * mag;
}

std::string num(double v) {
    // two decimals are plenty for pixel coordinates
    return format_double(std::round(v * 100.0) / 100.0);
}

} // namespace

void write_svg(std::ostream& out, const PlotSpec& plot) {
    auto tx = [&](double x) { return plot.log_x ? std::log10(x) : x; };
    double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo, ylo = xlo, yhi = -xlo;
    for (const auto& s : plot.series) {
        for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i]) || (plot.log_x && s.x[i] <= 0)) continue;
            xlo = std::min(xlo, tx(s.x[i]));
            xhi = std::max(xhi, tx(s.x[i]));
            ylo = std::min(ylo, s.y[i]);
            yhi = std::max(yhi, s.y[i]);
        }
    }
    if (!std::isfinite(xlo)) xlo = 0, xhi = 1, ylo = 0, yhi = 1;
    if (xhi == xlo) xlo -= 0.5, xhi += 0.5;
    ylo = std::min(ylo, 0.0);
    if (yhi == ylo) yhi = ylo + 1.0;
    const double ystep = nice_step(yhi - ylo, 5);
    ylo = std::floor(ylo / ystep) * ystep;
    yhi = std::ceil(yhi / ystep) * ystep;

    const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
    auto px = [&](double x) { return kLeft + (tx(x) - xlo) / (xhi - xlo) * pw; };
    auto py = [&](double y) { return kTop + (yhi - y) / (yhi - ylo) * ph; };

    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
        << escape(plot.title) << "</text>\n";

    out << "<g stroke=\"#ccc\" stroke-width=\"1\">\n";
    for (double y = ylo; y <= yhi + ystep * 1e-9; y += ystep)
        out << "<line x1=\"" << kLeft << "\" x2=\"" << kLeft + pw << "\" y1=\"" << num(py(y)) << "\" y2=\"" << num(py(y)) << "\"/>\n";
    out << "</g>\n<g text-anchor=\"end\">\n";
    for (double y = ylo; y <= yhi + ystep * 1e-9; y += ystep) {
        const double shown = std::abs(y) < ystep * 1e-9 ? 0.0 : y;
        out << "<text x=\"" << kLeft - 6 << "\" y=\"" << num(py(y) + 4) << "\">" << format_double(std::round(shown * 1e6) / 1e6)
            << "</text>\n";
    }
    out << "</g>\n<g text-anchor=\"middle\">\n";
    if (plot.log_x) {
        for (const auto& s : plot.series.empty() ? std::vector<double>{} : plot.series.front().x)
            out << "<text x=\"" << num(px(s)) << "\" y=\"" << num(kTop + ph + 18) << "\">" << format_double(s) << "</text>\n";
    } else {
        const double xstep = nice_step(xhi - xlo, 8);
        for (double x = std::ceil(xlo / xstep - 1e-9) * xstep; x <= xhi + xstep * 1e-9; x += xstep) {
            const double shown = std::abs(x) < xstep * 1e-9 ? 0.0 : x;
            out << "<text x=\"" << num(px(x)) << "\" y=\"" << num(kTop + ph + 18) << "\">"
                << format_double(std::round(shown * 1e6) / 1e6) << "</text>\n";
        }
    }
    out << "</g>\n";
    out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    out << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"" << kHeight - 15 << "\" text-anchor=\"middle\">"
        << escape(plot.x_label) << "</text>\n";
    out << "<text transform=\"translate(18," << num(kTop + ph / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
        << escape(plot.y_label) << "</text>\n";

    for (std::size_t k = 0; k < plot.series.size(); ++k) {
        const auto& s = plot.series[k];
        std::string d;
        bool pen_down = false;
        for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i]) || (plot.log_x && s.x[i] <= 0)) {
                pen_down = false;
                continue;
            }
            d += (pen_down ? " L" : " M") + num(px(s.x[i])) + ' ' + num(py(s.y[i]));
            pen_down = true;
        }
        out << "<path fill=\"none\" stroke=\"black\" stroke-width=\"1.6\"";
        if (const char* dash = dasharray(s.style)) out << " stroke-dasharray=\"" << dash << '"';
        out << " d=\"" << d.substr(d.empty() ? 0 : 1) << "\"/>\n";

        const double ly = kTop + 16 + 20.0 * static_cast<double>(k);
        const double lx = kLeft + pw + 14;
        out << "<line x1=\"" << lx << "\" x2=\"" << lx + 36 << "\" y1=\"" << ly << "\" y2=\"" << ly
            << "\" stroke=\"black\" stroke-width=\"1.6\"";
        if (const char* dash = dasharray(s.style)) out << " stroke-dasharray=\"" << dash << '"';
        out << "/>\n<text x=\"" << lx + 42 << "\" y=\"" << ly + 4 << "\">" << escape(s.label) << "</text>\n";
    }
    out << "</svg>\n";
}

} // namespace modelavg::cli
