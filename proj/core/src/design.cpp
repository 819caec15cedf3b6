#include "modelavg/design.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "modelavg/errors.hpp"
#include "modelavg/format.hpp"

namespace modelavg {

double compensated_dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw InvalidArgument("compensated_dot: length mismatch");
    double sum = 0.0;
    double comp = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double term = a[i] * b[i];
        const double t = sum + term;
        if (std::abs(sum) >= std::abs(term)) {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
    }
    return sum + comp;
}

namespace {

bool all_zero(const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
}

} // namespace

DesignMatrix::DesignMatrix(std::vector<double> x1, std::vector<double> x2)
    : x1_(std::move(x1)), x2_(std::move(x2)) {
    if (x1_.size() != x2_.size()) {
        throw InvalidArgument("design columns differ in length (" + std::to_string(x1_.size()) +
                              " vs " + std::to_string(x2_.size()) + ")");
    }
    if (x1_.size() < 2) throw InvalidArgument("design needs at least 2 observations");
    if (all_zero(x1_)) throw ZeroColumn("first regressor column is all zeros");
    if (all_zero(x2_)) throw CollinearDesign("second regressor column is all zeros");
}

DesignMatrix DesignMatrix::select(std::span<const std::size_t> rows) const {
    std::vector<double> a(rows.size());
    std::vector<double> b(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        a[i] = x1_.at(rows[i]);
        b[i] = x2_.at(rows[i]);
    }
    return DesignMatrix(std::move(a), std::move(b));
}

void TrueParams::validate() const {
    // sigma = 0 is accepted so that noiseless data can be generated
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw InvalidArgument("sigma must be nonnegative");
    if (!std::isfinite(alpha) || !std::isfinite(beta)) throw InvalidArgument("alpha and beta must be finite");
}

Dataset::Dataset(DesignMatrix design, std::vector<double> y)
    : design_(std::move(design)), y_(std::move(y)) {
    if (y_.size() != design_.size()) {
        throw InvalidArgument("response length " + std::to_string(y_.size()) +
                              " does not match design length " + std::to_string(design_.size()));
    }
}

Dataset Dataset::select(std::span<const std::size_t> rows) const {
    std::vector<double> y(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) y[i] = y_.at(rows[i]);
    return Dataset(design_.select(rows), std::move(y));
}

DesignStats compute_design_stats(const DesignMatrix& design, double sigma) {
    if (!(sigma > 0.0)) throw InvalidArgument("sigma must be positive");
    DesignStats s;
    s.sigma = sigma;
    s.s11 = compensated_dot(design.x1(), design.x1());
    s.s22 = compensated_dot(design.x2(), design.x2());
    s.s12 = compensated_dot(design.x1(), design.x2());
    if (!(s.s11 > 0.0)) throw ZeroColumn("||X1||^2 is zero");
    s.det = s.s11 * s.s22 - s.s12 * s.s12;
    if (s.det <= kCollinearTolerance * s.s11 * s.s22) {
        throw CollinearDesign("design is numerically collinear (det = " + format_double(s.det) + ")");
    }
    s.sigma_beta = sigma * std::sqrt(s.s11) / std::sqrt(s.det);
    return s;
}

Dataset generate_response(const DesignMatrix& design, const TrueParams& params, RandomStream& rng) {
    params.validate();
    const auto x1 = design.x1();
    const auto x2 = design.x2();
    std::vector<double> y(design.size());
    for (std::size_t t = 0; t < y.size(); ++t) {
        y[t] = params.alpha * x1[t] + params.beta * x2[t] + params.sigma * rng.normal();
    }
    return Dataset(design, std::move(y));
}

UnrestrictedFit fit_unrestricted(const Dataset& data, const DesignStats& stats) {
    if (!(stats.det > 0.0)) throw CollinearDesign("unrestricted fit needs det > 0");
    const double p1 = compensated_dot(data.design().x1(), data.y());
    const double p2 = compensated_dot(data.design().x2(), data.y());
    return {(stats.s22 * p1 - stats.s12 * p2) / stats.det,
            (stats.s11 * p2 - stats.s12 * p1) / stats.det};
}

double fit_restricted(const Dataset& data, const DesignStats& stats) {
    if (!(stats.s11 > 0.0)) throw ZeroColumn("restricted fit needs ||X1|| > 0");
    return compensated_dot(data.design().x1(), data.y()) / stats.s11;
}

DesignMatrix make_uniform_design(std::size_t n, RandomStream& rng) {
    if (n < 2) throw InvalidArgument("design size must be at least 2");
    for (;;) {
        std::vector<double> x2(n);
        for (auto& v : x2) v = rng.uniform(0.0, 3.0);
        try {
            DesignMatrix design(std::vector<double>(n, 1.0), std::move(x2));
            compute_design_stats(design);
            return design;
        } catch (const DesignError&) {
            // measure-zero degenerate draw; take the next one from the stream
        }
    }
}

void write_design_csv(std::ostream& out, const DesignMatrix& design) {
    out << "i,x1,x2\n";
    for (std::size_t i = 0; i < design.size(); ++i) {
        out << (i + 1) << ',' << format_double(design.x1()[i]) << ','
            << format_double(design.x2()[i]) << '\n';
    }
}

DesignMatrix read_design_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw InvalidArgument("design csv: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "i,x1,x2") throw InvalidArgument("design csv: expected header 'i,x1,x2', got '" + line + "'");
    std::vector<double> x1;
    std::vector<double> x2;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string f0, f1, f2, extra;
        if (!std::getline(row, f0, ',') || !std::getline(row, f1, ',') || !std::getline(row, f2, ',') ||
            std::getline(row, extra, ',')) {
            throw InvalidArgument("design csv line " + std::to_string(lineno) + ": expected 3 fields");
        }
        double a = 0.0;
        double b = 0.0;
        if (!parse_double(f1, a) || !parse_double(f2, b)) {
            throw InvalidArgument("design csv line " + std::to_string(lineno) + ": malformed number");
        }
        x1.push_back(a);
        x2.push_back(b);
    }
    return DesignMatrix(std::move(x1), std::move(x2));
}

} // namespace modelavg
