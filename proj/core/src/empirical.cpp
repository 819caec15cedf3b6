#include "modelavg/empirical.hpp"

#include <algorithm>
#include <cmath>

#include "modelavg/errors.hpp"

namespace modelavg {

EmpiricalSample::EmpiricalSample(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) throw InvalidArgument("empirical sample must be nonempty");
    if (std::any_of(values_.begin(), values_.end(), [](double v) { return std::isnan(v); })) {
        throw InvalidArgument("empirical sample contains NaN");
    }
    sorted_ = values_;
    std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalSample::ecdf(double x) const noexcept {
    const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
    return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

double EmpiricalSample::quantile(double p) const {
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("quantile level must lie in [0, 1]");
    const double h = p * static_cast<double>(sorted_.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, sorted_.size() - 1);
    return sorted_[lo] + (h - static_cast<double>(lo)) * (sorted_[hi] - sorted_[lo]);
}

double EmpiricalSample::mean() const noexcept {
    double s = 0.0;
    for (double v : values_) s += v;
    return s / static_cast<double>(values_.size());
}

double EmpiricalSample::variance() const noexcept {
    if (values_.size() < 2) return 0.0;
    const double m = mean();
    double s = 0.0;
    for (double v : values_) s += (v - m) * (v - m);
    return s / static_cast<double>(values_.size() - 1);
}

double ks_two_sample(const EmpiricalSample& a, const EmpiricalSample& b) noexcept {
    const auto sa = a.sorted();
    const auto sb = b.sorted();
    const double na = static_cast<double>(sa.size());
    const double nb = static_cast<double>(sb.size());
    std::size_t i = 0;
    std::size_t j = 0;
    double d = 0.0;
    while (i < sa.size() || j < sb.size()) {
        double v;
        if (j == sb.size() || (i < sa.size() && sa[i] <= sb[j])) {
            v = sa[i];
        } else {
            v = sb[j];
        }
        while (i < sa.size() && sa[i] == v) ++i;
        while (j < sb.size() && sb[j] == v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

} // namespace modelavg
