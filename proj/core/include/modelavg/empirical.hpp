#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace modelavg {

/// Finite collection of draws standing in for a distribution.
/// Immutable; the sorted copy is built once at construction.
class EmpiricalSample {
public:
    /// Throws InvalidArgument when `values` is empty or holds a NaN.
    explicit EmpiricalSample(std::vector<double> values);

    std::size_t size() const noexcept { return values_.size(); }
    std::span<const double> values() const noexcept { return values_; }
    std::span<const double> sorted() const noexcept { return sorted_; }

    /// Right-continuous ECDF: fraction of draws <= x.
    double ecdf(double x) const noexcept;
    /// Linear-interpolation quantile (type 7); p in [0, 1].
    double quantile(double p) const;
    double mean() const noexcept;
    /// Unbiased sample variance (0 for a single draw).
    double variance() const noexcept;

private:
    std::vector<double> values_;
    std::vector<double> sorted_;
};

/// sup_x |F_a(x) - F_b(x)|, computed exactly by merging the sorted draws.
double ks_two_sample(const EmpiricalSample& a, const EmpiricalSample& b) noexcept;

} // namespace modelavg
