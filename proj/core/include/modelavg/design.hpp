#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "modelavg/random.hpp"

namespace modelavg {

/// Neumaier-compensated inner product.
double compensated_dot(std::span<const double> a, std::span<const double> b);

/// Fixed two-column regressor matrix (X1, X2).
class DesignMatrix {
public:
    /// Throws InvalidArgument on length mismatch or n < 2, ZeroColumn when
    /// X1 is all zeros and CollinearDesign when X2 is all zeros.
    DesignMatrix(std::vector<double> x1, std::vector<double> x2);

    std::size_t size() const noexcept { return x1_.size(); }
    std::span<const double> x1() const noexcept { return x1_; }
    std::span<const double> x2() const noexcept { return x2_; }

    /// Rows picked by `rows` (with repetition allowed), in that order.
    DesignMatrix select(std::span<const std::size_t> rows) const;

private:
    std::vector<double> x1_;
    std::vector<double> x2_;
};

/// Cached Gram-matrix quantities of a design for a known noise level.
struct DesignStats {
    double s11 = 0.0;  ///< ||X1||^2
    double s22 = 0.0;  ///< ||X2||^2
    double s12 = 0.0;  ///< <X1, X2>
    double det = 0.0;  ///< s11 * s22 - s12^2
    double sigma = 1.0;
    double sigma_beta = 0.0;  ///< sd of the unrestricted slope estimate
};

struct TrueParams {
    double alpha = 1.0;
    double beta = 0.0;
    double sigma = 1.0;

    void validate() const;
};

/// Design paired with a response vector of the same length.
class Dataset {
public:
    Dataset(DesignMatrix design, std::vector<double> y);

    const DesignMatrix& design() const noexcept { return design_; }
    std::span<const double> y() const noexcept { return y_; }
    std::size_t size() const noexcept { return y_.size(); }

    Dataset select(std::span<const std::size_t> rows) const;

private:
    DesignMatrix design_;
    std::vector<double> y_;
};

struct UnrestrictedFit {
    double alpha_u = 0.0;
    double beta_u = 0.0;
};

/// Relative tolerance on det(X'X): det <= kCollinearTolerance * s11 * s22 is singular.
inline constexpr double kCollinearTolerance = 1e-12;

/// Throws ZeroColumn when ||X1|| = 0 and CollinearDesign when the design is
/// numerically singular.
DesignStats compute_design_stats(const DesignMatrix& design, double sigma = 1.0);

/// y_t = alpha x_t1 + beta x_t2 + sigma z_t with z_t drawn from `rng`.
Dataset generate_response(const DesignMatrix& design, const TrueParams& params, RandomStream& rng);

UnrestrictedFit fit_unrestricted(const Dataset& data, const DesignStats& stats);
double fit_restricted(const Dataset& data, const DesignStats& stats);

/// X1 = 1, X2 ~ Uniform(0, 3) drawn once; redrawn on a singular draw.
DesignMatrix make_uniform_design(std::size_t n, RandomStream& rng);

/// CSV with header `i,x1,x2` and one row per observation (i is 1-based).
void write_design_csv(std::ostream& out, const DesignMatrix& design);
DesignMatrix read_design_csv(std::istream& in);

} // namespace modelavg
