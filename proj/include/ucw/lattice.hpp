#ifndef UCW_LATTICE_HPP
#define UCW_LATTICE_HPP

#include "ucw/dispersion.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace ucw::lattice {

/// Second-coordinate convention for the frequency lattice.
enum class SignConvention { omega, minus_omega };

/// The planar point set {(k, s*omega(k)) : k integer, |k| <= N}, sorted by k.
class FrequencyLattice {
public:
    FrequencyLattice(const dispersion::Relation& rel, int truncation_N,
                     SignConvention sign = SignConvention::omega);

    int truncation_N() const { return n_; }
    SignConvention sign_convention() const { return sign_; }
    size_t size() const { return points_.size(); }
    std::array<double, 2> point(size_t i) const { return points_[i]; }

    /// Extent bound max(N, max_k |omega(k)|); the default counting window.
    double extent() const { return extent_; }

private:
    int n_;
    SignConvention sign_;
    std::vector<std::array<double, 2>> points_; // index i holds k = i - N
    double extent_;

    friend double separation(const FrequencyLattice&);
    friend long count_in_ball(const FrequencyLattice&, std::array<double, 2>, double);
};

/// Exact minimum pairwise Euclidean distance; always >= 1 because the first
/// coordinates are distinct integers.
double separation(const FrequencyLattice& lat);

/// Exact number of lattice points within Euclidean distance r of center.
long count_in_ball(const FrequencyLattice& lat, std::array<double, 2> center, double r);

/// Far-field counting function: the maximum of count_in_ball over centers on
/// the square grid of step r/4 covering [-X_max, X_max]^2, restricted to
/// centers c with |c| >= X_max/2. Requires X_max >= lattice extent.
long counting_function(const FrequencyLattice& lat, double r, double X_max, int threads = 1);

enum class CurveVerdict { PASS, FAIL, INCONCLUSIVE };

const char* to_string(CurveVerdict v);

/// N(r)/r samples along a list of radii, with the far-field window and grid
/// step used for the smallest radius recorded (steps scale as r/4).
struct CountingReport {
    std::vector<double> radii;
    std::vector<long> n_of_r;
    std::vector<double> ratios; // n_of_r[i] / radii[i]
    double center_window = 0.0; // X_max
    double center_grid_step = 0.0;
    CurveVerdict verdict = CurveVerdict::INCONCLUSIVE;
};

/// Samples N(r)/r at the given increasing radii (max radius <= N/4).
/// PASS: ratios non-increasing over the last three radii and the final ratio
/// below half the first. FAIL: ratios stabilized on a positive floor (each of
/// the last three within 5% of their mean). Otherwise INCONCLUSIVE.
CountingReport beurling_ratio_curve(const dispersion::Relation& rel, int truncation_N,
                                    const std::vector<double>& radii, int threads = 1);

/// Vertical extent d(k) of the annulus |x|-r <= |y| <= |x|+r above abscissa k:
/// sqrt((|x|+r)^2 - k^2) - sqrt((|x|-r)^2 - k^2). Requires 0 < r < x_abs and
/// k^2 <= (x_abs - r)^2.
double annulus_vertical_extent(double x_abs, double r, double k);

/// Closed form for the longest vertical segment of the annulus above the
/// diagonal: sqrt((|x|+r)^2 - (|x|-r)^2/2) - sqrt((|x|-r)^2/2). Increasing in
/// x_abs, with limit sqrt(8)*r.
double max_vertical_extent(double x_abs, double r);

} // namespace ucw::lattice

#endif
