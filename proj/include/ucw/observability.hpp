#ifndef UCW_OBSERVABILITY_HPP
#define UCW_OBSERVABILITY_HPP

#include "ucw/dispersion.hpp"
#include "ucw/lattice.hpp"
#include "ucw/spectral.hpp"

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace ucw::observability {

/// Axis-aligned rectangle [x0,x1] x [t0,t1] in space-time.
struct Rect {
    double x0, x1, t0, t1;
    double area() const { return (x1 - x0) * (t1 - t0); }
};

/// Finite disjoint union of rectangles inside [0,2pi] x [0,t_max].
class SpaceTimeDomain {
public:
    SpaceTimeDomain(std::vector<Rect> rects, double t_max);

    const std::vector<Rect>& rects() const { return rects_; }
    double t_max() const { return t_max_; }
    double area() const { return area_; }

    /// The same domain translated by s in time (must stay in [0, t_max]).
    SpaceTimeDomain shifted_in_time(double s) const;

private:
    std::vector<Rect> rects_;
    double t_max_;
    double area_;
};

/// Hermitian matrix of inner products of the restricted exponentials
/// e^{i(kx - w_k t)} over the domain; diagonal entries equal the domain area.
struct GramMatrix {
    int truncation_N = 0;
    Eigen::MatrixXcd entries;
    double domain_area = 0.0;

    int dim() const { return static_cast<int>(entries.rows()); }
};

/// Extreme eigenvalues of a Gram matrix. d_minus is the raw smallest
/// eigenvalue clamped at zero when it lies within -1e-10 * domain_area of 0;
/// the raw value is kept alongside.
struct FrameBounds {
    double d_minus_raw = 0.0;
    double d_minus = 0.0;
    double d_plus = 0.0;
    int truncation_N = 0;
    double domain_area = 0.0;
};

/// Closed-form one-dimensional factor: integral of e^{i a s} ds over
/// [alpha, beta]. Switches to a series for |a|(beta-alpha) < 1e-6.
std::complex<double> interval_integral(double a, double alpha, double beta);

/// Assembles entry(m,n) = sum over rectangles of
/// I(m-n; x0,x1) * I(-(w_m - w_n); t0,t1), exactly (no quadrature).
GramMatrix gram_matrix(const lattice::FrequencyLattice& lat, const SpaceTimeDomain& dom,
                       int threads = 1);

/// Smallest/largest eigenvalues via a dense Hermitian eigensolve
/// (dim <= 4097).
FrameBounds frame_bounds(const GramMatrix& G);

/// Quadratic form a^H G a: the exact restricted L^2 mass of the synthesized
/// solution over the domain.
double restricted_mass(const spectral::FourierState& g, const dispersion::Relation& rel,
                       const SpaceTimeDomain& dom, int threads = 1);

struct CertificateRow {
    int truncation_N;
    double d_minus_raw;
    double d_minus;
    double d_plus;
};

/// Frame bounds for nested truncations; d_minus is non-increasing and d_plus
/// non-decreasing in N by eigenvalue interlacing of principal submatrices.
std::vector<CertificateRow> ucp_certificate(const dispersion::Relation& rel,
                                            const SpaceTimeDomain& dom,
                                            const std::vector<int>& N_list, int threads = 1);

struct Witness {
    spectral::FourierState state; // unit-norm minimizer of a^H G a
    double residual_mass;         // equals d_minus up to solver tolerance
};

/// The unit coefficient vector attaining d_minus, with a canonical phase
/// (largest-magnitude entry real positive).
Witness vanishing_witness(const dispersion::Relation& rel, const SpaceTimeDomain& dom, int N,
                          int threads = 1);

} // namespace ucw::observability

#endif
