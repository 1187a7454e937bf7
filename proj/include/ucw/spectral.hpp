#ifndef UCW_SPECTRAL_HPP
#define UCW_SPECTRAL_HPP

#include "ucw/dispersion.hpp"

#include <Eigen/Dense>

#include <complex>
#include <utility>
#include <vector>

namespace ucw::spectral {

/// Truncated complex Fourier coefficient vector {g_k}, |k| <= N.
/// Index convention: coeffs(k + N) holds mode k.
struct FourierState {
    int truncation_N = 0;
    Eigen::VectorXcd coeffs; // 2N+1 entries

    static FourierState zeros(int N);
    static FourierState delta(int N, int k, std::complex<double> amplitude = {1.0, 0.0});

    int n_modes() const { return 2 * truncation_N + 1; }
    std::complex<double> coeff(int k) const { return coeffs(k + truncation_N); }
    std::complex<double>& coeff(int k) { return coeffs(k + truncation_N); }

    /// sqrt(sum_k |g_k|^2); the Parseval ledger for all mass accounting.
    double l2_norm() const { return coeffs.norm(); }

    void validate() const; // finite entries, size = 2N+1
};

/// Equispaced sampling grid: nx points on [0,2pi), nt time samples on [t0,t1].
struct GridSpec {
    int nx = 0;
    int nt = 1;
    double t0 = 0.0;
    double t1 = 0.0;
};

/// Coefficient k of the result is g_k * exp(-i omega(k) t). Exact in time.
FourierState evolve(const FourierState& g, const dispersion::Relation& rel, double t);

/// u(x_j) = sum_k g_k e^{i k x_j} on the nx-point grid. Requires
/// nx >= 2N+1 so that no represented mode aliases.
Eigen::VectorXcd synthesize(const FourierState& state, int nx);

/// Inverse of synthesize: recovers the 2N+1 coefficients from nx >= 2N+1
/// equispaced samples.
FourierState analyze(const Eigen::VectorXcd& samples, int N);

/// Direct summation of u(x,t) = sum_k g_k e^{i(kx - omega(k) t)} at the
/// given points; points must lie in [0,2pi] x [0,inf).
std::vector<std::complex<double>>
evaluate_solution(const FourierState& g, const dispersion::Relation& rel,
                  const std::vector<std::pair<double, double>>& points);

// --- periodic grid utilities shared with the fluid module ---

/// Spectral derivative of order 1 or 2 of real samples on [0,2pi).
Eigen::VectorXd derivative_periodic(const Eigen::VectorXd& samples, int order = 1);

/// Zeroes all modes with |k| > nx/3 (2/3-rule dealiasing), in place.
void dealias_two_thirds(Eigen::VectorXd& samples);

} // namespace ucw::spectral

#endif
