#ifndef UCW_FLUID_HPP
#define UCW_FLUID_HPP

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <optional>
#include <utility>
#include <vector>

namespace ucw::fluid {

/// Periodic strip {(x,z) : -H0 + b(x) < z < eta(x)} sampled on a uniform
/// x-grid over [0,2pi) with nz sigma levels in the vertical.
struct Geometry {
    double H0 = 1.0;
    Eigen::VectorXd b;   // bottom deviation, nx samples
    Eigen::VectorXd eta; // surface elevation, nx samples
    int nx = 0;
    int nz = 0;
    double h_min = 1e-8; // declared positive-depth floor

    static Geometry flat(double H0, int nx, int nz, double h_min = 1e-8);

    Eigen::VectorXd depth() const { return eta.array() + H0 - b.array(); }
    void validate() const;
};

/// Discrete harmonic potential on the sigma grid; row j is the sigma level
/// (0 = bottom, nz-1 = surface), column i the x index.
struct PotentialField {
    int nx = 0;
    int nz = 0;
    Eigen::MatrixXd phi;
    double residual = 0.0; // max-norm residual of the discrete system
};

/// Flat-strip Dirichlet-to-Neumann symbol: |k| tanh(H|k|), or |k| for
/// infinite depth (pass H = infinity). Zero at k = 0.
double dn_flat_symbol(double k, double H);

/// Finite-difference Laplace solver in sigma coordinates with Dirichlet data
/// at the surface and a homogeneous Neumann bottom. Holds a factorization
/// workspace; rebuild or update_surface() when the geometry changes.
class HarmonicSolver {
public:
    explicit HarmonicSolver(Geometry geom);

    const Geometry& geometry() const { return geom_; }

    /// Re-assembles and re-factorizes for a new surface over the same grid
    /// sizes and bottom (the sparsity pattern is reused).
    void update_surface(const Eigen::VectorXd& eta);

    /// Solves for the potential with surface Dirichlet data phi; performs one
    /// step of iterative refinement and verifies the residual against
    /// 1e-10 * max|phi|.
    PotentialField extend(const Eigen::VectorXd& phi_surface) const;

    /// G(eta,b) phi = sqrt(1+|eta'|^2) * (normal derivative at the surface):
    /// second-order one-sided extraction on the sigma grid.
    Eigen::VectorXd dn(const Eigen::VectorXd& phi_surface) const;

private:
    void assemble_and_factorize();

    Geometry geom_;
    Eigen::VectorXd depth_, eta_x_, bottom_x_, depth_x_, bottom_xx_, depth_xx_;
    Eigen::SparseMatrix<double> matrix_;
    Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu_;
    bool pattern_ready_ = false;
};

PotentialField harmonic_extend(const Geometry& geom, const Eigen::VectorXd& phi_surface);
Eigen::VectorXd dn_apply(const Geometry& geom, const Eigen::VectorXd& phi_surface);

/// Surface unknowns (eta, phi) on the periodic x-grid.
struct SurfaceState {
    Eigen::VectorXd eta;
    Eigen::VectorXd phi;

    static SurfaceState zero(int nx);
    void validate() const;
};

/// Printed-formula surface quantities:
///   B = (eta' . phi' - G phi) / (1 + |eta'|^2),
///   v_printed  = phi' - B phi',
///   v_standard = phi' - B eta'  (the conventional horizontal velocity).
struct SurfaceVelocity {
    Eigen::VectorXd B;
    Eigen::VectorXd v_printed;
    Eigen::VectorXd v_standard;
};

SurfaceVelocity b_and_v(const SurfaceState& state, const Eigen::VectorXd& Gphi);

/// The water-wave evolution in surface variables over a fixed bottom:
///   eta_t = G phi,
///   phi_t = -g eta - |phi'|^2/2 + (G phi + phi' eta')^2 / (2(1+|eta'|^2)).
class ZcsModel {
public:
    ZcsModel(double H0, Eigen::VectorXd b, int nz, double g, double h_min = 1e-8);

    int nx() const { return static_cast<int>(b_.size()); }
    int nz() const { return nz_; }
    double g() const { return g_; }
    double H0() const { return H0_; }

    /// DN operator on the instantaneous geometry built from the state.
    Eigen::VectorXd dn(const SurfaceState& state);

    /// (eta_t, phi_t); throws if the instantaneous depth violates h_min.
    std::pair<Eigen::VectorXd, Eigen::VectorXd> rhs(const SurfaceState& state);

    /// Classical one-step fourth-order update.
    SurfaceState step_rk4(const SurfaceState& state, double dt);

private:
    double H0_;
    Eigen::VectorXd b_;
    int nz_;
    double g_;
    double h_min_;
    std::optional<HarmonicSolver> solver_;
};

struct FrequencyFit {
    double omega = 0.0;    // fitted oscillation frequency of the k-th mode
    double periods = 0.0;  // simulated time in fitted periods
    double fit_residual = 0.0;
    std::vector<double> t;        // sample times
    std::vector<double> mode_amp; // k-th cosine-mode amplitude history
};

/// Integrates the system from (eta, phi) = (amp cos kx, 0) and fits the
/// oscillation frequency of mode k by a least-squares sinusoid.
FrequencyFit linear_dispersion_check(int k, double H, double g, int nx, int nz, double dt,
                                     int steps, double amplitude = 1e-6);

struct Window {
    double x0, x1;
};

/// True iff max(|eta|, |phi_x|) <= tol at every grid point inside the window
/// (phi_x spectral).
bool at_rest(const SurfaceState& state, Window window, double tol);

struct ProbeSeries {
    std::vector<double> t;
    std::vector<double> activity; // max(|eta|, |phi_x|) over the window
    std::vector<double> energy;   // 0.5 * integral of (g eta^2 + phi G phi)
    std::optional<double> first_exceed_t;
};

/// Steps the system with RK4 and 2/3-rule dealiasing from a state at rest on
/// the window, recording when the window first activates. The initial state
/// must be at rest on the window at tolerance tol.
ProbeSeries rest_propagation_probe(ZcsModel& model, const SurfaceState& initial, Window window,
                                   double tol, double T, double dt);

} // namespace ucw::fluid

#endif
