#include "ucw/fluid.hpp"

#include "ucw/errors.hpp"
#include "ucw/spectral.hpp"

#include <cmath>
#include <limits>

namespace ucw::fluid {

namespace {

constexpr double two_pi = 6.283185307179586476925286766559;

Eigen::VectorXd x_grid(int nx) {
    Eigen::VectorXd x(nx);
    for (int i = 0; i < nx; ++i) x(i) = two_pi * i / nx;
    return x;
}

} // namespace

Geometry Geometry::flat(double H0, int nx, int nz, double h_min) {
    Geometry g;
    g.H0 = H0;
    g.b = Eigen::VectorXd::Zero(nx);
    g.eta = Eigen::VectorXd::Zero(nx);
    g.nx = nx;
    g.nz = nz;
    g.h_min = h_min;
    g.validate();
    return g;
}

void Geometry::validate() const {
    if (nx < 4) throw ucw::invalid_argument("Geometry: nx >= 4 required");
    if (nz < 8) throw ucw::invalid_argument("Geometry: nz >= 8 required");
    if (b.size() != nx || eta.size() != nx)
        throw ucw::invalid_argument("Geometry: b and eta must have nx samples");
    if (!(h_min > 0.0)) throw ucw::invalid_argument("Geometry: h_min must be > 0");
    if (!b.allFinite() || !eta.allFinite())
        throw ucw::invalid_argument("Geometry: non-finite samples");
    for (int i = 0; i < nx; ++i) {
        if (!(-H0 + b(i) < 0.0))
            throw ucw::invalid_argument("Geometry: bottom must stay below z = 0 (sample " +
                                        std::to_string(i) + ")");
        if (!(eta(i) + H0 - b(i) >= h_min))
            throw ucw::domain_error("Geometry: water depth below h_min at sample " +
                                    std::to_string(i));
    }
}

double dn_flat_symbol(double k, double H) {
    const double a = std::abs(k);
    if (a == 0.0) return 0.0;
    if (std::isinf(H)) return a;
    if (!(H > 0.0)) throw ucw::invalid_argument("dn_flat_symbol requires H > 0 or infinite");
    return a * std::tanh(H * a);
}

HarmonicSolver::HarmonicSolver(Geometry geom) : geom_(std::move(geom)) {
    geom_.validate();
    assemble_and_factorize();
}

void HarmonicSolver::update_surface(const Eigen::VectorXd& eta) {
    if (eta.size() != geom_.nx)
        throw ucw::invalid_argument("update_surface: eta must have nx samples");
    geom_.eta = eta;
    geom_.validate();
    assemble_and_factorize();
}

void HarmonicSolver::assemble_and_factorize() {
    const int nx = geom_.nx;
    const int nz = geom_.nz;
    const double dx = two_pi / nx;
    const double ds = 1.0 / (nz - 1);

    depth_ = geom_.depth();
    eta_x_ = spectral::derivative_periodic(geom_.eta, 1);
    bottom_x_ = spectral::derivative_periodic(geom_.b, 1);
    bottom_xx_ = spectral::derivative_periodic(geom_.b, 2);
    depth_x_ = eta_x_ - bottom_x_;
    depth_xx_ = spectral::derivative_periodic(geom_.eta, 2) - bottom_xx_;

    auto idx = [nx](int i, int j) { return j * nx + i; };
    auto wrap = [nx](int i) { return (i % nx + nx) % nx; };

    // Sigma map z = -H0 + b(x) + sigma*h(x) turns the Laplacian into
    //   u_xx + B u_xs + C u_ss + D u_s = 0,
    // with slope J = b' + sigma h', B = -2J/h, C = (J^2+1)/h^2 and
    // D = (2 J h' - J_x h)/h^2, J_x = b'' + sigma h''.
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<size_t>(nx) * static_cast<size_t>(nz) * 9);
    for (int j = 1; j < nz - 1; ++j) {
        const double sigma = j * ds;
        for (int i = 0; i < nx; ++i) {
            const double h = depth_(i);
            const double J = bottom_x_(i) + sigma * depth_x_(i);
            const double Jx = bottom_xx_(i) + sigma * depth_xx_(i);
            const double B = -2.0 * J / h;
            const double C = (J * J + 1.0) / (h * h);
            const double D = (2.0 * J * depth_x_(i) - Jx * h) / (h * h);

            const double cxx = 1.0 / (dx * dx);
            const double css = C / (ds * ds);
            const double cxs = B / (4.0 * dx * ds);
            const double cs = D / (2.0 * ds);

            const int row = idx(i, j);
            trips.emplace_back(row, idx(i, j), -2.0 * cxx - 2.0 * css);
            trips.emplace_back(row, idx(wrap(i + 1), j), cxx);
            trips.emplace_back(row, idx(wrap(i - 1), j), cxx);
            trips.emplace_back(row, idx(i, j + 1), css + cs);
            trips.emplace_back(row, idx(i, j - 1), css - cs);
            trips.emplace_back(row, idx(wrap(i + 1), j + 1), cxs);
            trips.emplace_back(row, idx(wrap(i + 1), j - 1), -cxs);
            trips.emplace_back(row, idx(wrap(i - 1), j + 1), -cxs);
            trips.emplace_back(row, idx(wrap(i - 1), j - 1), cxs);
        }
    }
    // Bottom (sigma = 0): the outward normal condition on z = -H0 + b is
    // b' u_x - ((1 + b'^2)/h) u_s = 0, with a one-sided second-order u_s.
    for (int i = 0; i < nx; ++i) {
        const int row = idx(i, 0);
        const double bp = bottom_x_(i);
        const double q = (1.0 + bp * bp) / depth_(i);
        trips.emplace_back(row, idx(wrap(i + 1), 0), bp / (2.0 * dx));
        trips.emplace_back(row, idx(wrap(i - 1), 0), -bp / (2.0 * dx));
        trips.emplace_back(row, idx(i, 0), 3.0 * q / (2.0 * ds));
        trips.emplace_back(row, idx(i, 1), -4.0 * q / (2.0 * ds));
        trips.emplace_back(row, idx(i, 2), q / (2.0 * ds));
    }
    // Surface (sigma = 1): Dirichlet rows.
    for (int i = 0; i < nx; ++i) trips.emplace_back(idx(i, nz - 1), idx(i, nz - 1), 1.0);

    matrix_.resize(nx * nz, nx * nz);
    matrix_.setFromTriplets(trips.begin(), trips.end());
    matrix_.makeCompressed();

    if (!pattern_ready_) {
        lu_.analyzePattern(matrix_);
        pattern_ready_ = true;
    }
    lu_.factorize(matrix_);
    if (lu_.info() != Eigen::Success)
        throw ucw::numerical_error("HarmonicSolver: factorization failed (singular system)");
}

PotentialField HarmonicSolver::extend(const Eigen::VectorXd& phi_surface) const {
    const int nx = geom_.nx;
    const int nz = geom_.nz;
    if (phi_surface.size() != nx)
        throw ucw::invalid_argument("extend: phi must have nx samples");
    if (!phi_surface.allFinite()) throw ucw::invalid_argument("extend: non-finite phi");

    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nx * nz);
    rhs.segment(static_cast<Eigen::Index>(nz - 1) * nx, nx) = phi_surface;

    Eigen::VectorXd u = lu_.solve(rhs);
    // One step of iterative refinement keeps the residual at roundoff even
    // for fine vertical grids.
    u += lu_.solve(rhs - matrix_ * u);
    const double residual = (rhs - matrix_ * u).lpNorm<Eigen::Infinity>();
    const double tol = 1e-10 * std::max(phi_surface.lpNorm<Eigen::Infinity>(), 1e-300);
    if (!(residual <= tol))
        throw ucw::numerical_error("HarmonicSolver: residual " + std::to_string(residual) +
                                   " above tolerance");

    PotentialField field;
    field.nx = nx;
    field.nz = nz;
    field.residual = residual;
    field.phi.resize(nz, nx);
    for (int j = 0; j < nz; ++j)
        for (int i = 0; i < nx; ++i) field.phi(j, i) = u(static_cast<Eigen::Index>(j) * nx + i);
    return field;
}

Eigen::VectorXd HarmonicSolver::dn(const Eigen::VectorXd& phi_surface) const {
    const PotentialField field = extend(phi_surface);
    const int nx = geom_.nx;
    const int nz = geom_.nz;
    const double ds = 1.0 / (nz - 1);

    const Eigen::VectorXd phi_x = spectral::derivative_periodic(phi_surface, 1);
    Eigen::VectorXd out(nx);
    for (int i = 0; i < nx; ++i) {
        const double us = (3.0 * field.phi(nz - 1, i) - 4.0 * field.phi(nz - 2, i) +
                           field.phi(nz - 3, i)) /
                          (2.0 * ds);
        const double ep = eta_x_(i);
        out(i) = -ep * phi_x(i) + (1.0 + ep * ep) / depth_(i) * us;
    }
    return out;
}

PotentialField harmonic_extend(const Geometry& geom, const Eigen::VectorXd& phi_surface) {
    return HarmonicSolver(geom).extend(phi_surface);
}

Eigen::VectorXd dn_apply(const Geometry& geom, const Eigen::VectorXd& phi_surface) {
    return HarmonicSolver(geom).dn(phi_surface);
}

SurfaceState SurfaceState::zero(int nx) {
    return SurfaceState{Eigen::VectorXd::Zero(nx), Eigen::VectorXd::Zero(nx)};
}

void SurfaceState::validate() const {
    if (eta.size() != phi.size() || eta.size() < 4)
        throw ucw::invalid_argument("SurfaceState: eta and phi must share nx >= 4 samples");
    if (!eta.allFinite() || !phi.allFinite())
        throw ucw::invalid_argument("SurfaceState: non-finite samples");
}

SurfaceVelocity b_and_v(const SurfaceState& state, const Eigen::VectorXd& Gphi) {
    state.validate();
    if (Gphi.size() != state.eta.size())
        throw ucw::invalid_argument("b_and_v: Gphi size mismatch");
    const Eigen::VectorXd eta_x = spectral::derivative_periodic(state.eta, 1);
    const Eigen::VectorXd phi_x = spectral::derivative_periodic(state.phi, 1);
    SurfaceVelocity sv;
    sv.B = (eta_x.array() * phi_x.array() - Gphi.array()) / (1.0 + eta_x.array().square());
    sv.v_printed = phi_x.array() - sv.B.array() * phi_x.array();
    sv.v_standard = phi_x.array() - sv.B.array() * eta_x.array();
    return sv;
}

ZcsModel::ZcsModel(double H0, Eigen::VectorXd b, int nz, double g, double h_min)
    : H0_(H0), b_(std::move(b)), nz_(nz), g_(g), h_min_(h_min) {
    Geometry geom;
    geom.H0 = H0_;
    geom.b = b_;
    geom.eta = Eigen::VectorXd::Zero(b_.size());
    geom.nx = static_cast<int>(b_.size());
    geom.nz = nz_;
    geom.h_min = h_min_;
    solver_.emplace(std::move(geom));
}

Eigen::VectorXd ZcsModel::dn(const SurfaceState& state) {
    state.validate();
    if (state.eta.size() != b_.size())
        throw ucw::invalid_argument("ZcsModel: state grid does not match bottom grid");
    solver_->update_surface(state.eta);
    return solver_->dn(state.phi);
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> ZcsModel::rhs(const SurfaceState& state) {
    const Eigen::VectorXd Gphi = dn(state);
    const Eigen::VectorXd eta_x = spectral::derivative_periodic(state.eta, 1);
    const Eigen::VectorXd phi_x = spectral::derivative_periodic(state.phi, 1);

    const Eigen::ArrayXd numerator = Gphi.array() + phi_x.array() * eta_x.array();
    Eigen::VectorXd phi_t = (-g_ * state.eta.array() - 0.5 * phi_x.array().square() +
                             numerator.square() / (2.0 * (1.0 + eta_x.array().square())))
                                .matrix();
    return {Gphi, std::move(phi_t)};
}

SurfaceState ZcsModel::step_rk4(const SurfaceState& state, double dt) {
    auto add = [](const SurfaceState& s, const std::pair<Eigen::VectorXd, Eigen::VectorXd>& k,
                  double c) {
        return SurfaceState{s.eta + c * k.first, s.phi + c * k.second};
    };
    const auto k1 = rhs(state);
    const auto k2 = rhs(add(state, k1, dt / 2.0));
    const auto k3 = rhs(add(state, k2, dt / 2.0));
    const auto k4 = rhs(add(state, k3, dt));
    SurfaceState out;
    out.eta = state.eta + dt / 6.0 * (k1.first + 2.0 * k2.first + 2.0 * k3.first + k4.first);
    out.phi = state.phi + dt / 6.0 * (k1.second + 2.0 * k2.second + 2.0 * k3.second + k4.second);
    return out;
}

namespace {

// Least-squares residual of y ~ A cos(w t) + B sin(w t), minimized over the
// linear pair (A,B) for a fixed frequency.
double sinusoid_residual(const std::vector<double>& t, const std::vector<double>& y, double w) {
    double cc = 0.0, cs = 0.0, ss = 0.0, yc = 0.0, ys = 0.0, yy = 0.0;
    for (size_t i = 0; i < t.size(); ++i) {
        const double c = std::cos(w * t[i]);
        const double s = std::sin(w * t[i]);
        cc += c * c;
        cs += c * s;
        ss += s * s;
        yc += y[i] * c;
        ys += y[i] * s;
        yy += y[i] * y[i];
    }
    const double det = cc * ss - cs * cs;
    if (std::abs(det) < 1e-30) return yy;
    const double A = (ss * yc - cs * ys) / det;
    const double B = (cc * ys - cs * yc) / det;
    return yy - (A * yc + B * ys);
}

double golden_minimize(const std::vector<double>& t, const std::vector<double>& y, double lo,
                       double hi) {
    const double gr = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - gr * (b - a);
    double x2 = a + gr * (b - a);
    double f1 = sinusoid_residual(t, y, x1);
    double f2 = sinusoid_residual(t, y, x2);
    for (int it = 0; it < 200 && (b - a) > 1e-12 * (std::abs(a) + std::abs(b)); ++it) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = sinusoid_residual(t, y, x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = sinusoid_residual(t, y, x2);
        }
    }
    return 0.5 * (a + b);
}

} // namespace

FrequencyFit linear_dispersion_check(int k, double H, double g, int nx, int nz, double dt,
                                     int steps, double amplitude) {
    if (k < 1 || 2 * k >= nx)
        throw ucw::invalid_argument("linear_dispersion_check: need 1 <= k < nx/2");
    if (!(amplitude > 0.0 && amplitude <= 1e-6))
        throw ucw::invalid_argument("linear_dispersion_check: amplitude must be in (0, 1e-6]");
    const double omega_expected = std::sqrt(g * dn_flat_symbol(k, H));
    if (!(dt * omega_expected <= 0.05))
        throw ucw::invalid_argument("linear_dispersion_check: dt * omega must be <= 0.05");

    ZcsModel model(H, Eigen::VectorXd::Zero(nx), nz, g);
    const Eigen::VectorXd x = x_grid(nx);
    SurfaceState state;
    state.eta = amplitude * (k * x.array()).cos();
    state.phi = Eigen::VectorXd::Zero(nx);

    std::vector<double> ts, amps;
    ts.reserve(static_cast<size_t>(steps) + 1);
    amps.reserve(static_cast<size_t>(steps) + 1);
    auto mode_amp = [&](const SurfaceState& s) {
        double acc = 0.0;
        for (int i = 0; i < nx; ++i) acc += s.eta(i) * std::cos(k * x(i));
        return 2.0 * acc / nx;
    };
    ts.push_back(0.0);
    amps.push_back(mode_amp(state));
    for (int n = 1; n <= steps; ++n) {
        state = model.step_rk4(state, dt);
        ts.push_back(n * dt);
        amps.push_back(mode_amp(state));
    }

    // Half-period estimate from sign changes seeds the 1-D search.
    std::vector<double> crossings;
    for (size_t i = 0; i + 1 < ts.size(); ++i) {
        if ((amps[i] > 0.0) != (amps[i + 1] > 0.0)) {
            const double f = amps[i] / (amps[i] - amps[i + 1]);
            crossings.push_back(ts[i] + f * dt);
        }
    }
    if (crossings.size() < 4)
        throw ucw::numerical_error(
            "linear_dispersion_check: fewer than 2 periods simulated, cannot fit");
    const double half_period =
        (crossings.back() - crossings.front()) / static_cast<double>(crossings.size() - 1);
    const double omega0 = std::acos(-1.0) / half_period;

    FrequencyFit fit;
    fit.omega = golden_minimize(ts, amps, 0.8 * omega0, 1.2 * omega0);
    fit.periods = ts.back() * fit.omega / two_pi;
    const double res = sinusoid_residual(ts, amps, fit.omega);
    double yy = 0.0;
    for (double a : amps) yy += a * a;
    fit.fit_residual = (yy > 0.0) ? std::sqrt(std::max(res, 0.0) / yy) : 0.0;
    if (fit.periods < 2.0)
        throw ucw::numerical_error(
            "linear_dispersion_check: fewer than 2 periods simulated, cannot fit");
    fit.t = std::move(ts);
    fit.mode_amp = std::move(amps);
    return fit;
}

bool at_rest(const SurfaceState& state, Window window, double tol) {
    state.validate();
    if (!(window.x0 < window.x1)) throw ucw::invalid_argument("at_rest: degenerate window");
    const int nx = static_cast<int>(state.eta.size());
    const Eigen::VectorXd phi_x = spectral::derivative_periodic(state.phi, 1);
    for (int i = 0; i < nx; ++i) {
        const double x = two_pi * i / nx;
        if (x < window.x0 || x > window.x1) continue;
        if (std::max(std::abs(state.eta(i)), std::abs(phi_x(i))) > tol) return false;
    }
    return true;
}

ProbeSeries rest_propagation_probe(ZcsModel& model, const SurfaceState& initial, Window window,
                                   double tol, double T, double dt) {
    initial.validate();
    if (!(T > 0.0 && dt > 0.0 && dt <= T))
        throw ucw::invalid_argument("rest_propagation_probe: need 0 < dt <= T");
    if (!at_rest(initial, window, tol))
        throw ucw::invalid_argument("rest_propagation_probe: initial state not at rest on window");

    const int nx = model.nx();
    const int steps = static_cast<int>(std::ceil(T / dt - 1e-12));
    const double eta0_max = std::max(initial.eta.lpNorm<Eigen::Infinity>(), 1e-300);

    ProbeSeries series;
    SurfaceState state = initial;
    auto record = [&](double t) {
        const Eigen::VectorXd phi_x = spectral::derivative_periodic(state.phi, 1);
        double act = 0.0;
        for (int i = 0; i < nx; ++i) {
            const double x = two_pi * i / nx;
            if (x < window.x0 || x > window.x1) continue;
            act = std::max(act, std::max(std::abs(state.eta(i)), std::abs(phi_x(i))));
        }
        const Eigen::VectorXd Gphi = model.dn(state);
        const double energy =
            (0.5 * model.g() * state.eta.array().square() +
             0.5 * state.phi.array() * Gphi.array())
                .sum() *
            (two_pi / nx);
        series.t.push_back(t);
        series.activity.push_back(act);
        series.energy.push_back(energy);
        if (!series.first_exceed_t && act > tol) series.first_exceed_t = t;
    };

    record(0.0);
    for (int n = 1; n <= steps; ++n) {
        state = model.step_rk4(state, dt);
        spectral::dealias_two_thirds(state.eta);
        spectral::dealias_two_thirds(state.phi);
        if (!state.eta.allFinite() || !state.phi.allFinite() ||
            state.eta.lpNorm<Eigen::Infinity>() > 10.0 * eta0_max)
            throw ucw::numerical_error("rest_propagation_probe: instability detected at t = " +
                                       std::to_string(n * dt));
        record(n * dt);
    }
    return series;
}

} // namespace ucw::fluid
