#include "ucwave.h"

#include "ucw/config.hpp"
#include "ucw/dispersion.hpp"
#include "ucw/errors.hpp"
#include "ucw/fluid.hpp"
#include "ucw/io.hpp"
#include "ucw/lattice.hpp"
#include "ucw/observability.hpp"
#include "ucw/runner.hpp"
#include "ucw/spectral.hpp"
#include "ucw/version.hpp"

#include <cmath>
#include <cstring>
#include <limits>
#include <sstream>
#include <string>

struct ucw_relation {
    ucw::dispersion::Relation impl;
};
struct ucw_state {
    ucw::spectral::FourierState impl;
};
struct ucw_lattice {
    ucw::lattice::FrequencyLattice impl;
};
struct ucw_domain {
    double t_max;
    std::vector<ucw::observability::Rect> rects;

    ucw::observability::SpaceTimeDomain build() const {
        return ucw::observability::SpaceTimeDomain(rects, t_max);
    }
};
struct ucw_gram {
    ucw::observability::GramMatrix impl;
};
struct ucw_geometry {
    ucw::fluid::Geometry impl;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

ucw_status status_of(const std::exception& e) {
    set_error(e.what());
    if (dynamic_cast<const ucw::invalid_argument*>(&e)) return UCW_ERR_INVALID;
    if (dynamic_cast<const ucw::domain_error*>(&e)) return UCW_ERR_DOMAIN;
    if (dynamic_cast<const ucw::numerical_error*>(&e)) return UCW_ERR_NUMERICAL;
    if (dynamic_cast<const ucw::io_error*>(&e)) return UCW_ERR_IO;
    if (dynamic_cast<const std::invalid_argument*>(&e)) return UCW_ERR_INVALID;
    return UCW_ERR_NUMERICAL;
}

template <typename Fn>
ucw_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return UCW_OK;
    } catch (const std::exception& e) {
        return status_of(e);
    } catch (...) {
        set_error("unknown error");
        return UCW_ERR_NUMERICAL;
    }
}

ucw_status require(bool cond, const char* msg) {
    if (cond) return UCW_OK;
    set_error(msg);
    return UCW_ERR_INVALID;
}

} // namespace

extern "C" {

const char* ucw_version(void) { return ucw::version; }

const char* ucw_last_error(void) { return g_last_error.c_str(); }

/* ------------------------------------------------------------ dispersion */

ucw_status ucw_relation_power(double p, ucw_relation** out) {
    if (auto s = require(out != nullptr, "out must not be NULL")) return s;
    return guarded([&] { *out = new ucw_relation{ucw::dispersion::Relation::power(p)}; });
}

ucw_status ucw_relation_transport(double c, ucw_relation** out) {
    if (auto s = require(out != nullptr, "out must not be NULL")) return s;
    return guarded([&] { *out = new ucw_relation{ucw::dispersion::Relation::transport(c)}; });
}

ucw_status ucw_relation_schrodinger(ucw_relation** out) {
    if (auto s = require(out != nullptr, "out must not be NULL")) return s;
    return guarded([&] { *out = new ucw_relation{ucw::dispersion::Relation::schrodinger()}; });
}

ucw_status ucw_relation_kdv_linear(ucw_relation** out) {
    if (auto s = require(out != nullptr, "out must not be NULL")) return s;
    return guarded([&] { *out = new ucw_relation{ucw::dispersion::Relation::kdv_linear()}; });
}

ucw_status ucw_relation_gravity_capillary(double g, double S, double H, ucw_relation** out) {
    if (auto s = require(out != nullptr, "out must not be NULL")) return s;
    return guarded(
        [&] { *out = new ucw_relation{ucw::dispersion::Relation::gravity_capillary(g, S, H)}; });
}

void ucw_relation_free(ucw_relation* rel) { delete rel; }

ucw_status ucw_relation_eval(const ucw_relation* rel, double k, double* omega) {
    if (auto s = require(rel && omega, "rel and omega must not be NULL")) return s;
    return guarded([&] { *omega = rel->impl.eval(k); });
}

ucw_status ucw_relation_derivative(const ucw_relation* rel, double k, int n, double* value) {
    if (auto s = require(rel && value, "rel and value must not be NULL")) return s;
    return guarded([&] { *value = rel->impl.derivative(k, n); });
}

double ucw_relation_order(const ucw_relation* rel) {
    return rel ? rel->impl.order_m() : std::numeric_limits<double>::quiet_NaN();
}

ucw_status ucw_relation_check_superlinear(const ucw_relation* rel, double k_max, int* verdict) {
    if (auto s = require(rel && verdict, "rel and verdict must not be NULL")) return s;
    return guarded([&] {
        const auto rep = ucw::dispersion::check_superlinear(rel->impl, k_max);
        *verdict = static_cast<int>(rep.verdict);
    });
}

ucw_status ucw_relation_check_symbol_bound(const ucw_relation* rel, double order_m, double C,
                                           const double* k_samples, size_t n_samples,
                                           int* holds) {
    if (auto s = require(rel && holds && (k_samples || n_samples == 0),
                         "rel, holds and k_samples must not be NULL"))
        return s;
    return guarded([&] {
        std::vector<double> ks(k_samples, k_samples + n_samples);
        *holds = ucw::dispersion::check_symbol_bound(rel->impl, order_m, C, ks) ? 1 : 0;
    });
}

/* --------------------------------------------------------- Fourier states */

ucw_status ucw_state_create(int truncation_n, const double* re, const double* im,
                            ucw_state** out) {
    if (auto s = require(out != nullptr, "out must not be NULL")) return s;
    return guarded([&] {
        auto state = ucw::spectral::FourierState::zeros(truncation_n);
        const int modes = state.n_modes();
        for (int i = 0; i < modes; ++i)
            state.coeffs(i) = {re ? re[i] : 0.0, im ? im[i] : 0.0};
        state.validate();
        *out = new ucw_state{std::move(state)};
    });
}

void ucw_state_free(ucw_state* state) { delete state; }

int ucw_state_truncation(const ucw_state* state) { return state ? state->impl.truncation_N : -1; }

ucw_status ucw_state_get(const ucw_state* state, int k, double* re, double* im) {
    if (auto s = require(state && re && im, "state, re, im must not be NULL")) return s;
    if (auto s = require(std::abs(k) <= state->impl.truncation_N, "mode outside truncation"))
        return s;
    const auto c = state->impl.coeff(k);
    *re = c.real();
    *im = c.imag();
    return UCW_OK;
}

ucw_status ucw_state_set(ucw_state* state, int k, double re, double im) {
    if (auto s = require(state != nullptr, "state must not be NULL")) return s;
    if (auto s = require(std::abs(k) <= state->impl.truncation_N, "mode outside truncation"))
        return s;
    state->impl.coeff(k) = {re, im};
    return UCW_OK;
}

double ucw_state_l2_norm(const ucw_state* state) {
    return state ? state->impl.l2_norm() : std::numeric_limits<double>::quiet_NaN();
}

ucw_status ucw_state_evolve(const ucw_state* state, const ucw_relation* rel, double t,
                            ucw_state** out) {
    if (auto s = require(state && rel && out, "state, rel, out must not be NULL")) return s;
    return guarded(
        [&] { *out = new ucw_state{ucw::spectral::evolve(state->impl, rel->impl, t)}; });
}

ucw_status ucw_state_synthesize(const ucw_state* state, int nx, double* re, double* im) {
    if (auto s = require(state && re && im, "state, re, im must not be NULL")) return s;
    return guarded([&] {
        const auto u = ucw::spectral::synthesize(state->impl, nx);
        for (int i = 0; i < nx; ++i) {
            re[i] = u(i).real();
            im[i] = u(i).imag();
        }
    });
}

ucw_status ucw_state_evaluate(const ucw_state* state, const ucw_relation* rel, const double* xs,
                              const double* ts, size_t n_points, double* re, double* im) {
    if (auto s = require(state && rel && xs && ts && re && im, "NULL argument")) return s;
    return guarded([&] {
        std::vector<std::pair<double, double>> pts(n_points);
        for (size_t i = 0; i < n_points; ++i) pts[i] = {xs[i], ts[i]};
        const auto values = ucw::spectral::evaluate_solution(state->impl, rel->impl, pts);
        for (size_t i = 0; i < n_points; ++i) {
            re[i] = values[i].real();
            im[i] = values[i].imag();
        }
    });
}

ucw_status ucw_state_save(const ucw_state* state, const char* path) {
    if (auto s = require(state && path, "state and path must not be NULL")) return s;
    return guarded([&] { ucw::io::save_ndjson(state->impl, path); });
}

ucw_status ucw_state_load(const char* path, ucw_state** out) {
    if (auto s = require(path && out, "path and out must not be NULL")) return s;
    return guarded([&] { *out = new ucw_state{ucw::io::load_fourier_state(path)}; });
}

/* -------------------------------------------------------------- lattices */

ucw_status ucw_lattice_create(const ucw_relation* rel, int truncation_n, int mirror,
                              ucw_lattice** out) {
    if (auto s = require(rel && out, "rel and out must not be NULL")) return s;
    return guarded([&] {
        const auto sign = mirror ? ucw::lattice::SignConvention::minus_omega
                                 : ucw::lattice::SignConvention::omega;
        *out = new ucw_lattice{ucw::lattice::FrequencyLattice(rel->impl, truncation_n, sign)};
    });
}

void ucw_lattice_free(ucw_lattice* lat) { delete lat; }

ucw_status ucw_lattice_separation(const ucw_lattice* lat, double* gamma) {
    if (auto s = require(lat && gamma, "lat and gamma must not be NULL")) return s;
    return guarded([&] { *gamma = ucw::lattice::separation(lat->impl); });
}

ucw_status ucw_lattice_count_in_ball(const ucw_lattice* lat, double cx, double cy, double r,
                                     long* count) {
    if (auto s = require(lat && count, "lat and count must not be NULL")) return s;
    return guarded([&] { *count = ucw::lattice::count_in_ball(lat->impl, {cx, cy}, r); });
}

ucw_status ucw_lattice_counting_function(const ucw_lattice* lat, double r, double x_max,
                                         int threads, long* count) {
    if (auto s = require(lat && count, "lat and count must not be NULL")) return s;
    return guarded(
        [&] { *count = ucw::lattice::counting_function(lat->impl, r, x_max, threads); });
}

ucw_status ucw_annulus_vertical_extent(double x_abs, double r, double k, double* d) {
    if (auto s = require(d != nullptr, "d must not be NULL")) return s;
    return guarded([&] { *d = ucw::lattice::annulus_vertical_extent(x_abs, r, k); });
}

ucw_status ucw_annulus_max_extent(double x_abs, double r, double* D) {
    if (auto s = require(D != nullptr, "D must not be NULL")) return s;
    return guarded([&] { *D = ucw::lattice::max_vertical_extent(x_abs, r); });
}

/* --------------------------------------------- domains and frame bounds */

ucw_status ucw_domain_create(double t_max, ucw_domain** out) {
    if (auto s = require(out != nullptr, "out must not be NULL")) return s;
    if (auto s = require(t_max > 0.0, "t_max must be > 0")) return s;
    *out = new ucw_domain{t_max, {}};
    return UCW_OK;
}

ucw_status ucw_domain_add_rect(ucw_domain* dom, double x0, double x1, double t0, double t1) {
    if (auto s = require(dom != nullptr, "dom must not be NULL")) return s;
    if (auto s = require(x0 < x1 && t0 < t1, "rectangle must satisfy x0 < x1 and t0 < t1"))
        return s;
    dom->rects.push_back({x0, x1, t0, t1});
    return UCW_OK;
}

void ucw_domain_free(ucw_domain* dom) { delete dom; }

ucw_status ucw_gram_build(const ucw_lattice* lat, const ucw_domain* dom, int threads,
                          ucw_gram** out) {
    if (auto s = require(lat && dom && out, "lat, dom, out must not be NULL")) return s;
    return guarded([&] {
        *out = new ucw_gram{
            ucw::observability::gram_matrix(lat->impl, dom->build(), threads)};
    });
}

void ucw_gram_free(ucw_gram* gram) { delete gram; }

int ucw_gram_dim(const ucw_gram* gram) { return gram ? gram->impl.dim() : 0; }

double ucw_gram_domain_area(const ucw_gram* gram) {
    return gram ? gram->impl.domain_area : std::numeric_limits<double>::quiet_NaN();
}

ucw_status ucw_gram_entry(const ucw_gram* gram, int row, int col, double* re, double* im) {
    if (auto s = require(gram && re && im, "gram, re, im must not be NULL")) return s;
    if (auto s = require(row >= 0 && row < gram->impl.dim() && col >= 0 &&
                             col < gram->impl.dim(),
                         "entry index out of range"))
        return s;
    const auto v = gram->impl.entries(row, col);
    *re = v.real();
    *im = v.imag();
    return UCW_OK;
}

ucw_status ucw_gram_frame_bounds(const ucw_gram* gram, double* d_minus_raw, double* d_minus,
                                 double* d_plus) {
    if (auto s = require(gram && d_minus_raw && d_minus && d_plus, "NULL argument")) return s;
    return guarded([&] {
        const auto fb = ucw::observability::frame_bounds(gram->impl);
        *d_minus_raw = fb.d_minus_raw;
        *d_minus = fb.d_minus;
        *d_plus = fb.d_plus;
    });
}

ucw_status ucw_gram_quadratic_form(const ucw_gram* gram, const double* re, const double* im,
                                   double* mass) {
    if (auto s = require(gram && re && im && mass, "NULL argument")) return s;
    return guarded([&] {
        const int dim = gram->impl.dim();
        Eigen::VectorXcd a(dim);
        for (int i = 0; i < dim; ++i) a(i) = {re[i], im[i]};
        *mass = (a.adjoint() * gram->impl.entries * a)(0, 0).real();
    });
}

ucw_status ucw_restricted_mass(const ucw_state* state, const ucw_relation* rel,
                               const ucw_domain* dom, int threads, double* mass) {
    if (auto s = require(state && rel && dom && mass, "NULL argument")) return s;
    return guarded([&] {
        *mass = ucw::observability::restricted_mass(state->impl, rel->impl, dom->build(),
                                                    threads);
    });
}

ucw_status ucw_certificate(const ucw_relation* rel, const ucw_domain* dom, const int* n_list,
                           size_t n_count, int threads, double* rows) {
    if (auto s = require(rel && dom && n_list && rows && n_count > 0, "NULL argument")) return s;
    return guarded([&] {
        std::vector<int> ns(n_list, n_list + n_count);
        const auto cert = ucw::observability::ucp_certificate(rel->impl, dom->build(), ns,
                                                              threads);
        for (size_t i = 0; i < cert.size(); ++i) {
            rows[3 * i] = cert[i].d_minus_raw;
            rows[3 * i + 1] = cert[i].d_minus;
            rows[3 * i + 2] = cert[i].d_plus;
        }
    });
}

ucw_status ucw_vanishing_witness(const ucw_relation* rel, const ucw_domain* dom,
                                 int truncation_n, int threads, ucw_state** witness,
                                 double* residual_mass) {
    if (auto s = require(rel && dom && witness && residual_mass, "NULL argument")) return s;
    return guarded([&] {
        auto w = ucw::observability::vanishing_witness(rel->impl, dom->build(), truncation_n,
                                                       threads);
        *witness = new ucw_state{std::move(w.state)};
        *residual_mass = w.residual_mass;
    });
}

/* ------------------------------------------------------- fluid / DN layer */

double ucw_dn_flat_symbol(double k, double H) {
    const double depth = H <= 0.0 ? std::numeric_limits<double>::infinity() : H;
    return ucw::fluid::dn_flat_symbol(k, depth);
}

ucw_status ucw_geometry_create(double H0, int nx, int nz, const double* b, const double* eta,
                               double h_min, ucw_geometry** out) {
    if (auto s = require(out != nullptr, "out must not be NULL")) return s;
    return guarded([&] {
        ucw::fluid::Geometry geom;
        geom.H0 = H0;
        geom.nx = nx;
        geom.nz = nz;
        geom.h_min = h_min;
        geom.b = Eigen::VectorXd::Zero(nx);
        geom.eta = Eigen::VectorXd::Zero(nx);
        if (b)
            for (int i = 0; i < nx; ++i) geom.b(i) = b[i];
        if (eta)
            for (int i = 0; i < nx; ++i) geom.eta(i) = eta[i];
        geom.validate();
        *out = new ucw_geometry{std::move(geom)};
    });
}

void ucw_geometry_free(ucw_geometry* geom) { delete geom; }

ucw_status ucw_dn_apply(const ucw_geometry* geom, const double* phi, double* g_phi) {
    if (auto s = require(geom && phi && g_phi, "NULL argument")) return s;
    return guarded([&] {
        Eigen::VectorXd p(geom->impl.nx);
        for (int i = 0; i < geom->impl.nx; ++i) p(i) = phi[i];
        const Eigen::VectorXd g = ucw::fluid::dn_apply(geom->impl, p);
        for (int i = 0; i < geom->impl.nx; ++i) g_phi[i] = g(i);
    });
}

ucw_status ucw_harmonic_extend(const ucw_geometry* geom, const double* phi, double* field,
                               double* residual) {
    if (auto s = require(geom && phi && field && residual, "NULL argument")) return s;
    return guarded([&] {
        Eigen::VectorXd p(geom->impl.nx);
        for (int i = 0; i < geom->impl.nx; ++i) p(i) = phi[i];
        const auto pf = ucw::fluid::harmonic_extend(geom->impl, p);
        for (int j = 0; j < pf.nz; ++j)
            for (int i = 0; i < pf.nx; ++i)
                field[static_cast<size_t>(j) * pf.nx + i] = pf.phi(j, i);
        *residual = pf.residual;
    });
}

ucw_status ucw_zcs_rhs(double H0, int nx, int nz, double g, const double* b, const double* eta,
                       const double* phi, double* eta_t, double* phi_t) {
    if (auto s = require(eta && phi && eta_t && phi_t, "NULL argument")) return s;
    return guarded([&] {
        Eigen::VectorXd bottom = Eigen::VectorXd::Zero(nx);
        if (b)
            for (int i = 0; i < nx; ++i) bottom(i) = b[i];
        ucw::fluid::ZcsModel model(H0, std::move(bottom), nz, g);
        ucw::fluid::SurfaceState state = ucw::fluid::SurfaceState::zero(nx);
        for (int i = 0; i < nx; ++i) {
            state.eta(i) = eta[i];
            state.phi(i) = phi[i];
        }
        const auto rhs = model.rhs(state);
        for (int i = 0; i < nx; ++i) {
            eta_t[i] = rhs.first(i);
            phi_t[i] = rhs.second(i);
        }
    });
}

ucw_status ucw_b_and_v(int nx, const double* eta, const double* phi, const double* g_phi,
                       double* B, double* v_printed, double* v_standard) {
    if (auto s = require(eta && phi && g_phi && B && v_printed && v_standard, "NULL argument"))
        return s;
    return guarded([&] {
        ucw::fluid::SurfaceState state = ucw::fluid::SurfaceState::zero(nx);
        Eigen::VectorXd gp(nx);
        for (int i = 0; i < nx; ++i) {
            state.eta(i) = eta[i];
            state.phi(i) = phi[i];
            gp(i) = g_phi[i];
        }
        const auto sv = ucw::fluid::b_and_v(state, gp);
        for (int i = 0; i < nx; ++i) {
            B[i] = sv.B(i);
            v_printed[i] = sv.v_printed(i);
            v_standard[i] = sv.v_standard(i);
        }
    });
}

ucw_status ucw_linear_dispersion_fit(int k, double H, double g, int nx, int nz, double dt,
                                     int steps, double amplitude, double* omega) {
    if (auto s = require(omega != nullptr, "omega must not be NULL")) return s;
    return guarded([&] {
        const auto fit =
            ucw::fluid::linear_dispersion_check(k, H, g, nx, nz, dt, steps, amplitude);
        *omega = fit.omega;
    });
}

ucw_status ucw_at_rest(int nx, const double* eta, const double* phi, double x0, double x1,
                       double tol, int* rest) {
    if (auto s = require(eta && phi && rest, "NULL argument")) return s;
    return guarded([&] {
        ucw::fluid::SurfaceState state = ucw::fluid::SurfaceState::zero(nx);
        for (int i = 0; i < nx; ++i) {
            state.eta(i) = eta[i];
            state.phi(i) = phi[i];
        }
        *rest = ucw::fluid::at_rest(state, {x0, x1}, tol) ? 1 : 0;
    });
}

/* -------------------------------------------------------------- runner */

ucw_status ucw_run_config(const char* config_path, const char* expect_command,
                          const char* out_dir, int threads, int* exit_code) {
    if (auto s = require(config_path && exit_code, "config_path and exit_code must not be NULL"))
        return s;
    const auto parsed = ucw::config::parse_config_file(config_path);
    if (!parsed.ok()) {
        std::ostringstream os;
        for (const auto& e : parsed.errors) {
            if (e.line > 0) os << "line " << e.line << ": ";
            os << e.message << "\n";
        }
        set_error(os.str());
        *exit_code = 2;
        return UCW_ERR_CONFIG;
    }
    if (expect_command &&
        std::string(expect_command) != ucw::config::to_string(parsed.config->command)) {
        set_error(std::string("config command '") +
                  ucw::config::to_string(parsed.config->command) + "' does not match '" +
                  expect_command + "'");
        *exit_code = 2;
        return UCW_ERR_CONFIG;
    }
    const auto result =
        ucw::runner::run(*parsed.config, out_dir ? std::string(out_dir) : std::string(), threads);
    *exit_code = result.exit_code;
    switch (result.exit_code) {
        case 0: g_last_error.clear(); return UCW_OK;
        case 1: {
            std::ostringstream os;
            for (const auto& c : result.checks)
                if (!c.pass) os << "check failed: " << c.name << " (" << c.detail << ")\n";
            set_error(os.str());
            return UCW_ERR_CHECK_FAILED;
        }
        case 2: set_error(result.error); return UCW_ERR_CONFIG;
        default: set_error(result.error); return UCW_ERR_NUMERICAL;
    }
}

ucw_status ucw_validate_config(const char* config_path) {
    if (auto s = require(config_path != nullptr, "config_path must not be NULL")) return s;
    const auto parsed = ucw::config::parse_config_file(config_path);
    if (parsed.ok()) {
        g_last_error.clear();
        return UCW_OK;
    }
    std::ostringstream os;
    for (const auto& e : parsed.errors) {
        if (e.line > 0) os << "line " << e.line << ": ";
        os << e.message << "\n";
    }
    set_error(os.str());
    return UCW_ERR_CONFIG;
}

} // extern "C"
