#include "ucw/runner.hpp"

#include "ucw/dispersion.hpp"
#include "ucw/errors.hpp"
#include "ucw/fluid.hpp"
#include "ucw/io.hpp"
#include "ucw/lattice.hpp"
#include "ucw/observability.hpp"
#include "ucw/spectral.hpp"
#include "ucw/version.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <random>
#include <sstream>

namespace ucw::runner {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr double two_pi = 6.283185307179586476925286766559;

double unit_symmetric(std::mt19937_64& rng) {
    // Uniform on [-1, 1) from the top 53 bits; identical on every platform.
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return 2.0 * u - 1.0;
}

std::string fmt(double v) { return io::format_double(v); }

struct Context {
    fs::path out_dir;
    int threads = 1;
    std::vector<CheckResult>* checks;
    std::vector<std::string>* outputs;
    json extra = json::object(); // command-specific manifest fields

    void emit(const std::string& rel_path, const std::string& content) const {
        io::write_text_atomic(out_dir / rel_path, content);
        outputs->push_back(rel_path);
    }

    void check(const std::string& name, bool pass, const std::string& detail) const {
        checks->push_back({name, pass, detail});
    }
};

// ---------------------------------------------------------------- dispersion

void run_dispersion_check(const config::DispersionCheckCfg& cfg, Context& ctx) {
    const auto rel = cfg.relation.build();
    const auto rep = dispersion::check_superlinear(rel, cfg.k_max);

    std::ostringstream csv;
    csv << "k,ratio_pos,ratio_neg\n";
    for (size_t i = 0; i < rep.k.size(); ++i)
        csv << fmt(rep.k[i]) << ',' << fmt(rep.ratio_pos[i]) << ',' << fmt(rep.ratio_neg[i])
            << '\n';
    ctx.emit("superlinearity.csv", csv.str());

    ctx.extra["verdict"] = dispersion::to_string(rep.verdict);
    if (cfg.expect_verdict)
        ctx.check("superlinearity_verdict",
                  dispersion::to_string(rep.verdict) == *cfg.expect_verdict,
                  std::string("got ") + dispersion::to_string(rep.verdict) + ", expected " +
                      *cfg.expect_verdict);

    if (!cfg.bound_samples.empty()) {
        const double m = cfg.bound_m.value_or(rel.order_m());
        const auto cs = dispersion::min_symbol_constants(rel, m, cfg.bound_samples);
        ctx.extra["symbol_bound"] = {
            {"m", m}, {"min_C", {cs[0], cs[1], cs[2]}}};
        if (cfg.bound_C) {
            const bool holds =
                dispersion::check_symbol_bound(rel, m, *cfg.bound_C, cfg.bound_samples);
            ctx.extra["symbol_bound"]["holds_with_C"] = holds;
            if (cfg.bound_expect)
                ctx.check("symbol_bound", holds == *cfg.bound_expect,
                          "bound with C=" + fmt(*cfg.bound_C) + (holds ? " holds" : " fails"));
        }
    }
}

// ---------------------------------------------------------------------- solve

void run_solve(const config::SolveCfg& cfg, Context& ctx) {
    json case_summaries = json::array();
    for (size_t ci = 0; ci < cfg.cases.size(); ++ci) {
        const auto& sc = cfg.cases[ci];
        const auto rel = sc.relation.build();
        spectral::FourierState g = spectral::FourierState::zeros(sc.truncation_n);
        if (sc.init == "random") {
            std::mt19937_64 rng(sc.seed);
            for (int i = 0; i < g.coeffs.size(); ++i) {
                const double re = unit_symmetric(rng);
                const double im = unit_symmetric(rng);
                g.coeffs(i) = {re, im};
            }
        } else if (sc.init == "coeffs") {
            for (const auto& c : sc.coeffs)
                g.coeff(static_cast<int>(c[0])) = {c[1], c[2]};
        } else {
            g = io::load_fourier_state(sc.file);
            if (g.truncation_N != sc.truncation_n)
                throw ucw::invalid_argument("case " + std::to_string(ci + 1) +
                                            ": state file truncation does not match config");
        }

        const auto evolved = spectral::evolve(g, rel, sc.t);
        const std::string tag = "case" + std::to_string(ci + 1);
        ctx.emit(tag + "_state.ndjson", io::to_ndjson(evolved) + "\n");

        const double n0 = g.l2_norm();
        const double drift = n0 > 0.0 ? std::abs(evolved.l2_norm() - n0) / n0 : 0.0;
        json summary = {{"case", ci + 1},
                        {"relation", sc.relation.label()},
                        {"l2_drift", drift}};
        if (sc.unitarity_tol)
            ctx.check(tag + "_unitarity", drift < *sc.unitarity_tol,
                      "relative drift " + fmt(drift) + " vs " + fmt(*sc.unitarity_tol));

        if (cfg.grid_nx) {
            std::ostringstream csv;
            csv << "x,t,re,im\n";
            for (int jt = 0; jt < cfg.grid_nt; ++jt) {
                const double t = cfg.grid_nt == 1 ? cfg.grid_t0
                                                  : cfg.grid_t0 + (cfg.grid_t1 - cfg.grid_t0) *
                                                                      jt / (cfg.grid_nt - 1);
                const auto u = spectral::synthesize(spectral::evolve(g, rel, t), *cfg.grid_nx);
                for (int i = 0; i < *cfg.grid_nx; ++i) {
                    const double x = two_pi * i / *cfg.grid_nx;
                    csv << fmt(x) << ',' << fmt(t) << ',' << fmt(u(i).real()) << ','
                        << fmt(u(i).imag()) << '\n';
                }
            }
            ctx.emit(tag + "_samples.csv", csv.str());
        }
        case_summaries.push_back(std::move(summary));
    }
    ctx.extra["cases"] = std::move(case_summaries);
}

// -------------------------------------------------------------- lattice-count

void run_lattice_count(const config::LatticeCountCfg& cfg, Context& ctx) {
    json case_summaries = json::array();
    for (size_t ci = 0; ci < cfg.cases.size(); ++ci) {
        const auto& lc = cfg.cases[ci];
        const auto rel = lc.relation.build();
        const auto rep =
            lattice::beurling_ratio_curve(rel, cfg.truncation_n, cfg.radii, ctx.threads);

        std::ostringstream csv;
        csv << "r,N_of_r,ratio\n";
        for (size_t i = 0; i < rep.radii.size(); ++i)
            csv << fmt(rep.radii[i]) << ',' << rep.n_of_r[i] << ',' << fmt(rep.ratios[i]) << '\n';
        json meta = {{"record", "counting_meta"},
                     {"verdict", lattice::to_string(rep.verdict)},
                     {"center_window", rep.center_window},
                     {"center_grid_step", rep.center_grid_step}};
        csv << meta.dump() << '\n';
        const std::string tag = "case" + std::to_string(ci + 1);
        ctx.emit(tag + "_counting.csv", csv.str());

        case_summaries.push_back({{"case", ci + 1},
                                  {"relation", lc.relation.label()},
                                  {"verdict", lattice::to_string(rep.verdict)}});

        if (lc.expect_verdict)
            ctx.check(tag + "_verdict", lattice::to_string(rep.verdict) == *lc.expect_verdict,
                      std::string("got ") + lattice::to_string(rep.verdict) + ", expected " +
                          *lc.expect_verdict);
        if (lc.final_ratio_max_frac)
            ctx.check(tag + "_final_ratio",
                      rep.ratios.back() < *lc.final_ratio_max_frac * rep.ratios.front(),
                      "final " + fmt(rep.ratios.back()) + " vs " +
                          fmt(*lc.final_ratio_max_frac * rep.ratios.front()));
        if (lc.tail_mean) {
            const size_t tail = std::min<size_t>(3, rep.ratios.size());
            double mean = 0.0;
            for (size_t i = rep.ratios.size() - tail; i < rep.ratios.size(); ++i)
                mean += rep.ratios[i];
            mean /= static_cast<double>(tail);
            const double tol = lc.tail_mean_tol.value_or(0.05);
            ctx.check(tag + "_tail_mean",
                      std::abs(mean - *lc.tail_mean) <= tol * std::abs(*lc.tail_mean),
                      "tail mean " + fmt(mean) + " vs " + fmt(*lc.tail_mean) + " (tol " +
                          fmt(tol) + ")");
        }
    }
    if (!case_summaries.empty()) ctx.extra["cases"] = std::move(case_summaries);

    if (cfg.annulus) {
        const auto& an = *cfg.annulus;
        std::ostringstream csv;
        csv << "x_abs,D,D_over_r\n";
        std::vector<double> ds;
        for (double x : an.x_abs) {
            const double d = lattice::max_vertical_extent(x, an.r);
            ds.push_back(d);
            csv << fmt(x) << ',' << fmt(d) << ',' << fmt(d / an.r) << '\n';
        }
        ctx.emit("annulus.csv", csv.str());
        if (an.check_monotone) {
            bool mono = true;
            for (size_t i = 0; i + 1 < ds.size(); ++i)
                if (!(ds[i] < ds[i + 1])) mono = false;
            ctx.check("annulus_monotone", mono, "D must increase with x_abs");
        }
        if (an.limit_tol) {
            const double ratio = ds.back() / an.r;
            const double target = std::sqrt(8.0);
            ctx.check("annulus_limit", std::abs(ratio - target) <= *an.limit_tol,
                      "D/r = " + fmt(ratio) + " vs sqrt(8) within " + fmt(*an.limit_tol));
        }
    }
}

// -------------------------------------------------------------- frame-bounds

// Direct-summation evaluation of |u|^2 on the midpoint grid; the quadrature
// cross-check must not share code with the closed-form Gram path.
double midpoint_mass(const Eigen::VectorXcd& coeffs, const std::vector<double>& omega,
                     const observability::SpaceTimeDomain& dom, int n) {
    const int modes = static_cast<int>(coeffs.size());
    const int N = (modes - 1) / 2;
    double total = 0.0;
    for (const auto& rect : dom.rects()) {
        const double hx = (rect.x1 - rect.x0) / n;
        const double ht = (rect.t1 - rect.t0) / n;
        std::vector<std::complex<double>> ex(static_cast<size_t>(modes) * n);
        std::vector<std::complex<double>> et(static_cast<size_t>(modes) * n);
        for (int m = 0; m < modes; ++m) {
            const double k = m - N;
            for (int i = 0; i < n; ++i) {
                const double x = rect.x0 + (i + 0.5) * hx;
                const double t = rect.t0 + (i + 0.5) * ht;
                ex[static_cast<size_t>(m) * n + i] = std::polar(1.0, k * x);
                et[static_cast<size_t>(m) * n + i] =
                    std::polar(1.0, -omega[static_cast<size_t>(m)] * t);
            }
        }
        double rect_sum = 0.0;
        for (int jt = 0; jt < n; ++jt) {
            for (int i = 0; i < n; ++i) {
                std::complex<double> u{0.0, 0.0};
                for (int m = 0; m < modes; ++m)
                    u += coeffs(m) * ex[static_cast<size_t>(m) * n + i] *
                         et[static_cast<size_t>(m) * n + jt];
                rect_sum += std::norm(u);
            }
        }
        total += rect_sum * hx * ht;
    }
    return total;
}

// Composite-midpoint error bound from coefficient moment sums.
double midpoint_envelope(const Eigen::VectorXcd& coeffs, const std::vector<double>& omega,
                         const observability::SpaceTimeDomain& dom, int n) {
    const int modes = static_cast<int>(coeffs.size());
    const int N = (modes - 1) / 2;
    double a0 = 0.0, a1x = 0.0, a2x = 0.0, a1t = 0.0, a2t = 0.0;
    for (int m = 0; m < modes; ++m) {
        const double a = std::abs(coeffs(m));
        const double k = std::abs(static_cast<double>(m - N));
        const double w = std::abs(omega[static_cast<size_t>(m)]);
        a0 += a;
        a1x += k * a;
        a2x += k * k * a;
        a1t += w * a;
        a2t += w * w * a;
    }
    const double bxx = 2.0 * (a0 * a2x + a1x * a1x);
    const double btt = 2.0 * (a0 * a2t + a1t * a1t);
    double bound = 0.0;
    for (const auto& rect : dom.rects()) {
        const double hx = (rect.x1 - rect.x0) / n;
        const double ht = (rect.t1 - rect.t0) / n;
        bound += rect.area() * (hx * hx * bxx + ht * ht * btt) / 24.0;
    }
    return bound;
}

void run_frame_bounds(const config::FrameBoundsCfg& cfg, Context& ctx) {
    const auto rel = cfg.relation.build();
    const auto dom = cfg.domain.build();
    const lattice::FrequencyLattice lat(rel, cfg.truncation_n);
    const auto G = observability::gram_matrix(lat, dom, ctx.threads);
    const auto fb = observability::frame_bounds(G);

    std::ostringstream csv;
    csv << "N,d_minus_raw,d_minus,d_plus,domain_area\n";
    csv << fb.truncation_N << ',' << fmt(fb.d_minus_raw) << ',' << fmt(fb.d_minus) << ','
        << fmt(fb.d_plus) << ',' << fmt(fb.domain_area) << '\n';
    ctx.emit("frame_bounds.csv", csv.str());
    ctx.extra["d_minus"] = fb.d_minus;
    ctx.extra["d_plus"] = fb.d_plus;
    ctx.extra["domain_area"] = fb.domain_area;

    if (cfg.identity_scale) {
        double max_dev = 0.0;
        for (int i = 0; i < G.dim(); ++i)
            for (int j = 0; j < G.dim(); ++j) {
                const std::complex<double> want = (i == j) ? *cfg.identity_scale : 0.0;
                max_dev = std::max(max_dev, std::abs(G.entries(i, j) - want));
            }
        ctx.check("gram_identity", max_dev <= *cfg.identity_tol,
                  "max entrywise deviation " + fmt(max_dev) + " vs " + fmt(*cfg.identity_tol));
    }
    if (cfg.expect_d_minus && cfg.bounds_tol)
        ctx.check("d_minus", std::abs(fb.d_minus - *cfg.expect_d_minus) <= *cfg.bounds_tol,
                  "d_minus " + fmt(fb.d_minus) + " vs " + fmt(*cfg.expect_d_minus));
    if (cfg.expect_d_plus && cfg.bounds_tol)
        ctx.check("d_plus", std::abs(fb.d_plus - *cfg.expect_d_plus) <= *cfg.bounds_tol,
                  "d_plus " + fmt(fb.d_plus) + " vs " + fmt(*cfg.expect_d_plus));

    if (cfg.sandwich) {
        std::vector<double> omega(static_cast<size_t>(G.dim()));
        for (int m = 0; m < G.dim(); ++m)
            omega[static_cast<size_t>(m)] = lat.point(static_cast<size_t>(m))[1];
        std::mt19937_64 rng(cfg.sandwich->seed);
        std::ostringstream csv2;
        csv2 << "vector,coeff_energy,mass,lower,upper,quadrature,envelope\n";
        bool sandwich_ok = true, quad_ok = true;
        for (int v = 0; v < cfg.sandwich->vectors; ++v) {
            Eigen::VectorXcd a(G.dim());
            for (int i = 0; i < G.dim(); ++i)
                a(i) = {unit_symmetric(rng), unit_symmetric(rng)};
            const double energy = a.squaredNorm();
            const double mass = (a.adjoint() * G.entries * a)(0, 0).real();
            const double slack = 1e-10 * G.domain_area * energy;
            const double lower = fb.d_minus_raw * energy - slack;
            const double upper = fb.d_plus * energy + slack;
            if (!(lower <= mass && mass <= upper)) sandwich_ok = false;
            const double quad = midpoint_mass(a, omega, dom, cfg.sandwich->quadrature_n);
            const double envelope =
                midpoint_envelope(a, omega, dom, cfg.sandwich->quadrature_n);
            if (!(std::abs(quad - mass) <= envelope)) quad_ok = false;
            csv2 << v + 1 << ',' << fmt(energy) << ',' << fmt(mass) << ',' << fmt(lower) << ','
                 << fmt(upper) << ',' << fmt(quad) << ',' << fmt(envelope) << '\n';
        }
        ctx.emit("sandwich.csv", csv2.str());
        ctx.check("sandwich_bounds", sandwich_ok,
                  "d_-|a|^2 <= a*Ga <= d_+|a|^2 for all sampled vectors");
        ctx.check("sandwich_quadrature", quad_ok,
                  "midpoint quadrature within its convergence envelope");
    }
}

// --------------------------------------------------------------- certificate

std::string certificate_csv(const std::vector<observability::CertificateRow>& rows,
                            double area) {
    std::ostringstream csv;
    csv << "N,d_minus_raw,d_minus,d_plus,domain_area\n";
    for (const auto& row : rows)
        csv << row.truncation_N << ',' << fmt(row.d_minus_raw) << ',' << fmt(row.d_minus) << ','
            << fmt(row.d_plus) << ',' << fmt(area) << '\n';
    return csv.str();
}

void run_certificate(const config::CertificateCfg& cfg, Context& ctx) {
    const auto rel = cfg.relation.build();
    const auto dom = cfg.domain.build();
    const auto rows = observability::ucp_certificate(rel, dom, cfg.n_list, ctx.threads);
    ctx.emit("certificate.csv", certificate_csv(rows, dom.area()));

    const double slack = cfg.interlace_tol * dom.area();
    bool mono = true;
    for (size_t i = 0; i + 1 < rows.size(); ++i) {
        if (rows[i + 1].d_minus > rows[i].d_minus + slack) mono = false;
        if (rows[i + 1].d_plus < rows[i].d_plus - slack) mono = false;
    }
    ctx.check("interlacing", mono, "d_minus non-increasing, d_plus non-decreasing in N");

    if (cfg.contrast) {
        const auto rel2 = cfg.contrast->relation.build();
        const auto rows2 = observability::ucp_certificate(rel2, dom, cfg.n_list, ctx.threads);
        ctx.emit("contrast.csv", certificate_csv(rows2, dom.area()));

        const double base_first = rows.front().d_minus;
        const double base_ratio = base_first > 0.0 ? rows.back().d_minus / base_first : 0.0;
        const double ct_first = rows2.front().d_minus;
        const double ct_ratio = ct_first > 0.0 ? rows2.back().d_minus / ct_first : 0.0;
        ctx.extra["decay_ratio_base"] = base_ratio;
        ctx.extra["decay_ratio_contrast"] = ct_ratio;

        ctx.check("contrast_factor",
                  base_first > 0.0 && ct_first > 0.0 &&
                      ct_ratio * cfg.contrast->min_ratio_factor <= base_ratio,
                  "contrast decay ratio " + fmt(ct_ratio) + " vs base " + fmt(base_ratio) +
                      " (factor " + fmt(cfg.contrast->min_ratio_factor) + ")");
        if (cfg.contrast->expect_ratio_base)
            ctx.check("regression_base_ratio",
                      std::abs(base_ratio - *cfg.contrast->expect_ratio_base) <=
                          cfg.contrast->regression_rel_tol *
                              std::abs(*cfg.contrast->expect_ratio_base),
                      "ratio " + fmt(base_ratio) + " vs frozen " +
                          fmt(*cfg.contrast->expect_ratio_base));
        if (cfg.contrast->expect_ratio_contrast) {
            if (cfg.contrast->contrast_ratio_is_upper_bound)
                ctx.check("regression_contrast_ratio",
                          ct_ratio <= *cfg.contrast->expect_ratio_contrast,
                          "ratio " + fmt(ct_ratio) + " vs bound " +
                              fmt(*cfg.contrast->expect_ratio_contrast));
            else
                ctx.check("regression_contrast_ratio",
                          std::abs(ct_ratio - *cfg.contrast->expect_ratio_contrast) <=
                              cfg.contrast->regression_rel_tol *
                                  std::abs(*cfg.contrast->expect_ratio_contrast),
                          "ratio " + fmt(ct_ratio) + " vs frozen " +
                              fmt(*cfg.contrast->expect_ratio_contrast));
        }
    }
}

// ------------------------------------------------------------------------ dn

Eigen::VectorXd cosine_mode(int nx, int mode, double amp) {
    Eigen::VectorXd v(nx);
    for (int i = 0; i < nx; ++i) v(i) = amp * std::cos(mode * two_pi * i / nx);
    return v;
}

Eigen::VectorXd random_band_limited(int nx, std::mt19937_64& rng) {
    // Random smooth surface data: modes up to nx/4 with uniform coefficients.
    Eigen::VectorXd v = Eigen::VectorXd::Zero(nx);
    const int kmax = nx / 4;
    for (int k = 0; k <= kmax; ++k) {
        const double a = unit_symmetric(rng);
        const double b = unit_symmetric(rng);
        for (int i = 0; i < nx; ++i) {
            const double x = two_pi * i / nx;
            v(i) += a * std::cos(k * x) + (k > 0 ? b * std::sin(k * x) : 0.0);
        }
    }
    return v;
}

void run_dn(const config::DnCfg& cfg, Context& ctx) {
    json case_summaries = json::array();
    for (size_t ci = 0; ci < cfg.cases.size(); ++ci) {
        const auto& dc = cfg.cases[ci];
        const std::string tag = "case" + std::to_string(ci + 1);
        const bool flat = dc.eta_amp == 0.0 && dc.b_amp == 0.0;
        const double symbol = fluid::dn_flat_symbol(dc.k, dc.H);

        std::vector<double> errors;
        std::ostringstream csv;
        csv << "grid,max_rel_error,ratio_vs_previous\n";
        fluid::Geometry last_geom;
        for (size_t gi = 0; gi < dc.grids.size(); ++gi) {
            const int n = dc.grids[gi];
            fluid::Geometry geom;
            geom.H0 = dc.H;
            geom.nx = n;
            geom.nz = n;
            geom.h_min = 1e-8;
            geom.eta = cosine_mode(n, dc.eta_mode, dc.eta_amp);
            geom.b = cosine_mode(n, dc.b_mode, dc.b_amp);
            geom.validate();
            last_geom = geom;
            if (!flat) {
                csv << n << ",,\n";
                continue;
            }
            const fluid::HarmonicSolver solver(geom);
            const Eigen::VectorXd phi = cosine_mode(n, dc.k, 1.0);
            const Eigen::VectorXd got = solver.dn(phi);
            const Eigen::VectorXd want = symbol * phi;
            const double err = (got - want).lpNorm<Eigen::Infinity>() / std::abs(symbol);
            errors.push_back(err);
            csv << n << ',' << fmt(err) << ',';
            if (gi > 0) csv << fmt(errors[gi - 1] / err);
            csv << '\n';
        }
        ctx.emit(tag + "_convergence.csv", csv.str());

        json summary = {{"case", ci + 1}, {"H", dc.H}, {"k", dc.k}, {"flat", flat}};
        if (flat && !errors.empty()) summary["final_rel_error"] = errors.back();
        if (flat && dc.expect_final_error_max)
            ctx.check(tag + "_final_error", errors.back() <= *dc.expect_final_error_max,
                      "max relative error " + fmt(errors.back()) + " vs " +
                          fmt(*dc.expect_final_error_max));
        if (flat && dc.ratio_lo && dc.ratio_hi) {
            bool in_band = errors.size() >= 2;
            for (size_t i = 0; i + 1 < errors.size(); ++i) {
                const double ratio = errors[i] / errors[i + 1];
                if (!(ratio >= *dc.ratio_lo && ratio <= *dc.ratio_hi)) in_band = false;
            }
            ctx.check(tag + "_convergence_order", in_band,
                      "error reduction per grid doubling inside [" + fmt(*dc.ratio_lo) + ", " +
                          fmt(*dc.ratio_hi) + "]");
        }

        // Structure checks on the finest grid.
        if (dc.selfadjoint_tol || dc.kernel_tol || dc.positivity_floor) {
            const int n = dc.grids.back();
            const fluid::HarmonicSolver solver(last_geom);
            const double w = two_pi / n;
            if (dc.kernel_tol) {
                const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
                const double kmax = solver.dn(ones).lpNorm<Eigen::Infinity>();
                ctx.check(tag + "_kernel", kmax <= *dc.kernel_tol,
                          "max |G 1| = " + fmt(kmax) + " vs " + fmt(*dc.kernel_tol));
                summary["kernel_max"] = kmax;
            }
            if (dc.selfadjoint_tol) {
                std::mt19937_64 rng(dc.seed);
                double worst = 0.0;
                for (int trial = 0; trial < 20; ++trial) {
                    const Eigen::VectorXd phi = random_band_limited(n, rng);
                    const Eigen::VectorXd psi = random_band_limited(n, rng);
                    const Eigen::VectorXd gphi = solver.dn(phi);
                    const Eigen::VectorXd gpsi = solver.dn(psi);
                    const double lhs = w * gphi.dot(psi);
                    const double rhs = w * phi.dot(gpsi);
                    const double scale =
                        w * (gphi.norm() * psi.norm() + phi.norm() * gpsi.norm());
                    worst = std::max(worst, std::abs(lhs - rhs) / std::max(scale, 1e-300));
                }
                ctx.check(tag + "_selfadjoint", worst <= *dc.selfadjoint_tol,
                          "relative asymmetry " + fmt(worst) + " vs " +
                              fmt(*dc.selfadjoint_tol));
                summary["selfadjoint_asym"] = worst;
            }
            if (dc.positivity_floor) {
                std::mt19937_64 rng(dc.seed + 1);
                bool ok = true;
                double worst = 0.0;
                const int trials = dc.random_phis > 0 ? dc.random_phis : 50;
                for (int trial = 0; trial < trials; ++trial) {
                    const Eigen::VectorXd phi = random_band_limited(n, rng);
                    const double q = w * solver.dn(phi).dot(phi);
                    const double floor = -*dc.positivity_floor * w * phi.squaredNorm();
                    worst = std::min(worst, q);
                    if (q < floor) ok = false;
                }
                ctx.check(tag + "_positivity", ok,
                          "min <G phi, phi> = " + fmt(worst) + " over " +
                              std::to_string(trials) + " samples");
            }
        }
        case_summaries.push_back(std::move(summary));
    }
    ctx.extra["cases"] = std::move(case_summaries);
}

// -------------------------------------------------------------- zcs-dispersion

void run_zcs(const config::ZcsDispersionCfg& cfg, Context& ctx) {
    json case_summaries = json::array();
    std::vector<double> fitted;
    for (size_t ci = 0; ci < cfg.cases.size(); ++ci) {
        const auto& zc = cfg.cases[ci];
        const auto fit = fluid::linear_dispersion_check(zc.k, zc.H, zc.g, zc.nx, zc.nz, zc.dt,
                                                        zc.steps, zc.amplitude);
        fitted.push_back(fit.omega);
        const std::string tag = "case" + std::to_string(ci + 1);
        std::ostringstream csv;
        csv << "t,mode_amplitude\n";
        for (size_t i = 0; i < fit.t.size(); ++i)
            csv << fmt(fit.t[i]) << ',' << fmt(fit.mode_amp[i]) << '\n';
        ctx.emit(tag + "_mode_history.csv", csv.str());

        const double reference =
            zc.expect_omega.value_or(std::sqrt(zc.g * fluid::dn_flat_symbol(zc.k, zc.H)));
        const double rel_err = std::abs(fit.omega - reference) / reference;
        case_summaries.push_back({{"case", ci + 1},
                                  {"fitted_omega", fit.omega},
                                  {"reference_omega", reference},
                                  {"rel_error", rel_err},
                                  {"periods", fit.periods}});
        if (zc.rel_tol)
            ctx.check(tag + "_omega", rel_err <= *zc.rel_tol,
                      "fitted " + fmt(fit.omega) + " vs " + fmt(reference) + " (rel err " +
                          fmt(rel_err) + ")");
    }
    if (cfg.scaling_cases) {
        const double wa = fitted[static_cast<size_t>((*cfg.scaling_cases)[0] - 1)];
        const double wb = fitted[static_cast<size_t>((*cfg.scaling_cases)[1] - 1)];
        const double got = wb / wa;
        ctx.check("frequency_scaling",
                  std::abs(got - cfg.scaling_factor) <= cfg.scaling_tol * cfg.scaling_factor,
                  "ratio " + fmt(got) + " vs " + fmt(cfg.scaling_factor));
    }
    ctx.extra["cases"] = std::move(case_summaries);
}

// ----------------------------------------------------------------- rest-probe

void run_rest_probe(const config::RestProbeCfg& cfg, Context& ctx) {
    fluid::ZcsModel model(cfg.H0, Eigen::VectorXd::Zero(cfg.nx), cfg.nz, cfg.g, cfg.h_min);
    fluid::SurfaceState state = fluid::SurfaceState::zero(cfg.nx);
    if (cfg.bump_amp != 0.0) {
        for (int i = 0; i < cfg.nx; ++i) {
            const double x = two_pi * i / cfg.nx;
            double d = std::abs(x - cfg.bump_center);
            d = std::min(d, two_pi - d);
            state.eta(i) = cfg.bump_amp * std::exp(-d * d / (2.0 * cfg.bump_width * cfg.bump_width));
        }
    }

    const fluid::Window window{cfg.window_x0, cfg.window_x1};
    const auto series = fluid::rest_propagation_probe(model, state, window, cfg.tol, cfg.T, cfg.dt);

    std::ostringstream csv;
    csv << "t,activity,total_energy\n";
    for (size_t i = 0; i < series.t.size(); ++i)
        csv << fmt(series.t[i]) << ',' << fmt(series.activity[i]) << ',' << fmt(series.energy[i])
            << '\n';
    ctx.emit("probe.csv", csv.str());

    if (series.first_exceed_t) ctx.extra["first_exceed_t"] = *series.first_exceed_t;
    double max_act = 0.0;
    for (double a : series.activity) max_act = std::max(max_act, a);
    ctx.extra["max_activity"] = max_act;

    if (cfg.max_activity)
        ctx.check("max_activity", max_act <= *cfg.max_activity,
                  "max window activity " + fmt(max_act) + " vs " + fmt(*cfg.max_activity));
    if (cfg.expect_activation)
        ctx.check("activation", series.first_exceed_t.has_value() == *cfg.expect_activation,
                  series.first_exceed_t
                      ? "window activated at t = " + fmt(*series.first_exceed_t)
                      : "window never exceeded tol");
}

} // namespace

RunResult run(const config::ExperimentConfig& cfg, const std::string& out_dir, int threads) {
    RunResult result;
    Context ctx;
    ctx.out_dir = out_dir.empty() ? cfg.out_dir : out_dir;
    ctx.threads = threads > 0 ? threads : cfg.threads;
    ctx.checks = &result.checks;
    ctx.outputs = &result.outputs;
    if (ctx.out_dir.empty()) {
        result.exit_code = 2;
        result.error = "no output directory: set [run] out or pass --out";
        return result;
    }

    const auto start = std::chrono::steady_clock::now();
    try {
        std::visit(
            [&](const auto& payload) {
                using T = std::decay_t<decltype(payload)>;
                if constexpr (std::is_same_v<T, config::DispersionCheckCfg>)
                    run_dispersion_check(payload, ctx);
                else if constexpr (std::is_same_v<T, config::SolveCfg>)
                    run_solve(payload, ctx);
                else if constexpr (std::is_same_v<T, config::LatticeCountCfg>)
                    run_lattice_count(payload, ctx);
                else if constexpr (std::is_same_v<T, config::FrameBoundsCfg>)
                    run_frame_bounds(payload, ctx);
                else if constexpr (std::is_same_v<T, config::CertificateCfg>)
                    run_certificate(payload, ctx);
                else if constexpr (std::is_same_v<T, config::DnCfg>)
                    run_dn(payload, ctx);
                else if constexpr (std::is_same_v<T, config::ZcsDispersionCfg>)
                    run_zcs(payload, ctx);
                else
                    run_rest_probe(payload, ctx);
            },
            cfg.payload);
    } catch (const std::exception& e) {
        result.exit_code = 3;
        result.error = e.what();
    }
    const auto stop = std::chrono::steady_clock::now();
    const double wall_ms =
        std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(stop - start)
            .count();

    bool all_pass = result.exit_code == 0;
    json checks = json::array();
    for (const auto& c : result.checks) {
        checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
        if (!c.pass) all_pass = false;
    }
    if (result.exit_code == 0 && !all_pass) result.exit_code = 1;

    json manifest = {{"record", "manifest"},
                     {"version", ucw::version},
                     {"command", config::to_string(cfg.command)},
                     {"threads", ctx.threads},
                     {"wall_ms", wall_ms},
                     {"checks", std::move(checks)},
                     {"outputs", result.outputs},
                     {"exit_code", result.exit_code},
                     {"pass", result.exit_code == 0}};
    if (!result.error.empty()) manifest["error"] = result.error;
    if (!ctx.extra.empty()) manifest["results"] = ctx.extra;

    const json config_echo = {{"record", "config"}, {"text", cfg.source_text}};
    try {
        io::write_text_atomic(ctx.out_dir / "manifest.ndjson",
                              config_echo.dump() + "\n" + manifest.dump() + "\n");
    } catch (const std::exception& e) {
        if (result.exit_code == 0) result.exit_code = 3;
        if (result.error.empty()) result.error = e.what();
    }
    return result;
}

} // namespace ucw::runner
