#ifndef UCW_CONFIG_HPP
#define UCW_CONFIG_HPP

#include "ucw/dispersion.hpp"
#include "ucw/observability.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace ucw::config {

enum class Command {
    dispersion_check,
    solve,
    lattice_count,
    frame_bounds,
    certificate,
    dn,
    zcs_dispersion,
    rest_probe,
};

const char* to_string(Command c);
std::optional<Command> command_from_string(const std::string& s);

struct ConfigError {
    int line; // 0 when no single line is at fault
    std::string message;
};

/// Relation family plus its parameters, as written in a config section.
struct RelationSpec {
    std::string family;
    std::optional<double> p, c, g, S, H;
    int line = 0;

    dispersion::Relation build() const;
    std::string label() const;
};

struct DispersionCheckCfg {
    RelationSpec relation;
    double k_max = 1024.0;
    std::optional<std::string> expect_verdict;
    // Optional symbol-bound block.
    std::optional<double> bound_m; // defaults to the family order
    std::optional<double> bound_C;
    std::vector<double> bound_samples;
    std::optional<bool> bound_expect;
};

struct SolveCase {
    RelationSpec relation;
    int truncation_n = 0;
    double t = 0.0;
    std::string init; // "random" | "coeffs" | "file"
    uint64_t seed = 1;
    std::vector<std::array<double, 3>> coeffs; // (k, re, im)
    std::string file;
    std::optional<double> unitarity_tol;
};

struct SolveCfg {
    std::vector<SolveCase> cases;
    std::optional<int> grid_nx; // sample dump grid, optional
    int grid_nt = 1;
    double grid_t0 = 0.0, grid_t1 = 0.0;
};

struct LatticeCountCase {
    RelationSpec relation;
    std::optional<std::string> expect_verdict;
    std::optional<double> final_ratio_max_frac; // final < frac * first
    std::optional<double> tail_mean;            // expected stabilized ratio
    std::optional<double> tail_mean_tol;        // relative
};

struct AnnulusCfg {
    double r = 1.0;
    std::vector<double> x_abs;
    std::optional<double> limit_tol; // |D(x_last)/r - sqrt(8)| <= tol
    bool check_monotone = true;
};

struct LatticeCountCfg {
    int truncation_n = 0;
    std::vector<double> radii;
    std::vector<LatticeCountCase> cases;
    std::optional<AnnulusCfg> annulus;
};

struct DomainSpec {
    double t_max = 0.0;
    std::vector<observability::Rect> rects;

    observability::SpaceTimeDomain build() const;
};

struct SandwichCfg {
    int vectors = 100;
    uint64_t seed = 20240601;
    int quadrature_n = 512;
};

struct FrameBoundsCfg {
    RelationSpec relation;
    int truncation_n = 0;
    DomainSpec domain;
    std::optional<double> expect_d_minus;
    std::optional<double> expect_d_plus;
    std::optional<double> bounds_tol;
    std::optional<double> identity_scale; // require G = scale * I entrywise
    std::optional<double> identity_tol;
    std::optional<SandwichCfg> sandwich;
};

struct ContrastCfg {
    RelationSpec relation;
    double min_ratio_factor = 100.0;
    std::optional<double> expect_ratio_base;     // frozen d-(N_last)/d-(N_first)
    std::optional<double> expect_ratio_contrast; // frozen or upper bound
    double regression_rel_tol = 1e-6;
    bool contrast_ratio_is_upper_bound = false;
};

struct CertificateCfg {
    RelationSpec relation;
    std::vector<int> n_list;
    DomainSpec domain;
    double interlace_tol = 1e-10;
    std::optional<ContrastCfg> contrast;
};

struct DnCase {
    double H = 1.0;
    int k = 1;
    std::vector<int> grids;
    double eta_amp = 0.0, b_amp = 0.0;
    int eta_mode = 1, b_mode = 2;
    std::optional<double> expect_final_error_max; // relative to the symbol
    std::optional<double> ratio_lo, ratio_hi;     // per-doubling band
    std::optional<double> selfadjoint_tol;
    std::optional<double> kernel_tol;
    std::optional<double> positivity_floor; // >= -floor * |phi|^2
    int random_phis = 0;
    uint64_t seed = 7;
};

struct DnCfg {
    std::vector<DnCase> cases;
};

struct ZcsCase {
    int k = 1;
    double H = 1.0, g = 1.0;
    int nx = 64, nz = 64;
    double dt = 0.05;
    int steps = 400;
    double amplitude = 1e-6;
    std::optional<double> expect_omega;
    std::optional<double> rel_tol;
};

struct ZcsDispersionCfg {
    std::vector<ZcsCase> cases;
    std::optional<std::array<int, 2>> scaling_cases; // 1-based indices
    double scaling_factor = 2.0;
    double scaling_tol = 1e-3;
};

struct RestProbeCfg {
    double H0 = 1.0;
    int nx = 64, nz = 16;
    double g = 1.0;
    double h_min = 1e-8;
    // Optional initial surface bump (eta only, phi = 0).
    double bump_amp = 0.0, bump_center = 3.141592653589793, bump_width = 0.3;
    double window_x0 = 0.0, window_x1 = 1.0;
    double tol = 1e-12;
    double T = 1.0, dt = 0.01;
    std::optional<double> max_activity;
    std::optional<bool> expect_activation;
};

using Payload = std::variant<DispersionCheckCfg, SolveCfg, LatticeCountCfg, FrameBoundsCfg,
                             CertificateCfg, DnCfg, ZcsDispersionCfg, RestProbeCfg>;

struct ExperimentConfig {
    Command command;
    std::string out_dir; // may be empty; the CLI --out overrides
    int threads = 1;
    Payload payload;
    std::string source_text; // echoed into the manifest
};

struct ParseResult {
    std::optional<ExperimentConfig> config;
    std::vector<ConfigError> errors;

    bool ok() const { return config.has_value() && errors.empty(); }
};

ParseResult parse_config(const std::string& text);
ParseResult parse_config_file(const std::filesystem::path& path);

} // namespace ucw::config

#endif
