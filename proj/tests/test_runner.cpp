#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ucw/config.hpp"
#include "ucw/io.hpp"
#include "ucw/runner.hpp"

#include <filesystem>

namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

ucw::runner::RunResult run_text(const std::string& text, const fs::path& out) {
    const auto parsed = ucw::config::parse_config(text);
    REQUIRE(parsed.ok());
    return ucw::runner::run(*parsed.config, out.string());
}

} // namespace

TEST_CASE("frame-bounds run emits csv and manifest, checks pass") {
    TempDir dir("ucw_run_fb");
    const std::string text = R"(
[run]
command = frame-bounds
[relation]
family = schrodinger
[lattice]
truncation_n = 8
[domain]
t_max = 0.7
rect = 0.0 6.283185307179586476925286766559 0.0 0.7
[check]
identity_scale = 4.3982297150257105
identity_tol = 1e-12
expect_d_minus = 4.3982297150257105
expect_d_plus = 4.3982297150257105
bounds_tol = 1e-10
)";
    const auto result = run_text(text, dir.path);
    CHECK(result.exit_code == 0);
    CHECK(fs::exists(dir.path / "frame_bounds.csv"));
    CHECK(fs::exists(dir.path / "manifest.ndjson"));
    const std::string csv = ucw::io::read_text(dir.path / "frame_bounds.csv");
    CHECK(csv.rfind("N,d_minus_raw,d_minus,d_plus,domain_area\n", 0) == 0);
}

TEST_CASE("identical configs reproduce numeric outputs byte for byte") {
    const std::string text = R"(
[run]
command = certificate
[relation]
family = gravity_capillary
g = 9.81
S = 0.072
H = 1.0
[lattice]
n_list = 2 4 8
[domain]
t_max = 0.5
rect = 0.1 1.5 0.0 0.5
)";
    TempDir a("ucw_run_det_a");
    TempDir b("ucw_run_det_b");
    CHECK(run_text(text, a.path).exit_code == 0);
    CHECK(run_text(text, b.path).exit_code == 0);
    CHECK(ucw::io::read_text(a.path / "certificate.csv") ==
          ucw::io::read_text(b.path / "certificate.csv"));
}

TEST_CASE("a failing declared check yields exit code 1") {
    TempDir dir("ucw_run_fail");
    const std::string text = R"(
[run]
command = solve
[case]
family = schrodinger
truncation_n = 4
t = 1.0
init = random
seed = 3
unitarity_tol = 0.0
)";
    const auto result = run_text(text, dir.path);
    CHECK(result.exit_code == 1);
    CHECK(fs::exists(dir.path / "manifest.ndjson"));
}

TEST_CASE("solve writes states and samples") {
    TempDir dir("ucw_run_solve");
    const std::string text = R"(
[run]
command = solve
[case]
family = transport
c = 1.0
truncation_n = 2
t = 0.5
init = coeffs
coeff = 1 1.0 0.0
unitarity_tol = 1e-13
[grid]
nx = 8
nt = 2
t0 = 0.0
t1 = 0.5
)";
    const auto result = run_text(text, dir.path);
    CHECK(result.exit_code == 0);
    const auto state = ucw::io::load_fourier_state(dir.path / "case1_state.ndjson");
    CHECK(state.coeff(1).real() == doctest::Approx(std::cos(0.5)));
    CHECK(state.coeff(1).imag() == doctest::Approx(-std::sin(0.5)));
    CHECK(fs::exists(dir.path / "case1_samples.csv"));
}

TEST_CASE("runtime numerical failures surface as exit code 3") {
    TempDir dir("ucw_run_num");
    // 40 steps cover far less than two oscillation periods
    const std::string text = R"(
[run]
command = zcs-dispersion
[case]
k = 1
H = 1.0
g = 1.0
nx = 16
nz = 8
dt = 0.05
steps = 40
amplitude = 1e-6
)";
    const auto result = run_text(text, dir.path);
    CHECK(result.exit_code == 3);
    CHECK_FALSE(result.error.empty());
}

TEST_CASE("missing output directory is a config error") {
    const std::string text = "[run]\ncommand = frame-bounds\n[relation]\nfamily = schrodinger\n"
                             "[lattice]\ntruncation_n = 2\n[domain]\nt_max = 1\nrect = 0 1 0 1\n";
    const auto parsed = ucw::config::parse_config(text);
    REQUIRE(parsed.ok());
    const auto result = ucw::runner::run(*parsed.config, "");
    CHECK(result.exit_code == 2);
}

TEST_CASE("rest-probe run: zero state produces a silent activity file") {
    TempDir dir("ucw_run_probe");
    const std::string text = R"(
[run]
command = rest-probe
[fluid]
H0 = 1.0
nx = 32
nz = 8
g = 1.0
[probe]
window = 0.2 0.8
tol = 1e-12
T = 0.2
dt = 0.05
[check]
max_activity = 0.0
expect_activation = false
)";
    const auto result = run_text(text, dir.path);
    CHECK(result.exit_code == 0);
    const std::string csv = ucw::io::read_text(dir.path / "probe.csv");
    CHECK(csv.rfind("t,activity,total_energy\n", 0) == 0);
}

TEST_CASE("lattice-count run with annulus block") {
    TempDir dir("ucw_run_lat");
    const std::string text = R"(
[run]
command = lattice-count
[lattice]
truncation_n = 128
radii = 4 8 16
[case]
family = schrodinger
expect = PASS
[case]
family = transport
c = 1.0
expect = FAIL
[annulus]
r = 1.0
x_abs = 10 100 1000
limit_tol = 1e-2
check_monotone = true
)";
    const auto result = run_text(text, dir.path);
    CHECK(result.exit_code == 0);
    CHECK(fs::exists(dir.path / "case1_counting.csv"));
    CHECK(fs::exists(dir.path / "case2_counting.csv"));
    CHECK(fs::exists(dir.path / "annulus.csv"));
    // trailing NDJSON metadata record carries the verdict
    const std::string csv = ucw::io::read_text(dir.path / "case2_counting.csv");
    CHECK(csv.find("\"verdict\":\"FAIL\"") != std::string::npos);
}
