#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

// Drives the installed binary exactly the way a script would.
namespace {

namespace fs = std::filesystem;

int run_cli(const std::string& args) {
    const std::string cmd = std::string(UCW_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

} // namespace

TEST_CASE("cli runs a config, honors --out, exits 0") {
    TempDir dir("ucw_cli_basic");
    const fs::path cfg = dir.path / "fb.cfg";
    {
        std::ofstream out(cfg);
        out << "[run]\ncommand = frame-bounds\n[relation]\nfamily = schrodinger\n"
            << "[lattice]\ntruncation_n = 6\n[domain]\nt_max = 0.7\n"
            << "rect = 0.0 6.283185307179586476925286766559 0.0 0.7\n"
            << "[check]\nidentity_scale = 4.3982297150257105\nidentity_tol = 1e-12\n";
    }
    const int rc = run_cli("frame-bounds --config " + cfg.string() + " --out " +
                           (dir.path / "out").string());
    CHECK(rc == 0);
    CHECK(fs::exists(dir.path / "out" / "frame_bounds.csv"));
    CHECK(fs::exists(dir.path / "out" / "manifest.ndjson"));
}

TEST_CASE("re-running a config reproduces numeric outputs byte for byte") {
    TempDir dir("ucw_cli_det");
    const fs::path cfg = dir.path / "cert.cfg";
    {
        std::ofstream out(cfg);
        out << "[run]\ncommand = certificate\n[relation]\nfamily = schrodinger\n"
            << "[lattice]\nn_list = 2 4 8\n[domain]\nt_max = 0.5\nrect = 0.1 1.5 0.0 0.5\n";
    }
    CHECK(run_cli("certificate --config " + cfg.string() + " --out " +
                  (dir.path / "a").string()) == 0);
    CHECK(run_cli("certificate --config " + cfg.string() + " --out " +
                  (dir.path / "b").string() + " --threads 4") == 0);
    CHECK(slurp(dir.path / "a" / "certificate.csv") == slurp(dir.path / "b" / "certificate.csv"));
}

TEST_CASE("config errors exit 2, wrong subcommand exits 2, failed checks exit 1") {
    TempDir dir("ucw_cli_err");
    const fs::path bad = dir.path / "bad.cfg";
    {
        std::ofstream out(bad);
        out << "[run]\ncommand = frame-bounds\n[relation]\nfamily = gravity_capillary\ng = 1\n"
            << "S = 0\n"; // missing H and everything else
    }
    CHECK(run_cli("frame-bounds --config " + bad.string() + " --out " +
                  (dir.path / "o1").string()) == 2);

    const fs::path fb = dir.path / "fb.cfg";
    {
        std::ofstream out(fb);
        out << "[run]\ncommand = frame-bounds\n[relation]\nfamily = schrodinger\n"
            << "[lattice]\ntruncation_n = 2\n[domain]\nt_max = 0.5\nrect = 0.1 1.0 0.0 0.5\n";
    }
    CHECK(run_cli("solve --config " + fb.string() + " --out " + (dir.path / "o2").string()) == 2);

    const fs::path failing = dir.path / "fail.cfg";
    {
        std::ofstream out(failing);
        out << "[run]\ncommand = solve\n[case]\nfamily = schrodinger\ntruncation_n = 2\n"
            << "t = 1.0\ninit = random\nseed = 1\nunitarity_tol = 0.0\n";
    }
    CHECK(run_cli("solve --config " + failing.string() + " --out " +
                  (dir.path / "o3").string()) == 1);
}

TEST_CASE("checked-in demo config is valid") {
    TempDir dir("ucw_cli_demo");
    const std::string cfg = std::string(UCW_CONFIG_DIR) + "/demo_dispersion.cfg";
    CHECK(run_cli("dispersion-check --config " + cfg + " --out " + (dir.path / "o").string()) ==
          0);
}
