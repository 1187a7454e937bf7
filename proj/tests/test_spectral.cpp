#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support/oracles.hpp"
#include "ucw/errors.hpp"
#include "ucw/spectral.hpp"

#include <cmath>
#include <random>

using namespace ucw::spectral;
using ucw::dispersion::Relation;

namespace {

constexpr double two_pi = 6.283185307179586476925286766559;

FourierState random_state(int N, uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto unit = [&rng] { return 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0; };
    FourierState g = FourierState::zeros(N);
    for (int i = 0; i < g.coeffs.size(); ++i) g.coeffs(i) = {unit(), unit()};
    return g;
}

std::vector<double> omegas(const Relation& rel, int N) {
    std::vector<double> w(static_cast<size_t>(2 * N + 1));
    for (int k = -N; k <= N; ++k) w[static_cast<size_t>(k + N)] = rel.eval(k);
    return w;
}

} // namespace

TEST_CASE("index mapping is the k + N bijection") {
    auto g = FourierState::zeros(3);
    g.coeff(-3) = {1.0, 0.0};
    g.coeff(2) = {0.0, 5.0};
    CHECK(g.coeffs(0) == std::complex<double>(1.0, 0.0));
    CHECK(g.coeffs(5) == std::complex<double>(0.0, 5.0));
    CHECK(g.n_modes() == 7);
}

TEST_CASE("l2 norm is the Parseval ledger") {
    auto g = FourierState::zeros(2);
    g.coeff(-1) = {3.0, 0.0};
    g.coeff(2) = {0.0, 4.0};
    CHECK(g.l2_norm() == doctest::Approx(5.0).epsilon(1e-15));
}

TEST_CASE("evolve applies single-mode phases") {
    const auto rel = Relation::schrodinger();
    auto g = FourierState::delta(4, 1);
    auto gt = evolve(g, rel, std::acos(-1.0)); // t = pi, omega(1) = 1
    CHECK(gt.coeff(1).real() == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(std::abs(gt.coeff(1).imag()) < 1e-14);

    auto g2 = FourierState::delta(4, 2);
    auto g2t = evolve(g2, Relation::transport(1.0), 0.5); // phase -i * 2 * 0.5
    CHECK(g2t.coeff(2).real() == doctest::Approx(std::cos(1.0)));
    CHECK(g2t.coeff(2).imag() == doctest::Approx(-std::sin(1.0)));
}

TEST_CASE("evolve at t = 0 is the identity") {
    const auto g = random_state(16, 11);
    const auto gt = evolve(g, Relation::kdv_linear(), 0.0);
    CHECK((gt.coeffs - g.coeffs).norm() == 0.0);
}

TEST_CASE("norm conservation under every real symbol") {
    const auto g = random_state(64, 22);
    for (const auto& rel : {Relation::schrodinger(), Relation::kdv_linear(),
                            Relation::gravity_capillary(1.0, 1.0, 1.0)}) {
        for (double t : {0.1, 1.7, 100.0}) {
            const auto gt = evolve(g, rel, t);
            CHECK(std::abs(gt.l2_norm() - g.l2_norm()) <= 1e-13 * g.l2_norm());
        }
    }
}

TEST_CASE("group property and linearity") {
    const auto rel = Relation::gravity_capillary(9.81, 0.072, 1.0);
    const auto g = random_state(24, 33);
    const auto h = random_state(24, 44);

    const auto two_step = evolve(evolve(g, rel, 0.35), rel, 1.05);
    const auto one_step = evolve(g, rel, 1.4);
    CHECK((two_step.coeffs - one_step.coeffs).norm() <= 1e-12 * one_step.coeffs.norm());

    const std::complex<double> alpha{0.3, -1.1}, beta{-2.0, 0.7};
    FourierState combo = FourierState::zeros(24);
    combo.coeffs = alpha * g.coeffs + beta * h.coeffs;
    const auto lhs = evolve(combo, rel, 0.8);
    Eigen::VectorXcd rhs = alpha * evolve(g, rel, 0.8).coeffs + beta * evolve(h, rel, 0.8).coeffs;
    CHECK((lhs.coeffs - rhs).norm() == 0.0);
}

TEST_CASE("synthesize constant and single modes") {
    auto g0 = FourierState::delta(0, 0);
    const auto ones = synthesize(g0, 8);
    for (int j = 0; j < 8; ++j) {
        CHECK(ones(j).real() == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(std::abs(ones(j).imag()) < 1e-14);
    }
    auto g1 = FourierState::delta(1, 1);
    const auto wave = synthesize(g1, 8);
    for (int j = 0; j < 8; ++j) {
        const double x = two_pi * j / 8;
        CHECK(wave(j).real() == doctest::Approx(std::cos(x)).epsilon(1e-13));
        CHECK(wave(j).imag() == doctest::Approx(std::sin(x)).epsilon(1e-13));
    }
}

TEST_CASE("synthesize rejects aliasing grids") {
    const auto g = random_state(8, 55);
    CHECK_THROWS_AS(synthesize(g, 16), ucw::invalid_argument); // needs 17
    CHECK_NOTHROW(synthesize(g, 17));
}

TEST_CASE("analyze inverts synthesize on any admissible grid") {
    for (int nx : {33, 34, 40, 64, 101}) {
        const auto g = random_state(16, 66);
        const auto back = analyze(synthesize(g, nx), 16);
        CHECK((back.coeffs - g.coeffs).norm() <= 1e-12 * g.coeffs.norm());
    }
}

TEST_CASE("evaluate_solution: traveling wave and reference summation") {
    const auto rel = Relation::transport(1.0);
    auto g = FourierState::delta(2, 1);
    const auto v = evaluate_solution(g, rel, {{1.0, 0.3}});
    CHECK(v[0].real() == doctest::Approx(std::cos(0.7)).epsilon(1e-14));
    CHECK(v[0].imag() == doctest::Approx(std::sin(0.7)).epsilon(1e-14));

    const auto rel2 = Relation::gravity_capillary(1.0, 0.5, 2.0);
    const auto h = random_state(16, 77);
    const auto w = omegas(rel2, 16);
    std::mt19937_64 rng(88);
    std::vector<std::pair<double, double>> pts;
    for (int i = 0; i < 10; ++i) {
        const double x = two_pi * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
        const double t = 3.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
        pts.push_back({x, t});
    }
    const auto vals = evaluate_solution(h, rel2, pts);
    for (size_t i = 0; i < pts.size(); ++i) {
        const auto want = oracles::reference_solution(h.coeffs, w, pts[i].first, pts[i].second);
        CHECK(std::abs(vals[i] - want) <= 1e-12 * std::abs(want) + 1e-14);
    }
}

TEST_CASE("evaluate_solution agrees with evolve + synthesize on grid points") {
    const auto rel = Relation::schrodinger();
    const auto g = random_state(12, 99);
    const int nx = 32;
    const double t = 0.9;
    const auto grid_vals = synthesize(evolve(g, rel, t), nx);
    std::vector<std::pair<double, double>> pts;
    for (int j = 0; j < nx; ++j) pts.push_back({two_pi * j / nx, t});
    const auto direct = evaluate_solution(g, rel, pts);
    for (int j = 0; j < nx; ++j)
        CHECK(std::abs(direct[static_cast<size_t>(j)] - grid_vals(j)) <=
              1e-12 * g.l2_norm() * std::sqrt(25.0));
}

TEST_CASE("evaluate_solution validates the point domain") {
    const auto g = random_state(2, 1);
    CHECK_THROWS_AS(evaluate_solution(g, Relation::schrodinger(), {{-0.1, 0.0}}),
                    ucw::invalid_argument);
    CHECK_THROWS_AS(evaluate_solution(g, Relation::schrodinger(), {{0.5, -0.2}}),
                    ucw::invalid_argument);
}

TEST_CASE("transport evolution is an exact translation") {
    const auto rel = Relation::transport(1.0);
    const auto g = random_state(10, 123);
    const double t = 1.234;
    std::vector<std::pair<double, double>> now, then;
    for (int i = 0; i < 7; ++i) {
        const double x = 0.11 + 0.8 * i;
        now.push_back({x, t});
        double x0 = std::fmod(x - t, two_pi);
        if (x0 < 0.0) x0 += two_pi;
        then.push_back({x0, 0.0});
    }
    const auto a = evaluate_solution(g, rel, now);
    const auto b = evaluate_solution(g, rel, then);
    for (size_t i = 0; i < a.size(); ++i)
        CHECK(std::abs(a[i] - b[i]) <= 1e-12 * (std::abs(a[i]) + g.l2_norm()));
}

TEST_CASE("periodic spectral derivative is exact on band-limited data") {
    const int nx = 32;
    Eigen::VectorXd f(nx), want1(nx), want2(nx);
    for (int i = 0; i < nx; ++i) {
        const double x = two_pi * i / nx;
        f(i) = std::sin(3.0 * x) + 0.5 * std::cos(5.0 * x);
        want1(i) = 3.0 * std::cos(3.0 * x) - 2.5 * std::sin(5.0 * x);
        want2(i) = -9.0 * std::sin(3.0 * x) - 12.5 * std::cos(5.0 * x);
    }
    CHECK((derivative_periodic(f, 1) - want1).lpNorm<Eigen::Infinity>() < 1e-11);
    CHECK((derivative_periodic(f, 2) - want2).lpNorm<Eigen::Infinity>() < 1e-10);
}

TEST_CASE("two-thirds dealiasing zeroes exactly the high band") {
    const int nx = 24; // keep |k| <= 8
    Eigen::VectorXd f(nx);
    for (int i = 0; i < nx; ++i) {
        const double x = two_pi * i / nx;
        f(i) = 1.0 + std::cos(8.0 * x) + std::sin(9.0 * x) + std::cos(11.0 * x);
    }
    dealias_two_thirds(f);
    for (int i = 0; i < nx; ++i) {
        const double x = two_pi * i / nx;
        CHECK(f(i) == doctest::Approx(1.0 + std::cos(8.0 * x)).epsilon(1e-12));
    }
}
