#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support/oracles.hpp"
#include "ucw/errors.hpp"
#include "ucw/lattice.hpp"

#include <cmath>
#include <random>

using namespace ucw::lattice;
using ucw::dispersion::Relation;

namespace {

std::vector<std::array<double, 2>> points_of(const FrequencyLattice& lat) {
    std::vector<std::array<double, 2>> pts;
    for (size_t i = 0; i < lat.size(); ++i) pts.push_back(lat.point(i));
    return pts;
}

} // namespace

TEST_CASE("lattice layout and extent") {
    const FrequencyLattice lat(Relation::schrodinger(), 3);
    CHECK(lat.size() == 7);
    CHECK(lat.point(0)[0] == -3.0);
    CHECK(lat.point(0)[1] == 9.0);
    CHECK(lat.point(6)[0] == 3.0);
    CHECK(lat.extent() == 9.0);

    const FrequencyLattice mirrored(Relation::kdv_linear(), 2, SignConvention::minus_omega);
    CHECK(mirrored.point(4)[1] == 8.0); // -(-k^3) at k = 2
}

TEST_CASE("separation: collinear, diagonal and parabolic lattices") {
    CHECK(separation(FrequencyLattice(Relation::transport(0.0), 3)) == doctest::Approx(1.0));
    CHECK(separation(FrequencyLattice(Relation::transport(1.0), 3)) ==
          doctest::Approx(std::sqrt(2.0)));
    // achieved between k = 0 and k = +-1
    CHECK(separation(FrequencyLattice(Relation::schrodinger(), 3)) ==
          doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("separation is >= 1 for every relation, and matches brute force") {
    const std::vector<Relation> rels = {Relation::schrodinger(), Relation::kdv_linear(),
                                        Relation::transport(0.3), Relation::power(1.5),
                                        Relation::gravity_capillary(9.81, 0.072, 1.0)};
    for (const auto& rel : rels) {
        const FrequencyLattice lat(rel, 24);
        const double got = separation(lat);
        CHECK(got >= 1.0);
        CHECK(got == doctest::Approx(oracles::brute_separation(points_of(lat))).epsilon(1e-14));
    }
}

TEST_CASE("count_in_ball: pinned examples") {
    const FrequencyLattice parab(Relation::schrodinger(), 10);
    CHECK(count_in_ball(parab, {0.0, 0.0}, 2.5) == 3); // (0,0), (+-1, 1)
    CHECK(count_in_ball(parab, {0.37, 0.21}, 1e-10) == 0);

    const FrequencyLattice diag(Relation::transport(1.0), 10);
    CHECK(count_in_ball(diag, {0.0, 0.0}, 3.0) == 5); // k in -2..2, spacing sqrt(2)
}

TEST_CASE("count_in_ball matches exhaustive counting at random centers") {
    const FrequencyLattice lat(Relation::kdv_linear(), 20);
    const auto pts = points_of(lat);
    std::mt19937_64 rng(314);
    auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    for (int trial = 0; trial < 200; ++trial) {
        const std::array<double, 2> c{40.0 * (unit() - 0.5), 60.0 * (unit() - 0.5)};
        const double r = 0.5 + 20.0 * unit();
        CHECK(count_in_ball(lat, c, r) == oracles::brute_count(pts, c, r));
    }
}

TEST_CASE("counting is invariant under the sign-convention mirror") {
    const FrequencyLattice lat(Relation::kdv_linear(), 16);
    const FrequencyLattice mir(Relation::kdv_linear(), 16, SignConvention::minus_omega);
    std::mt19937_64 rng(2718);
    auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    for (int trial = 0; trial < 100; ++trial) {
        const double cx = 30.0 * (unit() - 0.5);
        const double cy = 50.0 * (unit() - 0.5);
        const double r = 0.5 + 10.0 * unit();
        CHECK(count_in_ball(lat, {cx, cy}, r) == count_in_ball(mir, {cx, -cy}, r));
    }
}

TEST_CASE("counting_function: diagonal line density") {
    const FrequencyLattice lat(Relation::transport(1.0), 200);
    CHECK(counting_function(lat, 10.0, 400.0) == 15); // about 2r/sqrt(2) + 1
}

TEST_CASE("counting_function: far-field balls meet a steep parabola") {
    const FrequencyLattice lat(Relation::schrodinger(), 200);
    const long n = counting_function(lat, 10.0, lat.extent());
    CHECK(n >= 1);
    CHECK(n <= 4);
}

TEST_CASE("counting_function: radius below half the separation yields at most 1") {
    const FrequencyLattice lat(Relation::schrodinger(), 64);
    CHECK(counting_function(lat, 0.49, lat.extent()) <= 1);
}

TEST_CASE("counting_function matches the exhaustive center sweep") {
    {
        const FrequencyLattice lat(Relation::transport(1.0), 40);
        for (double r : {2.0, 4.0})
            CHECK(counting_function(lat, r, 80.0) ==
                  oracles::brute_counting_function(points_of(lat), r, 80.0));
    }
    {
        const FrequencyLattice lat(Relation::schrodinger(), 24);
        const double xm = lat.extent();
        CHECK(counting_function(lat, 5.0, xm) ==
              oracles::brute_counting_function(points_of(lat), 5.0, xm));
    }
}

TEST_CASE("counting_function is deterministic and thread-count independent") {
    const FrequencyLattice lat(Relation::transport(1.0), 100);
    const long base = counting_function(lat, 6.0, 200.0, 1);
    CHECK(counting_function(lat, 6.0, 200.0, 4) == base);
    CHECK(counting_function(lat, 6.0, 200.0, 13) == base);
}

TEST_CASE("counting_function validates its window") {
    const FrequencyLattice lat(Relation::schrodinger(), 16);
    CHECK_THROWS_AS(counting_function(lat, 2.0, 10.0), ucw::invalid_argument); // extent 256
    CHECK_THROWS_AS(counting_function(lat, -1.0, 300.0), ucw::invalid_argument);
}

TEST_CASE("beurling curve: steep symbols pass, transport stabilizes at sqrt 2") {
    const std::vector<double> radii = {8.0, 16.0, 32.0};
    const auto pass = beurling_ratio_curve(Relation::schrodinger(), 512, radii);
    CHECK(pass.verdict == CurveVerdict::PASS);
    CHECK(pass.ratios.back() < 0.5 * pass.ratios.front());

    const auto kdv = beurling_ratio_curve(Relation::kdv_linear(), 512, radii);
    CHECK(kdv.verdict == CurveVerdict::PASS);

    const auto fail = beurling_ratio_curve(Relation::transport(1.0), 512, radii);
    CHECK(fail.verdict == CurveVerdict::FAIL);
    for (double ratio : fail.ratios) CHECK(ratio == doctest::Approx(std::sqrt(2.0)).epsilon(0.06));
}

TEST_CASE("beurling curve validates radii") {
    CHECK_THROWS_AS(beurling_ratio_curve(Relation::schrodinger(), 64, {10.0, 5.0}),
                    ucw::invalid_argument);
    CHECK_THROWS_AS(beurling_ratio_curve(Relation::schrodinger(), 64, {10.0, 20.0}),
                    ucw::invalid_argument); // 20 > 64/4
}

TEST_CASE("annulus vertical extent: pinned values") {
    CHECK(annulus_vertical_extent(10.0, 1.0, 0.0) == doctest::Approx(2.0).epsilon(1e-14));
    const double mid = 9.0 / std::sqrt(2.0);
    const double want = std::sqrt(80.5) - std::sqrt(40.5);
    CHECK(annulus_vertical_extent(10.0, 1.0, mid) == doctest::Approx(want).epsilon(1e-14));
    CHECK(annulus_vertical_extent(10.0, 1.0, mid) == doctest::Approx(2.60825).epsilon(1e-5));
    CHECK(annulus_vertical_extent(10.0, 1.0, 9.0) ==
          doctest::Approx(std::sqrt(40.0)).epsilon(1e-14));
    CHECK_THROWS_AS(annulus_vertical_extent(10.0, 1.0, 9.5), ucw::domain_error);
    CHECK_THROWS_AS(annulus_vertical_extent(1.0, 2.0, 0.0), ucw::invalid_argument);
}

TEST_CASE("max vertical extent: closed form, limit and monotonicity") {
    CHECK(max_vertical_extent(10.0, 1.0) ==
          doctest::Approx(std::sqrt(80.5) - std::sqrt(40.5)).epsilon(1e-14));
    CHECK(std::abs(max_vertical_extent(1000.0, 1.0) - std::sqrt(8.0)) < 1e-2);
    CHECK(std::abs(max_vertical_extent(1000.0, 5.0) - 5.0 * std::sqrt(8.0)) < 5e-2);

    double prev = max_vertical_extent(10.0, 1.0);
    for (double x : {100.0, 1000.0, 10000.0}) {
        const double d = max_vertical_extent(x, 1.0);
        CHECK(d > prev);
        prev = d;
    }
}

TEST_CASE("max vertical extent equals the maximum over the reduced range") {
    for (const auto& [x, r] : std::vector<std::pair<double, double>>{
             {10.0, 1.0}, {50.0, 3.0}, {400.0, 7.0}}) {
        const double kmax = (x - r) / std::sqrt(2.0);
        double best = 0.0;
        for (int i = 0; i <= 20000; ++i)
            best = std::max(best, annulus_vertical_extent(x, r, kmax * i / 20000.0));
        CHECK(std::abs(best - max_vertical_extent(x, r)) < 1e-9);
    }
}

TEST_CASE("D/r is scale invariant") {
    std::mt19937_64 rng(99);
    auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    for (int trial = 0; trial < 50; ++trial) {
        const double x = 5.0 + 100.0 * unit();
        const double r = 0.1 + 0.04 * x * unit();
        const double s = 0.5 + 10.0 * unit();
        const double lhs = max_vertical_extent(s * x, s * r) / (s * r);
        const double rhs = max_vertical_extent(x, r) / r;
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-11));
    }
}
