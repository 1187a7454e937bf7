#include "ucw/lattice.hpp"

#include "ucw/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>
#include <unordered_set>

namespace ucw::lattice {

FrequencyLattice::FrequencyLattice(const dispersion::Relation& rel, int truncation_N,
                                   SignConvention sign)
    : n_(truncation_N), sign_(sign) {
    if (truncation_N < 0) throw ucw::invalid_argument("FrequencyLattice requires N >= 0");
    const double s = (sign == SignConvention::omega) ? 1.0 : -1.0;
    points_.reserve(static_cast<size_t>(2 * n_ + 1));
    double max_abs_omega = 0.0;
    for (int k = -n_; k <= n_; ++k) {
        const double w = s * rel.eval(static_cast<double>(k));
        points_.push_back({static_cast<double>(k), w});
        max_abs_omega = std::max(max_abs_omega, std::abs(w));
    }
    extent_ = std::max(static_cast<double>(n_), max_abs_omega);
}

double separation(const FrequencyLattice& lat) {
    const auto& pts = lat.points_;
    if (pts.size() < 2) throw ucw::invalid_argument("separation requires at least 2 points");
    // Points are sorted by k with integer spacing, so the inner scan can stop
    // as soon as the horizontal gap alone exceeds the best distance.
    double best2 = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
        for (size_t j = i + 1; j < pts.size(); ++j) {
            const double dx = pts[j][0] - pts[i][0];
            if (dx * dx >= best2) break;
            const double dy = pts[j][1] - pts[i][1];
            best2 = std::min(best2, dx * dx + dy * dy);
        }
    }
    return std::sqrt(best2);
}

long count_in_ball(const FrequencyLattice& lat, std::array<double, 2> center, double r) {
    if (!(r > 0.0)) throw ucw::invalid_argument("count_in_ball requires r > 0");
    const int N = lat.n_;
    const double r2 = r * r;
    // Only k in [cx - r, cx + r] can contribute; index directly.
    const int klo = std::max(-N, static_cast<int>(std::ceil(center[0] - r)));
    const int khi = std::min(N, static_cast<int>(std::floor(center[0] + r)));
    long count = 0;
    for (int k = klo; k <= khi; ++k) {
        const auto& p = lat.points_[static_cast<size_t>(k + N)];
        const double dx = p[0] - center[0];
        const double dy = p[1] - center[1];
        if (dx * dx + dy * dy <= r2) ++count;
    }
    return count;
}

namespace {

struct Candidate {
    long i;
    long j;
};

// Grid centers (i*step, j*step) within distance r of at least one lattice
// point in the far-field band. Centers farther than r from every point count
// zero and cannot attain the maximum, so they are skipped wholesale.
std::vector<Candidate> candidate_centers(const FrequencyLattice& lat, double r, double X_max,
                                         double step) {
    const double half = X_max / 2.0;
    std::unordered_set<uint64_t> seen;
    std::vector<Candidate> out;
    const double r2 = r * r;
    for (size_t idx = 0; idx < lat.size(); ++idx) {
        const auto p = lat.point(idx);
        const double pn = std::hypot(p[0], p[1]);
        if (pn < half - r) continue;
        const long ilo = static_cast<long>(std::ceil((p[0] - r) / step));
        const long ihi = static_cast<long>(std::floor((p[0] + r) / step));
        const long jlo = static_cast<long>(std::ceil((p[1] - r) / step));
        const long jhi = static_cast<long>(std::floor((p[1] + r) / step));
        for (long i = ilo; i <= ihi; ++i) {
            const double cx = static_cast<double>(i) * step;
            if (std::abs(cx) > X_max) continue;
            for (long j = jlo; j <= jhi; ++j) {
                const double cy = static_cast<double>(j) * step;
                if (std::abs(cy) > X_max) continue;
                if (cx * cx + cy * cy < half * half) continue;
                const double dx = cx - p[0];
                const double dy = cy - p[1];
                if (dx * dx + dy * dy > r2) continue;
                const uint64_t key = (static_cast<uint64_t>(static_cast<uint32_t>(i)) << 32) |
                                     static_cast<uint64_t>(static_cast<uint32_t>(j));
                if (seen.insert(key).second) out.push_back({i, j});
            }
        }
    }
    return out;
}

} // namespace

long counting_function(const FrequencyLattice& lat, double r, double X_max, int threads) {
    if (!(r > 0.0)) throw ucw::invalid_argument("counting_function requires r > 0");
    if (!(X_max >= lat.extent()))
        throw ucw::invalid_argument("counting_function: X_max must cover the lattice extent");
    if (!(X_max >= r))
        throw ucw::invalid_argument("counting_function: window too small for radius r");
    const double step = r / 4.0;
    const std::vector<Candidate> cand = candidate_centers(lat, r, X_max, step);
    if (cand.empty()) return 0;

    const int nthreads = std::max(1, std::min<int>(threads, static_cast<int>(cand.size())));
    std::vector<long> best(static_cast<size_t>(nthreads), 0);
    auto work = [&](int tid) {
        const size_t lo = cand.size() * static_cast<size_t>(tid) / static_cast<size_t>(nthreads);
        const size_t hi =
            cand.size() * static_cast<size_t>(tid + 1) / static_cast<size_t>(nthreads);
        long b = 0;
        for (size_t c = lo; c < hi; ++c) {
            const std::array<double, 2> center{static_cast<double>(cand[c].i) * step,
                                               static_cast<double>(cand[c].j) * step};
            b = std::max(b, count_in_ball(lat, center, r));
        }
        best[static_cast<size_t>(tid)] = b;
    };
    if (nthreads == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < nthreads; ++t) pool.emplace_back(work, t);
        for (auto& th : pool) th.join();
    }
    return *std::max_element(best.begin(), best.end());
}

const char* to_string(CurveVerdict v) {
    switch (v) {
        case CurveVerdict::PASS: return "PASS";
        case CurveVerdict::FAIL: return "FAIL";
        case CurveVerdict::INCONCLUSIVE: return "INCONCLUSIVE";
    }
    return "?";
}

CountingReport beurling_ratio_curve(const dispersion::Relation& rel, int truncation_N,
                                    const std::vector<double>& radii, int threads) {
    if (radii.empty()) throw ucw::invalid_argument("beurling_ratio_curve: empty radius list");
    for (size_t i = 0; i + 1 < radii.size(); ++i)
        if (!(radii[i] < radii[i + 1]))
            throw ucw::invalid_argument("beurling_ratio_curve: radii must be increasing");
    if (!(radii.back() <= truncation_N / 4.0))
        throw ucw::invalid_argument("beurling_ratio_curve: max radius must be <= N/4");

    const FrequencyLattice lat(rel, truncation_N);
    CountingReport rep;
    rep.radii = radii;
    rep.center_window = lat.extent();
    rep.center_grid_step = radii.front() / 4.0;
    for (double r : radii) {
        const long n = counting_function(lat, r, lat.extent(), threads);
        rep.n_of_r.push_back(n);
        rep.ratios.push_back(static_cast<double>(n) / r);
    }

    const size_t tail = std::min<size_t>(3, rep.ratios.size());
    bool non_increasing = true;
    double mean = 0.0;
    for (size_t i = rep.ratios.size() - tail; i < rep.ratios.size(); ++i) {
        mean += rep.ratios[i];
        if (i + 1 < rep.ratios.size() && rep.ratios[i + 1] > rep.ratios[i]) non_increasing = false;
    }
    mean /= static_cast<double>(tail);
    bool stabilized = mean > 0.0;
    for (size_t i = rep.ratios.size() - tail; i < rep.ratios.size(); ++i)
        if (std::abs(rep.ratios[i] - mean) > 0.05 * mean) stabilized = false;

    if (non_increasing && rep.ratios.back() < 0.5 * rep.ratios.front())
        rep.verdict = CurveVerdict::PASS;
    else if (stabilized)
        rep.verdict = CurveVerdict::FAIL;
    else
        rep.verdict = CurveVerdict::INCONCLUSIVE;
    return rep;
}

double annulus_vertical_extent(double x_abs, double r, double k) {
    if (!(r > 0.0 && r < x_abs))
        throw ucw::invalid_argument("annulus_vertical_extent requires 0 < r < x_abs");
    const double inner = x_abs - r;
    const double outer = x_abs + r;
    if (k * k > inner * inner)
        throw ucw::domain_error("annulus_vertical_extent: vertical line misses the inner circle");
    return std::sqrt(outer * outer - k * k) - std::sqrt(inner * inner - k * k);
}

double max_vertical_extent(double x_abs, double r) {
    if (!(r > 0.0 && r < x_abs))
        throw ucw::invalid_argument("max_vertical_extent requires 0 < r < x_abs");
    const double inner = x_abs - r;
    const double outer = x_abs + r;
    return std::sqrt(outer * outer - inner * inner / 2.0) - std::sqrt(inner * inner / 2.0);
}

} // namespace ucw::lattice
