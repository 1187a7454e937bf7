#include "ucw/observability.hpp"

#include "ucw/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <thread>

namespace ucw::observability {

namespace {

constexpr double two_pi = 6.283185307179586476925286766559;

} // namespace

SpaceTimeDomain::SpaceTimeDomain(std::vector<Rect> rects, double t_max)
    : rects_(std::move(rects)), t_max_(t_max), area_(0.0) {
    if (rects_.empty()) throw ucw::invalid_argument("SpaceTimeDomain: no rectangles");
    if (!(t_max_ > 0.0)) throw ucw::invalid_argument("SpaceTimeDomain: t_max must be > 0");
    for (size_t i = 0; i < rects_.size(); ++i) {
        const Rect& r = rects_[i];
        if (!(r.x0 < r.x1 && r.t0 < r.t1))
            throw ucw::invalid_argument("SpaceTimeDomain: degenerate rectangle " +
                                        std::to_string(i));
        if (r.x0 < 0.0 || r.x1 > two_pi || r.t0 < 0.0 || r.t1 > t_max_)
            throw ucw::invalid_argument("SpaceTimeDomain: rectangle " + std::to_string(i) +
                                        " outside [0,2pi] x [0,t_max]");
        area_ += r.area();
    }
    for (size_t i = 0; i < rects_.size(); ++i) {
        for (size_t j = i + 1; j < rects_.size(); ++j) {
            const double ox = std::min(rects_[i].x1, rects_[j].x1) -
                              std::max(rects_[i].x0, rects_[j].x0);
            const double ot = std::min(rects_[i].t1, rects_[j].t1) -
                              std::max(rects_[i].t0, rects_[j].t0);
            if (ox > 0.0 && ot > 0.0)
                throw ucw::invalid_argument("SpaceTimeDomain: rectangles " + std::to_string(i) +
                                            " and " + std::to_string(j) + " overlap");
        }
    }
    if (!(area_ > 0.0)) throw ucw::invalid_argument("SpaceTimeDomain: zero total area");
}

SpaceTimeDomain SpaceTimeDomain::shifted_in_time(double s) const {
    std::vector<Rect> shifted = rects_;
    for (Rect& r : shifted) {
        r.t0 += s;
        r.t1 += s;
    }
    return SpaceTimeDomain(shifted, t_max_);
}

std::complex<double> interval_integral(double a, double alpha, double beta) {
    const double length = beta - alpha;
    if (a == 0.0) return {length, 0.0};
    const std::complex<double> ia{0.0, a};
    if (std::abs(a) * std::abs(length) < 1e-6) {
        // (e^{i a L} - 1)/(i a) = L (1 + z/2 + z^2/6 + z^3/24), z = i a L,
        // carried to four terms; avoids cancellation for tiny phases.
        const std::complex<double> z = ia * length;
        const std::complex<double> series =
            1.0 + z * (0.5 + z * (1.0 / 6.0 + z * (1.0 / 24.0)));
        return std::polar(1.0, a * alpha) * length * series;
    }
    return (std::polar(1.0, a * beta) - std::polar(1.0, a * alpha)) / ia;
}

GramMatrix gram_matrix(const lattice::FrequencyLattice& lat, const SpaceTimeDomain& dom,
                       int threads) {
    const int N = lat.truncation_N();
    const int dim = 2 * N + 1;
    if (dim > 4097)
        throw ucw::invalid_argument("gram_matrix: dense eigenpath limited to dim <= 4097");

    GramMatrix G;
    G.truncation_N = N;
    G.domain_area = dom.area();
    G.entries = Eigen::MatrixXcd::Zero(dim, dim);

    // entry(m,n) integrates e^{i((m-n)x - (w_m - w_n)t)}; each rectangle
    // factors into two closed-form one-dimensional integrals.
    auto fill_row = [&](int row) {
        const auto pm = lat.point(static_cast<size_t>(row));
        for (int col = row; col < dim; ++col) {
            const auto pn = lat.point(static_cast<size_t>(col));
            const double dk = pm[0] - pn[0];
            const double dw = pm[1] - pn[1];
            std::complex<double> acc{0.0, 0.0};
            for (const Rect& rect : dom.rects())
                acc += interval_integral(dk, rect.x0, rect.x1) *
                       interval_integral(-dw, rect.t0, rect.t1);
            G.entries(row, col) = acc;
            if (col != row) G.entries(col, row) = std::conj(acc);
        }
    };

    const int nthreads = std::max(1, std::min(threads, dim));
    if (nthreads == 1) {
        for (int row = 0; row < dim; ++row) fill_row(row);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < nthreads; ++t)
            pool.emplace_back([&, t] {
                for (int row = t; row < dim; row += nthreads) fill_row(row);
            });
        for (auto& th : pool) th.join();
    }

    // Diagonal entries are the domain area by construction; enforce exactly.
    for (int i = 0; i < dim; ++i) G.entries(i, i) = G.domain_area;
    return G;
}

namespace {

FrameBounds bounds_of(const Eigen::MatrixXcd& H, int N, double area) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(H, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw ucw::numerical_error("frame_bounds: Hermitian eigensolver failed to converge");
    FrameBounds fb;
    fb.truncation_N = N;
    fb.domain_area = area;
    fb.d_minus_raw = solver.eigenvalues()(0);
    fb.d_plus = solver.eigenvalues()(H.rows() - 1);
    if (fb.d_minus_raw < -1e-10 * area)
        throw ucw::numerical_error(
            "frame_bounds: Gram matrix not positive semidefinite (min eigenvalue " +
            std::to_string(fb.d_minus_raw) + ")");
    fb.d_minus = std::max(fb.d_minus_raw, 0.0);
    return fb;
}

} // namespace

FrameBounds frame_bounds(const GramMatrix& G) {
    return bounds_of(G.entries, G.truncation_N, G.domain_area);
}

double restricted_mass(const spectral::FourierState& g, const dispersion::Relation& rel,
                       const SpaceTimeDomain& dom, int threads) {
    g.validate();
    const lattice::FrequencyLattice lat(rel, g.truncation_N);
    GramMatrix G = gram_matrix(lat, dom, threads);
    return (g.coeffs.adjoint() * G.entries * g.coeffs)(0, 0).real();
}

std::vector<CertificateRow> ucp_certificate(const dispersion::Relation& rel,
                                            const SpaceTimeDomain& dom,
                                            const std::vector<int>& N_list, int threads) {
    if (N_list.empty()) throw ucw::invalid_argument("ucp_certificate: empty N list");
    for (size_t i = 0; i + 1 < N_list.size(); ++i)
        if (!(N_list[i] < N_list[i + 1]))
            throw ucw::invalid_argument("ucp_certificate: N list must be increasing");
    const int N_max = N_list.back();
    const lattice::FrequencyLattice lat(rel, N_max);
    const GramMatrix G = gram_matrix(lat, dom, threads);

    std::vector<CertificateRow> rows;
    for (int N : N_list) {
        // The truncation-N Gram is the centered principal block of the
        // truncation-N_max Gram: entries depend only on the mode pair.
        const int dim = 2 * N + 1;
        const int off = N_max - N;
        const Eigen::MatrixXcd sub = G.entries.block(off, off, dim, dim);
        const FrameBounds fb = bounds_of(sub, N, G.domain_area);
        rows.push_back({N, fb.d_minus_raw, fb.d_minus, fb.d_plus});
    }
    return rows;
}

Witness vanishing_witness(const dispersion::Relation& rel, const SpaceTimeDomain& dom, int N,
                          int threads) {
    if (N < 0) throw ucw::invalid_argument("vanishing_witness requires N >= 0");
    const lattice::FrequencyLattice lat(rel, N);
    GramMatrix G = gram_matrix(lat, dom, threads);
    const Eigen::MatrixXcd& sub = G.entries;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(sub);
    if (solver.info() != Eigen::Success)
        throw ucw::numerical_error("vanishing_witness: eigensolver failed to converge");
    Eigen::VectorXcd v = solver.eigenvectors().col(0);

    // Canonical phase: rotate the largest-magnitude entry onto the positive
    // real axis so serialized witnesses are reproducible.
    int imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    const std::complex<double> pivot = v(imax);
    if (std::abs(pivot) > 0.0) v *= std::conj(pivot) / std::abs(pivot);
    v.normalize();

    Witness w{spectral::FourierState::zeros(N), 0.0};
    w.state.coeffs = v;
    w.residual_mass = (v.adjoint() * sub * v)(0, 0).real();
    return w;
}

} // namespace ucw::observability
