#include "ucw/spectral.hpp"

#include "ucw/errors.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>

namespace ucw::spectral {

namespace {

constexpr double two_pi = 6.283185307179586476925286766559;

// FFTW plan cache. Plans are created once per (size, direction) with the
// new-array execute interface; planning is serialized, execution is not.
class FftCache {
public:
    static FftCache& instance() {
        static FftCache cache;
        return cache;
    }

    // Plans are created in-place (matching how they are executed) with the
    // new-array interface; FFTW_UNALIGNED removes the alignment constraint.
    void transform(std::complex<double>* data, int n, int sign) {
        fftw_plan plan;
        {
            std::lock_guard<std::mutex> lock(mutex_);
            auto key = std::make_pair(n, sign);
            auto it = plans_.find(key);
            if (it == plans_.end()) {
                std::vector<std::complex<double>> a(static_cast<size_t>(n));
                plan = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(a.data()),
                                        reinterpret_cast<fftw_complex*>(a.data()), sign,
                                        FFTW_ESTIMATE | FFTW_UNALIGNED);
                plans_.emplace(key, plan);
            } else {
                plan = it->second;
            }
        }
        fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(data),
                         reinterpret_cast<fftw_complex*>(data));
    }

private:
    FftCache() = default;
    ~FftCache() {
        for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
    }
    std::mutex mutex_;
    std::map<std::pair<int, int>, fftw_plan> plans_;
};

void fft_forward(std::complex<double>* data, int n) {
    FftCache::instance().transform(data, n, FFTW_FORWARD);
}

void fft_backward(std::complex<double>* data, int n) {
    FftCache::instance().transform(data, n, FFTW_BACKWARD);
}

} // namespace

FourierState FourierState::zeros(int N) {
    if (N < 0) throw ucw::invalid_argument("FourierState requires N >= 0");
    FourierState s;
    s.truncation_N = N;
    s.coeffs = Eigen::VectorXcd::Zero(2 * N + 1);
    return s;
}

FourierState FourierState::delta(int N, int k, std::complex<double> amplitude) {
    FourierState s = zeros(N);
    if (std::abs(k) > N) throw ucw::invalid_argument("delta mode outside truncation");
    s.coeff(k) = amplitude;
    return s;
}

void FourierState::validate() const {
    if (truncation_N < 0 || coeffs.size() != 2 * truncation_N + 1)
        throw ucw::invalid_argument("FourierState: coefficient count must be 2N+1");
    if (!coeffs.allFinite())
        throw ucw::invalid_argument("FourierState: non-finite coefficient");
}

FourierState evolve(const FourierState& g, const dispersion::Relation& rel, double t) {
    g.validate();
    if (!std::isfinite(t)) throw ucw::invalid_argument("evolve requires finite t");
    FourierState out = g;
    for (int k = -g.truncation_N; k <= g.truncation_N; ++k) {
        const double phase = -rel.eval(static_cast<double>(k)) * t;
        out.coeff(k) *= std::polar(1.0, phase);
    }
    return out;
}

Eigen::VectorXcd synthesize(const FourierState& state, int nx) {
    state.validate();
    const int N = state.truncation_N;
    if (nx < 2 * N + 1)
        throw ucw::invalid_argument("synthesize: nx < 2N+1 would alias represented modes");
    // Scatter mode k into DFT bin (k mod nx); the backward transform then
    // evaluates sum_k g_k e^{ikx_j} without normalization.
    std::vector<std::complex<double>> bins(static_cast<size_t>(nx), {0.0, 0.0});
    for (int k = -N; k <= N; ++k) {
        const int bin = (k % nx + nx) % nx;
        bins[static_cast<size_t>(bin)] = state.coeff(k);
    }
    fft_backward(bins.data(), nx);
    Eigen::VectorXcd out(nx);
    for (int j = 0; j < nx; ++j) out(j) = bins[static_cast<size_t>(j)];
    return out;
}

FourierState analyze(const Eigen::VectorXcd& samples, int N) {
    const int nx = static_cast<int>(samples.size());
    if (nx < 2 * N + 1)
        throw ucw::invalid_argument("analyze: nx < 2N+1 cannot resolve the truncation");
    std::vector<std::complex<double>> bins(static_cast<size_t>(nx));
    for (int j = 0; j < nx; ++j) bins[static_cast<size_t>(j)] = samples(j);
    fft_forward(bins.data(), nx);
    FourierState out = FourierState::zeros(N);
    for (int k = -N; k <= N; ++k) {
        const int bin = (k % nx + nx) % nx;
        out.coeff(k) = bins[static_cast<size_t>(bin)] / static_cast<double>(nx);
    }
    return out;
}

std::vector<std::complex<double>>
evaluate_solution(const FourierState& g, const dispersion::Relation& rel,
                  const std::vector<std::pair<double, double>>& points) {
    g.validate();
    for (const auto& [x, t] : points) {
        if (!(x >= 0.0 && x <= two_pi && t >= 0.0))
            throw ucw::invalid_argument("evaluate_solution: point outside [0,2pi] x [0,inf)");
    }
    const int N = g.truncation_N;
    std::vector<double> omega(static_cast<size_t>(2 * N + 1));
    for (int k = -N; k <= N; ++k)
        omega[static_cast<size_t>(k + N)] = rel.eval(static_cast<double>(k));
    std::vector<std::complex<double>> out;
    out.reserve(points.size());
    for (const auto& [x, t] : points) {
        std::complex<double> acc{0.0, 0.0};
        for (int k = -N; k <= N; ++k) {
            const double phase = k * x - omega[static_cast<size_t>(k + N)] * t;
            acc += g.coeff(k) * std::polar(1.0, phase);
        }
        out.push_back(acc);
    }
    return out;
}

Eigen::VectorXd derivative_periodic(const Eigen::VectorXd& samples, int order) {
    if (order != 1 && order != 2)
        throw ucw::invalid_argument("derivative_periodic: order must be 1 or 2");
    const int nx = static_cast<int>(samples.size());
    if (nx < 2) throw ucw::invalid_argument("derivative_periodic: need nx >= 2");
    std::vector<std::complex<double>> bins(static_cast<size_t>(nx));
    for (int j = 0; j < nx; ++j) bins[static_cast<size_t>(j)] = samples(j);
    fft_forward(bins.data(), nx);
    for (int b = 0; b < nx; ++b) {
        int k = (b <= nx / 2) ? b : b - nx;
        // The real-data Nyquist mode has no well-defined odd derivative.
        if (order == 1 && 2 * b == nx) k = 0;
        const std::complex<double> ik{0.0, static_cast<double>(k)};
        bins[static_cast<size_t>(b)] *= (order == 1) ? ik : ik * ik;
    }
    fft_backward(bins.data(), nx);
    Eigen::VectorXd out(nx);
    for (int j = 0; j < nx; ++j) out(j) = bins[static_cast<size_t>(j)].real() / nx;
    return out;
}

void dealias_two_thirds(Eigen::VectorXd& samples) {
    const int nx = static_cast<int>(samples.size());
    std::vector<std::complex<double>> bins(static_cast<size_t>(nx));
    for (int j = 0; j < nx; ++j) bins[static_cast<size_t>(j)] = samples(j);
    fft_forward(bins.data(), nx);
    const int kcut = nx / 3;
    for (int b = 0; b < nx; ++b) {
        const int k = (b <= nx / 2) ? b : b - nx;
        if (std::abs(k) > kcut) bins[static_cast<size_t>(b)] = 0.0;
    }
    fft_backward(bins.data(), nx);
    for (int j = 0; j < nx; ++j) samples(j) = bins[static_cast<size_t>(j)].real() / nx;
}

} // namespace ucw::spectral
