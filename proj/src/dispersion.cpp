#include "ucw/dispersion.hpp"

#include "ucw/errors.hpp"

#include <cmath>
#include <utility>

namespace ucw::dispersion {

namespace {

// Principal branch for k >= 0; callers reflect.
double gc_eval_nonneg(double k, double g, double S, double H) {
    const double radicand = (g * k + S * k * k * k) * std::tanh(k * H);
    if (radicand < 0.0)
        throw ucw::domain_error("gravity_capillary: negative radicand at k=" + std::to_string(k));
    return std::sqrt(radicand);
}

} // namespace

Relation::Relation(Family f, std::string name, double order, std::vector<double> params)
    : family_(f), name_(std::move(name)), order_m_(order), params_(std::move(params)) {}

Relation Relation::power(double p) {
    if (!std::isfinite(p) || p <= 0.0)
        throw ucw::invalid_argument("power relation requires finite p > 0");
    return Relation(Family::power, "power", p, {p});
}

Relation Relation::transport(double c) {
    if (!std::isfinite(c))
        throw ucw::invalid_argument("transport relation requires finite c");
    return Relation(Family::transport, "transport", 1.0, {c});
}

Relation Relation::schrodinger() {
    return Relation(Family::schrodinger, "schrodinger", 2.0, {});
}

Relation Relation::kdv_linear() {
    return Relation(Family::kdv_linear, "kdv_linear", 3.0, {});
}

Relation Relation::gravity_capillary(double g, double S, double H) {
    if (!(H > 0.0)) throw ucw::invalid_argument("gravity_capillary requires H > 0");
    if (g < 0.0 || S < 0.0)
        throw ucw::invalid_argument("gravity_capillary requires g >= 0 and S >= 0");
    if (!(g + S > 0.0)) throw ucw::invalid_argument("gravity_capillary requires g + S > 0");
    // Symbol order: sqrt(S k^3) ~ k^{3/2} when capillarity is present,
    // sqrt(g k) ~ k^{1/2} otherwise.
    const double order = (S > 0.0) ? 1.5 : 0.5;
    return Relation(Family::gravity_capillary, "gravity_capillary", order, {g, S, H});
}

double Relation::eval(double k) const {
    if (!std::isfinite(k)) throw ucw::invalid_argument("omega_eval requires finite k");
    switch (family_) {
        case Family::power: return std::pow(std::abs(k), params_[0]);
        case Family::transport: return params_[0] * k;
        case Family::schrodinger: return k * k;
        case Family::kdv_linear: return -k * k * k;
        case Family::gravity_capillary: {
            const double s = (k < 0.0) ? -1.0 : 1.0;
            return s * gc_eval_nonneg(std::abs(k), params_[0], params_[1], params_[2]);
        }
    }
    return 0.0; // unreachable
}

double Relation::derivative(double k, int n) const {
    if (n != 1 && n != 2) throw ucw::invalid_argument("omega_derivative requires n in {1,2}");
    if (!std::isfinite(k)) throw ucw::invalid_argument("omega_derivative requires finite k");
    switch (family_) {
        case Family::power: {
            const double p = params_[0];
            const double a = std::abs(k);
            if (a == 0.0) return 0.0;
            if (n == 1) return p * std::pow(a, p - 1.0) * (k < 0.0 ? -1.0 : 1.0);
            return p * (p - 1.0) * std::pow(a, p - 2.0);
        }
        case Family::transport: return n == 1 ? params_[0] : 0.0;
        case Family::schrodinger: return n == 1 ? 2.0 * k : 2.0;
        case Family::kdv_linear: return n == 1 ? -3.0 * k * k : -6.0 * k;
        case Family::gravity_capillary: {
            const double h = std::max(1e-5, 1e-5 * std::abs(k));
            const double fp = eval(k + h);
            const double fm = eval(k - h);
            if (n == 1) return (fp - fm) / (2.0 * h);
            return (fp - 2.0 * eval(k) + fm) / (h * h);
        }
    }
    return 0.0; // unreachable
}

const char* to_string(Superlinearity v) {
    switch (v) {
        case Superlinearity::SUPERLINEAR: return "SUPERLINEAR";
        case Superlinearity::NOT_SUPERLINEAR: return "NOT_SUPERLINEAR";
        case Superlinearity::INCONCLUSIVE: return "INCONCLUSIVE";
    }
    return "?";
}

namespace {

bool strictly_increasing_tail(const std::vector<double>& v, size_t tail) {
    for (size_t i = v.size() - tail; i + 1 < v.size(); ++i)
        if (!(v[i] < v[i + 1])) return false;
    return true;
}

// "Fails to grow": non-increasing over the tail, or confined to a 1%
// relative band.
bool bounded_tail(const std::vector<double>& v, size_t tail) {
    bool non_increasing = true;
    double lo = v[v.size() - tail], hi = lo;
    for (size_t i = v.size() - tail; i < v.size(); ++i) {
        lo = std::min(lo, v[i]);
        hi = std::max(hi, v[i]);
        if (i + 1 < v.size() && v[i + 1] > v[i]) non_increasing = false;
    }
    const bool narrow_band = (hi <= lo * 1.01 + 1e-300);
    return non_increasing || narrow_band;
}

} // namespace

SuperlinearityReport check_superlinear(const Relation& rel, double k_max) {
    if (!(k_max >= 64.0))
        throw ucw::invalid_argument("check_superlinear requires k_max >= 2^6");
    SuperlinearityReport rep;
    const int jmax = static_cast<int>(std::floor(std::log2(k_max)));
    for (int j = 0; j <= jmax; ++j) {
        const double k = std::ldexp(1.0, j);
        rep.k.push_back(k);
        rep.ratio_pos.push_back(std::abs(rel.eval(k)) / k);
        rep.ratio_neg.push_back(std::abs(rel.eval(-k)) / k);
    }
    const size_t tail = 5; // jmax >= 6, so there are always at least 7 samples
    const bool inc = strictly_increasing_tail(rep.ratio_pos, tail) &&
                     strictly_increasing_tail(rep.ratio_neg, tail);
    const bool big = rep.ratio_pos.back() > 10.0 * rep.ratio_pos.front() &&
                     rep.ratio_neg.back() > 10.0 * rep.ratio_neg.front();
    if (inc && big) {
        rep.verdict = Superlinearity::SUPERLINEAR;
    } else if (bounded_tail(rep.ratio_pos, tail) && bounded_tail(rep.ratio_neg, tail)) {
        rep.verdict = Superlinearity::NOT_SUPERLINEAR;
    } else {
        rep.verdict = Superlinearity::INCONCLUSIVE;
    }
    return rep;
}

bool check_symbol_bound(const Relation& rel, double order_m, double C,
                        const std::vector<double>& k_samples) {
    if (!(C > 0.0)) throw ucw::invalid_argument("check_symbol_bound requires C > 0");
    for (double k : k_samples) {
        for (int n = 0; n <= 2; ++n) {
            const double lhs = std::abs(n == 0 ? rel.eval(k) : rel.derivative(k, n));
            const double rhs = C * std::pow(1.0 + k * k, (order_m - n) / 2.0);
            if (lhs > rhs) return false;
        }
    }
    return true;
}

std::array<double, 3> min_symbol_constants(const Relation& rel, double order_m,
                                           const std::vector<double>& k_samples) {
    std::array<double, 3> c{0.0, 0.0, 0.0};
    for (double k : k_samples) {
        for (int n = 0; n <= 2; ++n) {
            const double lhs = std::abs(n == 0 ? rel.eval(k) : rel.derivative(k, n));
            const double w = std::pow(1.0 + k * k, (order_m - n) / 2.0);
            c[static_cast<size_t>(n)] = std::max(c[static_cast<size_t>(n)], lhs / w);
        }
    }
    return c;
}

} // namespace ucw::dispersion
