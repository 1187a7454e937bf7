#ifndef UCW_DISPERSION_HPP
#define UCW_DISPERSION_HPP

#include <array>
#include <string>
#include <vector>

namespace ucw::dispersion {

enum class Family {
    power,            // omega(k) = |k|^p
    transport,        // omega(k) = c*k
    schrodinger,      // omega(k) = k^2
    kdv_linear,       // omega(k) = -k^3
    gravity_capillary // omega(k) = sqrt((g*k + S*k^3) tanh(k*H)), odd in k
};

/// A real-valued dispersion relation omega(k) with symbol order m.
/// Evaluation is defined for all real k with |k| <= 1e6.
class Relation {
public:
    static Relation power(double p);
    static Relation transport(double c);
    static Relation schrodinger();
    static Relation kdv_linear();
    static Relation gravity_capillary(double g, double S, double H);

    Family family() const { return family_; }
    const std::string& name() const { return name_; }
    double order_m() const { return order_m_; }

    // Model parameters; meaning depends on the family.
    double param(int i) const { return params_.at(static_cast<size_t>(i)); }

    /// omega(k). For gravity_capillary, k < 0 is handled by odd reflection.
    double eval(double k) const;

    /// d^n omega / dk^n for n in {1,2}. Closed forms for the polynomial
    /// families; central differences with relative step 1e-5 for
    /// gravity_capillary.
    double derivative(double k, int n) const;

private:
    Relation(Family f, std::string name, double order, std::vector<double> params);

    Family family_;
    std::string name_;
    double order_m_;
    std::vector<double> params_;
};

enum class Superlinearity { SUPERLINEAR, NOT_SUPERLINEAR, INCONCLUSIVE };

const char* to_string(Superlinearity v);

/// Dyadic samples of |omega(+-2^j)| / 2^j used to classify growth of the
/// phase velocity.
struct SuperlinearityReport {
    Superlinearity verdict;
    std::vector<double> k;          // 2^j, j = 0..J
    std::vector<double> ratio_pos;  // |omega(+k)| / k
    std::vector<double> ratio_neg;  // |omega(-k)| / k
};

/// Classifies |omega(k)|/|k| growth on dyadic samples up to k_max (>= 64).
/// SUPERLINEAR: both signed ratio sequences strictly increase over the last
/// five samples and the final/first ratio exceeds 10. NOT_SUPERLINEAR: over
/// the last five samples the sequences fail to grow (non-increasing, or
/// confined to a 1% relative band). Anything else is INCONCLUSIVE.
SuperlinearityReport check_superlinear(const Relation& rel, double k_max);

/// True iff |d^n omega(k)| <= C (1 + k^2)^((m-n)/2) for n = 0,1,2 at every
/// sample point.
bool check_symbol_bound(const Relation& rel, double order_m, double C,
                        const std::vector<double>& k_samples);

/// Smallest C per n = 0,1,2 that makes the symbol bound hold on the samples.
std::array<double, 3> min_symbol_constants(const Relation& rel, double order_m,
                                           const std::vector<double>& k_samples);

} // namespace ucw::dispersion

#endif
