#pragma once

#include <complex>
#include <string>

namespace stabex {

using cplx = std::complex<double>;

struct StableParams {
    double alpha = 1.5;
    double c_plus = 0.5;
    double c_minus = 0.5;
    double mu = 0.0;

    void validate() const;
};

struct DerivedConstants {
    cplx C_plus;
    cplx C_minus;
    double phi0 = 0.0;    // arg C_plus
    double sigma_z = 0.0; // (c+ + c-) pi / 2, used at alpha = 1
    double beta_z = 0.0;  // (c+ - c-) / (c+ + c-)
};

enum class RegimeTag {
    AlphaGt1,
    AlphaLt1ZeroDrift,
    AlphaLt1PosDrift,
    AlphaLt1NegDrift,
    Alpha1Symmetric,
    Alpha1Asymmetric,
};

struct Regime {
    RegimeTag tag = RegimeTag::AlphaGt1;
    double alpha_bar = 0.0;
    double alpha_plus = 0.0;
    double alpha_minus = 0.0;
    bool sinh_bromwich_allowed = false;
};

struct ConeSpec {
    double gamma_minus = 0.0; // lowest admissible ray angle (<= 0)
    double gamma_plus = 0.0;  // highest admissible ray angle (>= 0)
    double sigma = 0.0;       // Bromwich abscissa
    double gamma0 = 0.0;      // argument room left for q on complex contours
};

// How (alpha, beta, scale) maps to (c+, c-).
enum class ScaleConvention {
    Standard, // Re C+ = scale^alpha, c+ : c- = (1 + beta) : (1 - beta)
    SumOne,   // c+ + c- = scale^alpha
    AbsCOne,  // |C+| = scale^alpha
};

ScaleConvention parse_convention(const std::string& s);
std::string to_string(ScaleConvention c);
std::string to_string(RegimeTag t);

StableParams from_beta(double alpha, double beta, double scale, double mu,
                       ScaleConvention conv = ScaleConvention::Standard);

DerivedConstants derive(const StableParams& p);

cplx psi0(const StableParams& p, cplx xi);
cplx psi(const StableParams& p, cplx xi);

Regime classify(const StableParams& p);

// q_floor: smallest |q| the cone will be used with; points where |psi| < q_floor/2
// cannot push q + psi onto the negative axis and are not constrained.
ConeSpec admissible_cone(const StableParams& p, bool for_complex_q, double q_floor = 1e-3);

// Argument bound the cone construction enforces on psi along admissible rays.
double cone_arg_bound(const StableParams& p, bool for_complex_q);

// Cached evaluator for hot loops. Not valid for the asymmetric alpha = 1 regime off the real axis.
class CharExp {
public:
    explicit CharExp(const StableParams& p);

    const StableParams& params() const { return p_; }
    const DerivedConstants& constants() const { return d_; }
    const Regime& regime() const { return r_; }

    cplx psi0(cplx xi) const;
    cplx psi(cplx xi) const { return cplx(0.0, -p_.mu) * xi + psi0(xi); }

private:
    StableParams p_;
    DerivedConstants d_;
    Regime r_;
};

} // namespace stabex
