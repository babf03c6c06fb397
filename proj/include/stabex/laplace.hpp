#pragma once

#include "stabex/charexp.hpp"
#include "stabex/quadrature.hpp"

#include <functional>
#include <vector>

namespace stabex {

using RealTransform = std::function<double(double)>;
using Transform = std::function<cplx(cplx)>;

struct GwrConfig {
    int two_m = 16;
    double shift_a = 0.0;

    void validate() const;
};

struct GwrResult {
    double value = 0.0;
    double est_error = 0.0;
    bool degraded = false;
};

struct BromwichConfig {
    SinhContour contour;
    TrapezoidPlan plan; // only n_plus is used (j = 0..n_plus)
};

// Shift giving ln2/T + a >= q_min.
double gwr_default_shift(double T, double q_min = 0.25);

// The 2M transform arguments k ln2/T + a, k = 1..2M.
std::vector<double> gwr_nodes(double T, const GwrConfig& cfg);

// Gaver functionals + Wynn rho from transform values at gwr_nodes (same order).
GwrResult gwr_combine(const std::vector<double>& values, double T, const GwrConfig& cfg);

GwrResult gwr_invert(const RealTransform& f, double T, const GwrConfig& cfg = {});

// Stehfest weights for order M (2M terms).
std::vector<double> stehfest_weights(int M);

double gaver_stehfest(const RealTransform& f, double T, int M = 8);

// Mutation hook for self-tests: when set, Gaver functionals use a corrupted binomial.
void set_gaver_corruption(bool on);

BromwichConfig choose_contour(const StableParams& p, double T, const ConeSpec& cone, double eps);

struct SinhSetup {
    ConeSpec cone;
    BromwichConfig bromwich;
};

// Contour first (its angle depends on the parameters only), then the xi cone checked against
// the smallest |q| on that contour. Near xi = 0 a drift makes arg psi reach +-pi/2, which is
// harmless as long as |psi| stays small next to |q|.
SinhSetup plan_sinh(const StableParams& p, double T, double eps);

// Model bound of the Bromwich integrand for transforms of size 1/|q|; used for planning.
BromwichConfig plan_sinh_contour(double sigma_l, double omega_l, double d_l, double T, double eps);

double sinh_bromwich_invert(const Transform& f, double T, const BromwichConfig& cfg);

// Combine precomputed transform values at sinh_nodes(cfg) into the inversion.
double sinh_bromwich_combine(const std::vector<cplx>& values, double T, const BromwichConfig& cfg);

// Sum over nodes of |weight e^{qT}| / (pi |q|): how much a relative transform error is amplified.
double sinh_error_gain(double T, const BromwichConfig& cfg);

} // namespace stabex
