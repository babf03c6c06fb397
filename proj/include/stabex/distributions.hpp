#pragma once

#include "stabex/charexp.hpp"
#include "stabex/laplace.hpp"
#include "stabex/whf.hpp"

#include <functional>
#include <string>
#include <vector>

namespace stabex {

enum class Method { SinhBromwich, GWR, DirectFourier };

Method parse_method(const std::string& s);
std::string to_string(Method m);

struct EvalRequest {
    StableParams params;
    double T = 1.0;
    Method method = Method::SinhBromwich;
    double eps = 1e-10;
    int threads = 0;
    // optional ray angle overrides for the WHF contours (second contour configuration in cross checks)
    std::optional<double> omega_plus;
    std::optional<double> omega_minus;

    void validate() const;
};

// Diagnostics reported next to each batch of values.
struct EvalInfo {
    Method method = Method::SinhBromwich;
    double est_error = 0.0; // planned bound (sinh, Fourier) or extrapolation spread (GWR)
    long n_l = 0;           // Laplace nodes
    long n_plus = 0;        // nodes per ray on L+
    long n_minus = 0;       // nodes per ray on L-
    double zeta = 0.0;
    bool degraded = false;
};

struct EvalResult {
    std::vector<double> values;
    EvalInfo info;
};

// P[x + X_T <= a]
double cpdf_x(const EvalRequest& req, double x, double a);
EvalResult cpdf_x_many(const EvalRequest& req, const std::vector<double>& y); // y = a - x

// (E+_q 1_{(a, inf)})(x) for one q; a_minus_x >= 0. Grids need an L- outer range.
cplx cpdf_sup_transform(const StableParams& p, const WhfGrids& g, cplx q, double a_minus_x);

// P[x + sup_{t<=T} X_t <= a]
double cpdf_sup(const EvalRequest& req, double x, double a);
EvalResult cpdf_sup_many(const EvalRequest& req, const std::vector<double>& a_minus_x);

// Laplace transform of V1 = P[x1 + X_T <= a1, x1 + sup X > a2] (includes the 1/q).
cplx joint_v1_transform(const StableParams& p, const WhfGrids& g, cplx q, double x1, double a1, double a2);

struct JointPoint {
    double x1 = 0.0, x2 = 0.0, a1 = 0.0, a2 = 0.0;
};

struct JointResult {
    std::vector<double> v;  // P[x1 + X_T <= a1, max(x2, x1 + sup X) <= a2]
    std::vector<double> v1; // P[x1 + X_T <= a1] - v
    EvalInfo info;
};

double joint_cpdf(const EvalRequest& req, double x1, double x2, double a1, double a2);
JointResult joint_cpdf_many(const EvalRequest& req, const std::vector<JointPoint>& pts);

// E[(beta (x1 + X_T) - M)_+ exp(-lambda M)], M = max(x2, x1 + sup X).
// lambda = 0 (alpha > 1 only) is extrapolated from six small positive lambda; est_error carries
// the change between the last two extrapolation orders.
double exchange_expectation(const EvalRequest& req, double x1, double x2, double beta_strike, double lambda);
EvalResult exchange_expectation_info(const EvalRequest& req, double x1, double x2, double beta_strike, double lambda);

// Payoff in the two-factor representation V = first + L^{-1}[S/q](T):
//   S(q) = (2 pi)^{-2} int_{L-} d eta phi+_mod(eta) int_{L+} d xi phi-_mod(xi) K(xi, eta)
//        + a- (2 pi)^{-1} int_{L-} phi+_mod(eta) exp(i x1 eta) c(eta) d eta
// K and c carry all dependence on (x1, x2) and on the payoff.
struct PayoffTransform {
    std::function<double(const EvalRequest&)> first_term;
    std::function<cplx(cplx xi, cplx eta)> kernel;
    std::function<cplx(cplx eta)> diagonal; // may be empty when a- = 0 is guaranteed
    double x1 = 0.0;
    OuterNeed minus; // decay of the eta integrand along L-
    OuterNeed plus;  // decay of the xi integrand along L+
};

double general_expectation(const EvalRequest& req, const PayoffTransform& payoff);
EvalResult general_expectation_info(const EvalRequest& req, const PayoffTransform& payoff);

// Building blocks used by the CLI and tests.
PayoffTransform joint_payoff(double x1, double x2, double a1, double a2);
PayoffTransform exchange_payoff(const StableParams& p, double x1, double x2, double beta_strike, double lambda);

// (e^z - 1 - z) / z^2, accurate near 0.
cplx e2(cplx z);

} // namespace stabex
