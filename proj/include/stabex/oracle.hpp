#pragma once

#include "stabex/charexp.hpp"

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace stabex {

// Parameters of the equivalent S1 law: X_1 - mu = sigma * S(alpha, beta, 1).
struct CmsParams {
    double alpha = 1.5;
    double beta = 0.0;
    double sigma = 1.0;
    double mu = 0.0;
};

CmsParams cms_params(const StableParams& p);

std::uint64_t splitmix64(std::uint64_t& state);

// One draw of S(alpha, beta, 1) in the S1 parametrization (Chambers-Mallows-Stuck).
// alpha = 1 is supported for beta = 0 only.
double sample_cms(double alpha, double beta, std::mt19937_64& rng);

struct McConfig {
    double T = 1.0;
    long n_steps = 200;
    long n_paths = 10000;
    std::uint64_t seed = 1;
    int threads = 0;
};

struct McEstimate {
    double mean = 0.0;
    double stderr_ = 0.0;
};

// Functional of (x_T, running max over the monitoring grid, both from 0).
using PathFunctional = std::function<double(double x_t, double max_t)>;

std::vector<McEstimate> mc_expectations(const StableParams& p, const McConfig& cfg,
                                        const std::vector<PathFunctional>& fs);

// Estimates at n and 4n monitoring steps; the difference bounds the discrete-monitoring bias.
struct McGate {
    std::vector<McEstimate> coarse;
    std::vector<McEstimate> fine;
    std::vector<double> bias;

    double tolerance(std::size_t i) const { return 3.0 * fine[i].stderr_ + bias[i]; }
    bool accepts(std::size_t i, double value) const;
};

McGate mc_gate(const StableParams& p, const McConfig& cfg, const std::vector<PathFunctional>& fs);

// No positive jumps (c+ = 0): the supremum over an exponential time is exponential with rate
// Phi(q), the root of kappa(b) = q, kappa(b) = -psi(-i b).
double laplace_exponent(const StableParams& p, double b);
double one_sided_root(const StableParams& p, double q);
cplx one_sided_root(const StableParams& p, cplx q); // mu = 0 only (closed form)
cplx one_sided_phi_plus(const StableParams& p, double q, cplx xi);

// P[sup_{t<=T} X_t <= d] for c+ = 0: inverse Laplace transform of (1 - e^{-Phi(q) d}) / q,
// by sinh-Bromwich (mu = 0) or GWR at the same real nodes the library uses.
double one_sided_cpdf_sup_sinh(const StableParams& p, double T, double d, double eps = 1e-14);
double one_sided_cpdf_sup_gwr(const StableParams& p, double T, double d);

// alpha = 1, c+ = c- = c: Cauchy law with scale c pi.
double cauchy_cdf(double c, double mu, double T, double y);

// C+ from the Levy-Khintchine form -Gamma(-alpha) (c+ e^{-i pi alpha/2} + c- e^{i pi alpha/2}) in 50 digits.
cplx c_plus_high_precision(double alpha, double c_plus, double c_minus);

// P[X_T <= y] by Gil-Pelaez on the real line with adaptive Gauss-Kronrod (no contour deformation).
double gil_pelaez_cdf(const StableParams& p, double T, double y, double tol = 1e-12);

} // namespace stabex
