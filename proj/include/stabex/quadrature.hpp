#pragma once

#include "stabex/charexp.hpp"

#include <functional>
#include <utility>
#include <vector>

namespace stabex {

struct TrapezoidPlan {
    double zeta = 0.1;
    long n_minus = 0;
    long n_plus = 0;

    long size() const { return n_minus + n_plus + 1; }
};

struct ErrorBudget {
    double eps = 1e-10;
    double d = 0.5;
    double h_norm = 1.0;
};

struct SinhContour {
    double sigma_l = 1.0;
    double b_l = 1.0;
    double omega_l = 0.5;

    void validate() const;
    cplx q(double y) const;
    cplx dq(double y) const; // derivative in y
};

struct RaySpec {
    double omega = 0.0;
    int orientation = 1;
};

// Tail bounds in terms of the remaining mass of |g|:
//   left:  int_{-inf}^{y} |g| <= left_c * exp(left_rate * y)
//   right: DoubleExp: int_{y}^{inf} |g| <= right_c * exp(-u) / (right_kappa * u), u = right_b * exp(right_kappa * y)
//          Exp:       int_{y}^{inf} |g| <= right_c * exp(-right_kappa * y)
struct DecaySpec {
    enum class Right { DoubleExp, Exp };
    double left_c = 1.0;
    double left_rate = 1.0;
    Right right_kind = Right::DoubleExp;
    double right_c = 1.0;
    double right_b = 1.0;
    double right_kappa = 1.0;
};

struct Nodes {
    std::vector<cplx> x;
    std::vector<cplx> w;
};

// Largest step with H e^{-2 pi d/zeta} / (1 - e^{-2 pi d/zeta}) <= eps/2.
double plan_step(const ErrorBudget& budget);

// Discretization error bound of a step for a budget (the quantity plan_step inverts).
double discretization_bound(const ErrorBudget& budget, double zeta);

// Cut points where each tail mass drops to eps/4.
double left_cut(double c, double rate, double eps);
double right_cut(const DecaySpec& decay, double eps);

std::pair<long, long> plan_truncation(const DecaySpec& decay, double zeta, double eps);

// zeta * sum_{j=-n_minus}^{n_plus} g(j, j zeta), ascending j, compensated.
cplx trapezoid_sum(const TrapezoidPlan& plan, const std::function<cplx(long, double)>& g, int threads = 1);

// Compensated sum of a precomputed array in index order.
cplx kahan_sum(const std::vector<cplx>& v);

Nodes exp_ray_nodes(const RaySpec& ray, const TrapezoidPlan& plan);

// j = 0..n_plus; half weight at j = 0; weights include zeta and dq/dy.
Nodes sinh_nodes(const SinhContour& contour, const TrapezoidPlan& plan);

// max(1, probe of int |g(y +- i d)| dy over [y_lo, y_hi] with n nodes per edge).
double estimate_hardy_norm(const std::function<cplx(cplx)>& g, double d, double y_lo, double y_hi, int n = 16);

} // namespace stabex
