#include "stabex/quadrature.hpp"

#include "stabex/errors.hpp"
#include "stabex/parallel.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace stabex {

namespace {
constexpr double pi = std::numbers::pi;

// Neumaier's variant: also exact when a later term is larger than the running sum
struct Kahan {
    double s = 0.0, c = 0.0;
    void add(double v)
    {
        double t = s + v;
        c += std::abs(s) >= std::abs(v) ? (s - t) + v : (v - t) + s;
        s = t;
    }
    double value() const { return s + c; }
};
} // namespace

void SinhContour::validate() const
{
    if (!(b_l > 0.0)) throw DomainError("sinh contour: b_l must be > 0");
    if (!(omega_l > 0.0 && omega_l < pi / 2.0)) throw DomainError("sinh contour: omega_l must lie in (0, pi/2)");
    if (!(sigma_l - b_l * std::sin(omega_l) > 0.0))
        throw ContourError("sinh contour leaves the right half-plane: sigma_l - b_l sin(omega_l) <= 0");
}

cplx SinhContour::q(double y) const { return sigma_l + cplx(0.0, b_l) * std::sinh(cplx(y, omega_l)); }

cplx SinhContour::dq(double y) const { return cplx(0.0, b_l) * std::cosh(cplx(y, omega_l)); }

double discretization_bound(const ErrorBudget& b, double zeta)
{
    double e = std::exp(-2.0 * pi * b.d / zeta);
    return b.h_norm * e / (1.0 - e);
}

double plan_step(const ErrorBudget& b)
{
    if (!(b.eps > 0.0) || !(b.d > 0.0) || !(b.h_norm > 0.0)) throw DomainError("plan_step: invalid budget");
    // H e/(1-e) = eps/2  <=>  e = eps/(2H + eps)
    return 2.0 * pi * b.d / std::log1p(2.0 * b.h_norm / b.eps);
}

double left_cut(double c, double rate, double eps)
{
    if (!(rate > 0.0)) throw DomainError("left tail does not decay");
    return std::log(eps / (4.0 * c)) / rate;
}

double right_cut(const DecaySpec& d, double eps)
{
    if (!(d.right_kappa > 0.0)) throw DomainError("right tail does not decay");
    if (d.right_kind == DecaySpec::Right::Exp) return std::log(4.0 * d.right_c / eps) / d.right_kappa;
    if (!(d.right_b > 0.0)) throw DomainError("right tail does not decay");
    // smallest u with C e^{-u}/(kappa u) <= eps/4; Newton on h(u) = u + ln u - ln(4C/(kappa eps))
    double target = std::log(4.0 * d.right_c / (d.right_kappa * eps));
    double u = std::max(1.0, target);
    for (int it = 0; it < 50; ++it) {
        double h = u + std::log(u) - target;
        double nu = u - h / (1.0 + 1.0 / u);
        if (nu <= 1e-300) nu = u / 2.0;
        if (std::abs(nu - u) < 1e-14 * u) {
            u = nu;
            break;
        }
        u = nu;
    }
    return std::log(u / d.right_b) / d.right_kappa;
}

std::pair<long, long> plan_truncation(const DecaySpec& d, double zeta, double eps)
{
    double lo = left_cut(d.left_c, d.left_rate, eps);
    double hi = right_cut(d, eps);
    long nm = lo < 0.0 ? static_cast<long>(std::ceil(-lo / zeta)) : 0;
    long np = hi > 0.0 ? static_cast<long>(std::ceil(hi / zeta)) : 0;
    return {nm, np};
}

cplx kahan_sum(const std::vector<cplx>& v)
{
    Kahan re, im;
    for (const cplx& z : v) {
        re.add(z.real());
        im.add(z.imag());
    }
    return {re.value(), im.value()};
}

cplx trapezoid_sum(const TrapezoidPlan& plan, const std::function<cplx(long, double)>& g, int threads)
{
    if (!(plan.zeta > 0.0)) throw DomainError("trapezoid_sum: zeta must be > 0");
    std::size_t n = static_cast<std::size_t>(plan.size());
    std::vector<cplx> vals(n);
    auto eval = [&](std::size_t i) {
        long j = static_cast<long>(i) - plan.n_minus;
        try {
            vals[i] = g(j, j * plan.zeta);
        } catch (const Error& e) {
            throw DomainError(std::string(e.what()) + " (node " + std::to_string(j) + ")");
        }
    };
    if (threads == 1) {
        for (std::size_t i = 0; i < n; ++i) eval(i);
    } else {
        parallel_for(n, eval, threads);
    }
    return plan.zeta * kahan_sum(vals);
}

Nodes exp_ray_nodes(const RaySpec& ray, const TrapezoidPlan& plan)
{
    Nodes out;
    out.x.reserve(plan.size());
    out.w.reserve(plan.size());
    for (long j = -plan.n_minus; j <= plan.n_plus; ++j) {
        cplx x = std::exp(cplx(j * plan.zeta, ray.omega));
        out.x.push_back(x);
        out.w.push_back(static_cast<double>(ray.orientation) * plan.zeta * x);
    }
    return out;
}

Nodes sinh_nodes(const SinhContour& c, const TrapezoidPlan& plan)
{
    c.validate();
    Nodes out;
    for (long j = 0; j <= plan.n_plus; ++j) {
        double y = j * plan.zeta;
        out.x.push_back(c.q(y));
        out.w.push_back((j == 0 ? 0.5 : 1.0) * plan.zeta * c.b_l * std::cosh(cplx(y, c.omega_l)));
    }
    return out;
}

double estimate_hardy_norm(const std::function<cplx(cplx)>& g, double d, double y_lo, double y_hi, int n)
{
    if (n < 2 || !(y_hi > y_lo)) throw DomainError("estimate_hardy_norm: bad probe range");
    double h = (y_hi - y_lo) / (n - 1);
    double total = 0.0;
    for (double side : {-1.0, 1.0}) {
        double s = 0.0;
        for (int k = 0; k < n; ++k) {
            double w = (k == 0 || k == n - 1) ? 0.5 : 1.0;
            s += w * std::abs(g(cplx(y_lo + k * h, side * d)));
        }
        total += s * h;
    }
    if (!std::isfinite(total)) return 1e300;
    return std::max(1.0, total);
}

} // namespace stabex
