#include "stabex/laplace.hpp"

#include "stabex/errors.hpp"

#include <atomic>
#include <cmath>
#include <numbers>

namespace stabex {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double ln2 = std::numbers::ln2;

std::atomic<bool> g_corrupt{false};

double binom(int n, int k)
{
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

} // namespace

void set_gaver_corruption(bool on) { g_corrupt = on; }

void GwrConfig::validate() const
{
    if (two_m < 2 || two_m % 2 != 0) throw DomainError("GWR order 2M must be even and >= 2");
    if (!(shift_a >= 0.0)) throw DomainError("GWR shift must be >= 0");
}

double gwr_default_shift(double T, double q_min)
{
    double base = ln2 / T;
    return base >= q_min ? 0.0 : q_min - base;
}

std::vector<double> gwr_nodes(double T, const GwrConfig& cfg)
{
    cfg.validate();
    if (!(T > 0.0)) throw DomainError("T must be > 0");
    double tau = ln2 / T;
    std::vector<double> q;
    for (int k = 1; k <= cfg.two_m; ++k) q.push_back(k * tau + cfg.shift_a);
    return q;
}

GwrResult gwr_combine(const std::vector<double>& vals, double T, const GwrConfig& cfg)
{
    cfg.validate();
    int M = cfg.two_m / 2;
    if (static_cast<int>(vals.size()) != cfg.two_m) throw DomainError("gwr_combine: wrong number of values");
    double tau = ln2 / T;
    bool corrupt = g_corrupt.load();

    std::vector<double> f(M);
    for (int n = 1; n <= M; ++n) {
        double s = 0.0;
        for (int i = 0; i <= n; ++i) {
            double c = binom(n, i);
            if (corrupt && i == 1) c += 1.0;
            s += (i % 2 ? -1.0 : 1.0) * c * vals[n + i - 1];
        }
        f[n - 1] = n * tau * binom(2 * n, n) * s;
    }

    // Wynn rho: rho_{-1} = 0, rho_0 = f, rho_k^{(j)} = rho_{k-2}^{(j+1)} + k / (rho_{k-1}^{(j+1)} - rho_{k-1}^{(j)})
    std::vector<std::vector<double>> cols;
    cols.push_back(std::vector<double>(M + 1, 0.0));
    cols.push_back(f);
    GwrResult res;
    for (int k = 1; k < M; ++k) {
        const auto& prev = cols[cols.size() - 2];
        const auto& cur = cols.back();
        std::vector<double> nxt;
        bool bad = false;
        for (std::size_t j = 0; j + 1 < cur.size(); ++j) {
            double diff = cur[j + 1] - cur[j];
            if (std::abs(diff) < 1e-300) {
                bad = true;
                break;
            }
            nxt.push_back(prev[j + 1] + k / diff);
        }
        if (bad) {
            res.degraded = true;
            break;
        }
        cols.push_back(std::move(nxt));
    }

    // cols[1 + k] holds rho_k; estimates live in even k
    int last_even = -1, prev_even = -1;
    for (int k = 0; k + 1 < static_cast<int>(cols.size()); k += 2) {
        prev_even = last_even;
        last_even = k;
    }
    double scale = std::exp(cfg.shift_a * T);
    res.value = scale * cols[1 + last_even][0];
    res.est_error = prev_even >= 0 ? scale * std::abs(cols[1 + last_even][0] - cols[1 + prev_even][0]) : INFINITY;
    return res;
}

GwrResult gwr_invert(const RealTransform& f, double T, const GwrConfig& cfg)
{
    std::vector<double> q = gwr_nodes(T, cfg);
    std::vector<double> v(q.size());
    for (std::size_t k = 0; k < q.size(); ++k) v[k] = f(q[k]);
    return gwr_combine(v, T, cfg);
}

std::vector<double> stehfest_weights(int M)
{
    if (M < 1) throw DomainError("Stehfest order must be >= 1");
    auto fact = [](int n) {
        long double r = 1.0L;
        for (int i = 2; i <= n; ++i) r *= i;
        return r;
    };
    std::vector<double> w(2 * M);
    for (int k = 1; k <= 2 * M; ++k) {
        long double s = 0.0L;
        for (int j = (k + 1) / 2; j <= std::min(k, M); ++j) {
            long double num = std::pow(static_cast<long double>(j), M) * fact(2 * j);
            long double den = fact(M - j) * fact(j) * fact(j - 1) * fact(k - j) * fact(2 * j - k);
            s += num / den;
        }
        w[k - 1] = static_cast<double>(((M + k) % 2 ? -1.0L : 1.0L) * s);
    }
    return w;
}

double gaver_stehfest(const RealTransform& f, double T, int M)
{
    if (!(T > 0.0)) throw DomainError("T must be > 0");
    std::vector<double> w = stehfest_weights(M);
    double tau = ln2 / T;
    long double s = 0.0L;
    for (int k = 1; k <= 2 * M; ++k) s += static_cast<long double>(w[k - 1]) * f(k * tau);
    return static_cast<double>(tau * s);
}

BromwichConfig plan_sinh_contour(double sigma_l, double omega_l, double d_l, double T, double eps)
{
    BromwichConfig cfg;
    cfg.contour = {sigma_l, sigma_l / (2.0 * std::sin(omega_l)), omega_l};
    cfg.contour.validate();
    const SinhContour& c = cfg.contour;

    // integrand model e^{qT} q'(y) / q for a transform of size 1/|q|
    auto model = [&](cplx y) {
        cplx q = sigma_l + cplx(0.0, c.b_l) * std::sinh(cplx(0.0, omega_l) + y);
        cplx dq = cplx(0.0, c.b_l) * std::cosh(cplx(0.0, omega_l) + y);
        return std::exp(q * T) * dq / q;
    };
    auto tail_mass = [&](double y) {
        double g = std::abs(model(cplx(y, 0.0)));
        double rate = T * c.b_l * std::sin(omega_l) * std::sinh(y) - 1.0;
        return rate > 0.5 ? g / rate : INFINITY;
    };
    double y_hi = 0.25;
    while (tail_mass(y_hi) > eps / 4.0 && y_hi < 40.0) y_hi += 0.05;

    ErrorBudget b{eps, d_l, estimate_hardy_norm(model, d_l, -y_hi, y_hi, 64) / (2.0 * pi)};
    cfg.plan.zeta = plan_step(b);
    cfg.plan.n_minus = 0;
    cfg.plan.n_plus = static_cast<long>(std::ceil(y_hi / cfg.plan.zeta));
    return cfg;
}

BromwichConfig choose_contour(const StableParams& p, double T, const ConeSpec& cone, double eps)
{
    if (!classify(p).sinh_bromwich_allowed)
        throw RegimeError("sinh-Bromwich inversion needs a complex-q cone (alpha > 1, alpha = 1 symmetric, or alpha < 1 "
                          "without drift)");
    if (!(T > 0.0)) throw DomainError("T must be > 0");
    double omega_l = cone.gamma0 / 2.0;
    double d_l = 0.9 * std::min(omega_l, cone.gamma0 - omega_l);
    double sigma_l = std::max(cone.sigma, 1.0 / T);
    return plan_sinh_contour(sigma_l, omega_l, d_l, T, eps);
}

SinhSetup plan_sinh(const StableParams& p, double T, double eps)
{
    ConeSpec nominal;
    nominal.gamma0 = (pi / 2.0 - std::abs(derive(p).phi0)) / 2.0;
    SinhSetup s;
    s.bromwich = choose_contour(p, T, nominal, eps);
    double q_min = INFINITY;
    for (cplx q : sinh_nodes(s.bromwich.contour, s.bromwich.plan).x) q_min = std::min(q_min, std::abs(q));
    // |psi| < q_min cos(gamma0) keeps q + psi off (-inf, 0]; gamma0 <= pi/4 so 0.9 q_min / 2 is inside
    s.cone = admissible_cone(p, true, 0.9 * q_min);
    return s;
}

double sinh_bromwich_combine(const std::vector<cplx>& vals, double T, const BromwichConfig& cfg)
{
    Nodes n = sinh_nodes(cfg.contour, cfg.plan);
    if (vals.size() != n.x.size()) throw DomainError("sinh_bromwich_combine: wrong number of values");
    std::vector<cplx> terms(vals.size());
    for (std::size_t j = 0; j < vals.size(); ++j) terms[j] = n.w[j] * std::exp(n.x[j] * T) * vals[j];
    return kahan_sum(terms).real() / pi;
}

double sinh_bromwich_invert(const Transform& f, double T, const BromwichConfig& cfg)
{
    Nodes n = sinh_nodes(cfg.contour, cfg.plan);
    std::vector<cplx> v(n.x.size());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = f(n.x[j]);
    return sinh_bromwich_combine(v, T, cfg);
}

double sinh_error_gain(double T, const BromwichConfig& cfg)
{
    Nodes n = sinh_nodes(cfg.contour, cfg.plan);
    double s = 0.0;
    for (std::size_t j = 0; j < n.x.size(); ++j) s += std::abs(n.w[j] * std::exp(n.x[j] * T)) / std::abs(n.x[j]);
    return 2.0 * s / pi;
}

} // namespace stabex
