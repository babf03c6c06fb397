#include "stabex/oracle.hpp"

#include "stabex/errors.hpp"
#include "stabex/laplace.hpp"
#include "stabex/parallel.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/tools/roots.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <numbers>

namespace stabex {

namespace {

constexpr double pi = std::numbers::pi;

void require_no_positive_jumps(const StableParams& p)
{
    p.validate();
    if (p.c_plus != 0.0) throw DomainError("one-sided oracle needs c+ = 0");
    if (p.alpha == 1.0) throw DomainError("one-sided oracle excludes alpha = 1");
    if (p.alpha < 1.0 && !(p.mu > 0.0))
        throw DomainError("one-sided oracle with alpha < 1 needs mu > 0 (otherwise the supremum is 0)");
}

} // namespace

CmsParams cms_params(const StableParams& p)
{
    p.validate();
    DerivedConstants d = derive(p);
    CmsParams c;
    c.alpha = p.alpha;
    c.mu = p.mu;
    double re = d.C_plus.real();
    if (p.alpha == 1.0) {
        if (p.c_plus != p.c_minus) throw RegimeError("sampling of asymmetric alpha = 1 is not supported");
        c.sigma = re;
        c.beta = 0.0;
        return c;
    }
    c.sigma = std::pow(re, 1.0 / p.alpha);
    c.beta = -(d.C_plus.imag() / re) / std::tan(pi * p.alpha / 2.0);
    return c;
}

std::uint64_t splitmix64(std::uint64_t& s)
{
    std::uint64_t z = (s += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double sample_cms(double alpha, double beta, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> uni(-pi / 2.0, pi / 2.0);
    std::exponential_distribution<double> ex(1.0);
    double V = uni(rng);
    double W = ex(rng);
    if (alpha == 1.0) {
        if (beta != 0.0) throw RegimeError("sample_cms: alpha = 1 needs beta = 0");
        return std::tan(V);
    }
    double t = std::tan(pi * alpha / 2.0);
    double B = std::atan(beta * t) / alpha;
    double S = std::pow(1.0 + beta * beta * t * t, 1.0 / (2.0 * alpha));
    return S * std::sin(alpha * (V + B)) / std::pow(std::cos(V), 1.0 / alpha) *
           std::pow(std::cos(V - alpha * (V + B)) / W, (1.0 - alpha) / alpha);
}

std::vector<McEstimate> mc_expectations(const StableParams& p, const McConfig& cfg, const std::vector<PathFunctional>& fs)
{
    if (!(cfg.T > 0.0) || cfg.n_steps < 1 || cfg.n_paths < 2) throw DomainError("mc: bad configuration");
    CmsParams c = cms_params(p);
    double dt = cfg.T / static_cast<double>(cfg.n_steps);
    double step_scale = c.sigma * std::pow(dt, 1.0 / c.alpha);
    std::size_t nf = fs.size();
    std::size_t np = static_cast<std::size_t>(cfg.n_paths);
    std::vector<double> vals(np * nf);

    parallel_for(
        np,
        [&](std::size_t i) {
            std::uint64_t s = cfg.seed * 0x100000001b3ULL + i;
            std::mt19937_64 rng(splitmix64(s));
            double x = 0.0, m = 0.0;
            for (long k = 0; k < cfg.n_steps; ++k) {
                x += step_scale * sample_cms(c.alpha, c.beta, rng) + c.mu * dt;
                m = std::max(m, x);
            }
            for (std::size_t f = 0; f < nf; ++f) vals[i * nf + f] = fs[f](x, m);
        },
        cfg.threads);

    std::vector<McEstimate> out(nf);
    for (std::size_t f = 0; f < nf; ++f) {
        double s = 0.0;
        for (std::size_t i = 0; i < np; ++i) s += vals[i * nf + f];
        double mean = s / static_cast<double>(np);
        double ss = 0.0;
        for (std::size_t i = 0; i < np; ++i) ss += (vals[i * nf + f] - mean) * (vals[i * nf + f] - mean);
        out[f].mean = mean;
        out[f].stderr_ = std::sqrt(ss / static_cast<double>(np - 1) / static_cast<double>(np));
    }
    return out;
}

bool McGate::accepts(std::size_t i, double value) const { return std::abs(value - fine[i].mean) <= tolerance(i); }

McGate mc_gate(const StableParams& p, const McConfig& cfg, const std::vector<PathFunctional>& fs)
{
    McGate g;
    g.coarse = mc_expectations(p, cfg, fs);
    McConfig fine = cfg;
    fine.n_steps = 4 * cfg.n_steps;
    fine.seed = cfg.seed + 1;
    g.fine = mc_expectations(p, fine, fs);
    for (std::size_t i = 0; i < fs.size(); ++i) g.bias.push_back(std::abs(g.fine[i].mean - g.coarse[i].mean));
    return g;
}

double laplace_exponent(const StableParams& p, double b)
{
    require_no_positive_jumps(p);
    // -psi(-i b) = mu b + Gamma(-alpha) c- b^alpha
    return p.mu * b + boost::math::tgamma(-p.alpha) * p.c_minus * std::pow(b, p.alpha);
}

double one_sided_root(const StableParams& p, double q)
{
    require_no_positive_jumps(p);
    if (!(q > 0.0)) throw DomainError("one_sided_root: q must be > 0");
    auto f = [&](double b) { return laplace_exponent(p, b) - q; };
    // kappa is convex with kappa(0) = 0; the relevant root lies right of its minimum
    double lo = 0.0;
    if (p.alpha < 1.0) {
        double k = -boost::math::tgamma(-p.alpha) * p.c_minus;
        lo = std::pow(k * p.alpha / p.mu, 1.0 / (1.0 - p.alpha));
    }
    double hi = std::max(1.0, 2.0 * lo);
    while (f(hi) < 0.0) hi *= 2.0;
    std::uintmax_t it = 200;
    auto r = boost::math::tools::toms748_solve(f, lo, hi, boost::math::tools::eps_tolerance<double>(52), it);
    return 0.5 * (r.first + r.second);
}

cplx one_sided_root(const StableParams& p, cplx q)
{
    require_no_positive_jumps(p);
    if (p.mu != 0.0 || p.alpha < 1.0) throw DomainError("complex one-sided root needs mu = 0 and alpha > 1");
    double k = boost::math::tgamma(-p.alpha) * p.c_minus;
    return std::pow(q / k, 1.0 / p.alpha);
}

cplx one_sided_phi_plus(const StableParams& p, double q, cplx xi)
{
    double b = one_sided_root(p, q);
    return b / (b - cplx(0.0, 1.0) * xi);
}

double one_sided_cpdf_sup_sinh(const StableParams& p, double T, double d, double eps)
{
    require_no_positive_jumps(p);
    if (p.mu != 0.0) throw RegimeError("sinh inversion of the one-sided oracle needs mu = 0");
    BromwichConfig cfg = plan_sinh(p, T, eps).bromwich;
    return sinh_bromwich_invert([&](cplx q) { return (1.0 - std::exp(-one_sided_root(p, q) * d)) / q; }, T, cfg);
}

double one_sided_cpdf_sup_gwr(const StableParams& p, double T, double d)
{
    require_no_positive_jumps(p);
    GwrConfig cfg;
    cfg.shift_a = gwr_default_shift(T);
    return gwr_invert([&](double q) { return (1.0 - std::exp(-one_sided_root(p, q) * d)) / q; }, T, cfg).value;
}

double cauchy_cdf(double c, double mu, double T, double y)
{
    if (!(c > 0.0) || !(T > 0.0)) throw DomainError("cauchy_cdf: c and T must be > 0");
    return 0.5 + std::atan((y - mu * T) / (c * pi * T)) / pi;
}

cplx c_plus_high_precision(double alpha, double c_plus, double c_minus)
{
    using hp = boost::multiprecision::cpp_bin_float_50;
    if (alpha == 1.0) throw DomainError("c_plus_high_precision: alpha = 1 has no Gamma(-alpha) form");
    hp a(alpha);
    hp g = boost::multiprecision::tgamma(-a);
    hp h = boost::math::constants::pi<hp>() * a / 2;
    hp re = -g * (hp(c_plus) + hp(c_minus)) * cos(h);
    hp im = g * (hp(c_plus) - hp(c_minus)) * sin(h);
    return {static_cast<double>(re), static_cast<double>(im)};
}

double gil_pelaez_cdf(const StableParams& p, double T, double y, double tol)
{
    CharExp ce(p);
    if (ce.regime().tag == RegimeTag::Alpha1Asymmetric) throw RegimeError("gil_pelaez_cdf: asymmetric alpha = 1");
    double re = ce.constants().C_plus.real();
    double L = std::pow(45.0 / (T * re), 1.0 / p.alpha);
    // for alpha < 1, xi = t^(1/alpha) removes the xi^(alpha-1) singularity at 0; Kronrod nodes are interior
    double k = std::max(1.0, 1.0 / p.alpha);
    auto f = [&](double t) {
        double xi = std::pow(t, k);
        cplx v = std::exp(cplx(0.0, -xi * y) - T * ce.psi(cplx(xi, 0.0)));
        return v.imag() / xi * k * xi / t;
    };
    double err = 0.0;
    double s = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, std::pow(L, 1.0 / k), 20, tol, &err);
    return 0.5 - s / pi;
}

} // namespace stabex
