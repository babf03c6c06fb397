#include "stabex/charexp.hpp"

#include "stabex/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace stabex {

namespace {

constexpr double pi = std::numbers::pi;

bool is_alpha_one(const StableParams& p) { return p.alpha == 1.0; }

// sum of intensities giving Re C+ = 1 at the given beta
double standard_unit_sum(double alpha)
{
    if (alpha == 1.0) return 2.0 / pi;
    return 2.0 * std::tgamma(1.0 + alpha) * std::sin(pi * alpha / 2.0) / pi;
}

} // namespace

void StableParams::validate() const
{
    if (!(alpha > 0.0 && alpha < 2.0)) throw DomainError("alpha must lie in (0, 2)");
    if (!(c_plus >= 0.0) || !(c_minus >= 0.0)) throw DomainError("c_plus and c_minus must be >= 0");
    if (!(c_plus + c_minus > 0.0)) throw DomainError("c_plus + c_minus must be > 0");
    if (!std::isfinite(mu)) throw DomainError("mu must be finite");
}

ScaleConvention parse_convention(const std::string& s)
{
    if (s == "standard") return ScaleConvention::Standard;
    if (s == "sum-one") return ScaleConvention::SumOne;
    if (s == "abs-C-one") return ScaleConvention::AbsCOne;
    throw DomainError("unknown scale convention '" + s + "'");
}

std::string to_string(ScaleConvention c)
{
    switch (c) {
    case ScaleConvention::Standard: return "standard";
    case ScaleConvention::SumOne: return "sum-one";
    case ScaleConvention::AbsCOne: return "abs-C-one";
    }
    return "?";
}

std::string to_string(RegimeTag t)
{
    switch (t) {
    case RegimeTag::AlphaGt1: return "AlphaGt1";
    case RegimeTag::AlphaLt1ZeroDrift: return "AlphaLt1ZeroDrift";
    case RegimeTag::AlphaLt1PosDrift: return "AlphaLt1PosDrift";
    case RegimeTag::AlphaLt1NegDrift: return "AlphaLt1NegDrift";
    case RegimeTag::Alpha1Symmetric: return "Alpha1Symmetric";
    case RegimeTag::Alpha1Asymmetric: return "Alpha1Asymmetric";
    }
    return "?";
}

StableParams from_beta(double alpha, double beta, double scale, double mu, ScaleConvention conv)
{
    if (!(beta >= -1.0 && beta <= 1.0)) throw DomainError("beta must lie in [-1, 1]");
    if (!(scale > 0.0)) throw DomainError("scale must be > 0");
    StableParams unit{alpha, (1.0 + beta) / 2.0, (1.0 - beta) / 2.0, mu};
    unit.validate();
    double target = std::pow(scale, alpha);
    double sum = 1.0;
    switch (conv) {
    case ScaleConvention::Standard:
        sum = target * standard_unit_sum(alpha);
        break;
    case ScaleConvention::SumOne:
        sum = target;
        break;
    case ScaleConvention::AbsCOne: {
        DerivedConstants d = derive(unit);
        double mag = alpha == 1.0 ? d.sigma_z : std::abs(d.C_plus);
        sum = target / mag;
        break;
    }
    }
    return StableParams{alpha, unit.c_plus * sum, unit.c_minus * sum, mu};
}

DerivedConstants derive(const StableParams& p)
{
    p.validate();
    DerivedConstants d;
    double s = p.c_plus + p.c_minus;
    double df = p.c_plus - p.c_minus;
    d.sigma_z = s * pi / 2.0;
    d.beta_z = df / s;
    if (is_alpha_one(p)) {
        // symmetric: C = c pi; asymmetric has no power-law form, keep the real scale
        d.C_plus = cplx(d.sigma_z, 0.0);
    } else {
        // -Gamma(-a) = pi / (sin(pi a) Gamma(1 + a)), split into half angles so a -> 1 stays finite
        double g = pi / std::tgamma(1.0 + p.alpha);
        double re = g * s / (2.0 * std::sin(pi * p.alpha / 2.0));
        double im = df == 0.0 ? 0.0 : -g * df / (2.0 * std::cos(pi * p.alpha / 2.0));
        d.C_plus = cplx(re, im);
    }
    d.C_minus = std::conj(d.C_plus);
    d.phi0 = std::arg(d.C_plus);
    return d;
}

cplx psi0(const StableParams& p, cplx xi) { return CharExp(p).psi0(xi); }

cplx psi(const StableParams& p, cplx xi) { return CharExp(p).psi(xi); }

Regime classify(const StableParams& p)
{
    DerivedConstants d = derive(p);
    Regime r;
    double a = p.alpha;
    if (is_alpha_one(p)) {
        if (p.c_plus == p.c_minus) {
            r.tag = RegimeTag::Alpha1Symmetric;
            r.alpha_plus = r.alpha_minus = 0.5;
        } else {
            r.tag = RegimeTag::Alpha1Asymmetric;
            r.alpha_plus = r.alpha_minus = 0.5;
        }
        r.alpha_bar = 1.0;
    } else if (a > 1.0 || p.mu == 0.0) {
        r.tag = a > 1.0 ? RegimeTag::AlphaGt1 : RegimeTag::AlphaLt1ZeroDrift;
        r.alpha_plus = a / 2.0 - d.phi0 / pi;
        r.alpha_minus = a / 2.0 + d.phi0 / pi;
        r.alpha_bar = a;
    } else if (p.mu > 0.0) {
        r.tag = RegimeTag::AlphaLt1PosDrift;
        r.alpha_plus = 1.0;
        r.alpha_minus = 0.0;
        r.alpha_bar = 1.0;
    } else {
        r.tag = RegimeTag::AlphaLt1NegDrift;
        r.alpha_plus = 0.0;
        r.alpha_minus = 1.0;
        r.alpha_bar = 1.0;
    }
    // round-off from phi0 can leave tiny negative exponents in one-sided cases
    if (std::abs(r.alpha_plus) < 1e-12) r.alpha_plus = 0.0;
    if (std::abs(r.alpha_minus) < 1e-12) r.alpha_minus = 0.0;
    r.sinh_bromwich_allowed = r.tag == RegimeTag::AlphaGt1 || r.tag == RegimeTag::AlphaLt1ZeroDrift ||
                              r.tag == RegimeTag::Alpha1Symmetric;
    return r;
}

CharExp::CharExp(const StableParams& p) : p_(p), d_(derive(p)), r_(classify(p)) {}

cplx CharExp::psi0(cplx xi) const
{
    if (xi == cplx(0.0, 0.0)) return 0.0;
    if (r_.tag == RegimeTag::Alpha1Asymmetric) {
        if (xi.imag() != 0.0)
            throw RegimeError("asymmetric alpha = 1: characteristic exponent is only available on the real line");
        double x = xi.real();
        double ax = std::abs(x);
        double sg = x > 0.0 ? 1.0 : -1.0;
        return d_.sigma_z * ax * cplx(1.0, 2.0 * d_.beta_z / pi * sg * std::log(ax));
    }
    if (xi.real() > 0.0) return d_.C_plus * std::exp(p_.alpha * std::log(xi));
    if (xi.real() < 0.0) return d_.C_minus * std::exp(p_.alpha * std::log(-xi));
    // imaginary axis: both continuations agree only on the side where the law has exponential moments
    bool lower_ok = p_.c_plus == 0.0 && xi.imag() < 0.0;
    bool upper_ok = p_.c_minus == 0.0 && xi.imag() > 0.0;
    if (lower_ok || upper_ok) return d_.C_plus * std::exp(p_.alpha * std::log(xi));
    throw DomainError("psi0: point on the imaginary axis lies on the branch cut of both continuations");
}

double cone_arg_bound(const StableParams& p, bool for_complex_q)
{
    DerivedConstants d = derive(p);
    double room = pi / 2.0 - std::abs(d.phi0);
    double delta = std::min(0.1, room / 4.0);
    if (!for_complex_q) return pi - delta;
    double gamma0 = room / 2.0;
    return pi / 2.0 - gamma0 - delta;
}

ConeSpec admissible_cone(const StableParams& p, bool for_complex_q, double q_floor)
{
    CharExp ce(p);
    const Regime& r = ce.regime();
    if (r.tag == RegimeTag::Alpha1Asymmetric)
        throw RegimeError("asymmetric alpha = 1 admits no deformation cone");
    if (for_complex_q && !r.sinh_bromwich_allowed)
        throw RegimeError("no cone for complex q: q + psi can reach (-inf, 0] when alpha < 1 and mu != 0");

    double room = pi / 2.0 - std::abs(ce.constants().phi0);
    double delta = std::min(0.1, room / 4.0);
    double bound = cone_arg_bound(p, for_complex_q);
    double theta_cap = pi / 2.0 - delta;

    auto ok = [&](double theta) {
        for (int k = 0; k <= 160; ++k) {
            double rho = std::pow(10.0, -8.0 + 0.1 * k);
            for (cplx xi : {std::polar(rho, theta), -std::polar(rho, -theta)}) {
                cplx v = ce.psi(xi);
                if (std::abs(v) < q_floor / 2.0) continue;
                if (std::abs(std::arg(v)) > bound) return false;
            }
        }
        return true;
    };

    const double step = 0.002;
    double hi = 0.0;
    while (hi + step <= theta_cap && ok(hi + step)) hi += step;
    double lo = 0.0;
    while (lo - step >= -theta_cap && ok(lo - step)) lo -= step;
    if (!ok(0.0)) throw RegimeError("real axis itself is not admissible");

    ConeSpec c;
    c.gamma_minus = lo;
    c.gamma_plus = hi;
    c.sigma = 1e-3;
    c.gamma0 = room / 2.0;
    if (!(c.gamma_minus < c.gamma_plus)) throw RegimeError("degenerate deformation cone");
    return c;
}

} // namespace stabex
