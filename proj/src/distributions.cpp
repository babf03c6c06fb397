#include "stabex/distributions.hpp"

#include "cauchy_conv.hpp"
#include "stabex/errors.hpp"
#include "stabex/parallel.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace stabex {

namespace {

constexpr double pi = std::numbers::pi;
const cplx I(0.0, 1.0);

// smallest transform accuracy worth asking for in double precision
constexpr double eps_floor = 1e-15;
// GWR amplifies transform errors by ~1e7; tighter targets only add round-off
constexpr double gwr_transform_eps = 1e-12;

void reject_alpha1_asym(const Regime& r)
{
    if (r.tag == RegimeTag::Alpha1Asymmetric)
        throw RegimeError("asymmetric alpha = 1 is not supported (Zolotarev form exists on the real line only)");
}

// Real-axis Fourier inversion of P[X0_T > xp], X0 the driftless part:
//   1/2 + omega/pi + (1/2 pi) int [e^{-i xp xi} e^{-T psi0(xi)} / i]_{R} - [...]_{L} dt,
// R: xi = e^{i omega + t}, L: xi = e^{i (pi - omega) + t}.
double fourier_exceed0(const CharExp& ce, double T, double xp, double eps, EvalInfo* info)
{
    double a = ce.params().alpha;
    double phi0 = ce.constants().phi0;
    cplx C = ce.constants().C_plus;
    // rays keep Re(C e^{i alpha theta}) > 0 and stay in the right half-plane
    double up = std::min((pi / 2.0 - phi0) / a, pi / 2.0);
    double dn = std::min((pi / 2.0 + phi0) / a, pi / 2.0);
    double gam = xp > 0.0 ? dn : up;
    double sgn = xp > 0.0 ? -1.0 : 1.0;
    double omega = sgn * gam / 2.0;
    double d = 0.9 * std::min(gam / 2.0, gam - gam / 2.0);

    auto g = [&](cplx t) {
        cplx xr = std::exp(I * omega + t);
        cplx xl = std::exp(I * (pi - omega) + t);
        cplx fr = std::exp(-I * xp * xr - T * ce.psi0(xr));
        cplx fl = std::exp(-I * xp * xl - T * ce.psi0(xl));
        return (fr - fl) / I;
    };

    double absC = std::abs(C);
    double kappa = std::min(1.0, a);
    double lo = std::max(-300.0, left_cut(2.0 * (std::abs(xp) + T * absC) / kappa, kappa, eps));
    DecaySpec ds;
    ds.right_kind = DecaySpec::Right::DoubleExp;
    ds.right_c = 4.0;
    // both rays see the same Re psi0 (the left one is the conjugate)
    ds.right_b = T * std::real(C * std::exp(I * (a * omega)));
    ds.right_kappa = a;
    double hi = ds.right_b > 0.0 ? right_cut(ds, eps) : 60.0;
    if (xp != 0.0) {
        DecaySpec dx = ds;
        dx.right_b = std::abs(xp) * std::sin(std::abs(omega));
        dx.right_kappa = 1.0;
        hi = std::min(hi, right_cut(dx, eps));
    }
    hi = std::min(hi, 60.0);
    hi = std::max(hi, lo + 1.0);

    double H = estimate_hardy_norm(g, d, lo, hi, 64);
    double zeta = plan_step({eps, d, H / (2.0 * pi)});
    long m0 = static_cast<long>(std::floor(lo / zeta)), m1 = static_cast<long>(std::ceil(hi / zeta));
    std::vector<cplx> terms;
    terms.reserve(static_cast<std::size_t>(m1 - m0 + 1));
    for (long m = m0; m <= m1; ++m) terms.push_back(g(cplx(m * zeta, 0.0)));
    double v = 0.5 + omega / pi + zeta * kahan_sum(terms).real() / (2.0 * pi);
    if (info) {
        info->est_error = std::max(info->est_error, eps);
        info->zeta = zeta;
        info->n_plus = std::max(info->n_plus, m1 - m0 + 1);
    }
    return v;
}

// Laplace-side version for one q: q * int e^{-qT} P[X_T > y] dT, char. function q/(q + psi).
cplx laplace_exceed(const CharExp& ce, const ConeSpec& cone, cplx q, double y, double eps)
{
    double a = ce.params().alpha;
    double gam = y > 0.0 ? -cone.gamma_minus : cone.gamma_plus;
    double sgn = y > 0.0 ? -1.0 : 1.0;
    double omega = sgn * gam / 2.0;
    double d = 0.9 * (gam / 2.0);

    auto g = [&](cplx t) {
        cplx xr = std::exp(I * omega + t);
        cplx xl = std::exp(I * (pi - omega) + t);
        cplx fr = std::exp(-I * y * xr) * q / (q + ce.psi(xr));
        cplx fl = std::exp(-I * y * xl) * q / (q + ce.psi(xl));
        return (fr - fl) / I;
    };

    double scale = std::abs(ce.constants().C_plus) + std::abs(ce.params().mu);
    double aq = std::abs(q);
    double kappa = std::min(1.0, a);
    double lo = std::max(-300.0, left_cut(2.0 * (std::abs(y) + scale / aq) / kappa, kappa, eps));
    double hi;
    if (y != 0.0) {
        DecaySpec ds;
        ds.right_kind = DecaySpec::Right::DoubleExp;
        ds.right_c = 4.0 * (1.0 + aq / scale);
        ds.right_b = std::abs(y) * std::sin(std::abs(omega));
        ds.right_kappa = 1.0;
        hi = right_cut(ds, eps);
    } else {
        double rate = classify(ce.params()).alpha_bar;
        DecaySpec ds;
        ds.right_kind = DecaySpec::Right::Exp;
        ds.right_kappa = rate;
        ds.right_c = 4.0 * (aq / scale + 1.0) / rate;
        hi = right_cut(ds, eps);
    }
    hi = std::min(hi, 80.0);
    hi = std::max(hi, lo + 1.0);
    double H = estimate_hardy_norm(g, d, lo, hi, 64);
    double zeta = plan_step({eps, d, H / (2.0 * pi)});
    long m0 = static_cast<long>(std::floor(lo / zeta)), m1 = static_cast<long>(std::ceil(hi / zeta));
    std::vector<cplx> terms;
    terms.reserve(static_cast<std::size_t>(m1 - m0 + 1));
    for (long m = m0; m <= m1; ++m) terms.push_back(g(cplx(m * zeta, 0.0)));
    return 0.5 + omega / pi + zeta * kahan_sum(terms) / (2.0 * pi);
}

// Nodes in q and the rule that turns transform values back into the time domain.
struct Inversion {
    Method method = Method::SinhBromwich;
    std::vector<cplx> q;
    BromwichConfig bromwich;
    GwrConfig gwr;
    double transform_eps = 1e-12;
    double q_min = 1.0;
    bool complex_q = true;
    ConeSpec cone;
};

Inversion plan_inversion(const EvalRequest& req, const Regime& r)
{
    Inversion inv;
    inv.method = req.method;
    if (req.method == Method::SinhBromwich) {
        if (!r.sinh_bromwich_allowed)
            throw RegimeError("sinh method is not available for alpha < 1 with nonzero drift; use gwr");
        SinhSetup setup = plan_sinh(req.params, req.T, req.eps / 2.0);
        inv.cone = setup.cone;
        inv.bromwich = setup.bromwich;
        Nodes n = sinh_nodes(inv.bromwich.contour, inv.bromwich.plan);
        inv.q = n.x;
        double gain = sinh_error_gain(req.T, inv.bromwich);
        inv.transform_eps = std::max(eps_floor, req.eps / (4.0 * std::max(gain, 1.0)));
        inv.q_min = INFINITY;
        for (cplx q : inv.q) inv.q_min = std::min(inv.q_min, std::abs(q));
        inv.complex_q = true;
    } else if (req.method == Method::GWR) {
        inv.cone = admissible_cone(req.params, false);
        inv.gwr.shift_a = gwr_default_shift(req.T);
        for (double q : gwr_nodes(req.T, inv.gwr)) inv.q.emplace_back(q, 0.0);
        inv.transform_eps = gwr_transform_eps;
        inv.q_min = inv.q.front().real();
        inv.complex_q = false;
    } else {
        throw RegimeError("the fourier method only applies to cpdf of X_T; use sinh or gwr");
    }
    return inv;
}

// vals[k][i]: transform value at q_k for output i. Returns time-domain values.
std::vector<double> invert(const Inversion& inv, const EvalRequest& req, const std::vector<std::vector<cplx>>& vals,
                           EvalInfo& info)
{
    std::size_t npts = vals.empty() ? 0 : vals.front().size();
    std::vector<double> out(npts);
    info.method = inv.method;
    info.n_l = static_cast<long>(inv.q.size());
    for (std::size_t i = 0; i < npts; ++i) {
        if (inv.method == Method::SinhBromwich) {
            std::vector<cplx> v(inv.q.size());
            for (std::size_t k = 0; k < v.size(); ++k) v[k] = vals[k][i];
            out[i] = sinh_bromwich_combine(v, req.T, inv.bromwich);
        } else {
            std::vector<double> v(inv.q.size());
            for (std::size_t k = 0; k < v.size(); ++k) v[k] = vals[k][i].real();
            GwrResult g = gwr_combine(v, req.T, inv.gwr);
            out[i] = g.value;
            info.est_error = std::max(info.est_error, g.est_error);
            info.degraded = info.degraded || g.degraded;
        }
    }
    if (inv.method == Method::SinhBromwich) info.est_error = std::max(info.est_error, req.eps);
    return out;
}

GridRequest grid_request(const EvalRequest& req, const Inversion& inv)
{
    GridRequest gr;
    gr.eps = inv.transform_eps;
    gr.complex_q = inv.complex_q;
    gr.q_min = inv.q_min;
    gr.omega_plus = req.omega_plus;
    gr.omega_minus = req.omega_minus;
    return gr;
}

void fill_grid_info(const WhfGrids& g, EvalInfo& info)
{
    info.n_plus = g.node_count_plus();
    info.n_minus = g.node_count_minus();
    info.zeta = g.zeta;
}

// sum over a family's outer nodes of sign * f(t, j, eta)
template <class F>
cplx sum_outer(const RayFamily& fam, F&& f)
{
    cplx total = 0.0;
    std::size_t off = fam.outer_offset(), n = fam.outer_size();
    for (int t = 0; t < 2; ++t) {
        const RayGrid& ray = fam.rays[t];
        std::vector<cplx> terms(n);
        for (std::size_t j = 0; j < n; ++j) terms[j] = f(t, j, ray.xi[off + j]);
        total += ray.sign * kahan_sum(terms);
    }
    return total;
}

cplx sup_transform_from(const WhfGrids& g, const QFactors& f, double amx)
{
    cplx s = sum_outer(g.minus, [&](int t, std::size_t j, cplx xi) {
        return std::exp(-I * amx * xi) * f.phi_plus_mod_on_minus[t][j];
    });
    return g.zeta * s / (2.0 * pi * I);
}

cplx joint_transform_from(const WhfGrids& g, const QFactors& f, cplx q, double x1, double a1, double a2)
{
    // inner sums over L+ (outer part) against the kernel 1/(1 - xi/eta), by FFT
    std::size_t np = g.plus.rays[0].size();
    std::size_t off = g.plus.outer_offset(), n = g.plus.outer_size();
    std::array<std::vector<cplx>, 2> src;
    for (int s = 0; s < 2; ++s) {
        src[s].assign(np, cplx(0.0));
        const RayGrid& ray = g.plus.rays[s];
        for (std::size_t k = 0; k < n; ++k)
            src[s][off + k] = std::exp(I * (a2 - a1) * ray.xi[off + k]) * f.phi_minus_mod_on_plus[s][k];
    }
    auto inner = g.conv_to_minus->apply(src);
    cplx s = sum_outer(g.minus, [&](int t, std::size_t j, cplx eta) {
        return std::exp(I * (x1 - a2) * eta) * f.phi_plus_mod_on_minus[t][j] * inner[t][j];
    });
    return g.zeta * g.zeta * s / (4.0 * pi * pi * q);
}

// GWR amplifies transform noise by ~1e7, so its few real nodes use compensated direct sums
QFactors factors_for(const WhfGrids& g, const Inversion& inv, cplx q)
{
    if (inv.method == Method::GWR) return compute_factors_direct(g, q, 1);
    return compute_factors(g, q);
}

double min_or(const std::vector<double>& v, double dflt)
{
    return v.empty() ? dflt : *std::min_element(v.begin(), v.end());
}

} // namespace

Method parse_method(const std::string& s)
{
    if (s == "sinh") return Method::SinhBromwich;
    if (s == "gwr") return Method::GWR;
    if (s == "fourier") return Method::DirectFourier;
    throw RegimeError("unknown method '" + s + "' (expected sinh, gwr or fourier)");
}

std::string to_string(Method m)
{
    switch (m) {
    case Method::SinhBromwich: return "sinh";
    case Method::GWR: return "gwr";
    case Method::DirectFourier: return "fourier";
    }
    return "?";
}

void EvalRequest::validate() const
{
    params.validate();
    if (!(T > 0.0) || !std::isfinite(T)) throw DomainError("T must be a positive finite number");
    if (!(eps >= 1e-15 && eps <= 1e-2)) throw DomainError("eps must lie in [1e-15, 1e-2]");
}

cplx e2(cplx z)
{
    if (std::abs(z) < 0.1) {
        // sum z^k / (k + 2)!
        cplx term = 0.5, s = 0.0;
        for (int k = 0; k < 14; ++k) {
            s += term;
            term *= z / static_cast<double>(k + 3);
        }
        return s;
    }
    return (std::exp(z) - 1.0 - z) / (z * z);
}

EvalResult cpdf_x_many(const EvalRequest& req, const std::vector<double>& y)
{
    req.validate();
    CharExp ce(req.params);
    reject_alpha1_asym(ce.regime());
    EvalResult res;
    res.info.method = req.method;
    res.values.resize(y.size());
    if (req.method == Method::DirectFourier) {
        for (std::size_t i = 0; i < y.size(); ++i)
            res.values[i] = 1.0 - fourier_exceed0(ce, req.T, y[i] - req.params.mu * req.T, req.eps, &res.info);
        return res;
    }
    Inversion inv = plan_inversion(req, ce.regime());
    std::vector<std::vector<cplx>> vals(inv.q.size(), std::vector<cplx>(y.size()));
    parallel_for(
        inv.q.size(),
        [&](std::size_t k) {
            for (std::size_t i = 0; i < y.size(); ++i)
                vals[k][i] = laplace_exceed(ce, inv.cone, inv.q[k], y[i], inv.transform_eps) / inv.q[k];
        },
        req.threads);
    std::vector<double> ex = invert(inv, req, vals, res.info);
    for (std::size_t i = 0; i < y.size(); ++i) res.values[i] = 1.0 - ex[i];
    return res;
}

double cpdf_x(const EvalRequest& req, double x, double a) { return cpdf_x_many(req, {a - x}).values.front(); }

cplx cpdf_sup_transform(const StableParams& p, const WhfGrids& g, cplx q, double amx)
{
    (void)p;
    if (!g.minus.has_outer()) throw DomainError("cpdf_sup_transform: grids carry no L- outer range");
    if (amx < 0.0) throw DomainError("cpdf_sup_transform: a - x must be >= 0");
    QFactors f = compute_factors(g, q);
    return sup_transform_from(g, f, amx);
}

EvalResult cpdf_sup_many(const EvalRequest& req, const std::vector<double>& amx)
{
    req.validate();
    Regime r = classify(req.params);
    reject_alpha1_asym(r);
    EvalResult res;
    res.values.assign(amx.size(), 0.0);
    // the supremum is >= 0, so levels below the start are never met
    std::vector<std::size_t> idx;
    std::vector<double> d;
    for (std::size_t i = 0; i < amx.size(); ++i) {
        if (!std::isfinite(amx[i])) throw DomainError("cpdf_sup: non-finite level");
        if (amx[i] >= 0.0) {
            idx.push_back(i);
            d.push_back(amx[i]);
        }
    }
    Inversion inv = plan_inversion(req, r);
    res.info.method = req.method;
    if (d.empty()) return res;
    GridRequest gr = grid_request(req, inv);
    gr.minus.used = true;
    gr.minus.gap = min_or(d, 0.0);
    WhfGrids g = build_grids(req.params, inv.cone, gr);
    fill_grid_info(g, res.info);

    std::vector<std::vector<cplx>> vals(inv.q.size(), std::vector<cplx>(d.size()));
    parallel_for(
        inv.q.size(),
        [&](std::size_t k) {
            QFactors f = factors_for(g, inv, inv.q[k]);
            for (std::size_t i = 0; i < d.size(); ++i) vals[k][i] = sup_transform_from(g, f, d[i]) / inv.q[k];
        },
        req.threads);
    std::vector<double> ex = invert(inv, req, vals, res.info);
    for (std::size_t i = 0; i < d.size(); ++i) res.values[idx[i]] = 1.0 - ex[i];
    return res;
}

double cpdf_sup(const EvalRequest& req, double x, double a) { return cpdf_sup_many(req, {a - x}).values.front(); }

cplx joint_v1_transform(const StableParams& p, const WhfGrids& g, cplx q, double x1, double a1, double a2)
{
    (void)p;
    if (!g.minus.has_outer() || !g.plus.has_outer()) throw DomainError("joint_v1_transform: grids need both outer ranges");
    if (!(a2 - a1 > 0.0) || !(a2 - x1 >= 0.0)) throw DomainError("joint_v1_transform: needs a1 < a2 and x1 <= a2");
    QFactors f = compute_factors(g, q);
    return joint_transform_from(g, f, q, x1, a1, a2);
}

JointResult joint_cpdf_many(const EvalRequest& req, const std::vector<JointPoint>& pts)
{
    req.validate();
    Regime r = classify(req.params);
    reject_alpha1_asym(r);
    JointResult res;
    res.v.assign(pts.size(), 0.0);
    res.v1.assign(pts.size(), 0.0);

    // first term P[x1 + X_T <= a1] by Fourier inversion on the real line
    EvalRequest fr = req;
    fr.method = Method::DirectFourier;
    std::vector<double> y1;
    for (const auto& pt : pts) y1.push_back(pt.a1 - pt.x1);
    EvalResult first = cpdf_x_many(fr, y1);

    // cases that reduce to one-dimensional quantities
    std::vector<std::size_t> gen, sup_only;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto& pt = pts[i];
        if (pt.x2 > pt.a2 || pt.x1 > pt.a2) continue; // barrier already breached: v = 0
        if (pt.a1 >= pt.a2) {
            sup_only.push_back(i); // X_T <= sup X, the terminal constraint is implied
        } else {
            gen.push_back(i);
        }
    }
    if (!sup_only.empty()) {
        std::vector<double> d;
        for (std::size_t i : sup_only) d.push_back(pts[i].a2 - pts[i].x1);
        EvalResult s = cpdf_sup_many(req, d);
        for (std::size_t k = 0; k < sup_only.size(); ++k) res.v[sup_only[k]] = s.values[k];
        res.info = s.info;
    }
    if (!gen.empty()) {
        Inversion inv = plan_inversion(req, r);
        GridRequest gr = grid_request(req, inv);
        std::vector<double> gm, gp;
        for (std::size_t i : gen) {
            gm.push_back(pts[i].a2 - pts[i].x1);
            gp.push_back(pts[i].a2 - pts[i].a1);
        }
        gr.minus.used = true;
        gr.minus.gap = min_or(gm, 0.0);
        gr.plus.used = true;
        gr.plus.gap = min_or(gp, 0.0);
        WhfGrids g = build_grids(req.params, inv.cone, gr);
        fill_grid_info(g, res.info);
        std::vector<std::vector<cplx>> vals(inv.q.size(), std::vector<cplx>(gen.size()));
        parallel_for(
            inv.q.size(),
            [&](std::size_t k) {
                QFactors f = factors_for(g, inv, inv.q[k]);
                for (std::size_t i = 0; i < gen.size(); ++i) {
                    const auto& pt = pts[gen[i]];
                    vals[k][i] = joint_transform_from(g, f, inv.q[k], pt.x1, pt.a1, pt.a2);
                }
            },
            req.threads);
        std::vector<double> v1 = invert(inv, req, vals, res.info);
        for (std::size_t i = 0; i < gen.size(); ++i) res.v[gen[i]] = first.values[gen[i]] - v1[i];
    }
    for (std::size_t i = 0; i < pts.size(); ++i) res.v1[i] = first.values[i] - res.v[i];
    res.info.est_error = std::max(res.info.est_error, first.info.est_error);
    return res;
}

double joint_cpdf(const EvalRequest& req, double x1, double x2, double a1, double a2)
{
    return joint_cpdf_many(req, {JointPoint{x1, x2, a1, a2}}).v.front();
}

EvalResult general_expectation_info(const EvalRequest& req, const PayoffTransform& payoff)
{
    req.validate();
    Regime r = classify(req.params);
    reject_alpha1_asym(r);
    if (!payoff.kernel) throw DomainError("general_expectation: payoff kernel is empty");
    EvalResult res;
    Inversion inv = plan_inversion(req, r);
    GridRequest gr = grid_request(req, inv);
    gr.minus = payoff.minus;
    gr.plus = payoff.plus;
    gr.minus.used = true;
    gr.plus.used = true;
    WhfGrids g = build_grids(req.params, inv.cone, gr);
    fill_grid_info(g, res.info);

    // the kernel does not depend on q: tabulate sign_s xi K(xi, eta) once, rows by (t, j), columns by (s, m)
    std::size_t offp = g.plus.outer_offset(), np = g.plus.outer_size();
    std::size_t offm = g.minus.outer_offset(), nm = g.minus.outer_size();
    std::vector<cplx> kmat(4 * nm * np);
    parallel_for(
        2 * nm,
        [&](std::size_t row) {
            int t = static_cast<int>(row / nm);
            cplx eta = g.minus.rays[t].xi[offm + row % nm];
            cplx* out = kmat.data() + row * 2 * np;
            for (int s = 0; s < 2; ++s) {
                const RayGrid& ray = g.plus.rays[s];
                for (std::size_t m = 0; m < np; ++m) {
                    cplx xi = ray.xi[offp + m];
                    out[s * np + m] = ray.sign * xi * payoff.kernel(xi, eta);
                }
            }
        },
        req.threads);

    std::vector<std::vector<cplx>> vals(inv.q.size(), std::vector<cplx>(1));
    parallel_for(
        inv.q.size(),
        [&](std::size_t k) {
            cplx q = inv.q[k];
            QFactors f = factors_for(g, inv, q);
            cplx dbl = sum_outer(g.minus, [&](int t, std::size_t j, cplx eta) {
                const cplx* row = kmat.data() + (t * nm + j) * 2 * np;
                double re = 0.0, im = 0.0;
                for (int s = 0; s < 2; ++s) {
                    const cplx* ph = f.phi_minus_mod_on_plus[s].data();
                    const cplx* rs = row + s * np;
                    for (std::size_t m = 0; m < np; ++m) {
                        re += rs[m].real() * ph[m].real() - rs[m].imag() * ph[m].imag();
                        im += rs[m].real() * ph[m].imag() + rs[m].imag() * ph[m].real();
                    }
                }
                return eta * f.phi_plus_mod_on_minus[t][j] * cplx(re, im);
            });
            cplx S = g.zeta * g.zeta * dbl / (4.0 * pi * pi);
            if (f.a_minus != 0.0) {
                if (!payoff.diagonal) throw RegimeError("payoff needs a diagonal term when the infimum has an atom");
                cplx diag = sum_outer(g.minus, [&](int t, std::size_t j, cplx eta) {
                    return eta * f.phi_plus_mod_on_minus[t][j] * std::exp(I * payoff.x1 * eta) * payoff.diagonal(eta);
                });
                S += f.a_minus * g.zeta * diag / (2.0 * pi);
            }
            vals[k][0] = S / q;
        },
        req.threads);
    std::vector<double> v = invert(inv, req, vals, res.info);
    double first = payoff.first_term ? payoff.first_term(req) : 0.0;
    res.values = {first + v.front()};
    return res;
}

double general_expectation(const EvalRequest& req, const PayoffTransform& payoff)
{
    return general_expectation_info(req, payoff).values.front();
}

PayoffTransform joint_payoff(double x1, double x2, double a1, double a2)
{
    if (!(a1 < a2) || x1 > a2 || x2 > a2) throw DomainError("joint_payoff: needs a1 < a2 and x1, x2 <= a2");
    PayoffTransform pt;
    pt.x1 = x1;
    pt.first_term = [=](const EvalRequest& req) {
        EvalRequest fr = req;
        fr.method = Method::DirectFourier;
        return cpdf_x(fr, x1, a1);
    };
    pt.kernel = [=](cplx xi, cplx eta) {
        return -std::exp(I * (x1 - a2) * eta) * std::exp(I * (a2 - a1) * xi) / (xi * (eta - xi));
    };
    pt.minus.gap = a2 - x1;
    pt.plus.gap = a2 - a1;
    return pt;
}

PayoffTransform exchange_payoff(const StableParams& p, double x1, double x2, double beta, double lambda)
{
    if (!(x2 >= 0.0) || !(x1 <= x2)) throw DomainError("exchange: needs x2 >= 0 and x1 <= x2");
    if (!(beta >= 1.0)) throw DomainError("exchange: needs beta >= 1");
    if (!(lambda >= 0.0)) throw DomainError("exchange: needs lambda >= 0");
    if (lambda == 0.0 && p.alpha <= 1.0)
        throw DivergenceError("exchange expectation diverges for lambda = 0 when alpha <= 1");

    double c1 = 1.0 - 1.0 / beta;
    PayoffTransform pt;
    pt.x1 = x1;
    pt.first_term = [=](const EvalRequest& req) {
        CharExp ce(req.params);
        double mu_t = req.params.mu * req.T;
        double tol = std::max(req.eps, 1e-14);
        auto exceed = [&](double k) { return fourier_exceed0(ce, req.T, k - x1 - mu_t, tol / 10.0, nullptr); };
        double integral = 0.0;
        if (x2 > 0.0)
            integral = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(exceed, x2 / beta, x2, 8, tol);
        return std::exp(-lambda * x2) * (beta * integral - (beta - 1.0) * x2 * exceed(x2));
    };
    pt.kernel = [=](cplx xi, cplx eta) {
        cplx s = lambda + I * eta;
        cplx v = I * c1 * x2 * xi;
        cplx ev = e2(v);
        cplx b = ((beta - 1.0) * c1 * (1.0 + s * x2) / (s * s) + beta * c1 * c1 * x2 * x2 * ev) / (s - I * c1 * xi) -
                 beta * c1 * c1 * x2 * x2 * ev / (I * (eta - xi));
        return std::exp(-lambda * x2) * std::exp(I * (x1 - x2) * eta) * b;
    };
    pt.diagonal = [=](cplx eta) {
        cplx s = lambda + I * eta;
        return (beta - 1.0) * std::exp(-s * x2) * (x2 / s + 1.0 / (s * s));
    };
    pt.minus.gap = x2 - x1;
    pt.plus.gap = 0.0;
    if (lambda == 0.0) {
        pt.minus.left_rate = p.alpha - 1.0;
        pt.plus.left_rate = p.alpha - 1.0;
    }
    return pt;
}

namespace {

// Value at t = 0 of v(t) = c0 + sum_k c_k t^e_k through the points (t_i, v_i), one coefficient per point.
double extrapolate_to_zero(const std::vector<double>& t, const std::vector<double>& v, const std::vector<double>& e)
{
    Eigen::Index n = static_cast<Eigen::Index>(t.size());
    Eigen::MatrixXd A(n, n);
    Eigen::VectorXd b(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        A(i, 0) = 1.0;
        for (Eigen::Index k = 1; k < n; ++k) A(i, k) = std::pow(t[i] / t.front(), e[k - 1]);
        b(i) = v[i];
    }
    return A.colPivHouseholderQr().solve(b)(0);
}

} // namespace

EvalResult exchange_expectation_info(const EvalRequest& req, double x1, double x2, double beta, double lambda)
{
    PayoffTransform pt = exchange_payoff(req.params, x1, x2, beta, lambda);
    if (lambda > 0.0) return general_expectation_info(req, pt);

    // lambda = 0: the transform loses a factor |eta|^(alpha-1) of decay at the origin, and the
    // cancellation there is not resolvable in double precision. v(lambda) has the expansion
    // v(0) + c1 lambda^(alpha-1) + c2 lambda + c3 lambda^alpha + c4 lambda^2 + ..., so
    // extrapolate from small positive lambda.
    double a = req.params.alpha;
    std::vector<double> ex{a - 1.0, 1.0, a, 2.0, a + 1.0};
    std::vector<double> lam, val;
    EvalResult res;
    for (int k = 0; k < 6; ++k) {
        lam.push_back(5e-3 * std::pow(0.25, k));
        EvalResult r = general_expectation_info(req, exchange_payoff(req.params, x1, x2, beta, lam.back()));
        val.push_back(r.values.front());
        res.info = r.info;
        res.info.degraded = res.info.degraded || r.info.degraded;
    }
    double full = extrapolate_to_zero(lam, val, ex);
    std::vector<double> l5(lam.begin() + 1, lam.end()), v5(val.begin() + 1, val.end());
    double lower = extrapolate_to_zero(l5, v5, ex);
    res.values = {full};
    res.info.est_error = std::max(res.info.est_error, std::abs(full - lower));
    return res;
}

double exchange_expectation(const EvalRequest& req, double x1, double x2, double beta, double lambda)
{
    return exchange_expectation_info(req, x1, x2, beta, lambda).values.front();
}

} // namespace stabex
