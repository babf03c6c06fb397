#include "stabex/whf.hpp"

#include "cauchy_conv.hpp"
#include "stabex/errors.hpp"
#include "stabex/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace stabex {

namespace {

constexpr double pi = std::numbers::pi;
const cplx two_pi_i(0.0, 2.0 * pi);

double psi_scale(const CharExp& ce) { return std::abs(ce.constants().C_plus) + std::abs(ce.params().mu); }

// |1 / (1 - s/t)| over rays separated by at least sep
double kernel_bound(double sep) { return sep >= pi / 2.0 ? 1.0 : 1.0 / std::sin(sep); }

// Left end of a source family: the log-ratio mass below t drops to eps/4.
double source_left(const CharExp& ce, double q_min, double kb, double eps)
{
    double a = ce.params().alpha;
    double C = std::abs(ce.constants().C_plus);
    double mu = std::abs(ce.params().mu);
    auto mass = [&](double t) { return kb * 2.0 * (C * std::exp(a * t) / a + mu * std::exp(t)) / q_min; };
    double lo = -400.0, hi = 10.0;
    if (mass(lo) > eps / 4.0) return lo;
    for (int it = 0; it < 100; ++it) {
        double mid = 0.5 * (lo + hi);
        (mass(mid) > eps / 4.0 ? hi : lo) = mid;
    }
    return lo;
}

// How far past the farthest target a source family must reach.
double source_overhang(double slope, double c0, double kb, double t_target, double eps)
{
    double delta = 5.0;
    for (int it = 0; it < 60; ++it) {
        double nd = std::log(4.0 * kb * (slope * std::max(1.0, t_target + delta) + c0 + slope) / eps);
        if (std::abs(nd - delta) < 1e-10) break;
        delta = std::max(1.0, nd);
    }
    return delta;
}

struct Range {
    double lo = 0.0, hi = -1.0;
    bool empty() const { return hi < lo; }
    void cover(const Range& o)
    {
        if (o.empty()) return;
        if (empty()) {
            *this = o;
        } else {
            lo = std::min(lo, o.lo);
            hi = std::max(hi, o.hi);
        }
    }
};

Range outer_range(const CharExp& ce, const Regime& r, const OuterNeed& need, double omega, Side side, double q_min,
                  double eps)
{
    double a = ce.params().alpha;
    double kappa = need.left_rate > 0.0 ? need.left_rate : std::min(1.0, a);
    double K = 2.0 * psi_scale(ce) / q_min + 1.0;
    Range rg;
    rg.lo = std::max(-250.0, left_cut(K / kappa, kappa, eps));
    DecaySpec ds;
    if (need.gap > 0.0) {
        ds.right_kind = DecaySpec::Right::DoubleExp;
        ds.right_c = 4.0;
        ds.right_b = need.gap * std::sin(std::abs(omega));
        ds.right_kappa = 1.0;
    } else {
        double rate = need.right_rate > 0.0 ? need.right_rate : decay_exponent(r, ce.params(), side);
        ds.right_kind = DecaySpec::Right::Exp;
        ds.right_c = 4.0 / rate;
        ds.right_kappa = rate;
    }
    rg.hi = std::min(60.0, right_cut(ds, eps));
    rg.hi = std::max(rg.hi, rg.lo + 1.0);
    return rg;
}

RayGrid make_ray(const CharExp& ce, double angle, double sign, long m_lo, long m_hi, double zeta)
{
    RayGrid g;
    g.angle = angle;
    g.sign = sign;
    g.m_lo = m_lo;
    g.m_hi = m_hi;
    g.xi.reserve(static_cast<std::size_t>(m_hi - m_lo + 1));
    g.psi.reserve(g.xi.capacity());
    for (long m = m_lo; m <= m_hi; ++m) {
        cplx x = std::exp(cplx(m * zeta, angle));
        g.xi.push_back(x);
        g.psi.push_back(ce.psi(x));
    }
    return g;
}

// Rough Hardy norm of the WHF inner integrand for one target.
double inner_hardy(const CharExp& ce, double omega_src, bool src_is_plus, double d, const Range& src, cplx target,
                   cplx q)
{
    std::array<double, 2> ang = src_is_plus ? std::array<double, 2>{omega_src, pi - omega_src}
                                            : std::array<double, 2>{omega_src, -pi - omega_src};
    cplx lq = std::log(q);
    auto g = [&](cplx y) {
        cplx s = 0.0;
        for (int r = 0; r < 2; ++r) {
            cplx eta = std::exp(cplx(0.0, ang[r]) + y);
            cplx l = std::log(q + ce.psi(eta)) - lq;
            s += (r == 0 ? 1.0 : -1.0) * l * target / (target - eta);
        }
        return s;
    };
    return estimate_hardy_norm(g, d, src.lo, src.hi, 400);
}

void fill_mod(std::vector<cplx>& v, const std::vector<cplx>& xi, double a, double sgn)
{
    // sgn = +1: 1/(1 + i xi) (plus side); sgn = -1: 1/(1 - i xi)
    for (std::size_t j = 0; j < v.size(); ++j) v[j] -= a + (1.0 - a) / (1.0 + cplx(0.0, sgn) * xi[j]);
}

cplx asym_constant_c(const StableParams& p, cplx q, Side side, double eps);

} // namespace

double decay_exponent(const Regime& r, const StableParams& p, Side side)
{
    double e = side == Side::Plus ? r.alpha_plus : r.alpha_minus;
    if (e > 0.0) return std::min(e, 1.0);
    return 0.5 * std::min({p.alpha, 2.0 - p.alpha, 1.0});
}

std::vector<cplx> log_ratio_on_ray(const RayGrid& ray, cplx q)
{
    std::vector<cplx> out(ray.size());
    cplx lq = std::log(q);
    double prev = lq.imag();
    for (std::size_t k = 0; k < ray.size(); ++k) {
        cplx l = std::log(q + ray.psi[k]);
        if (std::abs(l.imag() - prev) > pi)
            throw DomainError("log(q + psi) crosses its branch cut along a ray; contour angle too wide for this q");
        prev = l.imag();
        out[k] = l - lq;
    }
    return out;
}

WhfGrids build_grids(const StableParams& p, const ConeSpec& cone, const GridRequest& req)
{
    CharExp ce(p);
    const Regime& r = ce.regime();
    if (r.tag == RegimeTag::Alpha1Asymmetric)
        throw RegimeError("Wiener-Hopf factor representations exclude asymmetric alpha = 1");
    if (req.complex_q && !r.sinh_bromwich_allowed)
        throw RegimeError("complex q requested in a regime without a complex-q cone (alpha < 1 with drift)");
    if (!(req.eps > 0.0) || !(req.q_min > 0.0)) throw DomainError("build_grids: eps and q_min must be > 0");

    WhfGrids g;
    g.params = p;
    g.regime = r;
    g.cone = cone;
    g.request = req;

    double wp = req.omega_plus.value_or(req.complex_q ? cone.gamma_plus / 2.0 : std::min(pi / 8.0, cone.gamma_plus / 2.0));
    double wm =
        req.omega_minus.value_or(req.complex_q ? cone.gamma_minus / 2.0 : std::max(-pi / 8.0, cone.gamma_minus / 2.0));
    if (!(wp > 0.0 && wp <= cone.gamma_plus + 1e-12)) throw ContourError("omega_plus outside the admissible cone");
    if (!(wm < 0.0 && wm >= cone.gamma_minus - 1e-12)) throw ContourError("omega_minus outside the admissible cone");
    double sep = wp - wm;
    g.plus.omega = wp;
    g.minus.omega = wm;
    g.plus.d = 0.9 * std::min({wp, cone.gamma_plus - wp, sep});
    g.minus.d = 0.9 * std::min({-wm, wm - cone.gamma_minus, sep});
    if (!(g.plus.d > 0.0 && g.minus.d > 0.0)) throw ContourError("ray angles leave no analyticity strip");

    double eps_tr = req.eps;
    double eps_in = req.eps / 20.0;
    g.eps_inner = eps_in;
    double kb = kernel_bound(sep);
    double slope = r.alpha_bar;
    double c0 = std::abs(std::log(psi_scale(ce) / req.q_min)) + pi + 1.0;

    Range out_m, out_p;
    if (req.minus.used) out_m = outer_range(ce, r, req.minus, wm, Side::Plus, req.q_min, eps_tr);
    if (req.plus.used) out_p = outer_range(ce, r, req.plus, wp, Side::Minus, req.q_min, eps_tr);

    double probe_t = req.probe_rho > 0.0 ? std::log(req.probe_rho) : -INFINITY;
    Range src_p, src_m;
    bool need_src_p = req.minus.used || req.probe_rho > 0.0;
    bool need_src_m = req.plus.used || req.probe_rho > 0.0;
    if (need_src_p) {
        double tmax = std::max(out_m.empty() ? -INFINITY : out_m.hi, probe_t);
        src_p.lo = source_left(ce, req.q_min, kb, eps_in);
        src_p.hi = std::max(tmax, src_p.lo) + source_overhang(slope, c0, kb, tmax, eps_in);
    }
    if (need_src_m) {
        double tmax = std::max(out_p.empty() ? -INFINITY : out_p.hi, probe_t);
        src_m.lo = source_left(ce, req.q_min, kb, eps_in);
        src_m.hi = std::max(tmax, src_m.lo) + source_overhang(slope, c0, kb, tmax, eps_in);
    }
    Range fam_p = src_p, fam_m = src_m;
    fam_p.cover(out_p);
    fam_m.cover(out_m);
    if (fam_p.empty() || fam_m.empty()) {
        // keep both families non-empty so single-point factors always have a source contour
        Range dflt{-30.0, 30.0};
        if (fam_p.empty()) fam_p = dflt;
        if (fam_m.empty()) fam_m = dflt;
    }

    // step: discretization of inner sums (probed Hardy norm) and of the outer sums
    double d = std::min(g.plus.d, g.minus.d);
    cplx q_probe = req.complex_q ? req.q_min * std::polar(1.0, pi / 2.0) : cplx(req.q_min, 0.0);
    double h_in = 1.0;
    if (!out_m.empty()) {
        for (double t : {out_m.lo, 0.0, out_m.hi}) {
            cplx tgt = std::exp(cplx(t, wm));
            h_in = std::max(h_in, inner_hardy(ce, wp, true, d, fam_p, tgt, q_probe));
        }
    }
    if (!out_p.empty()) {
        for (double t : {out_p.lo, 0.0, out_p.hi}) {
            cplx tgt = std::exp(cplx(t, wp));
            h_in = std::max(h_in, inner_hardy(ce, wm, false, d, fam_m, tgt, q_probe));
        }
    }
    if (req.probe_rho > 0.0) {
        for (double t : {-5.0, 0.0, probe_t}) {
            h_in = std::max(h_in, inner_hardy(ce, wp, true, d, fam_p, std::exp(cplx(t, 0.0)), q_probe));
            h_in = std::max(h_in, inner_hardy(ce, wm, false, d, fam_m, std::exp(cplx(t, 0.0)), q_probe));
        }
    }
    double span = std::max(fam_p.hi - fam_p.lo, fam_m.hi - fam_m.lo);
    double h_out = std::max(1.0, 4.0 * span);
    double zeta = std::min(plan_step({eps_in, d, h_in / (2.0 * pi)}), plan_step({eps_tr, d, h_out / (2.0 * pi)}));
    g.zeta = zeta;

    auto mlo = [&](double t) { return static_cast<long>(std::floor(t / zeta)); };
    auto mhi = [&](double t) { return static_cast<long>(std::ceil(t / zeta)); };

    long pl = mlo(fam_p.lo), ph = mhi(fam_p.hi);
    long ml = mlo(fam_m.lo), mh = mhi(fam_m.hi);
    g.plus.rays[0] = make_ray(ce, wp, 1.0, pl, ph, zeta);
    g.plus.rays[1] = make_ray(ce, pi - wp, -1.0, pl, ph, zeta);
    g.minus.rays[0] = make_ray(ce, wm, 1.0, ml, mh, zeta);
    g.minus.rays[1] = make_ray(ce, -pi - wm, -1.0, ml, mh, zeta);
    if (!out_p.empty()) {
        g.plus.out_lo = std::max(pl, mlo(out_p.lo));
        g.plus.out_hi = std::min(ph, mhi(out_p.hi));
    }
    if (!out_m.empty()) {
        g.minus.out_lo = std::max(ml, mlo(out_m.lo));
        g.minus.out_hi = std::min(mh, mhi(out_m.hi));
    }

    if (g.minus.has_outer())
        g.conv_to_minus = std::make_shared<detail::CauchyConv>(zeta, std::array<double, 2>{wp, pi - wp},
                                                               std::array<double, 2>{1.0, -1.0}, pl, ph,
                                                               std::array<double, 2>{wm, -pi - wm}, g.minus.out_lo,
                                                               g.minus.out_hi);
    if (g.plus.has_outer())
        g.conv_to_plus = std::make_shared<detail::CauchyConv>(zeta, std::array<double, 2>{wm, -pi - wm},
                                                              std::array<double, 2>{1.0, -1.0}, ml, mh,
                                                              std::array<double, 2>{wp, pi - wp}, g.plus.out_lo,
                                                              g.plus.out_hi);
    return g;
}

QFactors compute_factors(const WhfGrids& g, cplx q)
{
    QFactors f;
    f.q = q;
    const StableParams& p = g.params;
    if (g.minus.has_outer()) {
        std::array<std::vector<cplx>, 2> src{log_ratio_on_ray(g.plus.rays[0], q), log_ratio_on_ray(g.plus.rays[1], q)};
        auto S = g.conv_to_minus->apply(src);
        f.a_plus = asym_constant_c(p, q, Side::Plus, g.eps_inner).real();
        std::size_t off = g.minus.outer_offset();
        for (int t = 0; t < 2; ++t) {
            const RayGrid& ray = g.minus.rays[t];
            std::vector<cplx> xi(ray.xi.begin() + off, ray.xi.begin() + off + S[t].size());
            std::vector<cplx>& v = f.phi_plus_mod_on_minus[t];
            v.resize(S[t].size());
            for (std::size_t j = 0; j < v.size(); ++j) {
                cplx phim = std::exp(-g.zeta * S[t][j] / two_pi_i);
                v[j] = q / ((q + ray.psi[off + j]) * phim);
            }
            fill_mod(v, xi, f.a_plus, 1.0);
        }
    }
    if (g.plus.has_outer()) {
        std::array<std::vector<cplx>, 2> src{log_ratio_on_ray(g.minus.rays[0], q),
                                             log_ratio_on_ray(g.minus.rays[1], q)};
        auto S = g.conv_to_plus->apply(src);
        f.a_minus = asym_constant_c(p, q, Side::Minus, g.eps_inner).real();
        std::size_t off = g.plus.outer_offset();
        for (int t = 0; t < 2; ++t) {
            const RayGrid& ray = g.plus.rays[t];
            std::vector<cplx> xi(ray.xi.begin() + off, ray.xi.begin() + off + S[t].size());
            std::vector<cplx>& v = f.phi_minus_mod_on_plus[t];
            v.resize(S[t].size());
            for (std::size_t j = 0; j < v.size(); ++j) {
                cplx phip = std::exp(g.zeta * S[t][j] / two_pi_i);
                v[j] = q / ((q + ray.psi[off + j]) * phip);
            }
            fill_mod(v, xi, f.a_minus, -1.0);
        }
    }
    return f;
}

namespace {

// out_t[j] = sum_r sign_r sum_k l_r[k] / (1 - s_{r,k} / t_{t,j}), compensated, one target at a time
std::array<std::vector<cplx>, 2> direct_conv(const RayFamily& src, const std::array<std::vector<cplx>, 2>& l,
                                             const RayFamily& tgt, int threads)
{
    std::size_t off = tgt.outer_offset(), n = tgt.outer_size();
    std::array<std::vector<cplx>, 2> out{std::vector<cplx>(n), std::vector<cplx>(n)};
    parallel_for(
        2 * n,
        [&](std::size_t idx) {
            int t = static_cast<int>(idx / n);
            std::size_t j = idx % n;
            cplx x = tgt.rays[t].xi[off + j];
            cplx total = 0.0;
            std::vector<cplx> terms(src.rays[0].size());
            for (int r = 0; r < 2; ++r) {
                const RayGrid& ray = src.rays[r];
                for (std::size_t k = 0; k < ray.size(); ++k) terms[k] = l[r][k] * x / (x - ray.xi[k]);
                total += ray.sign * kahan_sum(terms);
            }
            out[t][j] = total;
        },
        threads);
    return out;
}

} // namespace

QFactors compute_factors_direct(const WhfGrids& g, cplx q, int threads)
{
    QFactors f;
    f.q = q;
    const StableParams& p = g.params;
    if (g.minus.has_outer()) {
        std::array<std::vector<cplx>, 2> src{log_ratio_on_ray(g.plus.rays[0], q), log_ratio_on_ray(g.plus.rays[1], q)};
        auto S = direct_conv(g.plus, src, g.minus, threads);
        f.a_plus = asym_constant_c(p, q, Side::Plus, g.eps_inner).real();
        std::size_t off = g.minus.outer_offset();
        for (int t = 0; t < 2; ++t) {
            const RayGrid& ray = g.minus.rays[t];
            std::vector<cplx> xi(ray.xi.begin() + off, ray.xi.begin() + off + S[t].size());
            std::vector<cplx>& v = f.phi_plus_mod_on_minus[t];
            v.resize(S[t].size());
            for (std::size_t j = 0; j < v.size(); ++j)
                v[j] = q / ((q + ray.psi[off + j]) * std::exp(-g.zeta * S[t][j] / two_pi_i));
            fill_mod(v, xi, f.a_plus, 1.0);
        }
    }
    if (g.plus.has_outer()) {
        std::array<std::vector<cplx>, 2> src{log_ratio_on_ray(g.minus.rays[0], q),
                                             log_ratio_on_ray(g.minus.rays[1], q)};
        auto S = direct_conv(g.minus, src, g.plus, threads);
        f.a_minus = asym_constant_c(p, q, Side::Minus, g.eps_inner).real();
        std::size_t off = g.plus.outer_offset();
        for (int t = 0; t < 2; ++t) {
            const RayGrid& ray = g.plus.rays[t];
            std::vector<cplx> xi(ray.xi.begin() + off, ray.xi.begin() + off + S[t].size());
            std::vector<cplx>& v = f.phi_minus_mod_on_plus[t];
            v.resize(S[t].size());
            for (std::size_t j = 0; j < v.size(); ++j)
                v[j] = q / ((q + ray.psi[off + j]) * std::exp(g.zeta * S[t][j] / two_pi_i));
            fill_mod(v, xi, f.a_minus, -1.0);
        }
    }
    return f;
}

FactorCache::FactorCache(std::shared_ptr<const WhfGrids> g, std::size_t capacity) : g_(std::move(g)), cap_(capacity) {}

std::shared_ptr<const QFactors> FactorCache::get(cplx q)
{
    std::pair<double, double> key{q.real(), q.imag()};
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
    }
    auto f = std::make_shared<const QFactors>(compute_factors(*g_, q));
    std::lock_guard<std::mutex> lock(mu_);
    if (memo_.size() >= cap_) memo_.clear();
    auto [it, inserted] = memo_.emplace(key, f);
    return it->second;
}

std::size_t FactorCache::size() const
{
    std::lock_guard<std::mutex> lock(mu_);
    return memo_.size();
}

namespace {

// sum over a family of sign * xi * l(eta) / (xi - eta), times zeta
cplx direct_cauchy(const RayFamily& fam, cplx q, cplx xi, double zeta)
{
    cplx total = 0.0;
    for (const RayGrid& ray : fam.rays) {
        std::vector<cplx> l = log_ratio_on_ray(ray, q);
        std::vector<cplx> terms(l.size());
        for (std::size_t k = 0; k < l.size(); ++k) terms[k] = xi * l[k] / (xi - ray.xi[k]);
        total += ray.sign * kahan_sum(terms);
    }
    return zeta * total;
}

// angle of xi measured in [from, from + 2 pi)
double arg_from(cplx xi, double from)
{
    double a = std::arg(xi);
    while (a < from) a += 2.0 * pi;
    while (a >= from + 2.0 * pi) a -= 2.0 * pi;
    return a;
}

} // namespace

cplx phi_plus(const StableParams& p, const WhfGrids& g, cplx q, cplx xi)
{
    (void)p;
    if (xi == cplx(0.0)) return 1.0;
    double a = arg_from(xi, g.minus.omega);
    if (!(a > g.minus.omega && a < pi - g.minus.omega)) throw ContourError("phi_plus: xi must lie above L-");
    return std::exp(direct_cauchy(g.minus, q, xi, g.zeta) / two_pi_i);
}

cplx phi_minus(const StableParams& p, const WhfGrids& g, cplx q, cplx xi)
{
    (void)p;
    if (xi == cplx(0.0)) return 1.0;
    double a = arg_from(xi, g.plus.omega - 2.0 * pi);
    if (!(a > -pi - g.plus.omega && a < g.plus.omega)) throw ContourError("phi_minus: xi must lie below L+");
    return std::exp(-direct_cauchy(g.plus, q, xi, g.zeta) / two_pi_i);
}

cplx phi_opposite_via_identity(const StableParams& p, cplx q, cplx xi, cplx phi_known)
{
    cplx den = (q + psi(p, xi)) * phi_known;
    if (std::abs(den) == 0.0 || !std::isfinite(std::abs(den))) throw DomainError("phi_opposite_via_identity: zero divisor");
    return q / den;
}

cplx phi_mod(const StableParams& p, const WhfGrids& g, cplx q, cplx xi, Side side)
{
    if (side == Side::Plus) {
        double a = asym_constant_c(p, q, Side::Plus, g.eps_inner).real();
        return phi_plus(p, g, q, xi) - (a + (1.0 - a) / (1.0 + cplx(0.0, 1.0) * xi));
    }
    double a = asym_constant_c(p, q, Side::Minus, g.eps_inner).real();
    return phi_minus(p, g, q, xi) - (a + (1.0 - a) / (1.0 - cplx(0.0, 1.0) * xi));
}

double asym_constant(const StableParams& p, double q, Side side, double eps)
{
    if (!(q > 0.0)) throw DomainError("asym_constant: q must be > 0");
    return asym_constant_c(p, cplx(q, 0.0), side, eps).real();
}

WhfValue whf_value(const StableParams& p, const WhfGrids& g, cplx q, cplx xi)
{
    WhfValue v;
    v.phi_plus = phi_plus(p, g, q, xi);
    v.phi_minus = phi_minus(p, g, q, xi);
    v.a_plus = asym_constant_c(p, q, Side::Plus, g.eps_inner).real();
    v.a_minus = asym_constant_c(p, q, Side::Minus, g.eps_inner).real();
    v.delta_plus = decay_exponent(g.regime, p, Side::Plus);
    v.delta_minus = decay_exponent(g.regime, p, Side::Minus);
    return v;
}

namespace {

cplx asym_constant_c(const StableParams& p, cplx q, Side side, double eps)
{
    Regime r = classify(p);
    if (r.tag == RegimeTag::Alpha1Asymmetric) throw RegimeError("asymmetric alpha = 1 is not supported");
    double expo = side == Side::Plus ? r.alpha_plus : r.alpha_minus;
    if (expo > 0.0) return 0.0;
    // one-sided without drift: the extremum on this side is identically 0
    if (p.mu == 0.0) return 1.0;
    if (q.imag() != 0.0) throw RegimeError("asymptotic constant with drift needs real q");

    // a- = exp(-(1/2 pi i) int_{L+} ln((q+psi)/(q - i mu eta)) d eta/eta), a+ mirrored over L-
    CharExp ce(p);
    ConeSpec cone = admissible_cone(p, false);
    double a = p.alpha;
    double C = std::abs(ce.constants().C_plus);
    double mu = std::abs(p.mu);
    double qr = q.real();
    double omega, d;
    std::array<double, 2> ang;
    if (side == Side::Minus) {
        omega = std::min(pi / 8.0, cone.gamma_plus / 2.0);
        d = 0.9 * std::min(omega, cone.gamma_plus - omega);
        ang = {omega, pi - omega};
    } else {
        omega = std::max(-pi / 8.0, cone.gamma_minus / 2.0);
        d = 0.9 * std::min(-omega, omega - cone.gamma_minus);
        ang = {omega, -pi - omega};
    }
    // tails: ~ (C/q) e^{a t} on the left, ~ (C/mu) e^{-(1-a) t} on the right
    double lo = left_cut(2.0 * C / (a * qr) + 4.0 * mu / qr, a, eps);
    DecaySpec ds;
    ds.right_kind = DecaySpec::Right::Exp;
    ds.right_kappa = 1.0 - a;
    ds.right_c = 2.0 * C / (mu * (1.0 - a));
    double hi = right_cut(ds, eps);
    hi = std::max(hi, lo + 1.0);
    double zeta = plan_step({eps, d, std::max(1.0, (hi - lo))});
    long n0 = static_cast<long>(std::floor(lo / zeta)), n1 = static_cast<long>(std::ceil(hi / zeta));

    cplx total = 0.0;
    for (int k = 0; k < 2; ++k) {
        std::vector<cplx> terms;
        terms.reserve(static_cast<std::size_t>(n1 - n0 + 1));
        double prev = 0.0;
        for (long m = n0; m <= n1; ++m) {
            cplx eta = std::exp(cplx(m * zeta, ang[k]));
            cplx num = std::log(q + ce.psi(eta));
            if (m > n0 && std::abs(num.imag() - prev) > pi) throw DomainError("asym_constant: branch crossing");
            prev = num.imag();
            terms.push_back(num - std::log(q - cplx(0.0, p.mu) * eta));
        }
        total += (k == 0 ? 1.0 : -1.0) * kahan_sum(terms);
    }
    total *= zeta;
    cplx expo_val = side == Side::Minus ? -total / two_pi_i : total / two_pi_i;
    return std::exp(expo_val);
}

} // namespace

} // namespace stabex
