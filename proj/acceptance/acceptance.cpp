// One PASS/FAIL line per acceptance criterion. Exit status 0 only when every line passes.
#include "stabex/distributions.hpp"
#include "stabex/errors.hpp"
#include "stabex/laplace.hpp"
#include "stabex/oracle.hpp"
#include "stabex/tables.hpp"
#include "stabex/whf.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>

using namespace stabex;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& what, const std::string& detail)
{
    if (!ok) ++failures;
    std::printf("%s  %2d  %-44s %s\n", ok ? "PASS" : "FAIL", id, what.c_str(), detail.c_str());
    std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

EvalRequest base_request(Method m, double eps)
{
    EvalRequest r;
    r.method = m;
    r.eps = eps;
    r.threads = 0;
    return r;
}

double max_abs_error(const TableReport& r, std::size_t skip = 0)
{
    double e = 0.0;
    for (std::size_t i = skip; i < r.entries.size(); ++i) e = std::max(e, std::abs(r.entries[i].error));
    return e;
}

double max_abs_cross(const TableReport& r)
{
    double e = 0.0;
    for (const auto& x : r.entries) e = std::max(e, std::abs(x.cross));
    return e;
}

Calibration criterion1()
{
    auto t0 = std::chrono::steady_clock::now();
    Calibration c = calibrate();
    double t_cal = seconds_since(t0);
    TableReport r = run_table(table_fixture(1), c, base_request(Method::SinhBromwich, 1e-10));
    double err = max_abs_error(r, 1); // the first point was used for calibration
    bool ok = c.convention == ScaleConvention::Standard && err <= 1e-9 && r.seconds <= 5.0;
    report(1, ok, "table 1, sinh, after one-point calibration",
           fmt("scale %.14g, max err (5 pts) %.2e, %.2f s", c.fitted, err, r.seconds) + fmt(", calibration %.1f s", t_cal));
    return c;
}

void criterion2(const Calibration& c)
{
    TableReport s = run_table(table_fixture(2), c, base_request(Method::SinhBromwich, 1e-10));
    TableReport g = run_table(table_fixture(2), c, base_request(Method::GWR, 1e-10));
    double es = max_abs_error(s), eg = max_abs_error(g);
    bool ok = es <= 1e-9 && eg >= 1e-9 && eg <= 1e-7;
    report(2, ok, "table 2, sinh and the GWR error band", fmt("sinh max err %.2e, gwr max err %.2e (band 1e-9..1e-7)", es, eg));
}

void criterion3(const Calibration& c)
{
    TableReport s = run_table(table_fixture(6), c, base_request(Method::SinhBromwich, 1e-10));
    double e = max_abs_error(s);
    report(3, e <= 1e-9, "table 6 (T = 10), sinh", fmt("max err %.2e", e));
}

void criterion4(const Calibration& c)
{
    double worst_cross = 0.0;
    int mc_bad = 0, mc_total = 0;
    double paper_dev = 0.0;
    double secs = 0.0;
    for (int id : {3, 4, 5}) {
        const TableFixture& t = table_fixture(id);
        TableReport r = run_table(t, c, base_request(Method::GWR, 1e-10));
        secs += r.seconds;
        worst_cross = std::max(worst_cross, max_abs_cross(r));
        paper_dev = std::max(paper_dev, max_abs_error(r));
        for (std::size_t k = 0; k < t.rows.size(); ++k) {
            StableParams p = table_params(t, c, t.rows[k].mu);
            McConfig mc;
            mc.T = t.T;
            mc.n_steps = 64;
            mc.n_paths = 50000;
            mc.seed = 1000 + 10 * id + k;
            std::vector<PathFunctional> fs;
            std::vector<double> lib;
            for (std::size_t i : {std::size_t(0), std::size_t(3)}) {
                double a = t.a[i];
                fs.push_back([a](double, double m) { return m <= a ? 1.0 : 0.0; });
                lib.push_back(r.entries[k * t.a.size() + i].value);
            }
            McGate gate = mc_gate(p, mc, fs);
            for (std::size_t i = 0; i < lib.size(); ++i) {
                ++mc_total;
                if (!gate.accepts(i, lib[i])) ++mc_bad;
            }
        }
    }
    bool ok = worst_cross <= 1e-6 && mc_bad == 0;
    report(4, ok, "tables 3-5, GWR cross differences and MC gate",
           fmt("max cross %.2e, MC rejects %.0f of %.0f", worst_cross, mc_bad, mc_total) +
               fmt(", max |value - published| %.2e (see notes), %.0f s", paper_dev, secs));
}

void criterion5(const Calibration& c)
{
    TableReport a = run_table(table_fixture(7), c, base_request(Method::SinhBromwich, 1e-10));
    TableReport b = run_table(table_fixture(8), c, base_request(Method::SinhBromwich, 1e-10));
    double ea = max_abs_error(a), eb = max_abs_error(b);
    double first = a.entries.front().value;
    bool ok = ea <= 1e-8 && eb <= 1e-8 && std::abs(first - 0.12244233311163) <= 1e-8;
    report(5, ok, "tables 7 and 8, joint cdf, sinh", fmt("max err %.2e and %.2e, first cell %.14f", ea, eb, first));
}

void criterion6()
{
    struct Case {
        StableParams p;
        bool complex_q;
    };
    std::vector<Case> cases{{from_beta(1.2, -0.2, 0.2, -0.02), true}, {from_beta(1.5, 0.3, 1.0, 0.0), true},
                            {from_beta(1.9, -0.9, 0.7, 0.2), true},   {from_beta(0.6, 0.4, 1.0, 0.0), true},
                            {from_beta(0.2, -0.2, 0.2, 0.0), true},   {from_beta(0.6, -0.2, 0.5, 0.05), false},
                            {from_beta(0.2, -0.2, 0.2, -0.02), false}, {StableParams{1.0, 0.5, 0.5, 0.1}, true},
                            {StableParams{1.5, 0.0, 1.0, 0.0}, true},  {StableParams{0.8, 1.0, 0.0, 0.3}, false}};
    double worst = 0.0;
    for (const auto& c : cases) {
        GridRequest r;
        r.eps = 1e-12;
        r.complex_q = c.complex_q;
        r.q_min = 0.5;
        r.probe_rho = 40.0;
        WhfGrids g = build_grids(c.p, admissible_cone(c.p, c.complex_q, r.q_min), r);
        std::vector<cplx> qs{0.5, 1.0, 5.0, 50.0};
        if (c.complex_q) {
            qs.push_back(cplx(1.0, 3.0));
            qs.push_back(cplx(0.5, -2.0));
        }
        for (cplx q : qs)
            for (double x : {-30.0, -5.0, -1.0, -0.2, -0.01, 0.01, 0.2, 1.0, 5.0, 30.0}) {
                WhfValue v = whf_value(c.p, g, q, x);
                worst = std::max(worst, std::abs(v.phi_plus * v.phi_minus - q / (q + psi(c.p, cplx(x, 0.0)))));
            }
    }
    report(6, worst <= 1e-10, "Wiener-Hopf identity, 10 regimes", fmt("max residual %.2e at eps 1e-12", worst));
}

void criterion7()
{
    StableParams p{1.5, 0.0, 1.0, 0.0};
    GridRequest r;
    r.eps = 1e-12;
    r.q_min = 0.5;
    r.probe_rho = 40.0;
    WhfGrids g = build_grids(p, admissible_cone(p, false), r);
    double wf = 0.0;
    for (double q : {0.5, 1.0, 5.0, 50.0})
        for (double x : {-20.0, -3.0, -1.0, -0.3, -0.01, 0.01, 0.3, 1.0, 3.0, 20.0})
            wf = std::max(wf, std::abs(phi_plus(p, g, q, x) - one_sided_phi_plus(p, q, x)));
    EvalRequest e = base_request(Method::SinhBromwich, 1e-12);
    e.params = p;
    e.T = 1.0;
    std::vector<double> d{0.05, 0.3, 1.0, 2.5};
    EvalResult v = cpdf_sup_many(e, d);
    double wc = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) wc = std::max(wc, std::abs(v.values[i] - one_sided_cpdf_sup_sinh(p, 1.0, d[i])));
    report(7, wf <= 1e-10 && wc <= 1e-9, "no positive jumps: factor and cpdf_sup",
           fmt("factor max err %.2e (40 pts), cpdf_sup max err %.2e", wf, wc));
}

void criterion8()
{
    double es = 0.0, eg = 0.0, egs = 0.0;
    StableParams p{1.5, 0.5, 0.5, 0.0};
    for (double T : {0.25, 1.0, 4.0}) {
        BromwichConfig cfg = plan_sinh(p, T, 1e-14).bromwich;
        es = std::max(es, std::abs(sinh_bromwich_invert([](cplx q) { return 1.0 / q; }, T, cfg) - 1.0));
        es = std::max(es, std::abs(sinh_bromwich_invert([](cplx q) { return 1.0 / (q + 1.0); }, T, cfg) - std::exp(-T)));
        es = std::max(es, std::abs(sinh_bromwich_invert([](cplx q) { return 1.0 / (q * q); }, T, cfg) - T) / T);
        es = std::max(es, std::abs(sinh_bromwich_invert([](cplx q) { return std::exp(-std::sqrt(q)) / q; }, T, cfg) -
                                   std::erfc(0.5 / std::sqrt(T))));
    }
    for (double T : {0.5, 1.0, 2.0}) {
        eg = std::max(eg, std::abs(gwr_invert([](double q) { return 1.0 / (q + 1.0); }, T).value - std::exp(-T)));
        eg = std::max(eg, std::abs(gwr_invert([](double q) { return 1.0 / (q * q); }, T).value - T));
        eg = std::max(eg, std::abs(gwr_invert([](double q) { return 1.0 / q; }, T).value - 1.0));
        egs = std::max(egs, std::abs(gaver_stehfest([](double q) { return 1.0 / (q + 1.0); }, T) - std::exp(-T)));
        egs = std::max(egs, std::abs(gaver_stehfest([](double q) { return 1.0 / (q * q); }, T) - T));
    }
    report(8, es <= 1e-13 && eg <= 1e-6 && egs <= 1e-4, "transform pairs: sinh, GWR(16), Gaver-Stehfest(8)",
           fmt("max err %.2e, %.2e, %.2e", es, eg, egs));
}

void criterion9()
{
    double worst = 0.0;
    for (const auto& [c, mu] : {std::pair{0.3, 0.1}, std::pair{1.0, -0.7}, std::pair{0.05, 0.0}}) {
        EvalRequest e = base_request(Method::SinhBromwich, 1e-14);
        e.params = StableParams{1.0, c, c, mu};
        e.T = 0.7;
        std::vector<double> y;
        for (int i = 0; i < 20; ++i) y.push_back(-4.0 + 0.41 * i);
        EvalResult r = cpdf_x_many(e, y);
        for (std::size_t i = 0; i < y.size(); ++i) worst = std::max(worst, std::abs(r.values[i] - cauchy_cdf(c, mu, e.T, y[i])));
    }
    report(9, worst <= 1e-12, "alpha = 1 symmetric against the arctan law", fmt("max err %.2e over 60 points", worst));
}

void criterion10()
{
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int bad = 0, configs = 0;
    std::string first_bad;
    auto flag = [&](bool ok, const std::string& what) {
        if (!ok && bad++ == 0) first_bad = what;
    };
    auto t0 = std::chrono::steady_clock::now();
    while (configs < 100) {
        double alpha = 0.3 + 1.6 * u(rng);
        if (std::abs(alpha - 1.0) < 0.05) continue;
        double cp = u(rng) < 0.1 ? 0.0 : 0.1 + 0.9 * u(rng);
        double cm = 0.1 + 0.9 * u(rng);
        double mu = u(rng) < 0.3 ? 0.0 : 0.4 * u(rng) - 0.2;
        double T = 0.25 + 1.75 * u(rng);
        StableParams p{alpha, cp, cm, mu};
        ++configs;
        std::ostringstream tag;
        tag << "alpha " << alpha << " c+ " << cp << " c- " << cm << " mu " << mu << " T " << T;

        bool sinh = classify(p).sinh_bromwich_allowed;
        EvalRequest e = base_request(sinh ? Method::SinhBromwich : Method::GWR, 1e-8);
        e.params = p;
        e.T = T;
        double tol = sinh ? 1e-7 : 1e-6;
        EvalRequest f = e;
        f.method = Method::DirectFourier;
        std::vector<double> a{0.0, 0.05, 0.2, 0.8, 3.0};
        try {
            EvalResult x = cpdf_x_many(f, a);
            EvalResult s = cpdf_sup_many(e, a);
            for (std::size_t i = 0; i < a.size(); ++i) {
                flag(x.values[i] >= -tol && x.values[i] <= 1.0 + tol, "cpdf_x range: " + tag.str());
                flag(s.values[i] >= -tol && s.values[i] <= 1.0 + tol, "cpdf_sup range: " + tag.str());
                flag(s.values[i] <= x.values[i] + tol, "sup dominates X_T: " + tag.str());
                if (i) {
                    flag(x.values[i] >= x.values[i - 1] - tol, "cpdf_x monotone: " + tag.str());
                    flag(s.values[i] >= s.values[i - 1] - tol, "cpdf_sup monotone: " + tag.str());
                }
            }
            if (configs % 5 == 0) {
                JointResult j = joint_cpdf_many(e, {{0.0, 0.0, -0.1, 0.8}, {0.0, 0.0, 0.2, 0.8}});
                flag(j.v[0] >= -tol && j.v[0] <= j.v[1] + tol, "joint monotone in a1: " + tag.str());
                flag(j.v[1] <= std::min(x.values[2], s.values[3]) + tol, "joint below marginals: " + tag.str());
            }
        } catch (const std::exception& ex) {
            flag(false, std::string("threw '") + ex.what() + "': " + tag.str());
        }
    }

    // exchange: divergence at lambda = 0 for alpha <= 1, finite and monotone for alpha > 1
    int ex_bad = 0;
    for (const auto& p : {from_beta(0.8, 0.2, 1.0, 0.0), from_beta(0.5, -0.4, 1.0, 0.05)}) {
        EvalRequest e = base_request(Method::GWR, 1e-8);
        e.params = p;
        try {
            exchange_expectation(e, 0.0, 0.0, 1.2, 0.0);
            ++ex_bad;
        } catch (const DivergenceError&) {
        }
    }
    for (const auto& p : {from_beta(1.5, 0.0, 1.0, 0.0), from_beta(1.8, -0.5, 0.5, 0.0)}) {
        EvalRequest e = base_request(Method::SinhBromwich, 1e-8);
        e.params = p;
        double last = -INFINITY;
        for (double lam : {0.5, 0.1, 0.02, 0.0}) {
            double v = exchange_expectation(e, 0.0, 0.0, 1.2, lam);
            if (!std::isfinite(v) || !(v > last)) ++ex_bad;
            last = v;
        }
    }
    bool ok = bad == 0 && ex_bad == 0;
    report(10, ok, "property suite, 100 seeded configurations",
           fmt("%.0f invariant violations, %.0f exchange violations, %.0f s", bad, ex_bad, seconds_since(t0)) +
               (bad ? " first: " + first_bad : ""));
}

} // namespace

int main()
{
    auto run = [](int id, auto&& f) {
        try {
            f();
        } catch (const std::exception& e) {
            report(id, false, "criterion threw", e.what());
        }
    };
    Calibration c = default_calibration();
    run(1, [&] { c = criterion1(); });
    run(2, [&] { criterion2(c); });
    run(3, [&] { criterion3(c); });
    run(4, [&] { criterion4(c); });
    run(5, [&] { criterion5(c); });
    run(6, [] { criterion6(); });
    run(7, [] { criterion7(); });
    run(8, [] { criterion8(); });
    run(9, [] { criterion9(); });
    run(10, [] { criterion10(); });
    std::printf("%d of 10 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
