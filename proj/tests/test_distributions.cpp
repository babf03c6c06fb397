#include <doctest.h>

#include "stabex/distributions.hpp"
#include "stabex/errors.hpp"
#include "stabex/oracle.hpp"

#include <cmath>

using namespace stabex;

namespace {

EvalRequest request(const StableParams& p, double T, Method m = Method::SinhBromwich, double eps = 1e-10)
{
    EvalRequest r;
    r.params = p;
    r.T = T;
    r.method = m;
    r.eps = eps;
    r.threads = 2;
    return r;
}

} // namespace

TEST_CASE("symmetric law without drift puts half its mass below 0")
{
    for (Method m : {Method::SinhBromwich, Method::DirectFourier}) {
        CHECK(cpdf_x(request(StableParams{1.4, 0.5, 0.5, 0.0}, 1.0, m), 0.0, 0.0) == doctest::Approx(0.5).epsilon(1e-11));
        CHECK(cpdf_x(request(StableParams{0.7, 0.5, 0.5, 0.0}, 2.0, m), 0.0, 0.0) == doctest::Approx(0.5).epsilon(1e-11));
    }
}

TEST_CASE("alpha = 1 symmetric reproduces the Cauchy cdf")
{
    StableParams p{1.0, 0.3, 0.3, 0.1};
    std::vector<double> y;
    for (int i = 0; i < 20; ++i) y.push_back(-4.0 + 0.41 * i);
    for (Method m : {Method::SinhBromwich, Method::DirectFourier}) {
        EvalResult r = cpdf_x_many(request(p, 0.7, m, 1e-12), y);
        double worst = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) worst = std::max(worst, std::abs(r.values[i] - cauchy_cdf(0.3, 0.1, 0.7, y[i])));
        CHECK(worst <= 1e-10);
    }
}

TEST_CASE("cpdf of X_T: sinh, Fourier and real-line Gil-Pelaez agree")
{
    for (const auto& p : {from_beta(1.2, -0.2, 0.2, -0.02), from_beta(1.7, 0.6, 1.0, 0.1), from_beta(0.6, 0.4, 1.0, 0.0)}) {
        for (double y : {-0.3, 0.0, 0.05, 0.8}) {
            double s = cpdf_x(request(p, 0.5), 0.0, y);
            double f = cpdf_x(request(p, 0.5, Method::DirectFourier), 0.0, y);
            double g = gil_pelaez_cdf(p, 0.5, y);
            CHECK(std::abs(s - f) <= 1e-9);
            CHECK(std::abs(s - g) <= 1e-9);
        }
    }
}

TEST_CASE("cpdf_sup reproduces the first entry of the alpha = 1.2 table")
{
    EvalRequest r = request(from_beta(1.2, -0.2, 0.2, -0.02), 0.25, Method::SinhBromwich, 1e-12);
    CHECK(std::abs(cpdf_sup(r, 0.0, 0.0125) - 0.13205969881037) <= 1e-9);
    // shift invariance in (x, a)
    CHECK(std::abs(cpdf_sup(r, 0.3, 0.3125) - cpdf_sup(r, 0.0, 0.0125)) <= 1e-14);
}

TEST_CASE("no positive jumps: cpdf_sup against the exponential-supremum oracle")
{
    StableParams p{1.5, 0.0, 1.0, 0.0};
    EvalResult r = cpdf_sup_many(request(p, 1.0), {0.05, 0.3, 1.0, 2.5});
    std::vector<double> d{0.05, 0.3, 1.0, 2.5};
    for (std::size_t i = 0; i < d.size(); ++i) CHECK(std::abs(r.values[i] - one_sided_cpdf_sup_sinh(p, 1.0, d[i])) <= 1e-9);
    // the transform itself is P[sup over an exponential time > d] = exp(-Phi(q) d)
    GridRequest g;
    g.eps = 1e-12;
    g.q_min = 1.0;
    g.minus.used = true;
    WhfGrids grids = build_grids(p, admissible_cone(p, false), g);
    for (double q : {1.0, 4.0}) {
        double want = std::exp(-one_sided_root(p, q) * 0.7);
        CHECK(std::abs(cpdf_sup_transform(p, grids, q, 0.7) - want) <= 1e-10);
    }
}

TEST_CASE("cpdf_sup is a distribution function in a")
{
    for (Method m : {Method::SinhBromwich, Method::GWR}) {
        EvalRequest r = request(from_beta(1.5, 0.3, 0.5, 0.05), 1.0, m);
        std::vector<double> a{0.0, 0.01, 0.1, 0.5, 2.0, 10.0};
        EvalResult v = cpdf_sup_many(r, a);
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(v.values[i] >= -1e-9);
            CHECK(v.values[i] <= 1.0 + 1e-9);
            if (i) CHECK(v.values[i] >= v.values[i - 1]);
        }
        // the supremum dominates X_T
        CHECK(v.values[3] <= cpdf_x(request(r.params, 1.0), 0.0, 0.5) + 1e-9);
    }
}

TEST_CASE("method errors")
{
    StableParams lt1 = from_beta(0.2, -0.2, 0.2, 0.02);
    CHECK_THROWS_AS(cpdf_sup(request(lt1, 0.25), 0.0, 0.1), RegimeError);
    CHECK_NOTHROW(cpdf_sup(request(lt1, 0.25, Method::GWR), 0.0, 0.1));
    CHECK_THROWS_AS(cpdf_sup(request(from_beta(1.2, 0.0, 0.2, 0.0), 0.25, Method::DirectFourier), 0.0, 0.1), RegimeError);
    CHECK_THROWS_AS(cpdf_x(request(StableParams{1.0, 0.7, 0.3, 0.0}, 1.0), 0.0, 0.1), RegimeError);
    CHECK_THROWS_AS(parse_method("euler"), RegimeError);
    CHECK(parse_method(to_string(Method::GWR)) == Method::GWR);
    EvalRequest bad = request(from_beta(1.2, 0.0, 0.2, 0.0), -1.0);
    CHECK_THROWS_AS(bad.validate(), DomainError);
}

TEST_CASE("results do not depend on the thread count")
{
    EvalRequest r = request(from_beta(1.2, -0.2, 0.2, -0.02), 0.25);
    r.threads = 1;
    std::vector<double> a{0.0125, 0.05};
    EvalResult one = cpdf_sup_many(r, a);
    r.threads = 6;
    EvalResult six = cpdf_sup_many(r, a);
    CHECK(one.values == six.values);
}

TEST_CASE("joint cdf: limits and ordering")
{
    EvalRequest r = request(from_beta(1.2, -0.2, 0.2, -0.02), 0.25);
    double a2 = 0.05;
    double sup = cpdf_sup(r, 0.0, a2);
    // X_T <= sup X, so the joint constraint on X_T disappears as a1 -> a2
    CHECK(std::abs(joint_cpdf(r, 0.0, 0.0, a2 - 1e-10, a2) - sup) <= 1e-8);
    for (double a1 : {-0.05, 0.0, 0.03}) {
        double v = joint_cpdf(r, 0.0, 0.0, a1, a2);
        CHECK(v >= -1e-9);
        CHECK(v <= std::min(sup, cpdf_x(r, 0.0, a1)) + 1e-9);
    }
    // x2 below a2 does not bind
    CHECK(std::abs(joint_cpdf(r, 0.0, 0.0, 0.01, a2) - joint_cpdf(r, 0.0, 0.04, 0.01, a2)) <= 1e-12);
    CHECK(joint_cpdf(r, 0.0, 0.0, 0.06, a2) == doctest::Approx(sup).epsilon(1e-12));
    CHECK(joint_cpdf(r, 0.0, 0.06, 0.01, a2) == 0.0);
}

TEST_CASE("joint cdf: dedicated path and general two-factor path agree")
{
    EvalRequest r = request(from_beta(1.2, -0.2, 0.2, -0.02), 0.25);
    for (const auto& [a1, a2] : {std::pair{-0.025, 0.0125}, std::pair{0.0, 0.05}}) {
        JointResult j = joint_cpdf_many(r, {{0.0, 0.0, a1, a2}});
        double g = general_expectation(r, joint_payoff(0.0, 0.0, a1, a2));
        CHECK(std::abs(j.v[0] - g) <= 1e-10);
        CHECK(std::abs(j.v[0] + j.v1[0] - cpdf_x(r, 0.0, a1)) <= 1e-10);
    }
}

TEST_CASE("exchange expectation")
{
    StableParams p = from_beta(1.5, 0.0, 1.0, 0.0);
    EvalRequest r = request(p, 1.0, Method::SinhBromwich, 1e-8);
    // beta = 1 and x1 = x2: X_T never exceeds the running maximum
    CHECK(std::abs(exchange_expectation(r, 0.0, 0.0, 1.0, 0.0)) <= 1e-8);
    EvalResult at0 = exchange_expectation_info(r, 0.0, 0.0, 1.2, 0.0);
    double v0 = at0.values.front();
    CHECK(at0.info.est_error <= 1e-7);
    double last = v0;
    for (double lam : {0.5, 2.0}) {
        double v = exchange_expectation(r, 0.0, 0.0, 1.2, lam);
        CHECK(v > 0.0);
        CHECK(v < last);
        last = v;
    }
    // v(0) - v(lambda) ~ lambda^(alpha - 1) as lambda -> 0
    double d1 = v0 - exchange_expectation(r, 0.0, 0.0, 1.2, 4e-4);
    double d2 = v0 - exchange_expectation(r, 0.0, 0.0, 1.2, 1e-4);
    CHECK(d2 > 0.0);
    CHECK(d1 / d2 == doctest::Approx(2.0).epsilon(0.02));

    McConfig mc;
    mc.T = 1.0;
    mc.n_steps = 250;
    mc.n_paths = 40000;
    mc.seed = 11;
    McGate gate = mc_gate(p, mc, {[](double x, double m) { return std::max(1.2 * x - std::max(0.0, m), 0.0) * std::exp(-0.5 * std::max(0.0, m)); }});
    double v = exchange_expectation(r, 0.0, 0.0, 1.2, 0.5);
    INFO("exchange " << v << " mc " << gate.fine[0].mean << " tol " << gate.tolerance(0));
    CHECK(gate.accepts(0, v));

    StableParams lt1 = from_beta(0.8, 0.0, 1.0, 0.0);
    CHECK_THROWS_AS(exchange_expectation(request(lt1, 1.0), 0.0, 0.0, 1.0, 0.0), DivergenceError);
    CHECK_THROWS_AS(exchange_expectation(r, 0.0, 0.0, 0.9, 0.0), DomainError);
    CHECK_THROWS_AS(exchange_expectation(r, 0.0, -0.1, 1.0, 0.0), DomainError);
}

TEST_CASE("e2 is smooth through 0")
{
    CHECK(std::abs(e2(0.0) - 0.5) < 1e-16);
    CHECK(std::abs(e2(1e-9) - (0.5 + 1e-9 / 6.0)) < 1e-15);
    cplx z(0.7, -0.3);
    CHECK(std::abs(e2(z) - (std::exp(z) - 1.0 - z) / (z * z)) < 1e-14);
}
