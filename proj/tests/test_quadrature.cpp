#include <doctest.h>

#include "stabex/quadrature.hpp"

#include <cmath>
#include <numbers>

using namespace stabex;
using std::numbers::pi;

TEST_CASE("plan_step closed form")
{
    ErrorBudget b{1e-10, pi / 8.0, 1.0};
    double z = plan_step(b);
    // 2 pi d / ln(1 + 2H/eps), evaluated with mpmath
    CHECK(z == doctest::Approx(0.10402636269762253129).epsilon(1e-13));
    CHECK(discretization_bound(b, z) == doctest::Approx(b.eps / 2.0).epsilon(1e-10));
}

TEST_CASE("plan_step scales with d and shrinks with H")
{
    double z1 = plan_step({1e-15, pi / 4.0, 1.0});
    double z2 = plan_step({1e-15, pi / 8.0, 1.0});
    CHECK(z1 / z2 == doctest::Approx(2.0).epsilon(1e-14));
    double last = INFINITY;
    for (double h : {1.0, 10.0, 1e3, 1e6}) {
        double z = plan_step({1e-10, 0.5, h});
        CHECK(z < last);
        last = z;
    }
}

TEST_CASE("left truncation count")
{
    DecaySpec d;
    d.left_c = 1.0;
    d.left_rate = 0.2;
    auto n = plan_truncation(d, 0.03, 1e-10);
    CHECK(n.first == 4069);
    auto n2 = plan_truncation(d, 0.03, 0.5e-10);
    CHECK(std::abs((n2.first - n.first) - std::log(2.0) / (0.2 * 0.03)) <= 1.0);
}

TEST_CASE("double exponential right tail needs a few dozen nodes")
{
    DecaySpec d;
    d.right_kind = DecaySpec::Right::DoubleExp;
    d.right_b = 1.0;
    d.right_kappa = 1.0;
    auto n = plan_truncation(d, 0.1, 1e-10);
    CHECK(n.second > 10);
    CHECK(n.second < 60);
    // remaining mass at the cut is below eps/4
    double y = n.second * 0.1;
    double u = std::exp(y);
    CHECK(std::exp(-u) / u <= 1e-10 / 4.0);
}

namespace {

cplx planned_sum(const std::function<cplx(cplx)>& g, double d, double half_width, double eps)
{
    ErrorBudget b{eps, d, estimate_hardy_norm(g, d, -half_width, half_width)};
    TrapezoidPlan p;
    p.zeta = plan_step(b);
    p.n_minus = p.n_plus = static_cast<long>(std::ceil(half_width / p.zeta));
    return trapezoid_sum(p, [&](long, double y) { return g(y); });
}

} // namespace

TEST_CASE("trapezoid rule on closed-form integrals")
{
    cplx g1 = planned_sum([](cplx y) { return std::exp(-y * y); }, 1.0, 7.0, 1e-12);
    CHECK(std::abs(g1 - std::sqrt(pi)) <= 1e-12);
    cplx g2 = planned_sum([](cplx y) { return 1.0 / std::cosh(y); }, 1.0, 40.0, 1e-12);
    CHECK(std::abs(g2 - pi) <= 1e-12);
    cplx g3 = planned_sum([](cplx y) { return 1.0 / (std::cosh(y) * std::cosh(y)); }, 1.0, 40.0, 1e-12);
    CHECK(std::abs(g3 - 2.0) <= 1e-12);
    // int_0^inf dx/(1+x^2) after x = e^y
    cplx g4 = planned_sum([](cplx y) { return std::exp(y) / (1.0 + std::exp(2.0 * y)); }, 1.0, 40.0, 1e-12);
    CHECK(std::abs(g4 - pi / 2.0) <= 1e-12);
    // int_0^inf e^{-x} dx after x = e^y
    cplx g5 = planned_sum([](cplx y) { return std::exp(y - std::exp(y)); }, 1.0, 40.0, 1e-12);
    CHECK(std::abs(g5 - 1.0) <= 1e-12);
}

TEST_CASE("trapezoid reduction is independent of the thread count")
{
    TrapezoidPlan p{0.01, 3000, 3000};
    auto g = [](long j, double y) { return cplx(std::exp(-y * y) * std::cos(3.0 * y), 1e-3 * j); };
    cplx a = trapezoid_sum(p, g, 1);
    cplx b = trapezoid_sum(p, g, 4);
    CHECK(a.real() == b.real());
    CHECK(a.imag() == b.imag());
}

TEST_CASE("compensated sum recovers cancellation")
{
    std::vector<cplx> v{1e16, 1.0, -1e16, 1.0};
    CHECK(kahan_sum(v).real() == 2.0);
}

TEST_CASE("exponential ray nodes")
{
    TrapezoidPlan p{1.0, 0, 2};
    Nodes n = exp_ray_nodes({0.0, 1}, p);
    REQUIRE(n.x.size() == 3);
    CHECK(std::abs(n.x[0] - 1.0) < 1e-15);
    CHECK(std::abs(n.w[0] - 1.0) < 1e-15);

    TrapezoidPlan q{0.05, 100, 100};
    Nodes a = exp_ray_nodes({pi / 8.0, 1}, q);
    Nodes b = exp_ray_nodes({-pi / 8.0, 1}, q);
    CHECK(std::abs(a.x.front()) == doctest::Approx(std::exp(-5.0)));
    CHECK(std::abs(a.x.back()) == doctest::Approx(std::exp(5.0)));
    for (std::size_t i = 0; i < a.x.size(); ++i) CHECK(std::abs(b.x[i] - std::conj(a.x[i])) < 1e-12);
}

TEST_CASE("sinh contour nodes")
{
    SinhContour c{1.0, 1.2, 0.6};
    TrapezoidPlan p{0.1, 0, 40};
    Nodes n = sinh_nodes(c, p);
    CHECK(std::abs(n.x[0] - cplx(1.0 - 1.2 * std::sin(0.6), 0.0)) < 1e-15);
    // weights carry b cosh(i omega + y); the factor i of dq/dy sits in the combination
    CHECK(std::abs(n.w[0] - 0.5 * 0.1 * c.dq(0.0) / cplx(0.0, 1.0)) < 1e-15);
    for (std::size_t j = 1; j < n.x.size(); ++j) {
        double y = j * 0.1;
        CHECK(n.x[j].real() == doctest::Approx(1.0 - 1.2 * std::sin(0.6) * std::cosh(y)));
        CHECK(n.x[j].real() < n.x[j - 1].real());
    }
    CHECK(std::abs(c.q(-0.7) - std::conj(c.q(0.7))) < 1e-15);
    CHECK_THROWS(SinhContour{1.0, 3.0, 0.6}.validate());
}
