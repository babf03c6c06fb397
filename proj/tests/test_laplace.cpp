#include <doctest.h>

#include "stabex/laplace.hpp"

#include <cmath>

using namespace stabex;

namespace {

BromwichConfig contour(double T, double eps)
{
    StableParams p{1.5, 0.5, 0.5, 0.0};
    return choose_contour(p, T, admissible_cone(p, true), eps);
}

} // namespace

TEST_CASE("Gaver-Stehfest")
{
    // weights of size 1e8 cancel to 1 in double precision: a few 1e-8 of rounding
    CHECK(std::abs(gaver_stehfest([](double q) { return 1.0 / q; }, 1.7) - 1.0) <= 1e-7);
    CHECK(std::abs(gaver_stehfest([](double q) { return 1.0 / (q + 1.0); }, 1.0) - std::exp(-1.0)) <= 1e-6);
    CHECK(std::abs(gaver_stehfest([](double q) { return 1.0 / (q * q); }, 2.0) - 2.0) <= 1e-6);
    double s = 0.0;
    for (double w : stehfest_weights(8)) s += w;
    CHECK(std::abs(s) < 1e-6);
}

TEST_CASE("GWR on smooth pairs")
{
    GwrConfig c;
    CHECK(gwr_invert([](double q) { return 1.0 / q; }, 1.3, c).value == doctest::Approx(1.0).epsilon(1e-12));
    // 2M = 16 in double precision: about 1.3e-8 here
    CHECK(std::abs(gwr_invert([](double q) { return 1.0 / (q + 1.0); }, 1.0, c).value - std::exp(-1.0)) <= 2e-8);
    CHECK(std::abs(gwr_invert([](double q) { return 1.0 / (q * q); }, 1.0, c).value - 1.0) <= 1e-6);
    CHECK(std::abs(gwr_invert([](double q) { return 1.0 / (q + 2.0); }, 0.5, c).value - std::exp(-1.0)) <= 1e-6);
}

TEST_CASE("GWR oscillatory pair stays at its documented ceiling")
{
    double e = std::abs(gwr_invert([](double q) { return 1.0 / (q * q + 1.0); }, 1.0).value - std::sin(1.0));
    CHECK(e <= 5e-4);
}

TEST_CASE("GWR shift theorem")
{
    GwrConfig plain;
    GwrConfig shifted;
    shifted.shift_a = 0.8;
    auto f = [](double q) { return 1.0 / ((q + 1.0) * (q + 3.0)); };
    double ref = 0.5 * (std::exp(-1.0) - std::exp(-3.0));
    CHECK(std::abs(gwr_invert(f, 1.0, shifted).value - ref) <= 1e-8);
    // the unshifted run carries the usual 2M = 16 error of a few 1e-8
    CHECK(std::abs(gwr_invert(f, 1.0, shifted).value - gwr_invert(f, 1.0, plain).value) <= 5e-8);
    CHECK(gwr_default_shift(100.0) + std::log(2.0) / 100.0 >= 0.25);
    CHECK(gwr_default_shift(0.1) == 0.0);
}

TEST_CASE("GWR nodes and combine agree with invert")
{
    GwrConfig c;
    c.shift_a = 0.3;
    auto f = [](double q) { return 1.0 / (q + 0.5); };
    std::vector<double> v;
    for (double q : gwr_nodes(2.0, c)) v.push_back(f(q));
    CHECK(v.size() == 16);
    CHECK(gwr_combine(v, 2.0, c).value == gwr_invert(f, 2.0, c).value);
}

TEST_CASE("corrupted Gaver functionals are detected")
{
    set_gaver_corruption(true);
    double bad = gwr_invert([](double q) { return 1.0 / (q + 1.0); }, 1.0).value;
    set_gaver_corruption(false);
    CHECK(std::abs(bad - std::exp(-1.0)) > 1e-3);
}

TEST_CASE("GWR config validation")
{
    GwrConfig c;
    c.two_m = 15;
    CHECK_THROWS(c.validate());
}

TEST_CASE("sinh-Bromwich pairs")
{
    for (double T : {0.25, 1.0, 4.0}) {
        BromwichConfig cfg = contour(T, 1e-14);
        CHECK(std::abs(sinh_bromwich_invert([](cplx q) { return 1.0 / q; }, T, cfg) - 1.0) <= 1e-13);
        CHECK(std::abs(sinh_bromwich_invert([](cplx q) { return 1.0 / (q + 1.0); }, T, cfg) - std::exp(-T)) <= 1e-13);
        CHECK(std::abs(sinh_bromwich_invert([](cplx q) { return 1.0 / (q * q); }, T, cfg) - T) <= 1e-12 * T);
        // e^{-sqrt q}/q -> erfc(1 / (2 sqrt T))
        double e = sinh_bromwich_invert([](cplx q) { return std::exp(-std::sqrt(q)) / q; }, T, cfg);
        CHECK(std::abs(e - std::erfc(0.5 / std::sqrt(T))) <= 1e-12);
    }
}

TEST_CASE("sinh-Bromwich is linear and combine matches invert")
{
    BromwichConfig cfg = contour(1.0, 1e-12);
    auto f = [](cplx q) { return 1.0 / (q + 1.0); };
    auto g = [](cplx q) { return 1.0 / (q + 2.0); };
    double a = sinh_bromwich_invert(f, 1.0, cfg), b = sinh_bromwich_invert(g, 1.0, cfg);
    double c = sinh_bromwich_invert([&](cplx q) { return 2.0 * f(q) - 3.0 * g(q); }, 1.0, cfg);
    CHECK(std::abs(c - (2.0 * a - 3.0 * b)) < 1e-14);

    Nodes n = sinh_nodes(cfg.contour, cfg.plan);
    std::vector<cplx> v;
    for (cplx q : n.x) v.push_back(f(q));
    CHECK(sinh_bromwich_combine(v, 1.0, cfg) == doctest::Approx(a).epsilon(1e-15));
    CHECK(sinh_error_gain(1.0, cfg) > 0.0);
}

TEST_CASE("default contour stays in the right half-plane and tightens with T")
{
    BromwichConfig a = contour(0.5, 1e-10), b = contour(5.0, 1e-10);
    for (const auto* c : {&a, &b}) {
        CHECK(c->contour.sigma_l - c->contour.b_l * std::sin(c->contour.omega_l) > 0.0);
        CHECK_NOTHROW(c->contour.validate());
    }
    CHECK(b.plan.n_plus <= a.plan.n_plus);
}
