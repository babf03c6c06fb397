#include <doctest.h>

#include "stabex/charexp.hpp"
#include "stabex/errors.hpp"
#include "stabex/oracle.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace stabex;
using std::numbers::pi;

TEST_CASE("psi0 at alpha = 1 symmetric is c pi |xi|")
{
    StableParams p{1.0, 0.5, 0.5, 0.0};
    cplx v = psi0(p, 1.0);
    CHECK(v.real() == doctest::Approx(0.5 * pi).epsilon(1e-15));
    CHECK(std::abs(v.imag()) < 1e-15);
    DerivedConstants d = derive(p);
    CHECK(d.C_plus.real() == doctest::Approx(0.5 * pi).epsilon(1e-15));
    CHECK(d.sigma_z == doctest::Approx(0.5 * pi));
}

TEST_CASE("psi0 matches 40-digit evaluations of the Gamma form")
{
    // mpmath, C+ = -Gamma(-a)(c+ e^{-i pi a/2} + c- e^{i pi a/2}), psi0(2) = C+ 2^a
    cplx v = psi0(StableParams{1.2, 0.5, 0.5, 0.0}, 2.0);
    CHECK(v.real() == doctest::Approx(3.4438624443136970682).epsilon(1e-14));
    CHECK(std::abs(v.imag()) < 1e-14);

    cplx w = psi0(StableParams{0.7, 0.8, 0.1, 0.0}, 2.0);
    CHECK(w.real() == doctest::Approx(2.8366859240967529443).epsilon(1e-14));
    CHECK(w.imag() == doctest::Approx(-4.3301296853506786509).epsilon(1e-14));
}

TEST_CASE("C+ agrees with a 50-digit evaluation across alpha")
{
    for (double a : {0.2, 0.5, 0.9, 0.999, 1.001, 1.2, 1.5, 1.9}) {
        StableParams p{a, 0.3, 0.7, 0.0};
        cplx ref = c_plus_high_precision(a, 0.3, 0.7);
        cplx got = derive(p).C_plus;
        CHECK(std::abs(got - ref) <= 1e-13 * std::abs(ref));
        CHECK(derive(p).C_minus == std::conj(got));
    }
}

TEST_CASE("psi0 vanishes at the origin like |xi|^alpha")
{
    StableParams p{1.2, 0.4, 0.6, 0.0};
    double r1 = std::abs(psi0(p, 1e-4)), r2 = std::abs(psi0(p, 1e-6));
    CHECK(r1 > 0.0);
    CHECK(std::log(r1 / r2) / std::log(100.0) == doctest::Approx(1.2).epsilon(1e-12));
}

TEST_CASE("drift enters linearly")
{
    StableParams p{1.2, 0.5, 0.5, -0.02};
    StableParams p0 = p;
    p0.mu = 0.0;
    cplx d = psi(p, 1.0) - psi0(p0, 1.0);
    CHECK(std::abs(d - cplx(0.0, 0.02)) < 1e-16);
    StableParams q{1.5, 0.2, 0.8, 0.0};
    CHECK(psi(q, cplx(0.7, 0.1)) == psi0(q, cplx(0.7, 0.1)));
}

TEST_CASE("drift dominates psi for alpha < 1 far out on a ray")
{
    StableParams p = from_beta(0.2, -0.2, 0.2, 0.02);
    cplx xi = std::polar(1e6, pi / 8.0);
    cplx drift = cplx(0.0, -p.mu) * xi;
    double rel = std::abs(psi(p, xi) / drift - 1.0);
    double scale = std::abs(derive(p).C_plus) / p.mu * std::pow(1e6, 0.2 - 1.0);
    CHECK(rel <= 1.01 * scale);
}

TEST_CASE("reflection symmetry of a real law on random cone samples")
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 200; ++k) {
        StableParams p{0.1 + 1.85 * u(rng), u(rng), u(rng), u(rng) - 0.5};
        if (std::abs(p.alpha - 1.0) < 1e-3) continue;
        ConeSpec c = admissible_cone(p, false);
        double th = c.gamma_minus + (c.gamma_plus - c.gamma_minus) * u(rng);
        cplx xi = std::polar(std::exp(6.0 * u(rng) - 3.0), th);
        // X real: E e^{i xi X} conjugates to E e^{-i conj(xi) X}
        cplx a = psi(p, -std::conj(xi)), b = std::conj(psi(p, xi));
        CHECK(std::abs(a - b) <= 1e-13 * (1.0 + std::abs(a)));
    }
}

TEST_CASE("conj(xi) and xi agree only for a symmetric law")
{
    StableParams s{1.4, 0.5, 0.5, 0.0};
    cplx xi(0.8, 0.2);
    CHECK(std::abs(psi(s, std::conj(xi)) - std::conj(psi(s, xi))) < 1e-14);
    StableParams a{1.4, 0.9, 0.1, 0.0};
    CHECK(std::abs(psi(a, std::conj(xi)) - std::conj(psi(a, xi))) > 1e-3);
}

TEST_CASE("classify follows the regime table")
{
    Regime r = classify(from_beta(1.2, 0.0, 0.2, -0.02));
    CHECK(r.tag == RegimeTag::AlphaGt1);
    CHECK(r.alpha_plus == doctest::Approx(0.6));
    CHECK(r.alpha_minus == doctest::Approx(0.6));
    CHECK(r.sinh_bromwich_allowed);

    r = classify(from_beta(0.2, -0.2, 0.2, 0.02));
    CHECK(r.tag == RegimeTag::AlphaLt1PosDrift);
    CHECK(r.alpha_plus == 1.0);
    CHECK(r.alpha_minus == 0.0);
    CHECK(r.alpha_bar == 1.0);
    CHECK_FALSE(r.sinh_bromwich_allowed);

    r = classify(from_beta(0.2, -0.2, 0.2, -0.02));
    CHECK(r.tag == RegimeTag::AlphaLt1NegDrift);
    CHECK(r.alpha_plus == 0.0);
    CHECK(r.alpha_minus == 1.0);

    r = classify(from_beta(0.6, 0.3, 1.0, 0.0));
    CHECK(r.tag == RegimeTag::AlphaLt1ZeroDrift);
    CHECK(r.alpha_plus + r.alpha_minus == doctest::Approx(0.6));
    CHECK(r.alpha_bar == doctest::Approx(0.6));

    CHECK(classify(StableParams{1.0, 0.5, 0.5, 0.3}).tag == RegimeTag::Alpha1Symmetric);
    r = classify(StableParams{1.0, 0.7, 0.3, 0.0});
    CHECK(r.tag == RegimeTag::Alpha1Asymmetric);
    CHECK_FALSE(r.sinh_bromwich_allowed);
}

TEST_CASE("one-sided exponents: no positive jumps gives alpha+ = 1")
{
    Regime r = classify(StableParams{1.5, 0.0, 1.0, 0.0});
    CHECK(r.alpha_plus == doctest::Approx(1.0));
    CHECK(r.alpha_minus == doctest::Approx(0.5));
}

TEST_CASE("admissible cone keeps q + psi off the negative axis")
{
    std::vector<StableParams> ps{from_beta(1.2, 0.0, 0.2, 0.0), from_beta(1.2, -0.2, 0.2, -0.02),
                                 from_beta(0.6, 0.8, 1.0, 0.0), from_beta(1.8, -1.0, 1.0, 0.0),
                                 StableParams{1.0, 0.5, 0.5, 0.4}};
    for (const auto& p : ps) {
        ConeSpec c = admissible_cone(p, true);
        CHECK(c.gamma_minus <= 0.0);
        CHECK(c.gamma_plus >= 0.0);
        CHECK(c.gamma_minus > -pi / 2.0);
        CHECK(c.gamma_plus < pi / 2.0);
        CHECK(c.sigma > 0.0);
        CHECK(c.gamma0 > 0.0);
        double bound = cone_arg_bound(p, true);
        for (int i = 0; i <= 64; ++i) {
            double th = c.gamma_minus + (c.gamma_plus - c.gamma_minus) * i / 64.0;
            for (double rho : {1e-3, 0.1, 1.0, 10.0, 1e3}) {
                // right half of the cone and its mirror image in the imaginary axis
                for (bool left : {false, true}) {
                    cplx xi = std::polar(rho, th);
                    if (left) xi = -std::conj(xi);
                    cplx v = psi(p, xi);
                    if (std::abs(v) < 5e-4) continue;
                    CHECK(std::abs(std::arg(v)) <= bound + 1e-12);
                    // the worst q on the Bromwich cone
                    for (double qa : {-c.gamma0, 0.0, c.gamma0}) {
                        cplx z = std::polar(1.0, pi / 2.0 + qa) + v;
                        CHECK(!(z.imag() == 0.0 && z.real() <= 0.0));
                        CHECK(std::abs(z) > 0.0);
                    }
                }
            }
        }
    }
}

TEST_CASE("symmetric alpha = 1 admits nearly the full right half-plane")
{
    ConeSpec c = admissible_cone(StableParams{1.0, 0.5, 0.5, 0.0}, false);
    CHECK(c.gamma_plus > pi / 2.0 - 0.2);
    CHECK(c.gamma_minus < -(pi / 2.0 - 0.2));
}

TEST_CASE("no complex-q cone for alpha < 1 with drift")
{
    CHECK_THROWS_AS(admissible_cone(from_beta(0.2, -0.2, 0.2, 0.02), true), RegimeError);
    CHECK_NOTHROW(admissible_cone(from_beta(0.2, -0.2, 0.2, 0.02), false));
}

TEST_CASE("scale conventions")
{
    StableParams s = from_beta(1.2, -0.2, 0.2, 0.0, ScaleConvention::Standard);
    CHECK(derive(s).C_plus.real() == doctest::Approx(std::pow(0.2, 1.2)).epsilon(1e-14));
    CHECK((s.c_plus - s.c_minus) / (s.c_plus + s.c_minus) == doctest::Approx(-0.2));
    StableParams t = from_beta(1.2, -0.2, 0.2, 0.0, ScaleConvention::SumOne);
    CHECK(t.c_plus + t.c_minus == doctest::Approx(std::pow(0.2, 1.2)));
    StableParams u = from_beta(1.2, -0.2, 0.2, 0.0, ScaleConvention::AbsCOne);
    CHECK(std::abs(derive(u).C_plus) == doctest::Approx(std::pow(0.2, 1.2)));
    CHECK(parse_convention(to_string(ScaleConvention::AbsCOne)) == ScaleConvention::AbsCOne);
}

TEST_CASE("parameter validation")
{
    CHECK_THROWS(StableParams{2.0, 0.5, 0.5, 0.0}.validate());
    CHECK_THROWS(StableParams{1.5, -0.1, 0.5, 0.0}.validate());
    CHECK_THROWS(StableParams{1.5, 0.0, 0.0, 0.0}.validate());
    CHECK_NOTHROW(StableParams{1.5, 0.0, 0.1, 0.0}.validate());
}

TEST_CASE("cached evaluator equals the free functions")
{
    StableParams p{0.7, 0.2, 0.9, 0.1};
    CharExp ce(p);
    for (cplx xi : {cplx(0.3, 0.1), cplx(-2.0, 0.4), cplx(5.0, -1.0)}) CHECK(std::abs(ce.psi(xi) - psi(p, xi)) < 1e-14);
}
