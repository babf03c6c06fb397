#include <doctest.h>

#include "stabex/errors.hpp"
#include "stabex/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace stabex;

TEST_CASE("splitmix64 reference stream")
{
    std::uint64_t s = 0;
    CHECK(splitmix64(s) == 0xe220a8397b1dcdafULL);
    CHECK(splitmix64(s) == 0x6e789e6aa1b965f4ULL);
}

TEST_CASE("simulated increments match the characteristic function")
{
    const long n = 200000;
    for (const auto& p : {from_beta(0.6, 0.4, 1.0, 0.1), from_beta(1.2, -0.2, 0.2, -0.02), from_beta(1.7, 0.8, 0.5, 0.3),
                          StableParams{1.0, 0.5, 0.5, 0.2}}) {
        McConfig c;
        c.T = 0.8;
        c.n_steps = 1;
        c.n_paths = n;
        c.seed = 3;
        std::vector<double> xs{0.3, 1.0, 4.0};
        std::vector<PathFunctional> fs;
        for (double x : xs) {
            fs.push_back([x](double v, double) { return std::cos(x * v); });
            fs.push_back([x](double v, double) { return std::sin(x * v); });
        }
        auto est = mc_expectations(p, c, fs);
        for (std::size_t i = 0; i < xs.size(); ++i) {
            cplx want = std::exp(-c.T * psi(p, xs[i]));
            INFO("alpha " << p.alpha << " xi " << xs[i]);
            CHECK(std::abs(est[2 * i].mean - want.real()) <= 4.0 / std::sqrt(double(n)));
            CHECK(std::abs(est[2 * i + 1].mean - want.imag()) <= 4.0 / std::sqrt(double(n)));
        }
    }
}

TEST_CASE("Cauchy sampler passes a Kolmogorov-Smirnov test")
{
    std::mt19937_64 rng(17);
    const int n = 20000;
    std::vector<double> x(n);
    for (double& v : x) v = sample_cms(1.0, 0.0, rng);
    std::sort(x.begin(), x.end());
    double d = 0.0;
    for (int i = 0; i < n; ++i) {
        double F = 0.5 + std::atan(x[i]) / std::numbers::pi;
        d = std::max({d, std::abs(F - double(i) / n), std::abs(F - double(i + 1) / n)});
    }
    // 1% critical value
    CHECK(std::sqrt(double(n)) * d < 1.63);
    // median at mu T
    CHECK(cauchy_cdf(0.5, 0.1, 2.0, 0.2) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("one-sided root")
{
    StableParams p{1.5, 0.0, 1.0, 0.2};
    double last = 0.0;
    for (double q : {0.01, 0.5, 1.0, 10.0, 1e3}) {
        double b = one_sided_root(p, q);
        CHECK(b > last);
        CHECK(laplace_exponent(p, b) == doctest::Approx(q).epsilon(1e-12));
        last = b;
    }
    StableParams z{1.5, 0.0, 1.0, 0.0};
    CHECK(std::abs(one_sided_root(z, cplx(2.0, 0.0)) - one_sided_root(z, 2.0)) < 1e-12);
    CHECK_THROWS(one_sided_root(StableParams{1.5, 0.2, 1.0, 0.0}, 1.0));
}

TEST_CASE("one-sided supremum by the two inversions")
{
    StableParams p{1.5, 0.0, 1.0, 0.0};
    // GWR with 2M = 16 stops at a few 1e-5 once alpha > 1
    for (double d : {0.1, 1.0})
        CHECK(std::abs(one_sided_cpdf_sup_sinh(p, 1.0, d) - one_sided_cpdf_sup_gwr(p, 1.0, d)) <= 1e-4);
}

TEST_CASE("high-precision C+ against the fixed mpmath value")
{
    // psi0(2) = C+ 2^1.2 = 3.4438624443136970682 for c+ = c- = 0.5
    cplx c = c_plus_high_precision(1.2, 0.5, 0.5);
    CHECK(c.real() == doctest::Approx(3.4438624443136970682 / std::pow(2.0, 1.2)).epsilon(1e-15));
    CHECK(std::abs(c.imag()) < 1e-15);
}

TEST_CASE("Monte Carlo is reproducible for a seed and any thread count")
{
    StableParams p = from_beta(1.2, -0.2, 0.2, -0.02);
    McConfig c;
    c.T = 0.25;
    c.n_steps = 50;
    c.n_paths = 4000;
    c.seed = 5;
    c.threads = 1;
    auto f = std::vector<PathFunctional>{[](double, double m) { return m <= 0.05 ? 1.0 : 0.0; }};
    auto a = mc_expectations(p, c, f);
    c.threads = 4;
    auto b = mc_expectations(p, c, f);
    CHECK(a[0].mean == b[0].mean);
    CHECK(a[0].stderr_ == b[0].stderr_);
    c.seed = 6;
    CHECK(mc_expectations(p, c, f)[0].mean != a[0].mean);
}
