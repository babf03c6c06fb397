#include <doctest.h>

#include "stabex/errors.hpp"
#include "stabex/tables.hpp"

#include <cmath>

using namespace stabex;

TEST_CASE("fixtures are complete")
{
    const auto& t = table_fixtures();
    REQUIRE(t.size() == 8);
    for (int i = 0; i < 8; ++i) {
        CHECK(t[i].id == i + 1);
        for (const auto& r : t[i].rows) CHECK(r.ref.size() == t[i].a.size());
    }
    CHECK(table_fixture(6).T == 10.0);
    CHECK(table_fixture(3).gwr_only);
    CHECK_FALSE(table_fixture(2).gwr_only);
    CHECK(table_fixture(7).kind == TableKind::Joint);
    CHECK(table_fixture(7).rows.size() == 6);
    CHECK(table_fixture(8).alpha == 0.2);
    CHECK(table_fixture(5).a.back() == 600.0);
    CHECK_THROWS_AS(table_fixture(9), DomainError);
}

TEST_CASE("calibration picks the standard convention at scale 0.2")
{
    Calibration c = calibrate();
    CHECK(c.convention == ScaleConvention::Standard);
    CHECK(c.scale == 0.2);
    CHECK(std::abs(c.fitted - 0.2) < 1e-9);
    REQUIRE(c.candidates.size() == 3);
    // the other conventions land far from a round number
    CHECK(std::abs(c.candidates[1].second - 0.1427) < 1e-3);
    CHECK(std::abs(c.candidates[2].second - 0.2286) < 1e-3);
}

TEST_CASE("sinh reproduces tables 1, 2 and 8")
{
    EvalRequest base;
    base.eps = 1e-12;
    base.threads = 2;
    for (int id : {1, 2, 8}) {
        TableReport r = run_table(table_fixture(id), default_calibration(), base);
        INFO("table " << id);
        CHECK(r.pass);
        for (const auto& e : r.entries) CHECK(std::abs(e.error) <= r.gate);
    }
}

TEST_CASE("gates")
{
    CHECK(table_gate(table_fixture(1), Method::SinhBromwich) == 1e-9);
    CHECK(table_gate(table_fixture(7), Method::SinhBromwich) == 1e-8);
    CHECK(table_gate(table_fixture(4), Method::GWR) == 1e-6);
    CHECK(table_gate(table_fixture(2), Method::GWR) == 1e-7);
}
