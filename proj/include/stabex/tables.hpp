#pragma once

#include "stabex/charexp.hpp"
#include "stabex/distributions.hpp"

#include <string>
#include <utility>
#include <vector>

namespace stabex {

enum class TableKind { CpdfSup, Joint };

struct TableRow {
    std::string label;
    double mu = 0.0;
    double a2 = 0.0;            // joint tables: row level
    std::vector<double> ref;    // published values
    double band_lo = 0.0;       // published cross-array difference range (tables 3-5)
    double band_hi = 0.0;
};

struct TableFixture {
    int id = 0;
    TableKind kind = TableKind::CpdfSup;
    double alpha = 1.2;
    double beta = -0.2;
    double T = 0.25;
    std::vector<double> a;      // levels (cpdf) or a1 - a2 columns (joint)
    std::vector<TableRow> rows;
    bool gwr_only = false;      // alpha < 1 with drift
};

const std::vector<TableFixture>& table_fixtures();
const TableFixture& table_fixture(int id);

// How the published (alpha, beta) map to (c+, c-): convention and scale.
struct Calibration {
    ScaleConvention convention = ScaleConvention::Standard;
    double scale = 0.2;
    double fitted = 0.2;        // scale fitted in the standard convention
    std::vector<std::pair<ScaleConvention, double>> candidates;
};

Calibration default_calibration();

// Fits the scale on the first point of table 1 and keeps the convention whose implied
// scale is closest to a two-significant-digit number.
Calibration calibrate(double eps = 1e-11, int threads = 0);

StableParams table_params(const TableFixture& t, const Calibration& c, double mu);

struct TableEntry {
    std::string row;
    double a = 0.0;             // level, or a1 - a2 for joint tables
    double a2 = 0.0;
    double value = 0.0;
    double ref = 0.0;
    double error = 0.0;         // value - ref
    double cross = 0.0;         // difference to the second contour configuration (gwr-only tables)
};

struct TableReport {
    int id = 0;
    Method method = Method::SinhBromwich;
    std::vector<TableEntry> entries;
    std::vector<EvalInfo> info;
    double seconds = 0.0;
    double gate = 0.0;
    bool pass = true;
    std::string gate_kind;      // "error" or "cross"
};

// Gate applied to a table for a method (errors, or cross-array differences for gwr-only tables).
double table_gate(const TableFixture& t, Method m);

TableReport run_table(const TableFixture& t, const Calibration& c, const EvalRequest& base);

} // namespace stabex
