#include "stabex/distributions.hpp"
#include "stabex/errors.hpp"
#include "stabex/laplace.hpp"
#include "stabex/oracle.hpp"
#include "stabex/parallel.hpp"
#include "stabex/tables.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace stabex;
using json = nlohmann::json;

namespace {

enum Exit { ok = 0, bad_input = 1, regime = 2, tolerance = 3 };

struct Flags {
    std::string config;
    std::string method;
    std::optional<double> eps;
    std::optional<int> threads;
    std::optional<std::uint64_t> seed;
    std::string csv;
    bool no_timing = false;
};

struct RunConfig {
    EvalRequest req;
    std::uint64_t seed = 1;
    json points = json::array();
};

std::string num(double v)
{
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, r.ptr);
}

// Rows joined with ',' and terminated by '\n' whatever the platform.
class Csv {
public:
    explicit Csv(const std::string& path)
    {
        if (!path.empty()) {
            file_.open(path, std::ios::binary);
            if (!file_) throw DomainError("cannot open " + path + " for writing");
        }
    }
    void row(const std::vector<std::string>& cells)
    {
        std::string line;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) line += ',';
            line += cells[i];
        }
        line += '\n';
        std::ostream& os = file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout;
        os.write(line.data(), static_cast<std::streamsize>(line.size()));
    }

private:
    std::ofstream file_;
};

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where)
{
    if (!obj.is_object()) throw DomainError(where + ": expected an object");
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key())) throw DomainError(where + ": unknown key '" + it.key() + "'");
}

double get_num(const json& obj, const char* key, double dflt)
{
    if (!obj.contains(key)) return dflt;
    if (!obj[key].is_number()) throw DomainError(std::string("'") + key + "' must be a number");
    return obj[key].get<double>();
}

StableParams params_from(const json& j)
{
    if (!j.contains("alpha")) throw DomainError("config: 'alpha' is required");
    double alpha = get_num(j, "alpha", 0.0);
    double mu = get_num(j, "mu", 0.0);
    std::string conv = j.value("convention", std::string(""));
    bool direct = j.contains("c_plus") || j.contains("c_minus");
    if (direct) {
        if (j.contains("beta") || j.contains("scale"))
            throw DomainError("config: give either c_plus/c_minus or beta/scale, not both");
        if (!conv.empty() && conv != "custom") throw DomainError("config: c_plus/c_minus go with convention 'custom'");
        StableParams p{alpha, get_num(j, "c_plus", 0.0), get_num(j, "c_minus", 0.0), mu};
        p.validate();
        return p;
    }
    if (conv == "custom") throw DomainError("config: convention 'custom' needs c_plus and c_minus");
    ScaleConvention c = conv.empty() ? ScaleConvention::Standard : parse_convention(conv);
    return from_beta(alpha, get_num(j, "beta", 0.0), get_num(j, "scale", 1.0), mu, c);
}

RunConfig load_config(const Flags& f)
{
    if (f.config.empty()) throw DomainError("--config FILE is required for this subcommand");
    std::ifstream in(f.config);
    if (!in) throw DomainError("cannot read " + f.config);
    json j;
    try {
        j = json::parse(in, nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw DomainError(std::string("config: ") + e.what());
    }
    reject_unknown(j,
                   {"alpha", "beta", "scale", "convention", "c_plus", "c_minus", "mu", "T", "method", "eps",
                    "threads", "seed", "points"},
                   "config");
    RunConfig rc;
    rc.req.params = params_from(j);
    rc.req.T = get_num(j, "T", 1.0);
    if (j.contains("method")) rc.req.method = parse_method(j["method"].get<std::string>());
    rc.req.eps = get_num(j, "eps", rc.req.eps);
    rc.req.threads = static_cast<int>(get_num(j, "threads", 0));
    rc.seed = static_cast<std::uint64_t>(get_num(j, "seed", 1));
    if (j.contains("points")) rc.points = j["points"];
    if (!rc.points.is_array() || rc.points.empty()) throw DomainError("config: 'points' must be a non-empty array");

    if (!f.method.empty()) rc.req.method = parse_method(f.method);
    if (f.eps) rc.req.eps = *f.eps;
    if (f.threads) rc.req.threads = *f.threads;
    if (f.seed) rc.seed = *f.seed;
    rc.req.validate();
    return rc;
}

// GWR cannot reach arbitrary eps in double precision; its extrapolation spread is held to 1e-6.
bool within_tolerance(const EvalInfo& info, double eps)
{
    double tol = info.method == Method::GWR ? std::max(eps, 1e-6) : eps;
    return !info.degraded && info.est_error <= tol;
}

std::vector<std::string> info_cells(const EvalInfo& info, double eps, double ms, bool timing)
{
    return {to_string(info.method), num(eps), num(info.est_error), timing ? num(ms) : "",
            std::to_string(info.n_l), std::to_string(info.n_plus), std::to_string(info.n_minus)};
}

const std::vector<std::string> info_header{"method", "eps_requested", "est_error", "wall_time_ms",
                                           "n_l", "n_plus", "n_minus"};

double ms_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

int cmd_eval(const std::string& sub, const Flags& f)
{
    RunConfig rc = load_config(f);
    if (rc.req.threads > 0) set_default_threads(rc.req.threads);
    Csv out(f.csv);
    const EvalRequest& req = rc.req;
    bool ok_all = true;

    auto emit = [&](std::vector<std::string> inputs, double value, const EvalInfo& info, double ms) {
        inputs.push_back(num(value));
        for (auto& c : info_cells(info, req.eps, ms, !f.no_timing)) inputs.push_back(c);
        out.row(inputs);
        ok_all = ok_all && within_tolerance(info, req.eps);
    };
    auto header = [&](std::vector<std::string> names) {
        names.push_back("value");
        names.insert(names.end(), info_header.begin(), info_header.end());
        out.row(names);
    };

    if (sub == "cpdf-x" || sub == "cpdf-sup") {
        std::vector<double> x, a, y;
        for (const auto& p : rc.points) {
            reject_unknown(p, {"x", "a"}, "point");
            x.push_back(get_num(p, "x", 0.0));
            a.push_back(get_num(p, "a", 0.0));
            y.push_back(a.back() - x.back());
        }
        auto t0 = std::chrono::steady_clock::now();
        EvalResult r = sub == "cpdf-x" ? cpdf_x_many(req, y) : cpdf_sup_many(req, y);
        double ms = ms_since(t0);
        header({"x", "a"});
        for (std::size_t i = 0; i < y.size(); ++i) emit({num(x[i]), num(a[i])}, r.values[i], r.info, ms);
    } else if (sub == "joint-cpdf") {
        std::vector<JointPoint> pts;
        for (const auto& p : rc.points) {
            reject_unknown(p, {"x1", "x2", "a1", "a2"}, "point");
            pts.push_back({get_num(p, "x1", 0.0), get_num(p, "x2", 0.0), get_num(p, "a1", 0.0), get_num(p, "a2", 0.0)});
        }
        auto t0 = std::chrono::steady_clock::now();
        JointResult r = joint_cpdf_many(req, pts);
        double ms = ms_since(t0);
        header({"x1", "x2", "a1", "a2"});
        for (std::size_t i = 0; i < pts.size(); ++i)
            emit({num(pts[i].x1), num(pts[i].x2), num(pts[i].a1), num(pts[i].a2)}, r.v[i], r.info, ms);
    } else {
        header({"x1", "x2", "beta_strike", "lambda"});
        for (const auto& p : rc.points) {
            reject_unknown(p, {"x1", "x2", "beta_strike", "lambda"}, "point");
            double x1 = get_num(p, "x1", 0.0), x2 = get_num(p, "x2", 0.0);
            double b = get_num(p, "beta_strike", 1.0), l = get_num(p, "lambda", 0.0);
            auto t0 = std::chrono::steady_clock::now();
            EvalResult r = exchange_expectation_info(req, x1, x2, b, l);
            emit({num(x1), num(x2), num(b), num(l)}, r.values[0], r.info, ms_since(t0));
        }
    }
    if (!ok_all) {
        std::cerr << "stabex: estimated error above the requested tolerance\n";
        return tolerance;
    }
    return ok;
}

int cmd_bench(const std::vector<int>& ids, bool skip_calibration, const Flags& f)
{
    EvalRequest base;
    base.method = f.method.empty() ? Method::SinhBromwich : parse_method(f.method);
    if (base.method == Method::DirectFourier) throw RegimeError("bench-tables: fourier does not apply to the supremum");
    base.eps = f.eps.value_or(1e-10);
    base.threads = f.threads.value_or(0);
    if (base.threads > 0) set_default_threads(base.threads);

    Calibration cal = default_calibration();
    if (!skip_calibration) {
        cal = calibrate(1e-11, base.threads);
        std::cerr << "calibration: fitted scale " << num(cal.fitted) << ", convention " << to_string(cal.convention)
                  << ", scale " << num(cal.scale) << "\n";
    }

    Csv out(f.csv);
    out.row({"table", "row", "a2", "a", "value", "reference", "abs_error", "cross_diff", "gate_kind", "gate",
             "method", "cpu_ms"});
    bool pass = true;
    for (int id : ids) {
        TableReport r = run_table(table_fixture(id), cal, base);
        for (const auto& e : r.entries)
            out.row({std::to_string(id), e.row, num(e.a2), num(e.a), num(e.value), num(e.ref), num(std::abs(e.error)),
                     r.gate_kind == "cross" ? num(std::abs(e.cross)) : "", r.gate_kind, num(r.gate),
                     to_string(r.method), f.no_timing ? "" : num(r.seconds * 1000.0)});
        std::cerr << "table " << id << ": " << (r.pass ? "pass" : "FAIL") << " (" << r.gate_kind << " gate "
                  << num(r.gate) << ", " << num(r.seconds) << " s)\n";
        pass = pass && r.pass;
    }
    return pass ? ok : tolerance;
}

struct SelfTest {
    int failed = 0;
    void check(const std::string& name, double err, double tol)
    {
        bool good = std::isfinite(err) && err <= tol;
        if (!good) ++failed;
        std::cout << (good ? "PASS " : "FAIL ") << name << "  err=" << num(err) << " tol=" << num(tol) << "\n";
    }
};

int cmd_selftest(bool corrupt_gaver, const Flags& f)
{
    if (f.threads) set_default_threads(*f.threads);
    set_gaver_corruption(corrupt_gaver);
    SelfTest st;

    // transform pairs
    {
        double T = 1.0;
        GwrConfig g;
        double e1 = std::abs(gwr_invert([](double q) { return 1.0 / (q + 1.0); }, T, g).value - std::exp(-T));
        double e2 = std::abs(gwr_invert([](double q) { return 1.0 / (q * q); }, T, g).value - T);
        st.check("gwr 1/(q+1)", e1, 2e-8);
        st.check("gwr 1/q^2", e2, 1e-6);
        double es = std::abs(gaver_stehfest([](double q) { return 1.0 / (q + 1.0); }, T) - std::exp(-T));
        st.check("gaver-stehfest 1/(q+1)", es, 1e-4);
        StableParams p{1.5, 0.5, 0.5, 0.0};
        BromwichConfig cfg = choose_contour(p, T, admissible_cone(p, true), 1e-14);
        double eb = std::abs(sinh_bromwich_invert([](cplx q) { return 1.0 / (q + 1.0); }, T, cfg) - std::exp(-T));
        st.check("sinh-bromwich 1/(q+1)", eb, 1e-13);
    }

    // Wiener-Hopf identity phi+ phi- = q/(q + psi)
    {
        struct Case {
            const char* name;
            StableParams p;
            bool complex_q;
        };
        std::vector<Case> cases{{"alpha>1", from_beta(1.2, -0.2, 0.2, -0.02), true},
                                {"alpha<1 no drift", from_beta(0.6, 0.4, 1.0, 0.0), true},
                                {"alpha<1 drift", from_beta(0.6, -0.2, 0.5, 0.05), false},
                                {"alpha=1 symmetric", {1.0, 0.5, 0.5, 0.1}, true}};
        for (const auto& c : cases) {
            GridRequest r;
            r.eps = 1e-10;
            r.complex_q = c.complex_q;
            r.q_min = 0.5;
            r.probe_rho = 20.0;
            WhfGrids g = build_grids(c.p, admissible_cone(c.p, c.complex_q), r);
            std::vector<cplx> qs{0.5, 3.0};
            if (c.complex_q) qs.push_back(cplx(1.0, 2.0));
            double worst = 0.0;
            for (cplx q : qs)
                for (double x : {-10.0, -1.0, -0.1, 0.1, 1.0, 10.0}) {
                    WhfValue v = whf_value(c.p, g, q, cplx(x, 0.0));
                    worst = std::max(worst, std::abs(v.phi_plus * v.phi_minus - q / (q + psi(c.p, cplx(x, 0.0)))));
                }
            st.check(std::string("wiener-hopf ") + c.name, worst, 1e-9);
        }
    }

    // oracles
    {
        EvalRequest req;
        req.params = {1.0, 0.3, 0.3, 0.1};
        req.T = 0.7;
        req.method = Method::DirectFourier;
        req.eps = 1e-14;
        std::vector<double> y{-2.0, -0.3, 0.0, 0.07, 0.5, 3.0};
        EvalResult r = cpdf_x_many(req, y);
        double worst = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i)
            worst = std::max(worst, std::abs(r.values[i] - cauchy_cdf(0.3, 0.1, 0.7, y[i])));
        st.check("cauchy closed form", worst, 1e-12);

        StableParams p{1.5, 0.0, 1.0, 0.0};
        req.params = p;
        req.T = 0.5;
        req.method = Method::SinhBromwich;
        std::vector<double> d{0.1, 0.5, 1.5};
        EvalResult s = cpdf_sup_many(req, d);
        worst = 0.0;
        for (std::size_t i = 0; i < d.size(); ++i)
            worst = std::max(worst, std::abs(s.values[i] - one_sided_cpdf_sup_sinh(p, req.T, d[i])));
        st.check("spectrally negative supremum", worst, 1e-9);

        McConfig mc;
        mc.T = 0.5;
        mc.n_steps = 1;
        mc.n_paths = 20000;
        mc.seed = f.seed.value_or(1);
        StableParams q = from_beta(1.3, 0.5, 0.4, 0.05);
        auto est = mc_expectations(q, mc, {[](double x, double) { return x <= 0.1 ? 1.0 : 0.0; }});
        req.params = q;
        req.method = Method::DirectFourier;
        double v = cpdf_x(req, 0.0, 0.1);
        st.check("monte carlo cpdf (4 sigma)", std::abs(v - est[0].mean), 4.0 * est[0].stderr_);
    }

    std::cout << (st.failed ? std::to_string(st.failed) + " check(s) failed" : std::string("all checks passed"))
              << "\n";
    return st.failed ? 1 : ok;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Distributions of a stable Levy process and its supremum"};
    app.require_subcommand(1);
    app.fallthrough();

    Flags f;
    std::optional<double> eps;
    std::optional<int> threads;
    std::optional<std::uint64_t> seed;
    app.add_option("--config", f.config, "JSON run configuration");
    app.add_option("--method", f.method, "inversion method")->check(CLI::IsMember({"sinh", "gwr", "fourier"}));
    app.add_option("--eps", eps, "target accuracy")->check(CLI::PositiveNumber);
    app.add_option("--threads", threads, "worker threads (0: all cores)")->check(CLI::NonNegativeNumber);
    app.add_option("--seed", seed, "seed for Monte Carlo checks");
    app.add_option("--csv", f.csv, "write CSV here instead of stdout");
    app.add_flag("--no-timing", f.no_timing, "leave wall-time columns empty (byte-reproducible output)");

    std::vector<std::string> eval_subs{"cpdf-x", "cpdf-sup", "joint-cpdf", "exchange"};
    std::vector<CLI::App*> evals;
    evals.push_back(app.add_subcommand("cpdf-x", "P[x + X_T <= a]"));
    evals.push_back(app.add_subcommand("cpdf-sup", "P[x + sup X <= a]"));
    evals.push_back(app.add_subcommand("joint-cpdf", "P[x1 + X_T <= a1, max(x2, x1 + sup X) <= a2]"));
    evals.push_back(app.add_subcommand("exchange", "E[(beta (x1 + X_T) - M)_+ exp(-lambda M)]"));

    auto* bench = app.add_subcommand("bench-tables", "reproduce the reference tables");
    std::vector<int> tables;
    bool skip_cal = false;
    bench->add_option("--table", tables, "table ids (default: all)")->check(CLI::Range(1, 8));
    bench->add_flag("--skip-calibration", skip_cal, "use the standard scale 0.2 without fitting");

    auto* self = app.add_subcommand("selftest", "identity, transform-pair and oracle checks");
    bool corrupt = false;
    self->add_flag("--corrupt-gaver", corrupt, "mutation test: corrupt the Gaver functionals");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }
    f.eps = eps;
    f.threads = threads;
    f.seed = seed;

    try {
        for (std::size_t i = 0; i < evals.size(); ++i)
            if (*evals[i]) return cmd_eval(eval_subs[i], f);
        if (*bench) {
            if (tables.empty())
                for (int i = 1; i <= 8; ++i) tables.push_back(i);
            return cmd_bench(tables, skip_cal, f);
        }
        return cmd_selftest(corrupt, f);
    } catch (const RegimeError& e) {
        std::cerr << "stabex: " << e.what() << "\n";
        return regime;
    } catch (const ToleranceError& e) {
        std::cerr << "stabex: " << e.what() << "\n";
        return tolerance;
    } catch (const std::exception& e) {
        std::cerr << "stabex: " << e.what() << "\n";
        return bad_input;
    }
}
