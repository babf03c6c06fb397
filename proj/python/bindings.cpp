#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "stabex/distributions.hpp"
#include "stabex/errors.hpp"
#include "stabex/tables.hpp"

namespace py = pybind11;
using namespace stabex;

namespace {

EvalRequest make_request(const StableParams& p, double T, const std::string& method, double eps, int threads)
{
    EvalRequest r;
    r.params = p;
    r.T = T;
    r.method = parse_method(method);
    r.eps = eps;
    r.threads = threads;
    r.validate();
    return r;
}

py::dict info_dict(const EvalInfo& i)
{
    py::dict d;
    d["method"] = to_string(i.method);
    d["est_error"] = i.est_error;
    d["n_l"] = i.n_l;
    d["n_plus"] = i.n_plus;
    d["n_minus"] = i.n_minus;
    d["degraded"] = i.degraded;
    return d;
}

} // namespace

PYBIND11_MODULE(_stabex, m)
{
    m.doc() = "Distributions of a stable Levy process and of its running supremum";

    auto base = py::register_exception<Error>(m, "StabexError", PyExc_RuntimeError);
    auto regime = py::register_exception<RegimeError>(m, "RegimeError", base.ptr());
    py::register_exception<DivergenceError>(m, "DivergenceError", regime.ptr());
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);

    py::class_<StableParams>(m, "StableParams")
        .def(py::init([](double alpha, double c_plus, double c_minus, double mu) {
                 StableParams p{alpha, c_plus, c_minus, mu};
                 p.validate();
                 return p;
             }),
             py::arg("alpha"), py::arg("c_plus"), py::arg("c_minus"), py::arg("mu") = 0.0)
        .def_readwrite("alpha", &StableParams::alpha)
        .def_readwrite("c_plus", &StableParams::c_plus)
        .def_readwrite("c_minus", &StableParams::c_minus)
        .def_readwrite("mu", &StableParams::mu)
        .def("__repr__", [](const StableParams& p) {
            return "StableParams(alpha=" + std::to_string(p.alpha) + ", c_plus=" + std::to_string(p.c_plus) +
                   ", c_minus=" + std::to_string(p.c_minus) + ", mu=" + std::to_string(p.mu) + ")";
        });

    m.def(
        "from_beta",
        [](double alpha, double beta, double scale, double mu, const std::string& conv) {
            return from_beta(alpha, beta, scale, mu, parse_convention(conv));
        },
        py::arg("alpha"), py::arg("beta"), py::arg("scale"), py::arg("mu") = 0.0, py::arg("convention") = "standard");

    m.def("psi", py::overload_cast<const StableParams&, cplx>(&psi), py::arg("params"), py::arg("xi"));
    m.def("regime", [](const StableParams& p) { return to_string(classify(p).tag); });

    m.def(
        "cpdf_x",
        [](const StableParams& p, double T, std::vector<double> y, const std::string& method, double eps, int threads) {
            EvalRequest r = make_request(p, T, method, eps, threads);
            py::gil_scoped_release nogil;
            EvalResult res = cpdf_x_many(r, y);
            py::gil_scoped_acquire gil;
            return py::make_tuple(res.values, info_dict(res.info));
        },
        py::arg("params"), py::arg("T"), py::arg("y"), py::arg("method") = "sinh", py::arg("eps") = 1e-10,
        py::arg("threads") = 0, "P[X_T <= y] for each y; returns (values, info)");

    m.def(
        "cpdf_sup",
        [](const StableParams& p, double T, std::vector<double> a, const std::string& method, double eps, int threads) {
            EvalRequest r = make_request(p, T, method, eps, threads);
            py::gil_scoped_release nogil;
            EvalResult res = cpdf_sup_many(r, a);
            py::gil_scoped_acquire gil;
            return py::make_tuple(res.values, info_dict(res.info));
        },
        py::arg("params"), py::arg("T"), py::arg("a"), py::arg("method") = "sinh", py::arg("eps") = 1e-10,
        py::arg("threads") = 0, "P[sup_{t<=T} X_t <= a] for each a; returns (values, info)");

    m.def(
        "joint_cpdf",
        [](const StableParams& p, double T, double x1, double x2, double a1, double a2, const std::string& method,
           double eps, int threads) {
            EvalRequest r = make_request(p, T, method, eps, threads);
            py::gil_scoped_release nogil;
            return joint_cpdf(r, x1, x2, a1, a2);
        },
        py::arg("params"), py::arg("T"), py::arg("x1"), py::arg("x2"), py::arg("a1"), py::arg("a2"),
        py::arg("method") = "sinh", py::arg("eps") = 1e-10, py::arg("threads") = 0);

    m.def(
        "exchange",
        [](const StableParams& p, double T, double x1, double x2, double beta_strike, double lam,
           const std::string& method, double eps, int threads) {
            EvalRequest r = make_request(p, T, method, eps, threads);
            py::gil_scoped_release nogil;
            return exchange_expectation(r, x1, x2, beta_strike, lam);
        },
        py::arg("params"), py::arg("T"), py::arg("x1"), py::arg("x2"), py::arg("beta_strike"), py::arg("lam"),
        py::arg("method") = "sinh", py::arg("eps") = 1e-8, py::arg("threads") = 0);

    m.def("table_reference", [](int id) {
        const TableFixture& t = table_fixture(id);
        py::list rows;
        for (const auto& r : t.rows) rows.append(py::make_tuple(r.label, r.mu, r.a2, r.ref));
        return py::make_tuple(t.alpha, t.beta, t.T, t.a, rows);
    });
}
