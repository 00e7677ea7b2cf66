#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "beamres/errors.hpp"
#include "beamres/io.hpp"
#include "beamres/oracle.hpp"
#include "beamres/rootfind.hpp"
#include "beamres/scattering.hpp"
#include "beamres/version.hpp"

namespace py = pybind11;
using namespace beamres;

PYBIND11_MODULE(_core, m) {
    m.attr("__version__") = version;

    py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

    py::class_<CompactCoeff>(m, "CompactCoeff")
        .def_static("zero", &CompactCoeff::zero, py::arg("support_end"))
        .def_static("step", &CompactCoeff::step, py::arg("value"), py::arg("x0"), py::arg("x1"), py::arg("support_end"))
        .def_static(
            "from_monomial",
            [](double support_end, const std::vector<std::tuple<double, double, std::vector<double>>>& pieces) {
                std::vector<MonomialPiece> mp;
                for (const auto& [x0, x1, c] : pieces) mp.push_back({x0, x1, c});
                return CompactCoeff::from_monomial(support_end, mp);
            },
            py::arg("support_end"), py::arg("pieces"), "pieces: [(x0, x1, [c0, c1, ...])], local monomials in x - x0")
        .def("__call__", &CompactCoeff::operator(), py::arg("x"))
        .def("integral", py::overload_cast<>(&CompactCoeff::integral, py::const_))
        .def("derivative", &CompactCoeff::derivative)
        .def_property_readonly("support_end", &CompactCoeff::support_end);

    py::class_<CoeffPair>(m, "CoeffPair")
        .def(py::init<CompactCoeff, CompactCoeff>(), py::arg("p"), py::arg("q"))
        .def_readonly("p", &CoeffPair::p)
        .def_readonly("q", &CoeffPair::q)
        .def_readonly("gamma", &CoeffPair::gamma)
        .def_readonly("p0", &CoeffPair::p0)
        .def_readonly("q0", &CoeffPair::q0)
        .def_readonly("p_plus", &CoeffPair::p_plus);

    m.def(
        "load_pq", [](const std::string& path) { return io::pq_from_json(io::load_json(path), path); },
        py::arg("path"));

    m.def(
        "det",
        [](const CoeffPair& c, cd k, double tol, int max_order) {
            DetOptions o;
            o.tol = tol;
            o.max_order = max_order;
            py::gil_scoped_release release;
            return det_D(c, k, o).value;
        },
        py::arg("c"), py::arg("k"), py::arg("tol") = 1e-10, py::arg("max_order") = 1024);

    m.def(
        "scattering_matrix", [](const CoeffPair& c, double k) { return S_matrix(c, k).S; }, py::arg("c"),
        py::arg("k"));

    m.def(
        "jost_d", [](const CompactCoeff& p, cd k) { return jost_d(p, k).d; }, py::arg("p"), py::arg("k"));

    m.def(
        "asymptotic_seeds",
        [](double p_plus, double gamma, int n_first, int n_last) {
            std::vector<std::pair<cd, cd>> out;
            for (const auto& s : asymptotic_seeds(p_plus, gamma, n_first, n_last)) out.emplace_back(s.k_plus, s.k_minus);
            return out;
        },
        py::arg("p_plus"), py::arg("gamma"), py::arg("n_first"), py::arg("n_last"));

    m.def(
        "winding_number",
        [](const CoeffPair& c, cd center, double radius) {
            py::gil_scoped_release release;
            return winding_number(c, center, radius).winding;
        },
        py::arg("c"), py::arg("center"), py::arg("radius"));

    m.def(
        "newton_zero",
        [](const CoeffPair& c, cd k0) {
            NewtonResult r;
            {
                py::gil_scoped_release release;
                r = newton_zero(c, k0);
            }
            return py::make_tuple(r.k, r.converged, r.residual);
        },
        py::arg("c"), py::arg("k0"), "returns (k, converged, residual)");

    m.def(
        "kappa_integral",
        [](const CompactCoeff& a_off, const CompactCoeff& b_off) { return kappa_integral(BeamCoeffs{a_off, b_off}); },
        py::arg("a_offset"), py::arg("b_offset"));
}
