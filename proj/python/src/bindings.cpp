#include "anyon/algebra.hpp"
#include "anyon/hubbard.hpp"

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

namespace py = pybind11;
using namespace anyon;

namespace {

// Python-side model handle; shares the immutable C++ model.
struct PyModel {
    ModelPtr ptr;
};

Charge charge_of(const AnyonModel& m, const std::string& label)
{
    for (Charge c = 0; c < m.num_types(); ++c)
        if (m.label(c) == label)
            return c;
    throw ArgumentError("unknown charge label '" + label + "'");
}

py::list basis_states(const FusionTreeBasis& b)
{
    const auto& m = b.model();
    py::list out;
    for (int i = 0; i < b.dim(); ++i) {
        const auto& s = b.state(i);
        std::vector<std::string> leaves, internal;
        for (Charge c : s.leaves)
            leaves.push_back(m.label(c));
        for (Charge c : s.internal)
            internal.push_back(m.label(c));
        out.append(py::make_tuple(leaves, internal, m.label(s.total)));
    }
    return out;
}

} // namespace

PYBIND11_MODULE(_core, mod)
{
    mod.doc() = "C++ core of anyonops";

    // Translators run most-recent first, so the base class goes first.
    py::register_exception<ArgumentError>(mod, "ArgumentError", PyExc_ValueError);
    py::register_exception<ModelError>(mod, "ModelError", PyExc_ValueError);
    py::register_exception<NotObservableError>(mod, "NotObservableError", PyExc_ValueError);
    py::register_exception<NotLocalError>(mod, "NotLocalError", PyExc_ValueError);
    py::register_exception<NotExpressibleError>(mod, "NotExpressibleError", PyExc_ValueError);

    mod.def("builtin_names", &builtin_names);

    py::class_<PyModel>(mod, "Model")
        .def_static("builtin", [](const std::string& name) { return PyModel{share(builtin(name))}; })
        .def_static("from_json", [](const std::string& text) { return PyModel{share(load_model(text))}; })
        .def_property_readonly("name", [](const PyModel& m) { return m.ptr->name(); })
        .def_property_readonly("labels", [](const PyModel& m) { return m.ptr->labels(); })
        .def("to_json", [](const PyModel& m) { return model_to_json(*m.ptr); })
        .def("f_symbol",
             [](const PyModel& m, const std::string& a, const std::string& b, const std::string& c,
                const std::string& d, const std::string& e, const std::string& f) {
                 const auto& x = *m.ptr;
                 return x.f_symbol(charge_of(x, a), charge_of(x, b), charge_of(x, c), charge_of(x, d),
                                   charge_of(x, e), charge_of(x, f));
             })
        .def(
            "validate",
            [](const PyModel& m, bool full, double tol) {
                auto rep = validate_model(*m.ptr, full ? ValidationLevel::full : ValidationLevel::basic, tol);
                py::dict checks;
                for (const auto& c : rep.checks)
                    checks[py::str(c.name)] = py::make_tuple(c.passed, c.max_residual);
                return py::make_tuple(rep.passed(), checks);
            },
            py::arg("full") = true, py::arg("tol") = kDefaultTolerance);

    py::class_<LadderSet, std::shared_ptr<LadderSet>>(mod, "LadderSet")
        .def(py::init([](const PyModel& m, int n) { return std::make_shared<LadderSet>(m.ptr, n); }),
             py::arg("model"), py::arg("n_modes"))
        .def_property_readonly("n_modes", &LadderSet::n_modes)
        .def_property_readonly("dim", [](const LadderSet& s) { return s.basis()->dim(); })
        .def("states", [](const LadderSet& s) { return basis_states(*s.basis()); })
        .def("count", [](const LadderSet& s, const std::string& a) { return s.count(charge_of(s.model(), a)); })
        .def(
            "annihilator",
            [](const LadderSet& s, const std::string& a, int k, int j) {
                return s.annihilator(charge_of(s.model(), a), k, j).dense();
            },
            py::arg("particle"), py::arg("mode"), py::arg("j") = 0)
        .def(
            "element",
            [](const LadderSet& s, const std::string& a, int k, const std::string& b0, const std::string& c0) {
                const auto& m = s.model();
                return s.element(charge_of(m, a), k, charge_of(m, b0), charge_of(m, c0)).dense();
            },
            py::arg("particle"), py::arg("mode"), py::arg("rest"), py::arg("combined"))
        .def("braid", [](const LadderSet& s, int k) { return s.braid(k).dense(); })
        .def("fibonacci_pair", [](const LadderSet& s, int k) {
            auto [a, b] = fibonacci_pair(s, k);
            return py::make_tuple(a.dense(), b.dense());
        });

    mod.def(
        "decompose",
        [](const LadderSet& s, const Eigen::MatrixXcd& op, const std::vector<int>& sites, double tol) {
            auto d = decompose_observable(s, SparseOperator(s.basis(), op), sites, tol);
            py::dict out;
            out["polynomial"] = d.polynomial.to_string(s.model());
            out["json"] = d.polynomial.to_json(s.model());
            out["terms"] = d.polynomial.size();
            out["residual"] = d.residual;
            out["method"] = d.method;
            out["matrix"] = evaluate(d.polynomial, s).dense();
            return out;
        },
        py::arg("ladder_set"), py::arg("op"), py::arg("sites"), py::arg("tol") = kDefaultTolerance);

    mod.def(
        "verify_relations",
        [](const LadderSet& s, double tol) {
            auto rep = verify_relations(s, tol);
            py::list out;
            for (const auto& e : rep.entries) {
                py::dict d;
                d["name"] = e.name;
                d["residual"] = e.residual;
                d["asserted"] = e.asserted;
                d["passed"] = e.passed;
                out.append(d);
            }
            return out;
        },
        py::arg("ladder_set"), py::arg("tol") = kDefaultTolerance);

    mod.def("fock_words", [](const LadderSet& s) {
        py::list out;
        for (int i = 0; i < s.basis()->dim(); ++i) {
            auto w = fock_word(s, i);
            out.append(py::make_tuple(w.word.to_string(s.model()), w.residual));
        }
        return out;
    });
    mod.def("kernel_dimension", [](const LadderSet& s) { return kernel_intersection_dimension(s); });
    mod.def("closure_dimension", [](const LadderSet& s) {
        std::vector<SparseOperator> gens;
        for (Charge a : s.particles())
            for (int k = 1; k <= s.n_modes(); ++k)
                for (int j = 0; j < s.count(a); ++j) {
                    gens.push_back(s.annihilator(a, k, j));
                    gens.push_back(s.creator(a, k, j));
                }
        return algebra_closure(gens).dimension;
    });

    mod.def(
        "hubbard_hamiltonian",
        [](int rungs, double t, double mu, const std::string& indexing) {
            auto spec = build_lattice(rungs, parse_indexing(indexing));
            LadderSet set(share(builtin("fibonacci")), spec.n_modes());
            return build_hamiltonian(set, spec, {t, mu}).dense();
        },
        py::arg("rungs"), py::arg("t") = 1.0, py::arg("mu") = 0.0, py::arg("indexing") = "geometric");

    mod.def(
        "hubbard_spectrum",
        [](int rungs, double t, double mu, const std::string& indexing, const std::string& sector) {
            auto spec = build_lattice(rungs, parse_indexing(indexing));
            auto model = share(builtin("fibonacci"));
            LadderSet set(model, spec.n_modes());
            auto h = build_hamiltonian(set, spec, {t, mu});
            auto s = diagonalize(h, charge_of(*model, sector));
            return py::make_tuple(s.dimension, s.eigenvalues);
        },
        py::arg("rungs"), py::arg("t") = 1.0, py::arg("mu") = 0.0, py::arg("indexing") = "geometric",
        py::arg("sector") = "e");
}
