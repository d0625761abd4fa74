#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "psadf/model_io.hpp"
#include "psadf/optimize.hpp"
#include "psadf/report.hpp"
#include "psadf/simulate.hpp"
#include "psadf/symbolic.hpp"

namespace py = pybind11;
using namespace psadf;
using maxplus::Matrix;

namespace {

py::object to_fraction(const Rational& r) {
    static py::handle fraction = py::object(py::module_::import("fractions").attr("Fraction")).release();
    return fraction(rational_string(r));
}

py::object value_to_py(const maxplus::Value& v) {
    if (!v.finite()) return py::none();
    return to_fraction(v.get());
}

Rational rational_from_py(py::handle h) {
    const std::string s = py::str(h).cast<std::string>();
    auto r = parse_rational(s);
    if (!r) throw py::value_error("cannot read '" + s + "' as an exact rational");
    return *r;
}

Point point_from_dict(const py::dict& d) {
    Point pt;
    for (auto item : d)
        pt[py::str(item.first).cast<std::string>()] = rational_from_py(item.second);
    return pt;
}

py::dict point_to_dict(const Point& pt) {
    py::dict d;
    for (const auto& [name, v] : pt) d[py::str(name)] = to_fraction(v);
    return d;
}

maxplus::Value value_from_py(py::handle h) {
    if (h.is_none()) return maxplus::Value::neg_inf();
    return maxplus::Value(rational_from_py(h));
}

void check_index(const Matrix& m, std::size_t i, std::size_t j) {
    if (i >= m.size() || j >= m.size()) throw py::index_error("matrix index out of range");
}

py::object json_to_py(const nlohmann::json& j) {
    static py::handle loads = py::object(py::module_::import("json").attr("loads")).release();
    return loads(j.dump());
}

struct CyclePair {
    py::object lambda;
    std::vector<std::string> cycle;
};

CyclePair cycle_of(const Matrix& m) {
    maxplus::Mpag g = maxplus::build_mpag(m);
    maxplus::CycleMean cm = maxplus::maximum_cycle_mean(g);
    CyclePair out;
    out.lambda = value_to_py(cm.lambda);
    for (std::size_t n : cm.cycle) out.cycle.push_back(g.labels[n]);
    return out;
}

Matrix concrete_matrix(const ModelFile& mf) {
    if (mf.kind == ModelKind::Sdf) return extract_numeric_matrix(to_concrete(mf));
    if (mf.kind == ModelKind::Sadf) return sadf_worstcase_matrix(to_scenarios(mf));
    throw AnalysisError("parametric model: use extract() or analyze()");
}

nlohmann::json analyze_json(const ModelFile& mf, bool prune) {
    if (mf.kind == ModelKind::Psadf)
        return report_json(mf, worstcase_throughput(mf.graph, {prune}));

    std::map<std::string, Matrix> per_scenario;
    Matrix combined;
    if (mf.kind == ModelKind::Sadf) {
        ScenarioSet s = to_scenarios(mf);
        for (const auto& [name, g] : s.scenarios)
            per_scenario.emplace(name, extract_numeric_matrix(g));
        combined = sadf_worstcase_matrix(s);
    } else {
        combined = extract_numeric_matrix(to_concrete(mf));
    }
    maxplus::Mpag mpag = maxplus::build_mpag(combined);
    maxplus::CycleMean cm = maxplus::maximum_cycle_mean(mpag);
    Rational thr = maxplus::throughput_from_matrix(combined);
    return report_json(mf, per_scenario, combined, mpag, cm, thr);
}

py::dict evaluate_model(const ModelFile& mf, const py::dict& point) {
    if (mf.kind != ModelKind::Psadf) throw AnalysisError("not a psadf model");
    Point pt = complete_point(mf.graph, point_from_dict(point));

    std::vector<std::string> warnings;
    Matrix num = extract_numeric_matrix(psadf::bind(mf.graph, pt, &warnings));

    py::list containing;
    auto mats = symbolic_extract(mf.graph);
    for (std::size_t i = 0; i < mats.size(); ++i)
        if (mats[i].region.contains(pt)) containing.append(i);

    CyclePair cd = cycle_of(num);
    py::dict out;
    out["point"] = point_to_dict(pt);
    out["warnings"] = warnings;
    out["matrix"] = num;
    out["regions_containing"] = containing;
    out["lambda"] = cd.lambda;
    out["critical_cycle"] = cd.cycle;
    out["throughput"] = to_fraction(maxplus::throughput_from_matrix(num));
    return out;
}

// first symbolic/numeric disagreement raises; returns the sample count
long long check_model(const ModelFile& mf, long long samples, unsigned long long seed,
                      const std::optional<std::vector<SymbolicMatrix>>& matrices) {
    if (mf.kind != ModelKind::Psadf) throw AnalysisError("not a psadf model");
    const PsadfGraph& g = mf.graph;
    if (samples <= 0) return 0;
    std::vector<SymbolicMatrix> mats = matrices ? *matrices : symbolic_extract(g);

    const Region omega = Region::of_graph(g);
    std::mt19937_64 rng(seed);
    for (long long i = 0; i < samples; ++i) {
        auto pt = sample_region(omega, rng);
        if (!pt) throw AnalysisError("could not sample a feasible point of the parameter space");
        Matrix num = extract_numeric_matrix(psadf::bind(g, *pt));
        bool covered = false;
        for (const auto& m : mats) {
            if (!m.region.contains(*pt)) continue;
            covered = true;
            Matrix sym = evaluate_symbolic(m, *pt);
            if (sym == num) continue;
            std::ostringstream os;
            os << "check failed at sample " << i + 1 << "/" << samples;
            for (std::size_t r = 0; r < num.size(); ++r)
                for (std::size_t c = 0; c < num.size(); ++c)
                    if (!(sym.at(r, c) == num.at(r, c)))
                        os << "; (" << num.labels[r] << ", " << num.labels[c] << "): symbolic "
                           << sym.at(r, c).str() << " vs numeric " << num.at(r, c).str();
            throw AnalysisError(os.str());
        }
        if (!covered)
            throw AnalysisError("check failed at sample " + std::to_string(i + 1) + "/" +
                                std::to_string(samples) + ": no region contains the point");
    }
    return samples;
}

}  // namespace

PYBIND11_MODULE(_psadf, m) {
    m.doc() = "exact throughput analysis for synchronous and scenario-aware dataflow graphs";

    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<ModelError>(m, "ModelError", PyExc_ValueError);
    py::register_exception<AnalysisError>(m, "AnalysisError", PyExc_RuntimeError);

    py::class_<Matrix>(m, "Matrix", "max-plus characteristic matrix with token labels")
        .def_readonly("labels", &Matrix::labels)
        .def("__len__", &Matrix::size)
        .def(
            "entry",
            [](const Matrix& m_, std::size_t i, std::size_t j) {
                check_index(m_, i, j);
                return value_to_py(m_.at(i, j));
            },
            py::arg("row"), py::arg("col"), "entry as a Fraction, None for -inf")
        .def("rows",
             [](const Matrix& m_) {
                 py::list rows;
                 for (const auto& row : m_.entries) {
                     py::list r;
                     for (const auto& v : row) r.append(value_to_py(v));
                     rows.append(r);
                 }
                 return rows;
             })
        .def("__eq__", [](const Matrix& a, const Matrix& b) { return a == b; },
             py::is_operator())
        .def("__str__", [](const Matrix& m_) { return matrix_text(m_, ""); })
        .def("__repr__", [](const Matrix& m_) {
            return "<Matrix " + std::to_string(m_.size()) + "x" + std::to_string(m_.size()) +
                   ">";
        });

    py::class_<SymbolicMatrix>(m, "SymbolicMatrix",
                               "matrix of elapsed-time polynomials valid on one region")
        .def_readonly("labels", &SymbolicMatrix::labels)
        .def("__len__", [](const SymbolicMatrix& s) { return s.labels.size(); })
        .def_property_readonly("constraints",
                               [](const SymbolicMatrix& s) {
                                   std::vector<std::string> out;
                                   for (const auto& c : s.region.conflicts)
                                       out.push_back(c.str());
                                   return out;
                               })
        .def(
            "entry",
            [](const SymbolicMatrix& s, std::size_t i, std::size_t j) -> py::object {
                if (i >= s.labels.size() || j >= s.labels.size())
                    throw py::index_error("matrix index out of range");
                if (!s.at(i, j)) return py::none();
                return py::str(s.at(i, j)->str());
            },
            py::arg("row"), py::arg("col"), "canonical polynomial string, None for -inf")
        .def("rows",
             [](const SymbolicMatrix& s) {
                 py::list rows;
                 for (const auto& row : s.entries) {
                     py::list r;
                     for (const auto& p : row)
                         r.append(p ? py::object(py::str(p->str())) : py::object(py::none()));
                     rows.append(r);
                 }
                 return rows;
             })
        .def("contains", [](const SymbolicMatrix& s,
                            const py::dict& pt) { return s.region.contains(point_from_dict(pt)); },
             py::arg("point"))
        .def(
            "evaluate",
            [](const SymbolicMatrix& s, const py::dict& pt) {
                return evaluate_symbolic(s, point_from_dict(pt));
            },
            py::arg("point"), "numeric matrix at a full parameter valuation")
        .def("__str__", [](const SymbolicMatrix& s) { return matrix_text(s, ""); });

    py::class_<ModelFile>(m, "Model", "parsed dataflow model")
        .def_property_readonly("kind", [](const ModelFile& mf) { return kind_string(mf.kind); })
        .def_property_readonly("name", [](const ModelFile& mf) { return mf.graph.name; })
        .def_property_readonly("text", [](const ModelFile& mf) { return print_model(mf); })
        .def("validate", [](const ModelFile& mf) { return validate(mf.graph); },
             "list of model defects, empty when well formed")
        .def("repetition_vector",
             [](const ModelFile& mf) {
                 py::dict out;
                 for (const auto& [actor, count] : repetition_vector(mf.graph))
                     out[py::str(actor)] = count.str();
                 return out;
             })
        .def("schedule",
             [](const ModelFile& mf) {
                 return schedule_string(quasi_static_schedule(mf.graph));
             })
        .def("matrix", &concrete_matrix,
             "characteristic matrix; for scenario models the combined worst case")
        .def("scenario_matrices",
             [](const ModelFile& mf) {
                 if (mf.kind != ModelKind::Sadf) throw AnalysisError("not a sadf model");
                 py::dict out;
                 for (const auto& [name, g] : to_scenarios(mf).scenarios)
                     out[py::str(name)] = extract_numeric_matrix(g);
                 return out;
             })
        .def("scenario_notes",
             [](const ModelFile& mf) {
                 if (mf.kind != ModelKind::Sadf) throw AnalysisError("not a sadf model");
                 std::vector<std::string> notes;
                 sadf_worstcase_matrix(to_scenarios(mf), &notes);
                 return notes;
             },
             "over-approximation warnings for the scenario combination")
        .def("extract", [](const ModelFile& mf) { return symbolic_extract(mf.graph); },
             "symbolic matrices, one per region of the rate space")
        .def(
            "matrix_at",
            [](const ModelFile& mf, const py::dict& pt) {
                if (mf.kind != ModelKind::Psadf) throw AnalysisError("not a psadf model");
                Point p = complete_point(mf.graph, point_from_dict(pt));
                return extract_numeric_matrix(psadf::bind(mf.graph, p));
            },
            py::arg("point"), "numeric matrix with all parameters bound")
        .def(
            "analyze",
            [](const ModelFile& mf, bool prune) { return json_to_py(analyze_json(mf, prune)); },
            py::arg("prune") = true,
            "full throughput report as plain dicts, values as exact num/den strings")
        .def("evaluate", &evaluate_model, py::arg("point"),
             "numeric matrix, containing regions and cycle data at one point")
        .def("check", &check_model, py::arg("samples") = 100, py::arg("seed") = 0,
             py::arg("matrices") = py::none(),
             "cross-validate symbolic matrices against simulation at sampled points")
        .def("__str__", [](const ModelFile& mf) { return print_model(mf); })
        .def("__repr__", [](const ModelFile& mf) {
            return "<Model '" + mf.graph.name + "' (" + kind_string(mf.kind) + ")>";
        });

    m.def("parse", [](const std::string& text) { return parse_model(text); }, py::arg("text"));
    m.def("load", [](const std::string& path) { return load_model(path); }, py::arg("path"));

    m.def(
        "cycle_mean",
        [](const Matrix& m_) {
            CyclePair cd = cycle_of(m_);
            return py::make_tuple(cd.lambda, cd.cycle);
        },
        py::arg("matrix"),
        "maximum cycle mean and one critical cycle; mean is None when acyclic");
    m.def(
        "throughput", [](const Matrix& m_) { return to_fraction(throughput_from_matrix(m_)); },
        py::arg("matrix"));
    m.def(
        "evolve",
        [](const Matrix& m_, const py::sequence& gamma0, unsigned k) {
            maxplus::Vector v;
            for (auto h : gamma0) v.push_back(value_from_py(h));
            if (v.size() != m_.size())
                throw py::value_error("vector length does not match the matrix");
            py::list out;
            for (const auto& x : evolve(m_, v, k)) out.append(value_to_py(x));
            return out;
        },
        py::arg("matrix"), py::arg("gamma0"), py::arg("k"),
        "k-step evolution of the token timestamp vector");

    m.def(
        "report_text",
        [](const py::dict& report) {
            static py::handle dumps = py::object(py::module_::import("json").attr("dumps")).release();
            return report_text(nlohmann::json::parse(dumps(report).cast<std::string>()));
        },
        py::arg("report"), "readable rendering of an analyze() report");

    m.attr("__version__") = "0.1.0";
}
