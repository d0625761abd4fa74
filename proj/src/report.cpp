#include "psadf/report.hpp"

#include <sstream>
#include <stdexcept>

#include "psadf/polynomial.hpp"
#include "psadf/rational.hpp"

namespace psadf {

using nlohmann::json;

json matrix_to_json(const maxplus::Matrix& m) {
    json j;
    j["labels"] = m.labels;
    json rows = json::array();
    for (std::size_t i = 0; i < m.size(); ++i) {
        json row = json::array();
        for (std::size_t k = 0; k < m.size(); ++k) {
            const maxplus::Value& v = m.at(i, k);
            if (v.finite())
                row.push_back(rational_string(v.get()));
            else
                row.push_back(nullptr);
        }
        rows.push_back(std::move(row));
    }
    j["entries"] = std::move(rows);
    return j;
}

maxplus::Matrix matrix_from_json(const json& j) {
    maxplus::Matrix m = maxplus::Matrix::neg_inf(j.at("labels").get<std::vector<std::string>>());
    const json& rows = j.at("entries");
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t k = 0; k < m.size(); ++k) {
            const json& cell = rows.at(i).at(k);
            if (cell.is_null()) continue;
            auto r = parse_rational(cell.get<std::string>());
            if (!r)
                throw std::invalid_argument("matrix entry is not a rational: " +
                                            cell.get<std::string>());
            m.at(i, k) = maxplus::Value(*r);
        }
    return m;
}

json symbolic_matrix_to_json(const SymbolicMatrix& m) {
    json j;
    j["labels"] = m.labels;
    json rows = json::array();
    for (std::size_t i = 0; i < m.labels.size(); ++i) {
        json row = json::array();
        for (std::size_t k = 0; k < m.labels.size(); ++k) {
            if (m.entries[i][k])
                row.push_back(m.entries[i][k]->str());
            else
                row.push_back(nullptr);
        }
        rows.push_back(std::move(row));
    }
    j["entries"] = std::move(rows);
    return j;
}

SymbolicMatrix symbolic_matrix_from_json(const json& j, const Region& region,
                                         const std::set<std::string>& durations) {
    SymbolicMatrix m;
    m.labels = j.at("labels").get<std::vector<std::string>>();
    m.region = region;
    const std::size_t n = m.labels.size();
    m.entries.assign(n, std::vector<std::optional<Polynomial>>(n));
    const json& rows = j.at("entries");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            const json& cell = rows.at(i).at(k);
            if (cell.is_null()) continue;
            m.entries[i][k] = parse_polynomial(cell.get<std::string>(), durations);
        }
    return m;
}

namespace {

json model_json(const ModelFile& m) {
    return json{{"kind", kind_string(m.kind)}, {"name", m.graph.name}, {"text", print_model(m)}};
}

json mpag_json(const maxplus::Mpag& g) {
    json j;
    j["nodes"] = g.labels;
    json edges = json::array();
    for (const auto& e : g.edges)
        edges.push_back(json{{"from", g.labels[e.from]},
                             {"to", g.labels[e.to]},
                             {"weight", rational_string(e.weight)}});
    j["edges"] = std::move(edges);
    return j;
}

json throughput_json(const Rational& thr) {
    return json{{"fraction", rational_string(thr)}, {"decimal", approx_decimal(thr)}};
}

json cycle_json(const std::vector<std::string>& labels, const std::vector<std::size_t>& cycle) {
    json c = json::array();
    for (std::size_t i : cycle) c.push_back(labels[i]);
    return c;
}

}  // namespace

json report_json(const ModelFile& m, const ThroughputAnalysis& an) {
    json j;
    j["model"] = model_json(m);
    json rv = json::object();
    for (const auto& [a, e] : an.repetition) rv[a] = e.str();
    j["repetition_vector"] = std::move(rv);
    j["schedule"] = schedule_string(an.schedule);

    json regions = json::array();
    for (const auto& r : an.regions) {
        json jr;
        json cons = json::array();
        for (const auto& c : r.matrix.region.conflicts) cons.push_back(c.str());
        jr["constraints"] = std::move(cons);
        jr["matrix"] = symbolic_matrix_to_json(r.matrix);
        jr["maxima"] = matrix_to_json(r.maxima);
        json entries = json::array();
        for (const auto& e : r.entries) {
            json je;
            je["row"] = r.matrix.labels[e.row];
            je["col"] = r.matrix.labels[e.col];
            je["objective"] = e.objective.str();
            je["value"] = rational_string(e.value);
            json am = json::object();
            for (const auto& [p, v] : e.argmax) am[p] = rational_string(v);
            je["argmax"] = std::move(am);
            entries.push_back(std::move(je));
        }
        jr["entries"] = std::move(entries);
        regions.push_back(std::move(jr));
    }
    j["regions"] = std::move(regions);

    j["combined_matrix"] = matrix_to_json(an.combined);
    j["mpag"] = mpag_json(an.mpag);
    j["lambda"] = rational_string(an.lambda);
    j["critical_cycle"] = cycle_json(an.mpag.labels, an.critical_cycle);
    j["throughput"] = throughput_json(an.throughput);
    return j;
}

json report_json(const ModelFile& m, const std::map<std::string, maxplus::Matrix>& scenario_matrices,
                 const maxplus::Matrix& combined, const maxplus::Mpag& mpag,
                 const maxplus::CycleMean& cm, const Rational& throughput) {
    json j;
    j["model"] = model_json(m);
    if (!scenario_matrices.empty()) {
        json sm = json::object();
        for (const auto& [name, mat] : scenario_matrices) sm[name] = matrix_to_json(mat);
        j["scenario_matrices"] = std::move(sm);
    }
    j["combined_matrix"] = matrix_to_json(combined);
    j["mpag"] = mpag_json(mpag);
    j["lambda"] = rational_string(cm.lambda.get());
    j["critical_cycle"] = cycle_json(mpag.labels, cm.cycle);
    j["throughput"] = throughput_json(throughput);
    return j;
}

namespace {

std::string pretty_cell(const json& cell, bool rationals) {
    if (cell.is_null()) return "-inf";
    const std::string s = cell.get<std::string>();
    if (!rationals) return s;
    auto r = parse_rational(s);
    return r ? pretty_rational(*r) : s;
}

std::string grid_text(const json& m, const std::string& indent, bool rationals) {
    std::ostringstream os;
    const auto labels = m.at("labels").get<std::vector<std::string>>();
    const json& rows = m.at("entries");
    std::size_t width = 0;
    for (const auto& l : labels) width = std::max(width, l.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        os << indent << labels[i] << std::string(width - labels[i].size(), ' ') << ": [";
        for (std::size_t k = 0; k < labels.size(); ++k) {
            if (k) os << ", ";
            os << pretty_cell(rows.at(i).at(k), rationals);
        }
        os << "]\n";
    }
    return os.str();
}

std::string pretty_num(const json& v) {
    auto r = parse_rational(v.get<std::string>());
    return r ? pretty_rational(*r) : v.get<std::string>();
}

std::string point_text(const json& pt) {
    std::ostringstream os;
    bool first = true;
    for (auto it = pt.begin(); it != pt.end(); ++it) {
        if (!first) os << ", ";
        first = false;
        os << it.key() << "=" << pretty_num(it.value());
    }
    return os.str();
}

}  // namespace

std::string report_text(const json& j) {
    std::ostringstream os;
    const json& model = j.at("model");
    os << "model: " << model.at("name").get<std::string>() << " ("
       << model.at("kind").get<std::string>() << ")\n";

    if (j.contains("repetition_vector")) {
        os << "repetition vector: ";
        bool first = true;
        for (auto it = j["repetition_vector"].begin(); it != j["repetition_vector"].end(); ++it) {
            if (!first) os << ", ";
            first = false;
            os << it.key() << "=" << it.value().get<std::string>();
        }
        os << "\n";
    }
    if (j.contains("schedule")) os << "schedule: " << j["schedule"].get<std::string>() << "\n";

    if (j.contains("regions")) {
        std::size_t n = 1;
        for (const auto& r : j["regions"]) {
            os << "\nregion " << n++ << ":";
            if (r.at("constraints").empty()) {
                os << " (no branch constraints)\n";
            } else {
                bool first = true;
                for (const auto& c : r["constraints"]) {
                    os << (first ? " " : ", ") << c.get<std::string>();
                    first = false;
                }
                os << "\n";
            }
            os << "  symbolic matrix:\n" << grid_text(r.at("matrix"), "    ", false);
            os << "  entry maxima:\n" << grid_text(r.at("maxima"), "    ", true);
            for (const auto& e : r.at("entries"))
                os << "  max (" << e.at("row").get<std::string>() << ","
                   << e.at("col").get<std::string>() << ") " << e.at("objective").get<std::string>()
                   << " = " << pretty_num(e.at("value")) << " at " << point_text(e.at("argmax"))
                   << "\n";
        }
        os << "\n";
    }

    if (j.contains("scenario_matrices")) {
        os << "scenario matrices:\n";
        for (auto it = j["scenario_matrices"].begin(); it != j["scenario_matrices"].end(); ++it) {
            os << "  " << it.key() << ":\n";
            os << grid_text(it.value(), "    ", true);
        }
    }

    os << "combined matrix:\n" << grid_text(j.at("combined_matrix"), "  ", true);

    const json& mpag = j.at("mpag");
    os << "mpag edges:\n";
    for (const auto& e : mpag.at("edges"))
        os << "  " << e.at("from").get<std::string>() << " -> " << e.at("to").get<std::string>()
           << ": " << pretty_num(e.at("weight")) << "\n";

    os << "lambda = " << pretty_num(j.at("lambda")) << "\n";
    os << "critical cycle: ";
    bool first = true;
    for (const auto& l : j.at("critical_cycle")) {
        if (!first) os << " -> ";
        first = false;
        os << l.get<std::string>();
    }
    os << "\n";
    os << "throughput = " << j.at("throughput").at("fraction").get<std::string>() << " (~"
       << j.at("throughput").at("decimal").get<std::string>() << ")\n";
    return os.str();
}

std::string matrix_text(const maxplus::Matrix& m, const std::string& indent) {
    return grid_text(matrix_to_json(m), indent, true);
}

std::string matrix_text(const SymbolicMatrix& m, const std::string& indent) {
    return grid_text(symbolic_matrix_to_json(m), indent, false);
}

}  // namespace psadf
