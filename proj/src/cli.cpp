#include "psadf/cli.hpp"

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "psadf/graph.hpp"
#include "psadf/maxplus.hpp"
#include "psadf/model_io.hpp"
#include "psadf/optimize.hpp"
#include "psadf/polynomial.hpp"
#include "psadf/rational.hpp"
#include "psadf/report.hpp"
#include "psadf/simulate.hpp"
#include "psadf/symbolic.hpp"

namespace psadf {
namespace {

using nlohmann::json;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw UsageError("cannot write '" + path + "'");
    out << text;
}

void emit_outputs(const json& report, const std::string& json_path,
                  const std::string& report_path) {
    if (!json_path.empty()) write_file(json_path, report.dump(2) + "\n");
    if (!report_path.empty()) write_file(report_path, report_text(report));
}

json model_echo(const ModelFile& mf) {
    return json{{"kind", kind_string(mf.kind)}, {"name", mf.graph.name}, {"text", print_model(mf)}};
}

std::string point_str(const Point& pt) {
    std::ostringstream os;
    bool first = true;
    for (const auto& [p, v] : pt) {
        if (!first) os << ", ";
        first = false;
        os << p << "=" << pretty_rational(v);
    }
    return os.str();
}

std::string throughput_line(const Rational& thr) {
    return "throughput = " + pretty_rational(thr) + " (~" + approx_decimal(thr) + ")";
}

void print_region_heading(std::size_t number, const Region& r) {
    std::cout << "region " << number << ":";
    if (r.conflicts.empty()) std::cout << " (no branch constraints)";
    for (std::size_t k = 0; k < r.conflicts.size(); ++k)
        std::cout << (k ? ", " : " ") << r.conflicts[k].str();
    std::cout << "\n";
}

struct CycleData {
    maxplus::Mpag mpag;
    maxplus::CycleMean cm;
    Rational throughput;
};

CycleData cycle_data(const maxplus::Matrix& m) {
    CycleData out;
    out.mpag = maxplus::build_mpag(m);
    out.cm = maxplus::maximum_cycle_mean(out.mpag);
    if (!out.cm.lambda.finite())
        throw AnalysisError("no cycle: throughput is not bounded by initial tokens");
    if (out.cm.lambda.get() <= 0)
        throw AnalysisError("maximum cycle mean is not positive; throughput undefined");
    out.throughput = Rational(1) / out.cm.lambda.get();
    return out;
}

void print_cycle_summary(const std::vector<std::string>& labels,
                         const std::vector<std::size_t>& cycle, const Rational& lambda,
                         const Rational& thr) {
    std::cout << "lambda = " << pretty_rational(lambda) << "\n";
    std::cout << "critical cycle: ";
    for (std::size_t i = 0; i < cycle.size(); ++i)
        std::cout << (i ? " -> " : "") << labels[cycle[i]];
    std::cout << "\n" << throughput_line(thr) << "\n";
}

int cmd_throughput(const std::string& file, const std::string& json_path,
                   const std::string& report_path, bool no_prune) {
    ModelFile mf = load_model(file);
    std::cout << "model: " << mf.graph.name << " (" << kind_string(mf.kind) << ")\n";

    if (mf.kind == ModelKind::Psadf) {
        MaximizeOptions opts;
        opts.prune = !no_prune;
        ThroughputAnalysis an = worstcase_throughput(mf.graph, opts);
        std::cout << "schedule: " << schedule_string(an.schedule) << "\n";
        std::cout << "regions: " << an.regions.size() << "\n";
        std::cout << "combined worst-case matrix:\n" << matrix_text(an.combined, "  ");
        print_cycle_summary(an.mpag.labels, an.critical_cycle, an.lambda, an.throughput);
        emit_outputs(report_json(mf, an), json_path, report_path);
        return 0;
    }

    std::map<std::string, maxplus::Matrix> per_scenario;
    maxplus::Matrix combined;
    if (mf.kind == ModelKind::Sdf) {
        combined = extract_numeric_matrix(to_concrete(mf));
    } else {
        ScenarioSet ss = to_scenarios(mf);
        std::vector<std::string> diags;
        for (const auto& [name, cg] : ss.scenarios)
            per_scenario.emplace(name, extract_numeric_matrix(cg));
        combined = sadf_worstcase_matrix(ss, &diags);
        for (const auto& d : diags) std::cerr << "note: " << d << "\n";
        for (const auto& [name, m] : per_scenario) {
            std::cout << "scenario " << name << ":\n" << matrix_text(m, "  ");
        }
    }
    CycleData cd = cycle_data(combined);
    std::cout << (mf.kind == ModelKind::Sdf ? "matrix:\n" : "combined worst-case matrix:\n")
              << matrix_text(combined, "  ");
    print_cycle_summary(cd.mpag.labels, cd.cm.cycle, cd.cm.lambda.get(), cd.throughput);
    emit_outputs(report_json(mf, per_scenario, combined, cd.mpag, cd.cm, cd.throughput),
                 json_path, report_path);
    return 0;
}

int cmd_extract(const std::string& file, const std::string& json_path) {
    ModelFile mf = load_model(file);
    if (mf.kind != ModelKind::Psadf) throw AnalysisError("not a psadf model");
    std::vector<SymbolicMatrix> mats = symbolic_extract(mf.graph);

    json regions = json::array();
    for (std::size_t i = 0; i < mats.size(); ++i) {
        print_region_heading(i + 1, mats[i].region);
        std::cout << matrix_text(mats[i], "  ");
        json jr;
        json cons = json::array();
        for (const auto& c : mats[i].region.conflicts) cons.push_back(c.str());
        jr["constraints"] = std::move(cons);
        jr["matrix"] = symbolic_matrix_to_json(mats[i]);
        regions.push_back(std::move(jr));
    }
    if (!json_path.empty()) {
        json j;
        j["model"] = model_echo(mf);
        j["regions"] = std::move(regions);
        write_file(json_path, j.dump(2) + "\n");
    }
    return 0;
}

Point parse_point(const std::string& text, const PsadfGraph& g) {
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t");
        const auto e = s.find_last_not_of(" \t");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    Point pt;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw UsageError("--point entries must look like name=value, got '" + item + "'");
        const std::string key = trim(item.substr(0, eq));
        const std::string val = trim(item.substr(eq + 1));
        if (!g.rate_params.count(key) && !g.duration_params.count(key))
            throw UsageError("unknown parameter '" + key + "' in --point");
        auto r = parse_rational(val);
        if (!r) throw UsageError("cannot parse value '" + val + "' for parameter '" + key + "'");
        pt[key] = *r;
    }
    for (const auto& [p, iv] : g.rate_params) {
        (void)iv;
        if (!pt.count(p)) throw UsageError("incomplete point: missing rate parameter '" + p + "'");
    }
    std::vector<std::string> undetermined;
    pt = complete_point(g, pt, &undetermined);
    if (!undetermined.empty()) {
        std::string msg = "incomplete point: duration parameter";
        msg += undetermined.size() > 1 ? "s" : "";
        for (std::size_t i = 0; i < undetermined.size(); ++i)
            msg += (i ? ", '" : " '") + undetermined[i] + "'";
        msg += undetermined.size() > 1 ? " are neither assigned nor pinned by the constraints"
                                       : " is neither assigned nor pinned by the constraints";
        throw UsageError(msg);
    }
    return pt;
}

int cmd_evaluate(const std::string& file, const std::string& point_text,
                 const std::string& json_path) {
    ModelFile mf = load_model(file);
    if (mf.kind != ModelKind::Psadf) throw AnalysisError("not a psadf model");
    Point pt = parse_point(point_text, mf.graph);

    std::vector<std::string> warnings;
    ConcreteSdf cg = psadf::bind(mf.graph, pt, &warnings);
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
    maxplus::Matrix num = extract_numeric_matrix(cg);

    std::cout << "point: " << point_str(pt) << "\n";
    std::cout << "matrix:\n" << matrix_text(num, "  ");

    std::vector<SymbolicMatrix> mats = symbolic_extract(mf.graph);
    json containing = json::array();
    bool any = false;
    for (std::size_t i = 0; i < mats.size(); ++i) {
        if (!mats[i].region.contains(pt)) continue;
        any = true;
        std::cout << "contained in ";
        print_region_heading(i + 1, mats[i].region);
        json cons = json::array();
        for (const auto& c : mats[i].region.conflicts) cons.push_back(c.str());
        containing.push_back(std::move(cons));
    }
    if (!any) std::cout << "the point lies outside every region\n";

    CycleData cd = cycle_data(num);
    print_cycle_summary(cd.mpag.labels, cd.cm.cycle, cd.cm.lambda.get(), cd.throughput);

    if (!json_path.empty()) {
        json j;
        j["model"] = model_echo(mf);
        json jp = json::object();
        for (const auto& [p, v] : pt) jp[p] = rational_string(v);
        j["point"] = std::move(jp);
        j["warnings"] = warnings;
        j["matrix"] = matrix_to_json(num);
        j["regions_containing"] = std::move(containing);
        j["lambda"] = rational_string(cd.cm.lambda.get());
        j["throughput"] = json{{"fraction", rational_string(cd.throughput)},
                               {"decimal", approx_decimal(cd.throughput)}};
        write_file(json_path, j.dump(2) + "\n");
    }
    return 0;
}

ConflictConstraint parse_conflict(const std::string& s, const std::set<std::string>& durations) {
    const auto ge = s.find(" >= ");
    const auto le = s.find(" <= ");
    if (ge != std::string::npos)
        return {parse_polynomial(s.substr(0, ge), durations),
                parse_polynomial(s.substr(ge + 4), durations)};
    if (le != std::string::npos)
        return {parse_polynomial(s.substr(le + 4), durations),
                parse_polynomial(s.substr(0, le), durations)};
    throw UsageError("cannot parse constraint '" + s + "'");
}

std::vector<SymbolicMatrix> load_matrices(const std::string& path, const PsadfGraph& g) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw UsageError("cannot parse '" + path + "': " + e.what());
    }
    std::set<std::string> durations;
    for (const auto& [p, d] : g.duration_params) {
        (void)d;
        durations.insert(p);
    }
    std::vector<SymbolicMatrix> out;
    try {
        const json& regions = j.is_object() && j.contains("regions") ? j.at("regions") : j;
        for (const auto& jr : regions) {
            Region region = Region::of_graph(g);
            for (const auto& c : jr.at("constraints"))
                region = region.with_conflict(parse_conflict(c.get<std::string>(), durations));
            out.push_back(symbolic_matrix_from_json(jr.at("matrix"), region, durations));
        }
    } catch (const json::exception& e) {
        throw UsageError("unexpected matrix JSON in '" + path + "': " + e.what());
    } catch (const std::invalid_argument& e) {
        throw UsageError("unexpected matrix JSON in '" + path + "': " + e.what());
    }
    return out;
}

int cmd_check(const std::string& file, long long samples, unsigned long long seed,
              const std::string& matrices_path) {
    ModelFile mf = load_model(file);
    if (mf.kind != ModelKind::Psadf) throw AnalysisError("not a psadf model");
    const PsadfGraph& g = mf.graph;
    if (samples <= 0) {
        std::cout << "0 samples; nothing checked\n";
        return 0;
    }

    std::vector<SymbolicMatrix> mats =
        matrices_path.empty() ? symbolic_extract(g) : load_matrices(matrices_path, g);

    const Region omega = Region::of_graph(g);
    std::mt19937_64 rng(seed);
    for (long long i = 0; i < samples; ++i) {
        std::optional<Point> pt = sample_region(omega, rng);
        if (!pt)
            throw AnalysisError("could not sample a feasible point of the parameter space");
        maxplus::Matrix num = extract_numeric_matrix(psadf::bind(g, *pt));

        bool covered = false;
        for (const auto& m : mats) {
            if (!m.region.contains(*pt)) continue;
            covered = true;
            maxplus::Matrix sym = evaluate_symbolic(m, *pt);
            if (sym == num) continue;
            std::cout << "check failed at sample " << i + 1 << "/" << samples << "\n";
            std::cout << "point: " << point_str(*pt) << "\n";
            for (std::size_t r = 0; r < num.size(); ++r)
                for (std::size_t c = 0; c < num.size(); ++c)
                    if (!(sym.at(r, c) == num.at(r, c)))
                        std::cout << "  (" << num.labels[r] << ", " << num.labels[c]
                                  << "): symbolic " << sym.at(r, c).str() << " vs numeric "
                                  << num.at(r, c).str() << "\n";
            return 1;
        }
        if (!covered) {
            std::cout << "check failed at sample " << i + 1 << "/" << samples << "\n";
            std::cout << "point: " << point_str(*pt) << "\n";
            std::cout << "  no region contains the point\n";
            return 1;
        }
    }
    std::cout << "check passed: " << samples << "/" << samples << " samples\n";
    return 0;
}

}  // namespace

int run_cli(int argc, char** argv) {
    CLI::App app{"exact worst-case throughput analysis for (parametric) synchronous dataflow"};
    app.name("psadf");
    app.require_subcommand(1);

    std::string file, json_path, report_path, point_text, matrices_path;
    long long samples = 100;
    unsigned long long seed = 0;
    bool no_prune = false;

    CLI::App* thr = app.add_subcommand("throughput", "worst-case throughput of a model file");
    thr->add_option("file", file, "model file")->required();
    thr->add_option("--json", json_path, "write the JSON report here");
    thr->add_option("--report", report_path, "write the readable report here");
    thr->add_flag("--no-prune", no_prune,
                  "disable monotone lattice pruning (full-enumeration certification)");

    CLI::App* ext =
        app.add_subcommand("extract", "symbolic characteristic matrices of a parametric model");
    ext->add_option("file", file, "model file")->required();
    ext->add_option("--json", json_path, "write regions and matrices as JSON here");

    CLI::App* ev = app.add_subcommand("evaluate", "numeric analysis at one parameter point");
    ev->add_option("file", file, "model file")->required();
    ev->add_option("--point", point_text, "comma-separated name=value for every parameter")
        ->required();
    ev->add_option("--json", json_path, "write the evaluation as JSON here");

    CLI::App* chk = app.add_subcommand(
        "check", "cross-validate symbolic matrices against simulation at sampled points");
    chk->add_option("file", file, "model file")->required();
    chk->add_option("--samples", samples, "number of sampled points")
        ->check(CLI::NonNegativeNumber);
    chk->add_option("--seed", seed, "random seed");
    chk->add_option("--matrices", matrices_path,
                    "take symbolic matrices from this JSON file (as written by extract --json) "
                    "instead of re-extracting");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (thr->parsed()) return cmd_throughput(file, json_path, report_path, no_prune);
        if (ext->parsed()) return cmd_extract(file, json_path);
        if (ev->parsed()) return cmd_evaluate(file, point_text, json_path);
        return cmd_check(file, samples, seed, matrices_path);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ModelError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const AnalysisError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace psadf
