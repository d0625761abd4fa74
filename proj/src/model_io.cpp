#include "psadf/model_io.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace psadf {

std::string kind_string(ModelKind k) {
    switch (k) {
        case ModelKind::Sdf:
            return "sdf";
        case ModelKind::Sadf:
            return "sadf";
        case ModelKind::Psadf:
            return "psadf";
    }
    return {};
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

bool is_ident(const std::string& s) {
    if (s.empty()) return false;
    if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
    for (char c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    return true;
}

class Parser {
public:
    explicit Parser(std::istream& in) : in_(in) {}

    ModelFile run() {
        std::string raw;
        while (std::getline(in_, raw)) {
            ++lineno_;
            auto hash = raw.find('#');
            if (hash != std::string::npos) raw.erase(hash);
            std::vector<std::string> toks = tokenize(raw);
            if (toks.empty()) continue;
            dispatch(toks, raw);
        }
        finish();
        return std::move(model_);
    }

private:
    std::istream& in_;
    int lineno_ = 0;
    bool have_header_ = false;
    enum class Section { Base, Scenario, Fsm } section_ = Section::Base;
    ModelFile model_;
    struct PendingModifier {
        int line;
        std::string param, actor;
    };
    std::vector<PendingModifier> pending_modifiers_;
    int fsm_line_ = 0;

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(lineno_, msg); }

    static std::vector<std::string> tokenize(const std::string& line) {
        std::string padded;
        for (char c : line) {
            if (c == '[' || c == ']' || c == ',') {
                padded += ' ';
                padded += c;
                padded += ' ';
            } else {
                padded += c;
            }
        }
        std::istringstream is(padded);
        std::vector<std::string> toks;
        std::string t;
        while (is >> t) toks.push_back(t);
        return toks;
    }

    Integer integer(const std::string& tok) const {
        try {
            if (tok.empty()) throw std::runtime_error("");
            std::size_t digits = tok[0] == '-' || tok[0] == '+' ? 1 : 0;
            if (digits == tok.size()) throw std::runtime_error("");
            for (std::size_t i = digits; i < tok.size(); ++i)
                if (!std::isdigit(static_cast<unsigned char>(tok[i]))) throw std::runtime_error("");
            return Integer(tok);
        } catch (...) {
            fail("expected an integer, got '" + tok + "'");
        }
    }

    Rational rational(const std::string& tok) const {
        auto r = parse_rational(tok);
        if (!r) fail("expected a number, got '" + tok + "'");
        return *r;
    }

    std::string ident(const std::string& tok, const char* what) const {
        if (!is_ident(tok)) fail(std::string("expected ") + what + ", got '" + tok + "'");
        return tok;
    }

    void expect(const std::vector<std::string>& toks, std::size_t i, const char* word) const {
        if (i >= toks.size() || toks[i] != word)
            fail("expected '" + std::string(word) + "'" +
                 (i < toks.size() ? " before '" + toks[i] + "'" : " at end of line"));
    }

    RateExpr rate_expr(const std::string& tok) const {
        RateExpr r;
        for (const std::string& f : split(tok, '*')) {
            if (f.empty()) fail("malformed rate expression '" + tok + "'");
            if (std::isdigit(static_cast<unsigned char>(f[0]))) {
                r.coeff *= Rational(integer(f));
                continue;
            }
            auto caret = f.find('^');
            std::string id = f.substr(0, caret);
            int e = 1;
            if (caret != std::string::npos) {
                Integer ei = integer(f.substr(caret + 1));
                if (ei < 1 || ei > 32) fail("rate exponent out of range in '" + f + "'");
                e = ei.convert_to<int>();
            }
            if (!is_ident(id)) fail("malformed rate factor '" + f + "'");
            if (!model_.graph.rate_params.count(id))
                fail("unknown rate parameter '" + id + "' (declare it first)");
            r.powers[id] += e;
        }
        if (!r.is_model_rate())
            fail("rate expression '" + tok + "' must be a positive integer monomial");
        return r;
    }

    TimeExpr time_expr(const std::vector<std::string>& toks, std::size_t from) const {
        std::string joined;
        for (std::size_t i = from; i < toks.size(); ++i) joined += toks[i];
        if (joined.empty()) fail("missing execution time");
        TimeExpr t;
        for (const std::string& term : split(joined, '+')) {
            if (term.empty()) fail("malformed execution time '" + joined + "'");
            auto parts = split(term, '*');
            if (parts.size() == 1) {
                if (auto v = parse_rational(parts[0])) {
                    t += TimeExpr::constant_time(*v);
                } else {
                    const std::string& id = parts[0];
                    if (!is_ident(id)) fail("malformed execution-time term '" + term + "'");
                    if (!model_.graph.duration_params.count(id))
                        fail("unknown duration parameter '" + id + "' (declare it first)");
                    t += TimeExpr::param(id);
                }
            } else if (parts.size() == 2) {
                Rational c = rational(parts[0]);
                const std::string& id = parts[1];
                if (!is_ident(id)) fail("malformed execution-time term '" + term + "'");
                if (!model_.graph.duration_params.count(id))
                    fail("unknown duration parameter '" + id + "' (declare it first)");
                t += TimeExpr::param(id, c);
            } else {
                fail("malformed execution-time term '" + term + "'");
            }
        }
        return t;
    }

    void dispatch(const std::vector<std::string>& toks, const std::string& raw) {
        const std::string& kw = toks[0];
        if (kw == "sdf" || kw == "sadf" || kw == "psadf") {
            header(kw, raw);
            return;
        }
        if (!have_header_) fail("the first declaration must be 'sdf|sadf|psadf \"<name>\"'");
        if (kw == "rateparam") return rateparam(toks);
        if (kw == "timeparam") return timeparam(toks);
        if (kw == "actor") return actor(toks);
        if (kw == "chan") return channel(toks);
        if (kw == "constraint") return constraint(toks);
        if (kw == "scenario") return scenario(toks);
        if (kw == "fsm") return fsm_begin(toks);
        if (kw == "state") return fsm_state(toks);
        if (kw == "initial") return fsm_initial(toks);
        if (kw == "trans") return fsm_trans(toks);
        fail("unknown declaration '" + kw + "'");
    }

    void header(const std::string& kw, const std::string& raw) {
        if (have_header_) fail("duplicate model header");
        have_header_ = true;
        model_.kind = kw == "sdf"    ? ModelKind::Sdf
                      : kw == "sadf" ? ModelKind::Sadf
                                     : ModelKind::Psadf;
        auto open = raw.find('"');
        auto close = raw.rfind('"');
        if (open == std::string::npos || close == open)
            fail("model header needs a quoted name");
        model_.graph.name = raw.substr(open + 1, close - open - 1);
    }

    void require_kind(ModelKind k, const char* what) const {
        if (model_.kind != k)
            fail(std::string(what) + " declarations are only valid in " +
                 kind_string(k) + " models");
    }

    void require_base(const char* what) const {
        if (section_ != Section::Base)
            fail(std::string(what) + " declarations must come before scenario and fsm blocks");
    }

    void rateparam(const std::vector<std::string>& toks) {
        require_kind(ModelKind::Psadf, "rateparam");
        require_base("rateparam");
        // rateparam <id> in [ <lo> , <hi> ] [modifier <actor> every <rate>]
        if (toks.size() < 8) fail("malformed rateparam declaration");
        std::string id = ident(toks[1], "a parameter name");
        if (model_.graph.rate_params.count(id) || model_.graph.duration_params.count(id))
            fail("duplicate parameter '" + id + "'");
        expect(toks, 2, "in");
        expect(toks, 3, "[");
        RateParam rp;
        rp.lo = integer(toks[4]);
        expect(toks, 5, ",");
        rp.hi = integer(toks[6]);
        expect(toks, 7, "]");
        if (toks.size() > 8) {
            expect(toks, 8, "modifier");
            if (toks.size() != 12) fail("malformed modifier clause");
            rp.has_modifier = true;
            rp.modifier_actor = ident(toks[9], "an actor name");
            expect(toks, 10, "every");
            rp.modifier_period = rate_expr(toks[11]);
            pending_modifiers_.push_back({lineno_, id, *rp.modifier_actor});
        }
        model_.graph.rate_params[id] = std::move(rp);
    }

    void timeparam(const std::vector<std::string>& toks) {
        require_kind(ModelKind::Psadf, "timeparam");
        require_base("timeparam");
        // timeparam <id> in [ <lo> , <hi> ] continuous|integer
        if (toks.size() != 9) fail("malformed timeparam declaration");
        std::string id = ident(toks[1], "a parameter name");
        if (model_.graph.rate_params.count(id) || model_.graph.duration_params.count(id))
            fail("duplicate parameter '" + id + "'");
        expect(toks, 2, "in");
        expect(toks, 3, "[");
        DurationParam dp;
        dp.lo = rational(toks[4]);
        expect(toks, 5, ",");
        dp.hi = rational(toks[6]);
        expect(toks, 7, "]");
        if (toks[8] == "integer")
            dp.integer = true;
        else if (toks[8] == "continuous")
            dp.integer = false;
        else
            fail("expected 'continuous' or 'integer', got '" + toks[8] + "'");
        model_.graph.duration_params[id] = std::move(dp);
    }

    void actor(const std::vector<std::string>& toks) {
        if (section_ == Section::Fsm) fail("actor declaration inside the fsm block");
        if (toks.size() < 4) fail("malformed actor declaration");
        std::string id = ident(toks[1], "an actor name");
        expect(toks, 2, "exec");
        if (section_ == Section::Scenario) {
            if (toks.size() != 4) fail("scenario overrides take a single constant time");
            Rational v = rational(toks[3]);
            if (!model_.graph.has_actor(id)) fail("unknown actor '" + id + "'");
            auto& ovr = model_.scenarios.back().exec_overrides;
            if (!ovr.emplace(id, std::move(v)).second)
                fail("duplicate override for actor '" + id + "'");
            return;
        }
        if (model_.graph.has_actor(id)) fail("duplicate actor '" + id + "'");
        model_.graph.actor_order.push_back(id);
        model_.graph.exec_times[id] = time_expr(toks, 3);
    }

    void channel(const std::vector<std::string>& toks) {
        require_base("chan");
        // chan <src> -> <dst> rates <prod> : <cons> [init <n>]
        if (toks.size() != 8 && toks.size() != 10) fail("malformed chan declaration");
        Channel ch;
        ch.src = ident(toks[1], "an actor name");
        expect(toks, 2, "->");
        ch.dst = ident(toks[3], "an actor name");
        expect(toks, 4, "rates");
        if (!model_.graph.has_actor(ch.src)) fail("unknown actor '" + ch.src + "'");
        if (!model_.graph.has_actor(ch.dst)) fail("unknown actor '" + ch.dst + "'");
        ch.production = rate_expr(toks[5]);
        expect(toks, 6, ":");
        ch.consumption = rate_expr(toks[7]);
        if (toks.size() == 10) {
            expect(toks, 8, "init");
            Integer n = integer(toks[9]);
            if (n < 0 || n > 1000000) fail("initial token count out of range");
            ch.initial_tokens = n.convert_to<int>();
        }
        model_.graph.channels.push_back(std::move(ch));
    }

    void constraint(const std::vector<std::string>& toks) {
        require_kind(ModelKind::Psadf, "constraint");
        require_base("constraint");
        std::size_t le = 1;
        while (le < toks.size() && toks[le] != "<=") ++le;
        if (le + 2 != toks.size()) fail("constraint needs the form '<linear-expr> <= <number>'");
        LinearConstraint c;
        c.rhs = rational(toks[le + 1]);
        int sign = 1;
        bool saw_term = false;
        for (std::size_t i = 1; i < le; ++i) {
            std::string tok = toks[i];
            if (tok == "+") {
                sign = 1;
                continue;
            }
            if (tok == "-") {
                sign = -1;
                continue;
            }
            int local = sign;
            sign = 1;
            while (!tok.empty() && (tok[0] == '-' || tok[0] == '+')) {
                if (tok[0] == '-') local = -local;
                tok.erase(tok.begin());
            }
            auto parts = split(tok, '*');
            Rational coeff = 1;
            std::string id;
            if (parts.size() == 1) {
                id = parts[0];
            } else if (parts.size() == 2) {
                coeff = rational(parts[0]);
                id = parts[1];
            } else {
                fail("malformed constraint term '" + toks[i] + "'");
            }
            if (!is_ident(id)) fail("malformed constraint term '" + toks[i] + "'");
            c.coeffs[id] += Rational(local) * coeff;
            if (c.coeffs[id] == 0) c.coeffs.erase(id);
            saw_term = true;
        }
        if (!saw_term) fail("constraint has no terms");

        bool all_rate = true, all_duration = true;
        for (const auto& [id, coeff] : c.coeffs) {
            (void)coeff;
            if (!model_.graph.rate_params.count(id)) all_rate = false;
            if (!model_.graph.duration_params.count(id)) all_duration = false;
        }
        if (all_rate && !c.coeffs.empty())
            model_.graph.rate_constraints.push_back(std::move(c));
        else if (all_duration && !c.coeffs.empty())
            model_.graph.duration_constraints.push_back(std::move(c));
        else
            fail("constraint must involve only rate parameters or only duration parameters");
    }

    void scenario(const std::vector<std::string>& toks) {
        require_kind(ModelKind::Sadf, "scenario");
        if (section_ == Section::Fsm) fail("scenario block after the fsm block");
        if (toks.size() != 2) fail("malformed scenario header");
        std::string name = ident(toks[1], "a scenario name");
        for (const auto& s : model_.scenarios)
            if (s.name == name) fail("duplicate scenario '" + name + "'");
        model_.scenarios.push_back({name, {}});
        section_ = Section::Scenario;
    }

    void fsm_begin(const std::vector<std::string>& toks) {
        require_kind(ModelKind::Sadf, "fsm");
        if (toks.size() != 1) fail("malformed fsm header");
        if (fsm_line_) fail("duplicate fsm block");
        fsm_line_ = lineno_;
        section_ = Section::Fsm;
    }

    void in_fsm() const {
        if (section_ != Section::Fsm) fail("this declaration belongs inside an fsm block");
    }

    void fsm_state(const std::vector<std::string>& toks) {
        in_fsm();
        if (toks.size() != 4) fail("malformed state declaration");
        expect(toks, 2, "scenario");
        std::string name = ident(toks[1], "a state name");
        std::string scn = ident(toks[3], "a scenario name");
        for (const auto& st : model_.fsm.states)
            if (st.name == name) fail("duplicate state '" + name + "'");
        bool known = false;
        for (const auto& s : model_.scenarios) known = known || s.name == scn;
        if (!known) fail("unknown scenario '" + scn + "'");
        model_.fsm.states.push_back({name, scn});
    }

    void fsm_initial(const std::vector<std::string>& toks) {
        in_fsm();
        if (toks.size() != 2) fail("malformed initial declaration");
        if (!state_exists(toks[1])) fail("unknown state '" + toks[1] + "'");
        if (!model_.fsm.initial.empty()) fail("duplicate initial declaration");
        model_.fsm.initial = toks[1];
    }

    void fsm_trans(const std::vector<std::string>& toks) {
        in_fsm();
        if (toks.size() != 4) fail("malformed trans declaration");
        expect(toks, 2, "->");
        if (!state_exists(toks[1])) fail("unknown state '" + toks[1] + "'");
        if (!state_exists(toks[3])) fail("unknown state '" + toks[3] + "'");
        model_.fsm.transitions.emplace_back(toks[1], toks[3]);
    }

    bool state_exists(const std::string& name) const {
        for (const auto& st : model_.fsm.states)
            if (st.name == name) return true;
        return false;
    }

    void finish() const {
        if (!have_header_) throw ParseError(lineno_ ? lineno_ : 1, "empty model file");
        for (const auto& pm : pending_modifiers_)
            if (!model_.graph.has_actor(pm.actor))
                throw ParseError(pm.line, "rate parameter " + pm.param +
                                              " names unknown modifier actor '" + pm.actor + "'");
        if (fsm_line_ && model_.fsm.initial.empty())
            throw ParseError(fsm_line_, "fsm block has no initial state");
    }
};

}  // namespace

ModelFile parse_model(std::istream& in) { return Parser(in).run(); }

ModelFile parse_model(const std::string& text) {
    std::istringstream is(text);
    return parse_model(is);
}

ModelFile load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path, ParseError(0, "cannot open file"));
    try {
        return parse_model(in);
    } catch (const ParseError& e) {
        throw ParseError(path, e);
    }
}

std::string print_model(const ModelFile& m) {
    std::ostringstream os;
    const PsadfGraph& g = m.graph;
    os << kind_string(m.kind) << " \"" << g.name << "\"\n";
    if (!g.rate_params.empty() || !g.duration_params.empty()) {
        os << "\n";
        for (const auto& [p, rp] : g.rate_params) {
            os << "rateparam " << p << " in [" << rp.lo.str() << ", " << rp.hi.str() << "]";
            if (rp.has_modifier)
                os << " modifier " << *rp.modifier_actor << " every "
                   << rp.modifier_period.str();
            os << "\n";
        }
        for (const auto& [p, dp] : g.duration_params)
            os << "timeparam " << p << " in [" << pretty_rational(dp.lo) << ", "
               << pretty_rational(dp.hi) << "] " << (dp.integer ? "integer" : "continuous")
               << "\n";
    }
    os << "\n";
    for (const auto& a : g.actor_order)
        os << "actor " << a << " exec " << g.exec_times.at(a).str() << "\n";
    os << "\n";
    for (const auto& ch : g.channels)
        os << "chan " << ch.src << " -> " << ch.dst << " rates " << ch.production.str()
           << " : " << ch.consumption.str() << " init " << ch.initial_tokens << "\n";
    if (!g.rate_constraints.empty() || !g.duration_constraints.empty()) {
        os << "\n";
        for (const auto& c : g.rate_constraints) os << "constraint " << c.str() << "\n";
        for (const auto& c : g.duration_constraints) os << "constraint " << c.str() << "\n";
    }
    for (const auto& s : m.scenarios) {
        os << "\nscenario " << s.name << "\n";
        for (const auto& [a, v] : s.exec_overrides)
            os << "actor " << a << " exec " << pretty_rational(v) << "\n";
    }
    if (m.has_fsm()) {
        os << "\nfsm\n";
        for (const auto& st : m.fsm.states)
            os << "state " << st.name << " scenario " << st.scenario << "\n";
        os << "initial " << m.fsm.initial << "\n";
        for (const auto& [a, b] : m.fsm.transitions) os << "trans " << a << " -> " << b << "\n";
    }
    return os.str();
}

ConcreteSdf to_concrete(const ModelFile& m) {
    if (m.kind != ModelKind::Sdf) throw ModelError("not an sdf model");
    return bind(m.graph, {});
}

ScenarioSet to_scenarios(const ModelFile& m) {
    if (m.kind != ModelKind::Sadf) throw ModelError("not a sadf model");
    ScenarioSet out;
    ConcreteSdf base = bind(m.graph, {});
    if (m.scenarios.empty()) {
        out.scenarios.emplace_back("base", base);
    } else {
        for (const auto& s : m.scenarios) {
            ConcreteSdf sg = base;
            for (const auto& [a, v] : s.exec_overrides) sg.exec_times.at(a) = v;
            out.scenarios.emplace_back(s.name, std::move(sg));
        }
    }
    if (m.has_fsm()) {
        out.fsm = m.fsm;
    } else {
        for (const auto& [name, sg] : out.scenarios) {
            (void)sg;
            out.fsm.states.push_back({name, name});
        }
        out.fsm.initial = out.scenarios.front().first;
        for (const auto& a : out.fsm.states)
            for (const auto& b : out.fsm.states) out.fsm.transitions.emplace_back(a.name, b.name);
    }
    return out;
}

}  // namespace psadf
