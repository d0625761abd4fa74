#include "psadf/symbolic.hpp"

#include <algorithm>
#include <sstream>

#include "psadf/optimize.hpp"

namespace psadf {

IndexExpr index_expr(const RateExpr& cons, const FiringIndex& firing, const Integer& init,
                     const RateExpr& prod) {
    IndexExpr out;
    if (firing.symbolic) {
        std::optional<RateExpr> q = cons.divide_exact(prod);
        if (q && init == 0) {
            out.kind = IndexExpr::Kind::Affine;
            out.mono = *q;
            return out;
        }
        if (q && prod.is_constant()) {
            // ceil((q*prod*kappa - init)/prod) = q*kappa - floor(init/prod);
            // exact because q*kappa is an integer
            out.kind = IndexExpr::Kind::Affine;
            out.mono = *q;
            out.offset = -floor_div(init, numerator(prod.coeff));
            return out;
        }
        out.kind = IndexExpr::Kind::Ceil;
        out.cons = cons;
        out.prod = prod;
        out.init = init;
        return out;
    }

    RateExpr t = cons * firing.value;
    if (t.is_constant() && prod.is_constant()) {
        out.kind = IndexExpr::Kind::Concrete;
        out.concrete = ceil_rat((t.coeff - Rational(init)) / prod.coeff);
        return out;
    }
    std::optional<RateExpr> q = t.divide_exact(prod);
    if (q && (init == 0 || prod.is_constant())) {
        Integer off = init == 0 ? Integer(0) : floor_div(init, numerator(prod.coeff));
        if (q->is_constant()) {
            out.kind = IndexExpr::Kind::Concrete;
            out.concrete = numerator(q->coeff) - off;
            return out;
        }
        if (off == 0) {
            out.kind = IndexExpr::Kind::Monomial;
            out.mono = *q;
            return out;
        }
    }
    out.kind = IndexExpr::Kind::Ceil;
    out.cons = std::move(t);
    out.prod = prod;
    out.init = init;
    out.has_kappa = false;
    return out;
}

std::string IndexExpr::str() const {
    switch (kind) {
        case Kind::Concrete:
            return concrete.str();
        case Kind::Monomial:
            return mono.str();
        case Kind::Affine: {
            std::string s = mono.is_one() ? "k" : mono.str() + "*k";
            if (offset > 0) s += "+" + offset.str();
            if (offset < 0) s += offset.str();
            return s;
        }
        case Kind::Ceil: {
            std::string num;
            if (has_kappa)
                num = cons.is_one() ? "k" : cons.str() + "*k";
            else
                num = cons.str();
            if (init != 0) num += "-" + init.str();
            return "ceil((" + num + ")/" + prod.str() + ")";
        }
    }
    return {};
}

std::map<std::string, Weight> GammaFunction::at(const RateExpr& index) const {
    std::map<std::string, Weight> out = base;
    if (shape == Shape::Accumulating) {
        Polynomial add = Polynomial::scaled_time(index, increment);
        for (auto& [lbl, w] : out) {
            (void)lbl;
            w.accumulate(add);
        }
    }
    return out;
}

namespace {

// 1 <= idx <= count, provable for parameter values >= 1
bool provably_in_count(const RateExpr& idx, const RateExpr& count) {
    if (idx.coeff < 1) return false;
    for (const auto& [p, e] : idx.powers) {
        (void)p;
        if (e < 0) return false;
    }
    if (idx.is_constant() && count.is_constant()) return idx.coeff <= count.coeff;
    return count.divide_exact(idx).has_value();
}

std::map<std::string, Weight> substitute(const GammaFunction& producer, const IndexExpr& idx) {
    if (producer.shape == GammaFunction::Shape::Constant) return producer.base;
    RateExpr val;
    switch (idx.kind) {
        case IndexExpr::Kind::Concrete:
            val = RateExpr::constant(Rational(idx.concrete));
            break;
        case IndexExpr::Kind::Monomial:
            val = idx.mono;
            break;
        default:
            throw UnsupportedPattern("cannot substitute the index " + idx.str() +
                                     " into the firing-dependent solution of actor " +
                                     producer.actor);
    }
    if (!provably_in_count(val, producer.count))
        throw UnsupportedPattern("index " + val.str() + " of actor " + producer.actor +
                                 " is not provably within its " + producer.count.str() +
                                 " firings");
    return producer.at(val);
}

class TokenLabels {
public:
    explicit TokenLabels(const PsadfGraph& g) {
        auto toks = g.tokens();
        auto names = g.token_labels();
        for (std::size_t i = 0; i < toks.size(); ++i)
            at_[{toks[i].channel, toks[i].position}] = names[i];
    }
    const std::string& operator()(std::size_t channel, int position) const {
        return at_.at({channel, position});
    }

private:
    std::map<std::pair<std::size_t, int>, std::string> at_;
};

std::size_t channel_index(const PsadfGraph& g, const Channel& ch) {
    return static_cast<std::size_t>(&ch - g.channels.data());
}

}  // namespace

GammaFunction solve_actor(const std::map<std::string, GammaFunction>& env, const PsadfGraph& g,
                          const std::string& actor, const RateExpr& count,
                          const std::vector<ConflictConstraint>& context) {
    if (!g.has_actor(actor)) throw ModelError("unknown actor " + actor);
    const TimeExpr& exec = g.exec_times.at(actor);
    TokenLabels label(g);

    std::vector<const Channel*> self_loops, inputs;
    for (const auto& ch : g.channels) {
        if (ch.dst != actor) continue;
        (ch.is_self_loop() ? self_loops : inputs).push_back(&ch);
    }

    auto producer_of = [&](const Channel& ch) -> const GammaFunction& {
        auto it = env.find(ch.src);
        if (it == env.end())
            throw ModelError("schedule error: actor " + actor + " consumes from " + ch.src +
                             " before it is solved");
        return it->second;
    };
    auto merge_into = [&](std::map<std::string, Weight>& acc,
                          const std::map<std::string, Weight>& add) {
        for (const auto& [lbl, w] : add) {
            auto [it, fresh] = acc.emplace(lbl, w);
            if (!fresh) it->second.merge(w, context);
        }
    };
    auto unit = [](const std::string& lbl) {
        return std::map<std::string, Weight>{{lbl, Weight::zero()}};
    };

    GammaFunction out;
    out.actor = actor;
    out.count = count;

    if (count.is_one()) {
        // single firing: indices are fixed and initial tokens resolve to
        // concrete queue positions
        std::map<std::string, Weight> w;
        for (const Channel* ch : self_loops)
            for (int pos = 1; pos <= ch->initial_tokens; ++pos)
                merge_into(w, unit(label(channel_index(g, *ch), pos)));
        for (const Channel* ch : inputs) {
            const Integer m = ch->initial_tokens;
            if (ch->consumption.is_constant()) {
                const Integer c = numerator(ch->consumption.coeff);
                for (Integer pos = 1; pos <= (c < m ? c : m); ++pos)
                    merge_into(w, unit(label(channel_index(g, *ch),
                                             static_cast<int>(pos))));
                if (c > m)
                    merge_into(w, substitute(producer_of(*ch),
                                             index_expr(ch->consumption, FiringIndex::at(1), m,
                                                        ch->production)));
            } else {
                if (m > 0)
                    throw UnsupportedPattern(
                        "actor " + actor + " consumes a parametric amount from the "
                        "token-carrying channel " + ch->src + " -> " + actor);
                merge_into(w, substitute(producer_of(*ch),
                                         index_expr(ch->consumption, FiringIndex::at(1),
                                                    Integer(0), ch->production)));
            }
        }
        Polynomial e = Polynomial::from_time(exec);
        for (auto& [lbl, weight] : w) {
            (void)lbl;
            weight.accumulate(e);
            weight.normalize(context);
        }
        out.shape = GammaFunction::Shape::Constant;
        out.base = std::move(w);
        return out;
    }

    // kappa stays symbolic across the actor's firings; every dependency must
    // keep one of the two representable shapes
    std::map<std::string, Weight> const_part;
    struct PassThrough {
        const GammaFunction* producer;
    };
    std::vector<PassThrough> pass;
    for (const Channel* ch : inputs) {
        if (ch->initial_tokens > 0)
            throw UnsupportedPattern(
                "actor " + actor + " fires " + count.str() +
                " times per iteration and consumes from the token-carrying channel " +
                ch->src + " -> " + actor +
                "; the initial-token selection would depend on the firing index");
        const GammaFunction& pg = producer_of(*ch);
        IndexExpr idx =
            index_expr(ch->consumption, FiringIndex::kappa(), Integer(0), ch->production);
        if (pg.shape == GammaFunction::Shape::Constant) {
            merge_into(const_part, pg.base);
            continue;
        }
        // firing-dependent producer: only the aligned one-to-one form keeps
        // the accumulating shape
        if (idx.kind == IndexExpr::Kind::Affine && idx.mono.is_one() && idx.offset == 0 &&
            pg.count == count) {
            pass.push_back({&pg});
            continue;
        }
        throw UnsupportedPattern("cannot substitute the index " + idx.str() +
                                 " into the firing-dependent solution of actor " + pg.actor);
    }

    if (!self_loops.empty()) {
        if (!pass.empty())
            throw UnsupportedPattern("self-loop actor " + actor +
                                     " has a firing-dependent input from " +
                                     pass.front().producer->actor);
        // serialized self-loop: gamma(kappa) = (inputs (+) own tokens) x kappa*e
        std::map<std::string, Weight> base = const_part;
        for (const Channel* ch : self_loops)
            for (int pos = 1; pos <= ch->initial_tokens; ++pos)
                merge_into(base, unit(label(channel_index(g, *ch), pos)));
        for (auto& [lbl, weight] : base) {
            (void)lbl;
            weight.normalize(context);
        }
        out.shape = GammaFunction::Shape::Accumulating;
        out.base = std::move(base);
        out.increment = exec;
        return out;
    }
    if (!pass.empty()) {
        if (pass.size() > 1 || !const_part.empty())
            throw UnsupportedPattern("actor " + actor +
                                     " mixes firing-dependent and constant inputs");
        const GammaFunction& pg = *pass.front().producer;
        std::map<std::string, Weight> base = pg.base;
        Polynomial e = Polynomial::from_time(exec);
        for (auto& [lbl, weight] : base) {
            (void)lbl;
            weight.accumulate(e);
            weight.normalize(context);
        }
        out.shape = GammaFunction::Shape::Accumulating;
        out.base = std::move(base);
        out.increment = pg.increment;
        return out;
    }
    // all dependencies identical across firings
    Polynomial e = Polynomial::from_time(exec);
    for (auto& [lbl, weight] : const_part) {
        (void)lbl;
        weight.accumulate(e);
        weight.normalize(context);
    }
    out.shape = GammaFunction::Shape::Constant;
    out.base = std::move(const_part);
    return out;
}

std::vector<std::pair<std::string, std::vector<Polynomial>>> detect_conflicts(
    const GammaFunction& g, const std::vector<ConflictConstraint>& context) {
    std::vector<std::pair<std::string, std::vector<Polynomial>>> out;
    for (const auto& [lbl, w] : g.base) {
        Weight norm = w;
        norm.normalize(context);
        if (norm.polynomials().size() >= 2) out.emplace_back(lbl, norm.polynomials());
    }
    return out;
}

bool operator==(const SymbolicMatrix& a, const SymbolicMatrix& b) {
    return a.labels == b.labels && a.entries == b.entries && a.region == b.region;
}

namespace {

SymbolicMatrix assemble(const PsadfGraph& g, const std::map<std::string, GammaFunction>& env,
                        const Region& region, const std::vector<ConflictConstraint>& context) {
    SymbolicMatrix m;
    m.labels = g.token_labels();
    m.region = region;
    const std::size_t n = m.labels.size();
    m.entries.assign(n, std::vector<std::optional<Polynomial>>(n));

    std::map<std::string, std::size_t> col;
    for (std::size_t i = 0; i < n; ++i) col[m.labels[i]] = i;
    std::map<std::pair<std::size_t, int>, std::size_t> row_of;
    {
        auto toks = g.tokens();
        for (std::size_t i = 0; i < toks.size(); ++i)
            row_of[{toks[i].channel, toks[i].position}] = i;
    }
    TokenLabels label(g);

    auto set_row = [&](std::size_t row, const std::map<std::string, Weight>& w) {
        for (const auto& [lbl, weight] : w) {
            Weight norm = weight;
            norm.normalize(context);
            if (norm.neg_inf()) continue;
            if (norm.polynomials().size() != 1)
                throw ModelError("internal: unresolved conflict on token " + lbl +
                                 " at matrix assembly");
            m.entries[row][col.at(lbl)] = norm.polynomials().front();
        }
    };

    for (std::size_t c = 0; c < g.channels.size(); ++c) {
        const Channel& ch = g.channels[c];
        const int mtok = ch.initial_tokens;
        if (mtok == 0) continue;
        auto pit = env.find(ch.src);
        if (pit == env.end())
            throw ModelError("schedule error: producer " + ch.src + " of channel " + ch.src +
                             " -> " + ch.dst + " was never solved");
        const GammaFunction& producer = pit->second;

        for (int pos = 1; pos <= mtok; ++pos) {
            const std::size_t row = row_of.at({c, pos});
            if (ch.is_self_loop()) {
                // fully serialized: the final tokens are the last firing's
                set_row(row, producer.at(producer.count));
                continue;
            }
            RateExpr total = ch.production * producer.count;
            if (total.is_constant()) {
                const Integer t = numerator(total.coeff);
                const Integer s = t + pos - mtok;  // production sequence number
                if (s <= 0) {
                    // initial token that merely moved forward in the queue
                    const std::string& survivor =
                        label(c, pos + static_cast<int>(t));
                    m.entries[row][col.at(survivor)] = Polynomial();
                    continue;
                }
                const Integer f = ceil_div(s, numerator(ch.production.coeff));
                IndexExpr idx;
                idx.kind = IndexExpr::Kind::Concrete;
                idx.concrete = f;
                set_row(row, substitute(producer, idx));
            } else {
                if (pos != mtok)
                    throw UnsupportedPattern("channel " + ch.src + " -> " + ch.dst +
                                             " refills token position " + std::to_string(pos) +
                                             " parametrically");
                set_row(row, producer.at(producer.count));
            }
        }
    }
    return m;
}

void extract_rec(const PsadfGraph& g, const QuasiStaticSchedule& schedule, std::size_t from,
                 std::map<std::string, GammaFunction> env, const Region& region,
                 std::vector<ConflictConstraint> context, std::vector<SymbolicMatrix>& out) {
    for (std::size_t k = from; k < schedule.size(); ++k) {
        const ScheduleEntry& step = schedule[k];
        GammaFunction gamma;
        try {
            gamma = solve_actor(env, g, step.actor, step.count, context);
        } catch (const UnsupportedPattern& e) {
            throw UnsupportedPattern(std::string(e.what()) + " (while solving actor " +
                                     step.actor + " at schedule position " +
                                     std::to_string(k + 1) + ")");
        }
        auto conflicts = detect_conflicts(gamma, context);
        if (!conflicts.empty()) {
            // split on the first ambiguous token: one branch per candidate
            // being the maximum, with closed boundaries
            const auto& candidates = conflicts.front().second;
            for (const Polynomial& pick : candidates) {
                Region sub = region;
                std::vector<ConflictConstraint> ctx = context;
                bool feasible_branch = true;
                for (const Polynomial& other : candidates) {
                    if (other == pick) continue;
                    auto [lhs, rhs] = Polynomial::cancel_common(pick, other);
                    ConflictConstraint c{std::move(lhs), std::move(rhs)};
                    sub = sub.with_conflict(c);
                    if (std::find(ctx.begin(), ctx.end(), c) == ctx.end()) ctx.push_back(c);
                }
                feasible_branch = feasible(sub).ok;
                if (!feasible_branch) continue;
                extract_rec(g, schedule, k, env, sub, std::move(ctx), out);
            }
            return;
        }
        env[step.actor] = std::move(gamma);
    }
    out.push_back(assemble(g, env, region, context));
}

}  // namespace

std::vector<SymbolicMatrix> symbolic_extract(const PsadfGraph& g,
                                             const QuasiStaticSchedule& schedule,
                                             const Region& omega) {
    auto diags = validate(g);
    if (!diags.empty()) {
        std::string msg = "invalid model:";
        for (const auto& d : diags) msg += "\n  " + d;
        throw ModelError(msg);
    }
    std::vector<SymbolicMatrix> all;
    extract_rec(g, schedule, 0, {}, omega, {}, all);
    std::vector<SymbolicMatrix> uniq;
    for (auto& m : all) {
        bool dup = false;
        for (const auto& have : uniq)
            if (have == m) dup = true;
        if (!dup) uniq.push_back(std::move(m));
    }
    return uniq;
}

std::vector<SymbolicMatrix> symbolic_extract(const PsadfGraph& g) {
    return symbolic_extract(g, quasi_static_schedule(g), Region::of_graph(g));
}

maxplus::Matrix evaluate_symbolic(const SymbolicMatrix& m, const Point& point) {
    if (!m.region.contains(point))
        throw AnalysisError(
            "the point lies outside this matrix's region; look up the containing region first");
    maxplus::Matrix out = maxplus::Matrix::neg_inf(m.labels);
    const std::size_t n = m.labels.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (m.entries[i][j]) out.at(i, j) = maxplus::Value(m.entries[i][j]->evaluate(point));
    return out;
}

}  // namespace psadf
