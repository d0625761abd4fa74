#pragma once

#include <optional>
#include <string>
#include <vector>

#include "psadf/rational.hpp"

namespace psadf::maxplus {

// Value in the (max,+) semiring: a rational or -inf. -inf is the neutral
// element of "oplus" (max) and absorbing for "otimes" (+).
class Value {
public:
    Value() = default;  // -inf
    Value(Rational v) : val_(std::move(v)) {}
    static Value neg_inf() { return Value(); }
    static Value zero() { return Value(Rational(0)); }  // otimes identity

    bool finite() const { return val_.has_value(); }
    const Rational& get() const {
        if (!val_) throw std::domain_error("max-plus value is -inf");
        return *val_;
    }

    friend Value oplus(const Value& a, const Value& b) {
        if (!a.finite()) return b;
        if (!b.finite()) return a;
        return Value(a.get() < b.get() ? b.get() : a.get());
    }
    friend Value otimes(const Value& a, const Value& b) {
        if (!a.finite() || !b.finite()) return Value();
        return Value(a.get() + b.get());
    }
    friend bool operator==(const Value& a, const Value& b) {
        if (a.finite() != b.finite()) return false;
        return !a.finite() || a.get() == b.get();
    }
    friend bool operator!=(const Value& a, const Value& b) { return !(a == b); }
    friend bool operator<(const Value& a, const Value& b) {
        if (!a.finite()) return b.finite();
        if (!b.finite()) return false;
        return a.get() < b.get();
    }

    std::string str() const { return finite() ? pretty_rational(get()) : "-inf"; }

private:
    std::optional<Rational> val_;
};

using Vector = std::vector<Value>;

// Square matrix over the (max,+) semiring with row/column token labels.
// entry(i,j) is the minimal elapsed time from the production of token j in
// the previous iteration to the production of token i in the current one.
struct Matrix {
    std::vector<std::string> labels;
    std::vector<std::vector<Value>> entries;

    std::size_t size() const { return labels.size(); }
    const Value& at(std::size_t i, std::size_t j) const { return entries[i][j]; }
    Value& at(std::size_t i, std::size_t j) { return entries[i][j]; }

    static Matrix neg_inf(std::vector<std::string> labels);

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.labels == b.labels && a.entries == b.entries;
    }
};

// Max-plus automaton graph: one node per initial token, one edge per finite
// matrix entry. Edge for entry (i,j) runs from node j to node i.
struct Mpag {
    struct Edge {
        std::size_t from, to;
        Rational weight;
    };
    std::vector<std::string> labels;
    std::vector<Edge> edges;

    std::size_t node_count() const { return labels.size(); }
};

struct CycleMean {
    Value lambda;                    // -inf when the graph is acyclic
    std::vector<std::size_t> cycle;  // node sequence, empty when acyclic
};

Vector multiply(const Matrix& m, const Vector& v);
Matrix multiply(const Matrix& a, const Matrix& b);
Matrix elementwise_max(const std::vector<Matrix>& ms);
Mpag build_mpag(const Matrix& m);

// Maximum cycle mean via Karp's recurrence per strongly connected component,
// exact over rationals. The reported cycle is one critical cycle, rotated to
// start at its lowest node index; the choice among equally critical cycles
// is deterministic.
CycleMean maximum_cycle_mean(const Mpag& g);

// 1 / mcm(build_mpag(m)). Throws if the matrix has no cycle or lambda <= 0.
Rational throughput_from_matrix(const Matrix& m);

}  // namespace psadf::maxplus
