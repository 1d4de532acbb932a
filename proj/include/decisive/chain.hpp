#pragma once

#include <cstddef>
#include <deque>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "decisive/error.hpp"
#include "decisive/numeric.hpp"

namespace decisive {

template <class State>
using Distribution = std::vector<std::pair<State, Rational>>;

template <class State>
void check_distribution(const Distribution<State>& d) {
    if (d.empty()) throw InternalError("empty successor distribution");
    Rational total = 0;
    for (const auto& [s, p] : d) {
        if (sgn(p) <= 0) throw InternalError("non-positive successor probability");
        total += p;
    }
    if (total != 1) throw InternalError("successor probabilities sum to " + to_string(total));
}

template <class State, class Hash = std::hash<State>>
class EffectiveChain {
public:
    using state_type = State;
    using hasher = Hash;
    using SuccessorFn = std::function<Distribution<State>(const State&)>;

    explicit EffectiveChain(SuccessorFn fn) : fn_(std::move(fn)) {}

    Distribution<State> successors(const State& s) const {
        Distribution<State> d = fn_(s);
        check_distribution(d);
        return d;
    }

private:
    SuccessorFn fn_;
};

struct ProbInterval {
    Rational low;
    Rational up;

    ProbInterval() = default;
    ProbInterval(Rational low_, Rational up_);

    Rational width() const { return up - low; }
    bool contains(const Rational& x) const { return low <= x && x <= up; }
};

class FiniteChain {
public:
    using Row = std::vector<std::pair<std::size_t, Rational>>;

    FiniteChain() = default;
    // Rows are merged per destination and checked to sum to exactly 1.
    explicit FiniteChain(std::vector<Row> rows);

    std::size_t size() const { return rows_.size(); }
    const Row& row(std::size_t s) const { return rows_.at(s); }
    bool is_absorbing(std::size_t s) const;

    // `src dst num/den` per line, `#` comments.
    static FiniteChain parse_edge_list(std::string_view text);
    std::string to_edge_list() const;

private:
    std::vector<Row> rows_;
};

EffectiveChain<std::size_t> as_effective(std::shared_ptr<const FiniteChain> fc);

// Exact solution of A x = b by fraction-free elimination; A must be square and nonsingular.
std::vector<Rational> solve_linear_system(const std::vector<std::vector<Rational>>& a,
                                          const std::vector<Rational>& b);

// States from which some state of `targets` is reachable in the edge graph.
std::vector<bool> backward_reachable(const FiniteChain& fc, const std::vector<bool>& targets);

Rational solve_reach_exact(const FiniteChain& fc, std::size_t s0, const std::vector<std::size_t>& targets);

struct SccDecomposition {
    std::vector<std::vector<std::size_t>> components;  // each sorted ascending
    std::vector<bool> bottom;
    std::vector<std::size_t> component_of;

    std::vector<std::vector<std::size_t>> bottom_components() const;
};

SccDecomposition bsccs(const FiniteChain& fc);

// Finite shadow of an effective chain, explored breadth-first from `init`.
template <class State>
struct Materialized {
    FiniteChain chain;
    std::vector<State> states;
    std::vector<bool> truncated;  // discovered but not expanded; absorbing in `chain`
    bool complete = true;
};

template <class State, class Hash>
Materialized<State> materialize(const EffectiveChain<State, Hash>& chain, const State& init,
                                std::size_t budget) {
    if (budget == 0) throw InputError("materialization budget must be positive");
    Materialized<State> out;
    std::unordered_map<State, std::size_t, Hash> index;
    std::vector<FiniteChain::Row> rows;
    auto intern = [&](const State& s) {
        auto [it, inserted] = index.emplace(s, out.states.size());
        if (inserted) {
            out.states.push_back(s);
            rows.emplace_back();
        }
        return it->second;
    };
    intern(init);
    std::size_t next = 0;
    while (next < out.states.size() && next < budget) {
        State s = out.states[next];
        FiniteChain::Row row;
        for (const auto& [t, p] : chain.successors(s)) row.emplace_back(intern(t), p);
        rows[next] = std::move(row);
        ++next;
    }
    out.truncated.assign(out.states.size(), false);
    for (std::size_t i = next; i < out.states.size(); ++i) {
        out.truncated[i] = true;
        out.complete = false;
        rows[i] = {{i, Rational(1)}};
    }
    out.chain = FiniteChain(std::move(rows));
    return out;
}

}  // namespace decisive
