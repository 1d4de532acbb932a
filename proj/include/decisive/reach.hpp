#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <type_traits>
#include <optional>
#include <unordered_set>
#include <vector>

#include "decisive/chain.hpp"
#include "decisive/model.hpp"
#include "decisive/oracle.hpp"

namespace decisive {

// r_q per control state; std::nullopt stands for infinity.
struct RqTable {
    std::vector<std::optional<std::uint64_t>> r;

    bool reaches_zero(std::size_t q, std::uint64_t k) const { return !r.at(q) || k <= *r.at(q); }
    bool all_finite() const;
    bool all_infinite() const;
};

RqTable compute_rq(const CounterMachine& c);

ReachOracle<Configuration> one_counter_oracle(const CounterMachine& c);

struct CoverabilityBasis {
    std::vector<Configuration> minimal;  // Pre*(up-closure of the target basis)
    std::size_t iterations = 0;
};

// Backward fixpoint for machines without zero tests. `on_iteration` sees the
// basis after every round.
CoverabilityBasis backward_coverability(
    const CounterMachine& c, const TargetSet& target,
    const std::function<void(const std::vector<Configuration>&)>& on_iteration = {});

ReachOracle<Configuration> coverability_oracle(const CounterMachine& c, const TargetSet& target);

// Forward breadth-first search per query, at most `budget` states visited.
template <class State, class Hash>
ReachOracle<State> bounded_oracle(const EffectiveChain<State, Hash>& chain,
                                  std::type_identity_t<std::function<bool(const State&)>> in_target, std::size_t budget) {
    if (budget == 0) throw InputError("oracle budget must be positive");
    return ReachOracle<State>{
        "bounded forward search (" + std::to_string(budget) + " states)",
        [chain, in_target = std::move(in_target), budget](const State& s) {
            std::unordered_set<State, Hash> seen{s};
            std::deque<State> queue{s};
            while (!queue.empty()) {
                State cur = std::move(queue.front());
                queue.pop_front();
                if (in_target(cur)) return ReachAnswer::Reachable;
                for (auto& [t, p] : chain.successors(cur)) {
                    if (seen.count(t)) continue;
                    if (seen.size() >= budget) return ReachAnswer::Unknown;
                    seen.insert(t);
                    queue.push_back(std::move(t));
                }
            }
            return ReachAnswer::Unreachable;
        }};
}

}  // namespace decisive
