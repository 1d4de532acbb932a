#pragma once

#include <cstddef>
#include <functional>
#include <type_traits>
#include <optional>

#include "decisive/chain.hpp"
#include "decisive/oracle.hpp"

namespace decisive {

// State of the recast chain; `std::nullopt` is the fresh state s_bot.
template <class State>
using RecastState = std::optional<State>;

template <class Hash>
struct RecastHash {
    template <class State>
    std::size_t operator()(const std::optional<State>& s) const {
        return s ? Hash{}(*s) * 31 + 1 : 0;
    }
};

template <class State, class Hash>
EffectiveChain<RecastState<State>, RecastHash<Hash>> recast_chain(
    const EffectiveChain<State, Hash>& mc, const State& s0,
    std::type_identity_t<std::function<bool(const State&)>> in_target, const ReachOracle<State>& pre_star) {
    if (in_target(s0)) throw DomainError("s0 ∈ A ∪ ¬Pre*(A)");
    ReachAnswer start = pre_star(s0);
    if (start == ReachAnswer::Unreachable) throw DomainError("s0 ∈ A ∪ ¬Pre*(A)");
    if (start == ReachAnswer::Unknown) throw BudgetExhausted("reachability oracle gave up on s0");
    using R = RecastState<State>;
    return EffectiveChain<R, RecastHash<Hash>>(
        [mc, s0, in_target = std::move(in_target), pre_star](const R& r) {
            Distribution<R> out;
            if (!r) {
                out.emplace_back(R(s0), Rational(1));
                return out;
            }
            Rational to_bottom = 0;
            for (auto& [t, p] : mc.successors(*r)) {
                bool redirect = in_target(t);
                if (!redirect) {
                    ReachAnswer a = pre_star(t);
                    if (a == ReachAnswer::Unknown) throw BudgetExhausted("reachability oracle gave up");
                    redirect = a == ReachAnswer::Unreachable;
                }
                if (redirect) {
                    to_bottom += p;
                } else {
                    out.emplace_back(R(std::move(t)), std::move(p));
                }
            }
            if (sgn(to_bottom) > 0) out.emplace_back(R(), to_bottom);
            return out;
        });
}

// Finite-shadow recurrence: a complete materialization whose reachable part
// is a single bottom component.
template <class State>
bool finite_shadow_recurrent(const Materialized<State>& m) {
    if (!m.complete) return false;
    SccDecomposition scc = bsccs(m.chain);
    return scc.components.size() == 1 && scc.bottom[0];
}

}  // namespace decisive
