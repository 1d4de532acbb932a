#pragma once

#include <cstddef>
#include <deque>
#include <functional>
#include <type_traits>
#include <optional>
#include <string>
#include <unordered_map>

#include "decisive/chain.hpp"
#include "decisive/model.hpp"
#include "decisive/oracle.hpp"

namespace decisive {

enum class CrpStatus { Complete, StepCap, OracleUnknown };

const char* to_string(CrpStatus s);

struct CrpStep {
    std::size_t step = 0;
    const Rational* pmin = nullptr;
    const Rational* pmax = nullptr;
    std::size_t frontier_size = 0;
    const Rational* frontier_mass = nullptr;
};

struct CrpOptions {
    std::optional<std::size_t> step_cap;
    // Pending entries for the same state share one frontier slot.
    bool merge_frontier = true;
    std::function<void(const CrpStep&)> trace;
};

struct CrpResult {
    CrpStatus status = CrpStatus::Complete;
    ProbInterval interval;
    std::size_t steps = 0;
    std::size_t oracle_queries = 0;

    bool complete() const { return status == CrpStatus::Complete; }
};

template <class State, class Hash>
CrpResult comp_prob(const EffectiveChain<State, Hash>& chain, const State& s0,
                    const std::type_identity_t<std::function<bool(const State&)>>& in_target,
                    const Rational& theta, const ReachOracle<State>& oracle, const CrpOptions& options = {}) {
    if (sgn(theta) <= 0) throw InputError("theta must be positive");
    CrpResult out;
    auto ask = [&](const State& s) {
        ++out.oracle_queries;
        return oracle(s);
    };
    if (!in_target(s0)) {
        ReachAnswer start = ask(s0);
        if (start == ReachAnswer::Unreachable) {
            out.interval = ProbInterval(0, 0);
            return out;
        }
        if (start == ReachAnswer::Unknown) {
            out.status = CrpStatus::OracleUnknown;
            out.interval = ProbInterval(0, 1);
            return out;
        }
    }

    Rational pmin = 0;
    Rational pmax = 1;
    Rational mass = 1;
    // FIFO of states; with merging, the mass of a queued state lives in `pending`.
    std::deque<std::pair<State, Rational>> queue;
    std::unordered_map<State, std::size_t, Hash> pending_slot;
    std::deque<Rational> slots;
    std::size_t slot_base = 0;

    auto push = [&](State s, Rational q) {
        if (options.merge_frontier) {
            auto it = pending_slot.find(s);
            if (it != pending_slot.end()) {
                slots[it->second - slot_base] += q;
                return;
            }
            pending_slot.emplace(s, slot_base + slots.size());
            slots.push_back(std::move(q));
            queue.emplace_back(std::move(s), Rational(0));
        } else {
            queue.emplace_back(std::move(s), std::move(q));
        }
    };
    auto pop = [&] {
        auto entry = std::move(queue.front());
        queue.pop_front();
        if (options.merge_frontier) {
            entry.second = std::move(slots.front());
            slots.pop_front();
            ++slot_base;
            pending_slot.erase(entry.first);
        }
        return entry;
    };

    push(s0, Rational(1));
    while (pmax - pmin > theta || sgn(pmin) == 0) {
        if (queue.empty()) break;
        if (options.step_cap && out.steps >= *options.step_cap) {
            out.status = CrpStatus::StepCap;
            break;
        }
        auto [s, q] = pop();
        ++out.steps;
        mass -= q;
        if (in_target(s)) {
            pmin += q;
        } else {
            ReachAnswer a = ask(s);
            if (a == ReachAnswer::Unreachable) {
                pmax -= q;
            } else if (a == ReachAnswer::Unknown) {
                // The popped mass is unresolved; the bounds remain valid.
                mass += q;
                out.status = CrpStatus::OracleUnknown;
                break;
            } else {
                for (auto& [t, p] : chain.successors(s)) {
                    Rational share = q * p;
                    mass += share;
                    push(std::move(t), std::move(share));
                }
            }
        }
        if (options.trace) {
            options.trace(CrpStep{out.steps, &pmin, &pmax, queue.size(), &mass});
        }
    }
    out.interval = ProbInterval(pmin, pmax);
    return out;
}

}  // namespace decisive
