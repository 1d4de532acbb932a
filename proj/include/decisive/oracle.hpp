#pragma once

#include <functional>
#include <string>

namespace decisive {

enum class ReachAnswer { Reachable, Unreachable, Unknown };

const char* to_string(ReachAnswer a);

// Decides whether a fixed target set is reachable from a queried state.
template <class State>
struct ReachOracle {
    std::string capability;
    std::function<ReachAnswer(const State&)> query;

    ReachAnswer operator()(const State& s) const { return query(s); }
};

}  // namespace decisive
