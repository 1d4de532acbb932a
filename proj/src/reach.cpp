#include "decisive/reach.hpp"

#include <algorithm>

#include "decisive/error.hpp"

namespace decisive {

const char* to_string(ReachAnswer a) {
    switch (a) {
        case ReachAnswer::Reachable: return "reachable";
        case ReachAnswer::Unreachable: return "unreachable";
        case ReachAnswer::Unknown: return "unknown";
    }
    return "unknown";
}

bool RqTable::all_finite() const {
    return std::all_of(r.begin(), r.end(), [](const auto& x) { return x.has_value(); });
}

bool RqTable::all_infinite() const {
    return std::none_of(r.begin(), r.end(), [](const auto& x) { return x.has_value(); });
}

RqTable compute_rq(const CounterMachine& c) {
    if (!classify(c).is_safe_one_counter) throw DomainError("r_q table needs a safe one-counter machine");
    const std::size_t q_count = c.states().size();
    const std::size_t horizon = (2 * q_count - 1) * q_count;
    // A configuration at backward distance n has counter at most n.
    std::vector<std::vector<bool>> seen(q_count, std::vector<bool>(horizon + 1, false));
    std::vector<std::size_t> deepest(q_count, 0);
    std::vector<std::uint64_t> highest(q_count, 0);

    std::vector<Configuration> layer;
    for (std::size_t q = 0; q < q_count; ++q) {
        seen[q][0] = true;
        layer.push_back({q, {0}});
    }
    for (std::size_t n = 0; n < horizon && !layer.empty(); ++n) {
        std::vector<Configuration> next;
        for (const auto& s : layer) {
            for (const auto& t : c.transitions()) {
                if (t.kind != TransitionKind::Update || t.target != s.state) continue;
                const std::uint64_t k = s.marking[0] + 1 - t.post[0];
                if (k < 1 || k > horizon || seen[t.source][k]) continue;
                seen[t.source][k] = true;
                deepest[t.source] = std::max(deepest[t.source], n + 1);
                highest[t.source] = std::max(highest[t.source], k);
                next.push_back({t.source, {k}});
            }
        }
        layer = std::move(next);
    }
    RqTable out;
    for (std::size_t q = 0; q < q_count; ++q) {
        if (deepest[q] < q_count) {
            out.r.emplace_back(highest[q]);
        } else {
            out.r.emplace_back(std::nullopt);
        }
    }
    return out;
}

ReachOracle<Configuration> one_counter_oracle(const CounterMachine& c) {
    RqTable table = compute_rq(c);
    return ReachOracle<Configuration>{"one-counter r_q table", [table](const Configuration& s) {
                                          return table.reaches_zero(s.state, s.marking.at(0))
                                                     ? ReachAnswer::Reachable
                                                     : ReachAnswer::Unreachable;
                                      }};
}

namespace {

bool covers(const Configuration& big, const Configuration& small) {
    return big.state == small.state && dominates(big.marking, small.marking);
}

}  // namespace

CoverabilityBasis backward_coverability(const CounterMachine& c, const TargetSet& target,
                                        const std::function<void(const std::vector<Configuration>&)>& on_iteration) {
    if (!classify(c).is_vass) throw DomainError("coverability needs a machine without zero tests");
    if (target.kind() != TargetSet::Kind::UpwardClosed) throw DomainError("coverability needs an upward-closed target");
    const std::size_t d = c.dimension();
    std::vector<Configuration> basis;
    std::vector<bool> alive;
    std::deque<std::size_t> work;
    for (const auto& b : target.configurations()) {
        if (b.marking.size() != d || b.state >= c.states().size()) {
            throw InputError("target basis does not fit the machine");
        }
        basis.push_back(b);
        alive.push_back(true);
        work.push_back(basis.size() - 1);
    }
    CoverabilityBasis out;
    auto snapshot = [&] {
        std::vector<Configuration> live;
        for (std::size_t i = 0; i < basis.size(); ++i) {
            if (alive[i]) live.push_back(basis[i]);
        }
        return live;
    };
    if (on_iteration) on_iteration(snapshot());
    while (!work.empty()) {
        std::size_t i = work.front();
        work.pop_front();
        if (!alive[i]) continue;
        const Configuration b = basis[i];
        for (const auto& t : c.transitions()) {
            if (t.target != b.state) continue;
            Configuration pred{t.source, Marking(d)};
            for (std::size_t j = 0; j < d; ++j) {
                std::uint64_t need = b.marking[j] > t.post[j] ? b.marking[j] - t.post[j] : 0;
                pred.marking[j] = t.pre[j] + need;
            }
            bool subsumed = false;
            for (std::size_t j = 0; j < basis.size() && !subsumed; ++j) {
                subsumed = alive[j] && covers(pred, basis[j]);
            }
            if (subsumed) continue;
            for (std::size_t j = 0; j < basis.size(); ++j) {
                if (alive[j] && covers(basis[j], pred)) alive[j] = false;
            }
            basis.push_back(pred);
            alive.push_back(true);
            work.push_back(basis.size() - 1);
            ++out.iterations;
            if (on_iteration) on_iteration(snapshot());
        }
    }
    out.minimal = snapshot();
    return out;
}

ReachOracle<Configuration> coverability_oracle(const CounterMachine& c, const TargetSet& target) {
    CoverabilityBasis basis = backward_coverability(c, target);
    return ReachOracle<Configuration>{"backward coverability", [minimal = std::move(basis.minimal)](const Configuration& s) {
                                          for (const auto& b : minimal) {
                                              if (covers(s, b)) return ReachAnswer::Reachable;
                                          }
                                          return ReachAnswer::Unreachable;
                                      }};
}

}  // namespace decisive
