#include "decisive/model.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <unordered_map>

#include "decisive/error.hpp"

namespace decisive {

std::size_t ConfigurationHash::operator()(const Configuration& c) const {
    std::size_t h = std::hash<std::size_t>{}(c.state);
    for (std::uint64_t x : c.marking) {
        h ^= std::hash<std::uint64_t>{}(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
}

Integer evaluate_weight(const WeightFn& w, const Marking& m) {
    if (const auto* p = std::get_if<Polynomial>(&w)) return p->evaluate(m);
    return std::get<OpaqueWeight>(w).fn->evaluate(m);
}

std::string describe_weight(const WeightFn& w) {
    if (const auto* p = std::get_if<Polynomial>(&w)) return p->to_string();
    return "@" + std::get<OpaqueWeight>(w).name;
}

Marking Transition::enabling_corner() const {
    return kind == TransitionKind::Update ? pre : Marking(post.size(), 0);
}

CounterMachine::CounterMachine(std::vector<std::string> states, std::vector<std::string> counters,
                               std::vector<Transition> transitions)
    : states_(std::move(states)), counters_(std::move(counters)), transitions_(std::move(transitions)) {
    if (states_.empty()) throw ModelError("machine has no states");
    auto check_unique = [](const std::vector<std::string>& names, const char* what) {
        std::set<std::string> seen;
        for (const auto& n : names) {
            if (!seen.insert(n).second) throw ModelError(std::string("duplicate ") + what + " '" + n + "'");
        }
    };
    check_unique(states_, "state");
    check_unique(counters_, "counter");
    std::vector<std::string> names;
    for (const auto& t : transitions_) names.push_back(t.name);
    check_unique(names, "transition");

    const std::size_t d = counters_.size();
    for (auto& t : transitions_) {
        const std::string where = "transition '" + t.name + "'";
        if (t.source >= states_.size() || t.target >= states_.size()) {
            throw ModelError(where + " references an unknown state");
        }
        if (t.post.size() != d) throw ModelError(where + ": post vector has wrong arity");
        if (t.kind == TransitionKind::ZeroTest) {
            if (t.tested_counter >= d) throw ModelError(where + " tests an unknown counter");
            t.pre.assign(d, 0);
        } else if (t.pre.size() != d) {
            throw ModelError(where + ": pre vector has wrong arity");
        }
        if (const auto* p = std::get_if<Polynomial>(&t.weight)) {
            if (p->arity() == 0 && d > 0) {
                t.weight = Polynomial::constant(p->constant_term(), counters_);
                p = &std::get<Polynomial>(t.weight);
            }
            if (p->variables() != counters_) throw ModelError(where + ": weight uses foreign variables");
            if (!p->has_nonnegative_coefficients()) {
                throw ModelError(where + ": weight has a negative coefficient");
            }
            if (!positivity_check(*p, t.enabling_corner())) {
                throw ModelError(where + ": weight " + p->to_string() +
                                 " is 0 somewhere on the transition's enabling region");
            }
        } else {
            const auto& o = std::get<OpaqueWeight>(t.weight);
            if (!o.fn) throw ModelError(where + ": unbound opaque weight '" + o.name + "'");
            if (o.fn->arity() != d) {
                throw ModelError(where + ": opaque weight '" + o.name + "' expects " +
                                 std::to_string(o.fn->arity()) + " counter(s)");
            }
        }
    }
}

std::optional<std::size_t> CounterMachine::state_index(const std::string& name) const {
    auto it = std::find(states_.begin(), states_.end(), name);
    if (it == states_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - states_.begin());
}

std::optional<std::size_t> CounterMachine::counter_index(const std::string& name) const {
    auto it = std::find(counters_.begin(), counters_.end(), name);
    if (it == counters_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - counters_.begin());
}

std::vector<std::string> CounterMachine::weights_without_constant_term() const {
    std::vector<std::string> out;
    for (const auto& t : transitions_) {
        const auto* p = std::get_if<Polynomial>(&t.weight);
        if (p && p->constant_term() == 0) out.push_back(t.name);
    }
    return out;
}

std::string format_configuration(const CounterMachine& c, const Configuration& s) {
    std::ostringstream out;
    out << c.states().at(s.state) << " (";
    for (std::size_t i = 0; i < s.marking.size(); ++i) {
        if (i > 0) out << ",";
        out << s.marking[i];
    }
    out << ")";
    return out.str();
}

bool dominates(const Marking& a, const Marking& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] < b[i]) return false;
    }
    return true;
}

TargetSet TargetSet::finite(std::vector<Configuration> configurations) {
    TargetSet t;
    t.kind_ = Kind::Finite;
    for (auto& c : configurations) {
        if (std::find(t.configurations_.begin(), t.configurations_.end(), c) == t.configurations_.end()) {
            t.configurations_.push_back(std::move(c));
        }
    }
    return t;
}

TargetSet TargetSet::upward(std::vector<Configuration> basis) {
    TargetSet t;
    t.kind_ = Kind::UpwardClosed;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        bool redundant = false;
        for (std::size_t j = 0; j < basis.size() && !redundant; ++j) {
            if (i == j || basis[j].state != basis[i].state) continue;
            if (!dominates(basis[i].marking, basis[j].marking)) continue;
            // Keep the first of equal elements.
            redundant = basis[i].marking != basis[j].marking || j < i;
        }
        if (!redundant) t.configurations_.push_back(basis[i]);
    }
    return t;
}

TargetSet TargetSet::zero_counter() {
    TargetSet t;
    t.kind_ = Kind::ZeroCounter;
    return t;
}

bool membership(const TargetSet& a, const Configuration& s) {
    switch (a.kind()) {
        case TargetSet::Kind::Finite:
            return std::find(a.configurations().begin(), a.configurations().end(), s) !=
                   a.configurations().end();
        case TargetSet::Kind::UpwardClosed:
            return std::any_of(a.configurations().begin(), a.configurations().end(),
                               [&](const Configuration& b) {
                                   return b.state == s.state && dominates(s.marking, b.marking);
                               });
        case TargetSet::Kind::ZeroCounter:
            return std::all_of(s.marking.begin(), s.marking.end(), [](std::uint64_t x) { return x == 0; });
    }
    return false;
}

namespace {

bool is_enabled(const Transition& t, const Configuration& s) {
    if (t.source != s.state) return false;
    if (t.kind == TransitionKind::ZeroTest) return s.marking[t.tested_counter] == 0;
    return dominates(s.marking, t.pre);
}

void check_configuration(const CounterMachine& c, const Configuration& s) {
    if (s.state >= c.states().size() || s.marking.size() != c.dimension()) {
        throw InputError("configuration does not fit the machine");
    }
}

}  // namespace

std::vector<std::size_t> enabled(const CounterMachine& c, const Configuration& s) {
    check_configuration(c, s);
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < c.transitions().size(); ++i) {
        if (is_enabled(c.transitions()[i], s)) out.push_back(i);
    }
    return out;
}

Configuration fire(const CounterMachine& c, const Configuration& s, std::size_t transition) {
    check_configuration(c, s);
    const Transition& t = c.transitions().at(transition);
    if (!is_enabled(t, s)) {
        throw DomainError("transition '" + t.name + "' is disabled in " + format_configuration(c, s));
    }
    Configuration out{t.target, s.marking};
    for (std::size_t i = 0; i < out.marking.size(); ++i) {
        out.marking[i] = out.marking[i] - t.pre[i] + t.post[i];
    }
    return out;
}

EffectiveChain<Configuration> semantics(std::shared_ptr<const CounterMachine> c) {
    return EffectiveChain<Configuration>([c](const Configuration& s) {
        Distribution<Configuration> out;
        std::vector<std::size_t> en = enabled(*c, s);
        if (en.empty()) {
            out.emplace_back(s, Rational(1));
            return out;
        }
        std::vector<Integer> weights;
        std::unordered_map<Configuration, std::size_t> slot;
        Integer total = 0;
        for (std::size_t i : en) {
            const Transition& t = c->transitions()[i];
            Integer w = evaluate_weight(t.weight, s.marking);
            if (w <= 0) {
                throw ModelError("weight of transition '" + t.name + "' is " + w.get_str() + " at " +
                                 format_configuration(*c, s));
            }
            total += w;
            Configuration next = fire(*c, s, i);
            auto [it, inserted] = slot.emplace(next, out.size());
            if (inserted) {
                out.emplace_back(std::move(next), Rational(0));
                weights.push_back(w);
            } else {
                weights[it->second] += w;
            }
        }
        for (std::size_t i = 0; i < out.size(); ++i) out[i].second = make_rational(weights[i], total);
        return out;
    });
}

EffectiveChain<Configuration> semantics(const CounterMachine& c) {
    return semantics(std::make_shared<const CounterMachine>(c));
}

const char* to_string(Flag f) {
    switch (f) {
        case Flag::No: return "no";
        case Flag::Yes: return "yes";
        case Flag::Unknown: return "unknown";
    }
    return "unknown";
}

Classification classify(const CounterMachine& c) {
    Classification out;
    const auto& ts = c.transitions();
    out.is_single_state = c.states().size() == 1;
    out.is_vass = std::none_of(ts.begin(), ts.end(),
                               [](const Transition& t) { return t.kind == TransitionKind::ZeroTest; });
    out.is_pPN = out.is_single_state && out.is_vass;
    out.is_safe_one_counter =
        c.dimension() == 1 && std::all_of(ts.begin(), ts.end(), [](const Transition& t) {
            return t.kind == TransitionKind::ZeroTest || (t.pre[0] == 1 && t.post[0] <= 2);
        });
    bool opaque = std::any_of(ts.begin(), ts.end(), [](const Transition& t) {
        return std::holds_alternative<OpaqueWeight>(t.weight);
    });
    out.is_polynomial = opaque ? Flag::Unknown : Flag::Yes;
    if (opaque) {
        out.is_static = Flag::Unknown;
    } else {
        out.is_static = std::all_of(ts.begin(), ts.end(),
                                    [](const Transition& t) {
                                        return std::get<Polynomial>(t.weight).is_constant();
                                    })
                            ? Flag::Yes
                            : Flag::No;
    }

    if (!out.is_safe_one_counter) {
        out.phm_reason = "not a safe one-counter machine";
        return out;
    }
    if (opaque) {
        out.is_pHM = Flag::Unknown;
        out.phm_reason = "opaque weights";
        return out;
    }
    const std::size_t n = c.states().size();
    std::vector<std::vector<Rational>> matrix(n, std::vector<Rational>(n));
    for (std::size_t q = 0; q < n; ++q) {
        Polynomial s(c.counters());
        std::vector<Polynomial> to(n, Polynomial(c.counters()));
        for (const auto& t : ts) {
            if (t.kind != TransitionKind::Update || t.source != q) continue;
            const auto& w = std::get<Polynomial>(t.weight);
            s += w;
            to[t.target] += w;
        }
        if (s.is_zero()) {
            matrix[q][q] = 1;
            continue;
        }
        const auto& [probe, probe_coef] = *s.terms().begin();
        for (std::size_t q2 = 0; q2 < n; ++q2) {
            if (to[q2].is_zero()) continue;
            auto it = to[q2].terms().find(probe);
            Rational kappa = it == to[q2].terms().end() ? Rational(0) : make_rational(it->second, probe_coef);
            if (to[q2].scaled(kappa.get_den()) != s.scaled(kappa.get_num())) {
                out.phm_reason = "M[" + c.states()[q] + "," + c.states()[q2] + "] depends on the counter";
                return out;
            }
            matrix[q][q2] = kappa;
        }
    }
    out.is_pHM = Flag::Yes;
    out.phm_matrix = std::move(matrix);
    return out;
}

CounterMachine normalize_one_counter(const CounterMachine& c) {
    Classification k = classify(c);
    if (!k.is_single_state || !k.is_safe_one_counter) {
        throw DomainError("normal form needs a single-state safe one-counter machine");
    }
    std::vector<std::vector<const Transition*>> groups;
    std::vector<std::uint64_t> group_post;
    for (const auto& t : c.transitions()) {
        if (t.kind != TransitionKind::Update || t.post[0] == 1) continue;
        auto it = std::find(group_post.begin(), group_post.end(), t.post[0]);
        if (it == group_post.end()) {
            group_post.push_back(t.post[0]);
            groups.push_back({&t});
        } else {
            groups[static_cast<std::size_t>(it - group_post.begin())].push_back(&t);
        }
    }
    std::vector<Transition> out;
    for (std::size_t g = 0; g < groups.size(); ++g) {
        Transition merged = *groups[g].front();
        if (groups[g].size() > 1) {
            merged.name = group_post[g] == 0 ? "dec" : "inc";
            Polynomial sum(c.counters());
            for (const Transition* t : groups[g]) {
                const auto* p = std::get_if<Polynomial>(&t->weight);
                if (!p) throw UnsupportedError("cannot merge parallel opaque weights");
                sum += *p;
            }
            merged.weight = sum;
        }
        out.push_back(std::move(merged));
    }
    return CounterMachine(c.states(), c.counters(), std::move(out));
}

}  // namespace decisive
