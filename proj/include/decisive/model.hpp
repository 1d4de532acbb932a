#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "decisive/chain.hpp"
#include "decisive/numeric.hpp"

namespace decisive {

using Marking = std::vector<std::uint64_t>;

struct Configuration {
    std::size_t state = 0;
    Marking marking;

    bool operator==(const Configuration&) const = default;
};

struct ConfigurationHash {
    std::size_t operator()(const Configuration& c) const;
};

}  // namespace decisive

template <>
struct std::hash<decisive::Configuration> : decisive::ConfigurationHash {};

namespace decisive {

// A computable weight that is not a polynomial.
class WeightFunction {
public:
    virtual ~WeightFunction() = default;
    virtual Integer evaluate(const Marking& m) const = 0;
    // Surface form in the DSL, e.g. `hilbert[x1](x1 - 2)`.
    virtual std::string definition() const = 0;
    // Number of counters the function expects.
    virtual std::size_t arity() const = 0;
};

struct OpaqueWeight {
    std::string name;
    std::shared_ptr<const WeightFunction> fn;
};

using WeightFn = std::variant<Polynomial, OpaqueWeight>;

Integer evaluate_weight(const WeightFn& w, const Marking& m);
std::string describe_weight(const WeightFn& w);

enum class TransitionKind { ZeroTest, Update };

struct Transition {
    std::string name;
    TransitionKind kind = TransitionKind::Update;
    std::size_t source = 0;
    std::size_t target = 0;
    std::size_t tested_counter = 0;  // ZeroTest only
    Marking pre;                     // all zeros for ZeroTest
    Marking post;
    WeightFn weight;

    // Smallest marking at which the transition is enabled.
    Marking enabling_corner() const;
};

class CounterMachine {
public:
    CounterMachine() = default;
    // Validates names, arities, and load-time positivity of polynomial weights.
    CounterMachine(std::vector<std::string> states, std::vector<std::string> counters,
                   std::vector<Transition> transitions);

    const std::vector<std::string>& states() const { return states_; }
    const std::vector<std::string>& counters() const { return counters_; }
    const std::vector<Transition>& transitions() const { return transitions_; }
    std::size_t dimension() const { return counters_.size(); }

    std::optional<std::size_t> state_index(const std::string& name) const;
    std::optional<std::size_t> counter_index(const std::string& name) const;

    // Polynomial weights with a zero constant term; accepted because they are
    // positive on their enabling region.
    std::vector<std::string> weights_without_constant_term() const;

private:
    std::vector<std::string> states_;
    std::vector<std::string> counters_;
    std::vector<Transition> transitions_;
};

std::string format_configuration(const CounterMachine& c, const Configuration& s);

class TargetSet {
public:
    enum class Kind { Finite, UpwardClosed, ZeroCounter };

    static TargetSet finite(std::vector<Configuration> configurations);
    // Basis reduced to its minimal elements.
    static TargetSet upward(std::vector<Configuration> basis);
    static TargetSet zero_counter();

    Kind kind() const { return kind_; }
    const std::vector<Configuration>& configurations() const { return configurations_; }

    bool operator==(const TargetSet&) const = default;

private:
    Kind kind_ = Kind::Finite;
    std::vector<Configuration> configurations_;
};

bool dominates(const Marking& a, const Marking& b);
bool membership(const TargetSet& a, const Configuration& s);

std::vector<std::size_t> enabled(const CounterMachine& c, const Configuration& s);
Configuration fire(const CounterMachine& c, const Configuration& s, std::size_t transition);

EffectiveChain<Configuration> semantics(std::shared_ptr<const CounterMachine> c);
EffectiveChain<Configuration> semantics(const CounterMachine& c);

enum class Flag { No, Yes, Unknown };
const char* to_string(Flag f);

struct Classification {
    bool is_single_state = false;
    bool is_vass = false;  // no zero tests
    bool is_pPN = false;
    bool is_safe_one_counter = false;
    Flag is_polynomial = Flag::No;
    Flag is_static = Flag::No;  // every weight a constant
    Flag is_pHM = Flag::No;
    // Row q: aggregate probability of moving from q to q' by an update transition.
    // A state without update transitions only self-loops.
    std::optional<std::vector<std::vector<Rational>>> phm_matrix;
    std::string phm_reason;
};

Classification classify(const CounterMachine& c);

CounterMachine normalize_one_counter(const CounterMachine& c);

struct Model {
    CounterMachine machine;
    std::optional<Configuration> initial;
    std::optional<TargetSet> target;
};

}  // namespace decisive
