#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "decisive/model.hpp"
#include "decisive/numeric.hpp"
#include "decisive/reach.hpp"

namespace decisive {

enum class Answer { Decisive, NotDecisive, Unsupported };

const char* to_string(Answer a);

struct Verdict {
    Answer answer = Answer::Unsupported;
    std::string case_label;
    // Ordered (name, value) pairs; rationals as num/den.
    std::vector<std::pair<std::string, std::string>> witness;

    std::string headline() const;  // e.g. "Decisive (case: W(dec)=W(inc))"
    std::string report() const;
    const std::string* find(const std::string& key) const;
};

Rational gambler_exact(const std::vector<Rational>& rho, std::size_t m);

// rho_k = dec(k) / inc(k), or an arbitrary positive function when `polynomials` is empty.
struct WalkRatio {
    std::optional<std::pair<Polynomial, Polynomial>> polynomials;  // (dec, inc)
    std::function<Rational(std::uint64_t)> rho;

    static WalkRatio from_polynomials(Polynomial dec, Polynomial inc);
    static WalkRatio from_function(std::function<Rational(std::uint64_t)> rho);
    Rational at(std::uint64_t k) const;
};

struct WalkResult {
    enum class Kind { One, Value, Inconclusive };
    Kind kind = Kind::Inconclusive;
    Rational lower = 0;
    Rational upper = 1;
    std::string certificate;
};

// Probability that the walk started at m visits 0.
WalkResult walk_reach_prob(const WalkRatio& rho, std::uint64_t m, std::uint64_t horizon);

// Case numbers follow the partition: 1 d'<d, 2 dec larger at i0, 3 equal,
// 4 inc larger at i0<=d-2, 5 alpha<=1, 6 alpha>1, 7 inc dominates.
int one_counter_case(const LeadingComparison& cmp);
Verdict decide_one_counter(const Polynomial& dec, const Polynomial& inc);

// Single-state safe one-counter machine with a ZeroCounter or single-configuration target.
Verdict decide_single_state(const CounterMachine& c, const Configuration& s0, const TargetSet& target);

std::vector<Rational> invariant_distribution(const std::vector<std::vector<Rational>>& m);
bool is_irreducible(const std::vector<std::vector<Rational>>& m);

struct BirthDeathSpec {
    Polynomial down;  // P_{-1}
    Polynomial stay;  // P_0
    Polynomial up;    // P_1
};

// P_v scaled by a common positive integer so that all coefficients are integers.
BirthDeathSpec phm_birth_death(const CounterMachine& c, const std::vector<Rational>& pi);

// Zero tests replaced by constant-weight moves q -> q' following M_C.
CounterMachine phm_zero_completion(const CounterMachine& c);

constexpr std::size_t phm_exploration_cap = 1'000'000;

Verdict phm_decide(const CounterMachine& c, const Configuration& s0);

struct RegularResult {
    Verdict verdict;
    Rational probability = 0;
    std::size_t graph_size = 0;
    std::size_t bscc_target = 0;
    std::size_t bscc_bound = 0;
    std::size_t bscc_inner = 0;
};

RegularResult regular_ppn_decide(const CounterMachine& net, const Marking& m0, const Marking& m1,
                                 std::uint64_t bound);

std::uint64_t bound_helper_bounded_net(const CounterMachine& net, const Marking& m0,
                                       std::size_t max_markings = 1'000'000);

struct DecideOutcome {
    Verdict verdict;
    std::optional<Rational> probability;
};

// Dispatch on the model's class; Unsupported verdicts name the blocking result.
DecideOutcome decide_model(const Model& model, std::optional<std::uint64_t> bound = std::nullopt);

}  // namespace decisive
