#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "decisive/crp.hpp"
#include "decisive/deciders.hpp"
#include "decisive/model.hpp"

namespace decisive {

constexpr std::size_t default_oracle_budget = 100'000;

std::function<bool(const Configuration&)> target_predicate(const Model& model);

// `auto` or `bounded:N`.
ReachOracle<Configuration> select_oracle(const Model& model, const std::string& spec);

// True when decide_model returns Decisive; any failure of the decider counts as false.
bool certified_decisive(const Model& model, std::optional<std::uint64_t> bound = std::nullopt);

struct ModelCrpOptions {
    std::string oracle = "auto";
    std::optional<std::size_t> step_cap;
    bool merge_frontier = true;
    std::optional<std::uint64_t> bound;  // regular pPN path only
    std::function<void(const CrpStep&)> trace;
};

struct ModelCrpResult {
    CrpResult crp;
    std::string method;
    std::string oracle;
};

// pPN with a single target marking goes through the exact regular-net solver
// when the oracle is `auto` and a bound is known or derivable.
ModelCrpResult run_crp(const Model& model, const Rational& theta, const ModelCrpOptions& options = {});

}  // namespace decisive
