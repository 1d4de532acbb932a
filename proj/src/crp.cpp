#include "decisive/crp.hpp"

#include "decisive/analysis.hpp"
#include "decisive/reach.hpp"

namespace decisive {

const char* to_string(CrpStatus s) {
    switch (s) {
        case CrpStatus::Complete:
            return "complete";
        case CrpStatus::StepCap:
            return "step cap reached";
        case CrpStatus::OracleUnknown:
            return "oracle unknown";
    }
    return "?";
}

std::function<bool(const Configuration&)> target_predicate(const Model& model) {
    if (!model.target) throw InputError("model has no target block");
    return [a = *model.target](const Configuration& s) { return membership(a, s); };
}

ReachOracle<Configuration> select_oracle(const Model& model, const std::string& spec) {
    if (!model.target) throw InputError("model has no target block");
    const TargetSet& a = *model.target;
    if (spec == "auto") {
        Classification k = classify(model.machine);
        if (a.kind() == TargetSet::Kind::ZeroCounter && k.is_safe_one_counter) {
            return one_counter_oracle(model.machine);
        }
        if (a.kind() == TargetSet::Kind::UpwardClosed && k.is_vass) {
            return coverability_oracle(model.machine, a);
        }
        return bounded_oracle(semantics(model.machine), target_predicate(model), default_oracle_budget);
    }
    const std::string prefix = "bounded:";
    if (spec.rfind(prefix, 0) == 0) {
        std::string digits = spec.substr(prefix.size());
        if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos || digits.size() > 18) {
            throw InputError("bad oracle budget '" + digits + "'");
        }
        return bounded_oracle(semantics(model.machine), target_predicate(model), std::stoull(digits));
    }
    throw InputError("unknown oracle '" + spec + "' (expected auto or bounded:N)");
}

bool certified_decisive(const Model& model, std::optional<std::uint64_t> bound) {
    try {
        return decide_model(model, bound).verdict.answer == Answer::Decisive;
    } catch (const Error&) {
        return false;
    }
}

ModelCrpResult run_crp(const Model& model, const Rational& theta, const ModelCrpOptions& options) {
    if (!model.initial || !model.target) throw InputError("model needs an init and a target block");
    if (sgn(theta) <= 0) throw InputError("theta must be positive");
    const Configuration& s0 = *model.initial;
    const TargetSet& a = *model.target;
    ModelCrpResult out;
    if (options.oracle == "auto" && a.kind() == TargetSet::Kind::Finite && a.configurations().size() == 1 &&
        classify(model.machine).is_pPN) {
        std::optional<std::uint64_t> b = options.bound;
        if (!b) {
            try {
                b = bound_helper_bounded_net(model.machine, s0.marking);
            } catch (const DomainError&) {
            } catch (const BudgetExhausted&) {
            }
        }
        if (b) {
            RegularResult r = regular_ppn_decide(model.machine, s0.marking, a.configurations()[0].marking, *b);
            out.crp.interval = ProbInterval(r.probability, r.probability);
            out.method = "exact solve on the bounded marking graph (B = " + std::to_string(*b) + ")";
            out.oracle = "none";
            return out;
        }
    }
    ReachOracle<Configuration> oracle = select_oracle(model, options.oracle);
    CrpOptions crp_options;
    crp_options.step_cap = options.step_cap;
    crp_options.merge_frontier = options.merge_frontier;
    crp_options.trace = options.trace;
    out.crp = comp_prob(semantics(model.machine), s0, target_predicate(model), theta, oracle, crp_options);
    out.method = "framing (breadth-first frontier)";
    out.oracle = oracle.capability;
    return out;
}

}  // namespace decisive
