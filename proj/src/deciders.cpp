#include "decisive/deciders.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "decisive/error.hpp"

namespace decisive {

const char* to_string(Answer a) {
    switch (a) {
        case Answer::Decisive: return "Decisive";
        case Answer::NotDecisive: return "NotDecisive";
        case Answer::Unsupported: return "Unsupported";
    }
    return "Unsupported";
}

std::string Verdict::headline() const {
    return std::string(to_string(answer)) + " (case: " + case_label + ")";
}

std::string Verdict::report() const {
    std::ostringstream out;
    out << headline() << "\n";
    for (const auto& [k, v] : witness) out << "  " << k << ": " << v << "\n";
    return out.str();
}

const std::string* Verdict::find(const std::string& key) const {
    for (const auto& [k, v] : witness) {
        if (k == key) return &v;
    }
    return nullptr;
}

Rational gambler_exact(const std::vector<Rational>& rho, std::size_t m) {
    const std::size_t n = rho.size() + 1;
    if (m > n) throw InputError("start index beyond the absorbing boundary");
    for (const auto& r : rho) {
        if (sgn(r) <= 0) throw InputError("odds ratios must be positive");
    }
    Rational prod = 1;
    Rational numerator = 0;
    Rational denominator = 0;
    for (std::size_t j = 0; j < n; ++j) {
        if (j > 0) prod *= rho[j - 1];
        denominator += prod;
        if (j >= m) numerator += prod;
    }
    return numerator / denominator;
}

WalkRatio WalkRatio::from_polynomials(Polynomial dec, Polynomial inc) {
    WalkRatio w;
    w.polynomials.emplace(std::move(dec), std::move(inc));
    return w;
}

WalkRatio WalkRatio::from_function(std::function<Rational(std::uint64_t)> rho) {
    WalkRatio w;
    w.rho = std::move(rho);
    return w;
}

Rational WalkRatio::at(std::uint64_t k) const {
    if (polynomials) {
        Integer dec = polynomials->first.evaluate_at(k);
        Integer inc = polynomials->second.evaluate_at(k);
        if (dec <= 0 || inc <= 0) throw InputError("walk weights must be positive at k >= 1");
        return make_rational(dec, inc);
    }
    Rational r = rho(k);
    if (sgn(r) <= 0) throw InputError("odds ratio must be positive");
    return r;
}

namespace {

// Smallest n0 such that h(n) > 0 for all n >= n0 (Cauchy bound), h with positive leading coefficient.
std::uint64_t positivity_threshold(const Polynomial& h) {
    const unsigned deg = h.degree();
    const Integer lead = h.coefficient(deg);
    Rational worst = 0;
    for (unsigned i = 0; i < deg; ++i) {
        Rational r = make_rational(abs(h.coefficient(i)), lead);
        if (r > worst) worst = r;
    }
    Integer floor_value = worst.get_num() / worst.get_den();
    return floor_value.get_ui() + 2;
}

}  // namespace

WalkResult walk_reach_prob(const WalkRatio& rho, std::uint64_t m, std::uint64_t horizon) {
    WalkResult out;
    if (m == 0) {
        out.kind = WalkResult::Kind::One;
        out.lower = out.upper = 1;
        out.certificate = "start in 0";
        return out;
    }
    std::optional<Rational> c;
    std::uint64_t n0 = 0;
    if (rho.polynomials) {
        const auto& [dec, inc] = *rho.polynomials;
        Verdict v = decide_one_counter(dec, inc);
        if (v.answer == Answer::Decisive) {
            out.kind = WalkResult::Kind::One;
            out.lower = out.upper = 1;
            out.certificate = "divergent series (" + v.case_label + ")";
            return out;
        }
        LeadingComparison cmp = compare_leading(dec, inc);
        if (one_counter_case(cmp) == 7) {
            c = cmp.d < cmp.d_prime ? Rational(1, 2)
                                    : Rational(make_rational(dec.coefficient(cmp.d), inc.coefficient(cmp.d)) + 1) / 2;
            // h = den(c) * (c * inc - dec) has a positive leading coefficient.
            Polynomial x = inc.arity() ? inc : dec;
            Polynomial dec_v = dec.arity() ? dec : Polynomial::constant(dec.constant_term(), x.variables());
            Polynomial inc_v = inc.arity() ? inc : Polynomial::constant(inc.constant_term(), x.variables());
            Polynomial h = inc_v.scaled(c->get_num());
            Polynomial neg = dec_v.scaled(-Integer(c->get_den()));
            h += neg;
            n0 = positivity_threshold(h);
        }
    }
    const std::uint64_t n = std::max({horizon, n0, m});
    Rational prod = 1;
    Rational head = 0;  // sum of products with index < m
    Rational partial = 0;
    for (std::uint64_t j = 0; j < n; ++j) {
        if (j > 0) prod *= rho.at(j);
        partial += prod;
        if (j < m) head += prod;
    }
    out.lower = 1 - head / partial;
    if (c) {
        Rational tail = prod * *c / (1 - *c);
        out.kind = WalkResult::Kind::Value;
        out.upper = 1 - head / (partial + tail);
        out.certificate = "geometric tail: rho_k <= " + to_string(*c) + " for k >= " + std::to_string(n0);
        return out;
    }
    out.kind = WalkResult::Kind::Inconclusive;
    out.upper = 1;
    out.certificate = "no symbolic certificate";
    return out;
}

int one_counter_case(const LeadingComparison& cmp) {
    if (cmp.d_prime < cmp.d) return 1;
    if (cmp.d < cmp.d_prime) return 7;
    if (!cmp.i0) return 3;
    if (cmp.larger == LeadingSide::Dec) return 2;
    if (*cmp.i0 == cmp.d) return 7;
    if (cmp.d >= 2 && *cmp.i0 <= cmp.d - 2) return 4;
    return *cmp.alpha <= 1 ? 5 : 6;
}

namespace {

const char* case_label(int k) {
    switch (k) {
        case 1: return "d'<d";
        case 2: return "a_i0>a'_i0";
        case 3: return "W(dec)=W(inc)";
        case 4: return "a'_i0>a_i0 with i0<=d-2";
        case 5: return "0<alpha<=1";
        case 6: return "alpha>1";
        case 7: return "inc dominates";
    }
    return "?";
}

}  // namespace

Verdict decide_one_counter(const Polynomial& dec, const Polynomial& inc) {
    Verdict v;
    if (dec.arity() > 1 || inc.arity() > 1) {
        v.answer = Answer::Unsupported;
        v.case_label = "multivariate weights";
        return v;
    }
    if (dec.is_zero() || inc.is_zero()) throw InputError("walk weights must not be identically zero");
    if (!dec.has_nonnegative_coefficients() || !inc.has_nonnegative_coefficients()) {
        throw InputError("walk weights need non-negative coefficients");
    }
    LeadingComparison cmp = compare_leading(dec, inc);
    const int k = one_counter_case(cmp);
    v.answer = (k <= 5) ? Answer::Decisive : Answer::NotDecisive;
    v.case_label = case_label(k);
    v.witness.emplace_back("case", std::to_string(k));
    v.witness.emplace_back("W(dec)", dec.to_string());
    v.witness.emplace_back("W(inc)", inc.to_string());
    v.witness.emplace_back("d", std::to_string(cmp.d));
    v.witness.emplace_back("d'", std::to_string(cmp.d_prime));
    if (cmp.i0) {
        v.witness.emplace_back("i0", std::to_string(*cmp.i0));
        v.witness.emplace_back("a_i0", dec.coefficient(*cmp.i0).get_str());
        v.witness.emplace_back("a'_i0", inc.coefficient(*cmp.i0).get_str());
    }
    if (cmp.alpha) v.witness.emplace_back("alpha", to_string(*cmp.alpha));
    return v;
}

namespace {

Verdict trivial(Answer a, std::string label) {
    Verdict v;
    v.answer = a;
    v.case_label = std::move(label);
    return v;
}

}  // namespace

Verdict decide_single_state(const CounterMachine& c, const Configuration& s0, const TargetSet& target) {
    Classification k = classify(c);
    if (!k.is_single_state || !k.is_safe_one_counter) {
        throw DomainError("needs a single-state safe one-counter machine");
    }
    if (k.is_polynomial != Flag::Yes) {
        return trivial(Answer::Unsupported,
                       "decisiveness is undecidable for single-state safe one-counter machines with computable weights");
    }
    std::uint64_t n_f = 0;
    if (target.kind() == TargetSet::Kind::Finite && target.configurations().size() == 1) {
        n_f = target.configurations()[0].marking.at(0);
    } else if (target.kind() != TargetSet::Kind::ZeroCounter) {
        return trivial(Answer::Unsupported, "one-counter decider needs the zero set or a single target configuration");
    }
    const std::uint64_t n_i = s0.marking.at(0);
    if (n_i == n_f) return trivial(Answer::Decisive, "s0 in A");

    CounterMachine normal = normalize_one_counter(c);
    Polynomial dec(c.counters());
    Polynomial inc(c.counters());
    for (const auto& t : normal.transitions()) {
        const auto& w = std::get<Polynomial>(t.weight);
        if (t.post[0] == 0) dec += w;
        if (t.post[0] == 2) inc += w;
    }
    if (dec.is_zero()) {
        return trivial(Answer::Decisive, n_i > n_f ? "A unreachable: counter never decreases"
                                                   : "counter moves only upward toward A");
    }
    if (inc.is_zero()) return trivial(Answer::Decisive, "counter never increases");

    Verdict walk = decide_one_counter(dec, inc);
    if (n_i > n_f) return walk;

    // Below the target the walk is confined to 0..n_f unless a zero test jumps past it.
    bool escapes = false;
    for (const auto& t : c.transitions()) {
        if (t.kind == TransitionKind::ZeroTest && t.post[0] > n_f) escapes = true;
    }
    if (!escapes) return trivial(Answer::Decisive, "finite region below the target");
    walk.witness.emplace_back("note", "zero test jumps above the target");
    return walk;
}

std::vector<Rational> invariant_distribution(const std::vector<std::vector<Rational>>& m) {
    const std::size_t n = m.size();
    if (n == 0) throw InputError("empty matrix");
    std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n));
    std::vector<Rational> b(n);
    for (std::size_t j = 0; j + 1 < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) a[j][i] = m[i][j] - (i == j ? 1 : 0);
    }
    for (std::size_t i = 0; i < n; ++i) a[n - 1][i] = 1;
    b[n - 1] = 1;
    return solve_linear_system(a, b);
}

bool is_irreducible(const std::vector<std::vector<Rational>>& m) {
    std::vector<FiniteChain::Row> rows(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
        for (std::size_t j = 0; j < m.size(); ++j) {
            if (sgn(m[i][j]) > 0) rows[i].emplace_back(j, m[i][j]);
        }
    }
    SccDecomposition scc = bsccs(FiniteChain(std::move(rows)));
    return scc.components.size() == 1;
}

BirthDeathSpec phm_birth_death(const CounterMachine& c, const std::vector<Rational>& pi) {
    const std::size_t n = c.states().size();
    Integer lcm = 1;
    for (const auto& p : pi) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), p.get_den_mpz_t());
    std::vector<Polynomial> s(n, Polynomial(c.counters()));
    std::vector<std::vector<Polynomial>> by_move(n, std::vector<Polynomial>(3, Polynomial(c.counters())));
    for (const auto& t : c.transitions()) {
        if (t.kind != TransitionKind::Update) continue;
        const auto& w = std::get<Polynomial>(t.weight);
        s[t.source] += w;
        by_move[t.source][t.post[0]] += w;
    }
    std::vector<Polynomial> p(3, Polynomial(c.counters()));
    for (std::size_t q = 0; q < n; ++q) {
        Polynomial others = Polynomial::constant(Integer(pi[q].get_num() * (lcm / pi[q].get_den())), c.counters());
        for (std::size_t q2 = 0; q2 < n; ++q2) {
            if (q2 != q) others = others * s[q2];
        }
        for (std::size_t v = 0; v < 3; ++v) p[v] += others * by_move[q][v];
    }
    return BirthDeathSpec{p[0], p[1], p[2]};
}

CounterMachine phm_zero_completion(const CounterMachine& c) {
    Classification k = classify(c);
    if (k.is_pHM != Flag::Yes) throw DomainError("machine is not a pHM");
    const auto& m = *k.phm_matrix;
    Integer lcm = 1;
    for (const auto& row : m) {
        for (const auto& x : row) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), x.get_den_mpz_t());
    }
    std::vector<Transition> ts;
    for (const auto& t : c.transitions()) {
        if (t.kind == TransitionKind::Update) ts.push_back(t);
    }
    for (std::size_t q = 0; q < m.size(); ++q) {
        for (std::size_t q2 = 0; q2 < m.size(); ++q2) {
            if (sgn(m[q][q2]) == 0) continue;
            Transition z;
            z.name = "zero_" + c.states()[q] + "_" + c.states()[q2];
            z.kind = TransitionKind::ZeroTest;
            z.source = q;
            z.target = q2;
            z.tested_counter = 0;
            z.post = {0};
            Integer w = m[q][q2].get_num() * (lcm / m[q][q2].get_den());
            z.weight = Polynomial::constant(w, c.counters());
            ts.push_back(std::move(z));
        }
    }
    return CounterMachine(c.states(), c.counters(), std::move(ts));
}

namespace {

std::string format_rq(const CounterMachine& c, const RqTable& table) {
    std::ostringstream out;
    for (std::size_t q = 0; q < table.r.size(); ++q) {
        if (q > 0) out << ", ";
        out << c.states()[q] << "=" << (table.r[q] ? std::to_string(*table.r[q]) : std::string("inf"));
    }
    return out.str();
}

}  // namespace

Verdict phm_decide(const CounterMachine& c, const Configuration& s0) {
    Classification k = classify(c);
    if (k.is_pHM != Flag::Yes) {
        return trivial(Answer::Unsupported, "not a pHM: " + k.phm_reason);
    }
    const auto& m = *k.phm_matrix;
    if (!is_irreducible(m)) return trivial(Answer::Unsupported, "M_C is reducible");
    if (s0.marking.at(0) == 0) return trivial(Answer::Decisive, "s0 in A");

    RqTable table = compute_rq(c);
    if (!table.all_finite() && !table.all_infinite()) {
        throw InternalError("r_q table mixes finite and infinite entries on an irreducible pHM");
    }
    if (table.all_finite()) {
        Verdict v = trivial(Answer::Decisive, "all r_q finite");
        v.witness.emplace_back("r_q", format_rq(c, table));
        return v;
    }
    std::vector<Rational> pi = invariant_distribution(m);
    BirthDeathSpec bd = phm_birth_death(c, pi);
    if (bd.down.is_zero()) throw InternalError("all r_q infinite but no decrement weight");

    Verdict inner;
    if (bd.up.is_zero()) {
        inner = trivial(Answer::Decisive, "P_1=0");
    } else {
        inner = decide_one_counter(bd.down, bd.up);
    }
    auto decorate = [&](Verdict v) {
        v.witness.emplace_back("r_q", format_rq(c, table));
        std::ostringstream pis;
        for (std::size_t q = 0; q < pi.size(); ++q) {
            if (q > 0) pis << ", ";
            pis << c.states()[q] << "=" << to_string(pi[q]);
        }
        v.witness.emplace_back("pi", pis.str());
        v.witness.emplace_back("P_-1", bd.down.to_string());
        v.witness.emplace_back("P_0", bd.stay.to_string());
        v.witness.emplace_back("P_1", bd.up.to_string());
        v.witness.emplace_back("walk", inner.headline());
        return v;
    };
    if (inner.answer == Answer::Decisive) return decorate(trivial(Answer::Decisive, "walk " + inner.case_label));

    const std::uint64_t q_count = c.states().size();
    if (s0.marking[0] >= q_count) return decorate(trivial(Answer::NotDecisive, "walk " + inner.case_label));

    std::unordered_set<Configuration> seen{s0};
    std::deque<Configuration> queue{s0};
    while (!queue.empty()) {
        Configuration s = std::move(queue.front());
        queue.pop_front();
        if (s.marking[0] == 0) continue;
        for (std::size_t t : enabled(c, s)) {
            Configuration next = fire(c, s, t);
            if (next.marking[0] >= q_count) {
                Verdict v = decorate(trivial(Answer::NotDecisive, "walk " + inner.case_label));
                v.witness.emplace_back("escape", format_configuration(c, next));
                return v;
            }
            if (seen.insert(next).second) {
                if (seen.size() > phm_exploration_cap) {
                    return trivial(Answer::Unsupported, "exploration from s0 exceeded " +
                                                            std::to_string(phm_exploration_cap) + " configurations");
                }
                queue.push_back(std::move(next));
            }
        }
    }
    Verdict v = decorate(trivial(Answer::Decisive, "finite reachable set from s0"));
    v.witness.emplace_back("explored", std::to_string(seen.size()));
    return v;
}

namespace {

void require_ppn(const CounterMachine& net) {
    if (!classify(net).is_pPN) throw UnsupportedError("not a pPN");
}

}  // namespace

RegularResult regular_ppn_decide(const CounterMachine& net, const Marking& m0, const Marking& m1,
                                 std::uint64_t bound) {
    require_ppn(net);
    const std::size_t d = net.dimension();
    if (m0.size() != d || m1.size() != d) throw InputError("marking arity mismatch");
    RegularResult out;
    out.verdict.answer = Answer::Decisive;
    out.verdict.case_label = "regular pPN";
    out.verdict.witness.emplace_back("B", std::to_string(bound));
    if (m0 == m1) {
        out.probability = 1;
        out.graph_size = 1;
        out.bscc_target = 1;
        out.verdict.witness.emplace_back("probability", to_string(out.probability));
        return out;
    }
    auto chain = semantics(net);
    std::vector<Marking> nodes;
    std::unordered_map<Configuration, std::size_t> index;
    std::vector<FiniteChain::Row> rows;
    std::vector<bool> expanded;
    auto intern = [&](const Marking& m) {
        auto [it, inserted] = index.emplace(Configuration{0, m}, nodes.size());
        if (inserted) {
            nodes.push_back(m);
            rows.emplace_back();
            expanded.push_back(false);
        }
        return std::make_pair(it->second, inserted);
    };
    auto within_bound = [&](const Marking& m) {
        for (std::size_t p = 0; p < d; ++p) {
            if (m[p] > m1[p] + bound) return false;
        }
        return true;
    };
    std::vector<std::size_t> stack{intern(m0).first};
    while (!stack.empty()) {
        std::size_t i = stack.back();
        stack.pop_back();
        expanded[i] = true;
        for (const auto& [next, p] : chain.successors(Configuration{0, nodes[i]})) {
            auto [j, fresh] = intern(next.marking);
            rows[i].emplace_back(j, p);
            if (fresh && next.marking != m1 && within_bound(next.marking)) stack.push_back(j);
        }
    }
    out.graph_size = nodes.size();
    auto target = index.find(Configuration{0, m1});
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (!expanded[i]) rows[i] = {{i, Rational(1)}};
    }
    FiniteChain fc(std::move(rows));
    SccDecomposition scc = bsccs(fc);
    for (std::size_t comp = 0; comp < scc.components.size(); ++comp) {
        if (!scc.bottom[comp]) continue;
        const auto& members = scc.components[comp];
        if (members.size() == 1 && nodes[members[0]] == m1) {
            ++out.bscc_target;
        } else if (members.size() == 1 && !expanded[members[0]]) {
            ++out.bscc_bound;
        } else {
            ++out.bscc_inner;
        }
    }
    out.probability = target == index.end() ? Rational(0) : solve_reach_exact(fc, 0, {target->second});
    out.verdict.witness.emplace_back("graph", std::to_string(out.graph_size) + " markings");
    out.verdict.witness.emplace_back("bscc", "target=" + std::to_string(out.bscc_target) +
                                                 ", bound=" + std::to_string(out.bscc_bound) +
                                                 ", inner=" + std::to_string(out.bscc_inner));
    out.verdict.witness.emplace_back("probability", to_string(out.probability));
    return out;
}

std::uint64_t bound_helper_bounded_net(const CounterMachine& net, const Marking& m0, std::size_t max_markings) {
    require_ppn(net);
    if (m0.size() != net.dimension()) throw InputError("marking arity mismatch");
    constexpr std::size_t root = static_cast<std::size_t>(-1);
    std::vector<Marking> nodes{m0};
    std::vector<std::size_t> parent{root};
    std::unordered_set<Configuration> seen{Configuration{0, m0}};
    std::uint64_t best = m0.empty() ? 0 : *std::max_element(m0.begin(), m0.end());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        Configuration s{0, nodes[i]};
        for (std::size_t t : enabled(net, s)) {
            Marking next = fire(net, s, t).marking;
            if (!seen.insert(Configuration{0, next}).second) continue;
            for (std::size_t a = i; a != root; a = parent[a]) {
                if (dominates(next, nodes[a]) && next != nodes[a]) {
                    throw DomainError("net is unbounded from the initial marking; supply B explicitly");
                }
            }
            if (nodes.size() >= max_markings) throw BudgetExhausted("reachability set too large for the bound helper");
            best = std::max(best, *std::max_element(next.begin(), next.end()));
            nodes.push_back(std::move(next));
            parent.push_back(i);
        }
    }
    return best;
}

DecideOutcome decide_model(const Model& model, std::optional<std::uint64_t> bound) {
    if (!model.initial || !model.target) throw InputError("model needs an init and a target block");
    const CounterMachine& c = model.machine;
    const Configuration& s0 = *model.initial;
    const TargetSet& a = *model.target;
    Classification k = classify(c);
    DecideOutcome out;
    auto unsupported = [&](std::string reason) {
        out.verdict = trivial(Answer::Unsupported, std::move(reason));
        return out;
    };

    if (k.is_safe_one_counter && k.is_single_state && a.kind() != TargetSet::Kind::UpwardClosed) {
        out.verdict = decide_single_state(c, s0, a);
        return out;
    }
    if (k.is_pPN) {
        if (a.kind() == TargetSet::Kind::Finite && a.configurations().size() == 1) {
            std::uint64_t b = bound ? *bound : bound_helper_bounded_net(c, s0.marking);
            RegularResult r = regular_ppn_decide(c, s0.marking, a.configurations()[0].marking, b);
            out.verdict = r.verdict;
            out.probability = r.probability;
            return out;
        }
        if (a.kind() == TargetSet::Kind::UpwardClosed) {
            if (k.is_static == Flag::Yes) {
                out.verdict = trivial(Answer::Decisive, "static pPN with an upward-closed target");
                return out;
            }
            return unsupported("decisiveness is undecidable for polynomial pPN with upward-closed targets");
        }
        return unsupported("the regular pPN decider handles a single target marking");
    }
    if (k.is_safe_one_counter && a.kind() == TargetSet::Kind::ZeroCounter) {
        if (k.is_pHM == Flag::Yes) {
            out.verdict = phm_decide(c, s0);
            return out;
        }
        return unsupported("one-counter machines with several states are decided only when homogeneous (pHM)");
    }
    if (k.is_static == Flag::Yes) {
        return unsupported("decisiveness is undecidable for static pCM with a finite target");
    }
    return unsupported("decisiveness is undecidable for polynomial pCM");
}

}  // namespace decisive
