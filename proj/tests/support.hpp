#pragma once

#include <cstdint>
#include <fstream>
#include <iterator>
#include <random>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "decisive/chain.hpp"
#include "decisive/generators.hpp"
#include "decisive/model.hpp"
#include "decisive/numeric.hpp"

namespace testing_support {

using namespace decisive;

inline std::uint64_t uniform(std::mt19937_64& rng, std::uint64_t lo, std::uint64_t hi) {
    return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng);
}

inline Rational random_positive_rational(std::mt19937_64& rng, std::uint64_t max = 9) {
    return make_rational(Integer(static_cast<unsigned long>(uniform(rng, 1, max))),
                         Integer(static_cast<unsigned long>(uniform(rng, 1, max))));
}

// Random row-stochastic chain; each state has 1..3 successors with integer weights 1..9.
inline FiniteChain random_finite_chain(std::mt19937_64& rng, std::size_t n, double absorbing_share = 0.2) {
    std::vector<FiniteChain::Row> rows(n);
    for (std::size_t s = 0; s < n; ++s) {
        if (std::bernoulli_distribution(absorbing_share)(rng)) {
            rows[s] = {{s, Rational(1)}};
            continue;
        }
        std::size_t k = uniform(rng, 1, std::min<std::size_t>(3, n));
        std::vector<std::pair<std::size_t, unsigned long>> picks;
        unsigned long total = 0;
        for (std::size_t i = 0; i < k; ++i) {
            unsigned long w = uniform(rng, 1, 9);
            picks.emplace_back(uniform(rng, 0, n - 1), w);
            total += w;
        }
        for (auto [t, w] : picks) rows[s].emplace_back(t, make_rational(w, total));
    }
    return FiniteChain(std::move(rows));
}

// Probability of reaching `targets` within k steps, by repeated vector iteration.
inline std::vector<Rational> bounded_reach(const FiniteChain& fc, const std::vector<bool>& targets, std::size_t k) {
    std::vector<Rational> x(fc.size());
    for (std::size_t s = 0; s < fc.size(); ++s) x[s] = targets[s] ? 1 : 0;
    for (std::size_t step = 0; step < k; ++step) {
        std::vector<Rational> y(fc.size());
        for (std::size_t s = 0; s < fc.size(); ++s) {
            if (targets[s]) {
                y[s] = 1;
                continue;
            }
            for (const auto& [t, p] : fc.row(s)) y[s] += p * x[t];
        }
        x = std::move(y);
    }
    return x;
}

// Transitive closure by repeated relaxation; reach[s][t] for paths of length >= 0.
inline std::vector<std::vector<bool>> closure(const FiniteChain& fc) {
    const std::size_t n = fc.size();
    std::vector<std::vector<bool>> r(n, std::vector<bool>(n, false));
    for (std::size_t s = 0; s < n; ++s) {
        r[s][s] = true;
        for (const auto& [t, p] : fc.row(s)) r[s][t] = true;
    }
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            if (!r[i][k]) continue;
            for (std::size_t j = 0; j < n; ++j) {
                if (r[k][j]) r[i][j] = true;
            }
        }
    }
    return r;
}

// Univariate polynomial in `c` with degree <= max_degree and coefficients <= max_coef, never zero.
inline Polynomial random_polynomial(std::mt19937_64& rng, unsigned max_degree = 3, unsigned max_coef = 5) {
    const std::vector<std::string> vars{"c"};
    Polynomial p(vars);
    unsigned d = static_cast<unsigned>(uniform(rng, 0, max_degree));
    for (unsigned i = 0; i <= d; ++i) {
        unsigned long a = uniform(rng, i == d ? 1 : 0, max_coef);
        if (a > 0) p.add_term({i}, Integer(a));
    }
    return p;
}

// Safe one-counter machine with random transitions; weights are constants.
inline CounterMachine random_safe_machine(std::mt19937_64& rng, std::size_t states, bool zero_tests = true) {
    std::vector<std::string> names;
    for (std::size_t q = 0; q < states; ++q) names.push_back("q" + std::to_string(q));
    const std::vector<std::string> counters{"c"};
    std::vector<Transition> ts;
    std::size_t count = uniform(rng, 1, 2 * states + 2);
    for (std::size_t i = 0; i < count; ++i) {
        Transition t;
        t.name = "t" + std::to_string(i);
        t.source = uniform(rng, 0, states - 1);
        t.target = uniform(rng, 0, states - 1);
        if (zero_tests && uniform(rng, 0, 4) == 0) {
            t.kind = TransitionKind::ZeroTest;
            t.tested_counter = 0;
            t.pre = {0};
            t.post = {uniform(rng, 0, 1)};
        } else {
            t.pre = {1};
            t.post = {uniform(rng, 0, 2)};
        }
        t.weight = Polynomial::constant(Integer(static_cast<unsigned long>(uniform(rng, 1, 4))), counters);
        ts.push_back(std::move(t));
    }
    return CounterMachine(names, counters, std::move(ts));
}

// Homogeneous safe one-counter machine: from q the aggregate weight towards q' is r(q,q') * s_q(c),
// split across the three counter moves. Every state steps to its cyclic successor, so M_C is irreducible.
inline CounterMachine random_phm(std::mt19937_64& rng, std::size_t states) {
    std::vector<std::string> names;
    for (std::size_t q = 0; q < states; ++q) names.push_back("q" + std::to_string(q));
    const std::vector<std::string> counters{"c"};
    std::vector<Transition> ts;
    for (std::size_t q = 0; q < states; ++q) {
        Polynomial base = random_polynomial(rng, 2, 3);
        for (std::size_t q2 = 0; q2 < states; ++q2) {
            if (q2 != (q + 1) % states && uniform(rng, 0, 1) == 0) continue;
            const unsigned long ratio = uniform(rng, 1, 3);
            std::vector<Polynomial> parts(3, Polynomial(counters));
            for (const auto& [e, a] : base.terms()) {
                Integer left = a * ratio;
                for (std::size_t v = 0; v < 2 && left > 0; ++v) {
                    Integer share = Integer(static_cast<unsigned long>(uniform(rng, 0, left.get_ui())));
                    if (share > 0) parts[v].add_term(e, share);
                    left -= share;
                }
                if (left > 0) parts[2].add_term(e, left);
            }
            for (std::uint64_t v = 0; v < 3; ++v) {
                if (parts[v].is_zero()) continue;
                Transition t;
                t.name = "t" + std::to_string(ts.size());
                t.source = q;
                t.target = q2;
                t.pre = {1};
                t.post = {v};
                t.weight = parts[v];
                ts.push_back(std::move(t));
            }
        }
        Transition z;
        z.name = "z" + std::to_string(q);
        z.kind = TransitionKind::ZeroTest;
        z.source = q;
        z.target = uniform(rng, 0, states - 1);
        z.pre = {0};
        z.post = {uniform(rng, 0, 1)};
        z.weight = Polynomial::constant(1, counters);
        ts.push_back(std::move(z));
    }
    return CounterMachine(names, counters, std::move(ts));
}

// Single-state net with up to `max_places` places and `max_transitions` transitions; every
// transition consumes at least one token. Weights are a positive constant plus a linear term.
inline CounterMachine random_net(std::mt19937_64& rng, std::size_t max_places = 4, std::size_t max_transitions = 6) {
    const std::size_t d = uniform(rng, 1, max_places);
    std::vector<std::string> places;
    for (std::size_t p = 0; p < d; ++p) places.push_back("p" + std::to_string(p));
    std::vector<Transition> ts;
    for (std::size_t i = 0, n = uniform(rng, 1, max_transitions); i < n; ++i) {
        Transition t;
        t.name = "t" + std::to_string(i);
        t.pre.assign(d, 0);
        t.post.assign(d, 0);
        for (std::size_t p = 0; p < d; ++p) {
            t.pre[p] = uniform(rng, 0, 1);
            t.post[p] = uniform(rng, 0, 2);
        }
        t.pre[uniform(rng, 0, d - 1)] += 1;
        Polynomial w = Polynomial::constant(Integer(static_cast<unsigned long>(uniform(rng, 1, 4))), places);
        const std::uint64_t a = uniform(rng, 0, 2);
        if (a > 0) {
            std::vector<std::uint32_t> e(d, 0);
            e[uniform(rng, 0, d - 1)] = 1;
            w.add_term(e, Integer(static_cast<unsigned long>(a)));
        }
        t.weight = w;
        ts.push_back(std::move(t));
    }
    return CounterMachine({"net"}, places, std::move(ts));
}

// All markings reachable from m0 (the net must be bounded), in discovery order.
inline std::vector<Marking> reachable_markings(const CounterMachine& net, const Marking& m0, std::size_t cap = 100000) {
    std::vector<Marking> out{m0};
    std::set<Marking> seen{m0};
    for (std::size_t i = 0; i < out.size(); ++i) {
        for (const auto& t : net.transitions()) {
            bool ok = true;
            for (std::size_t p = 0; p < m0.size(); ++p) ok = ok && out[i][p] >= t.pre[p];
            if (!ok) continue;
            Marking next = out[i];
            for (std::size_t p = 0; p < m0.size(); ++p) next[p] = next[p] - t.pre[p] + t.post[p];
            if (seen.insert(next).second) {
                if (out.size() >= cap) throw std::runtime_error("reachability set too large");
                out.push_back(next);
            }
        }
    }
    return out;
}

// Pr(F {m1}) on the full reachability chain of a bounded net, m1 absorbing.
inline Rational full_chain_probability(const CounterMachine& net, const Marking& m0, const Marking& m1) {
    std::vector<Marking> nodes = reachable_markings(net, m0);
    std::map<Marking, std::size_t> index;
    for (std::size_t i = 0; i < nodes.size(); ++i) index[nodes[i]] = i;
    if (!index.count(m1)) return 0;
    std::vector<FiniteChain::Row> rows(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i] == m1) {
            rows[i] = {{i, Rational(1)}};
            continue;
        }
        std::vector<std::pair<std::size_t, Integer>> moves;
        Integer total = 0;
        for (const auto& t : net.transitions()) {
            bool ok = true;
            for (std::size_t p = 0; p < m0.size(); ++p) ok = ok && nodes[i][p] >= t.pre[p];
            if (!ok) continue;
            Marking next = nodes[i];
            for (std::size_t p = 0; p < m0.size(); ++p) next[p] = next[p] - t.pre[p] + t.post[p];
            Integer w = std::get<Polynomial>(t.weight).evaluate(nodes[i]);
            moves.emplace_back(index.at(next), w);
            total += w;
        }
        if (moves.empty()) {
            rows[i] = {{i, Rational(1)}};
            continue;
        }
        for (const auto& [j, w] : moves) rows[i].emplace_back(j, make_rational(w, total));
    }
    return solve_reach_exact(FiniteChain(std::move(rows)), 0, {index.at(m1)});
}

// Configurations with a counter above `cap` become absorbing, which makes the chain finite.
inline EffectiveChain<Configuration> truncated(EffectiveChain<Configuration> chain, std::uint64_t cap) {
    return EffectiveChain<Configuration>([chain, cap](const Configuration& s) {
        for (auto x : s.marking) {
            if (x > cap) return Distribution<Configuration>{{s, Rational(1)}};
        }
        return chain.successors(s);
    });
}

// Random two-counter program of `body` instructions followed by halt.
inline CounterProgram random_program(std::mt19937_64& rng, std::size_t body) {
    std::vector<Instruction> ins;
    for (std::size_t i = 0; i < body; ++i) {
        std::size_t c = uniform(rng, 0, 1);
        if (uniform(rng, 0, 1) == 0) {
            ins.push_back(Inc{c, uniform(rng, 0, body)});
        } else {
            ins.push_back(Test{c, uniform(rng, 0, body), uniform(rng, 0, body)});
        }
    }
    ins.push_back(Halt{});
    return CounterProgram(std::move(ins));
}

// Birth-death chain on 0..n with odds ratio rho_k = down/up at state k, endpoints absorbing.
inline FiniteChain birth_death(const std::vector<Rational>& rho) {
    const std::size_t n = rho.size() + 1;
    std::vector<FiniteChain::Row> rows(n + 1);
    rows[0] = {{0, Rational(1)}};
    rows[n] = {{n, Rational(1)}};
    for (std::size_t k = 1; k < n; ++k) {
        Rational up = 1 / (1 + rho[k - 1]);
        rows[k] = {{k + 1, up}, {k - 1, 1 - up}};
    }
    return FiniteChain(std::move(rows));
}

// The case predicates written directly from the partition, without the library's comparison.
inline std::vector<int> matching_cases(const Polynomial& dec, const Polynomial& inc) {
    const unsigned d = dec.degree();
    const unsigned dp = inc.degree();
    std::optional<unsigned> i0;
    if (d == dp) {
        for (int i = static_cast<int>(d); i >= 0; --i) {
            if (dec.coefficient(i) != inc.coefficient(i)) {
                i0 = static_cast<unsigned>(i);
                break;
            }
        }
    }
    std::vector<int> hits;
    if (dp < d) hits.push_back(1);
    if (d == dp && i0 && dec.coefficient(*i0) > inc.coefficient(*i0)) hits.push_back(2);
    if (dec == inc) hits.push_back(3);
    if (d == dp && i0 && inc.coefficient(*i0) > dec.coefficient(*i0) && d >= 2 && *i0 <= d - 2) hits.push_back(4);
    if (d == dp && i0 && d >= 1 && *i0 == d - 1 && inc.coefficient(*i0) > dec.coefficient(*i0)) {
        Rational alpha = make_rational(inc.coefficient(d - 1) - dec.coefficient(d - 1), dec.coefficient(d));
        hits.push_back(alpha <= 1 ? 5 : 6);
    }
    if (d < dp || (d == dp && inc.coefficient(d) > dec.coefficient(d))) hits.push_back(7);
    return hits;
}

inline std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

inline std::string data_path(const std::string& name) { return std::string(DECISIVE_TEST_DATA) + "/" + name; }

}  // namespace testing_support
