#include "decisive/chain.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <tuple>

namespace decisive {

ProbInterval::ProbInterval(Rational low_, Rational up_) : low(std::move(low_)), up(std::move(up_)) {
    if (sgn(low) < 0 || low > up || up > 1) {
        throw InternalError("malformed interval [" + to_string(low) + ", " + to_string(up) + "]");
    }
}

FiniteChain::FiniteChain(std::vector<Row> rows) {
    const std::size_t n = rows.size();
    rows_.reserve(n);
    for (std::size_t s = 0; s < n; ++s) {
        std::map<std::size_t, Rational> merged;
        for (const auto& [t, p] : rows[s]) {
            if (t >= n) throw InputError("edge " + std::to_string(s) + " -> " + std::to_string(t) +
                                         " leaves the state space");
            if (sgn(p) <= 0) throw InputError("non-positive probability on edge " + std::to_string(s) +
                                              " -> " + std::to_string(t));
            merged[t] += p;
        }
        Rational total = 0;
        for (const auto& [t, p] : merged) total += p;
        if (total != 1) {
            throw InputError("row " + std::to_string(s) + " sums to " + to_string(total));
        }
        rows_.emplace_back(merged.begin(), merged.end());
    }
}

bool FiniteChain::is_absorbing(std::size_t s) const {
    const Row& r = row(s);
    return r.size() == 1 && r[0].first == s;
}

FiniteChain FiniteChain::parse_edge_list(std::string_view text) {
    std::vector<std::tuple<std::size_t, std::size_t, Rational>> edges;
    std::size_t max_state = 0;
    bool any = false;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream fields(line);
        std::string src;
        std::string dst;
        std::string prob;
        if (!(fields >> src)) continue;
        std::string extra;
        if (!(fields >> dst >> prob) || (fields >> extra)) {
            throw ParseError(line_no, 1, "expected `src dst num/den`");
        }
        try {
            std::size_t a = std::stoul(src);
            std::size_t b = std::stoul(dst);
            edges.emplace_back(a, b, parse_rational(prob));
            max_state = std::max({max_state, a, b});
            any = true;
        } catch (const std::logic_error&) {
            throw ParseError(line_no, 1, "malformed state index");
        } catch (const InputError& e) {
            throw ParseError(line_no, 1, e.what());
        }
    }
    std::vector<Row> rows(any ? max_state + 1 : 0);
    for (auto& [a, b, p] : edges) rows[a].emplace_back(b, p);
    return FiniteChain(std::move(rows));
}

std::string FiniteChain::to_edge_list() const {
    std::ostringstream out;
    out << "# " << size() << " states\n";
    for (std::size_t s = 0; s < size(); ++s) {
        for (const auto& [t, p] : rows_[s]) out << s << ' ' << t << ' ' << to_string(p) << '\n';
    }
    return out.str();
}

EffectiveChain<std::size_t> as_effective(std::shared_ptr<const FiniteChain> fc) {
    return EffectiveChain<std::size_t>([fc](const std::size_t& s) {
        const auto& row = fc->row(s);
        return Distribution<std::size_t>(row.begin(), row.end());
    });
}

std::vector<Rational> solve_linear_system(const std::vector<std::vector<Rational>>& a,
                                          const std::vector<Rational>& b) {
    const std::size_t n = a.size();
    if (b.size() != n) throw InputError("right-hand side size mismatch");
    std::vector<std::vector<Integer>> m(n, std::vector<Integer>(n + 1));
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i].size() != n) throw InputError("matrix is not square");
        Integer lcm = b[i].get_den();
        for (const auto& x : a[i]) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), x.get_den_mpz_t());
        for (std::size_t j = 0; j < n; ++j) m[i][j] = a[i][j].get_num() * (lcm / a[i][j].get_den());
        m[i][n] = b[i].get_num() * (lcm / b[i].get_den());
    }
    Integer prev = 1;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t pivot = k;
        while (pivot < n && m[pivot][k] == 0) ++pivot;
        if (pivot == n) throw InternalError("singular linear system");
        std::swap(m[k], m[pivot]);
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j <= n; ++j) {
                m[i][j] = m[i][j] * m[k][k] - m[i][k] * m[k][j];
                mpz_divexact(m[i][j].get_mpz_t(), m[i][j].get_mpz_t(), prev.get_mpz_t());
            }
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    std::vector<Rational> x(n);
    for (std::size_t i = n; i-- > 0;) {
        Rational acc(m[i][n]);
        for (std::size_t j = i + 1; j < n; ++j) acc -= Rational(m[i][j]) * x[j];
        x[i] = acc / Rational(m[i][i]);
    }
    return x;
}

std::vector<bool> backward_reachable(const FiniteChain& fc, const std::vector<bool>& targets) {
    const std::size_t n = fc.size();
    std::vector<std::vector<std::size_t>> preds(n);
    for (std::size_t s = 0; s < n; ++s) {
        for (const auto& [t, p] : fc.row(s)) preds[t].push_back(s);
    }
    std::vector<bool> seen(n, false);
    std::vector<std::size_t> stack;
    for (std::size_t s = 0; s < n; ++s) {
        if (targets[s]) {
            seen[s] = true;
            stack.push_back(s);
        }
    }
    while (!stack.empty()) {
        std::size_t t = stack.back();
        stack.pop_back();
        for (std::size_t s : preds[t]) {
            if (!seen[s]) {
                seen[s] = true;
                stack.push_back(s);
            }
        }
    }
    return seen;
}

Rational solve_reach_exact(const FiniteChain& fc, std::size_t s0, const std::vector<std::size_t>& targets) {
    const std::size_t n = fc.size();
    if (s0 >= n) throw InputError("initial state out of range");
    std::vector<bool> in_a(n, false);
    for (std::size_t t : targets) {
        if (t >= n) throw InputError("target state out of range");
        in_a[t] = true;
    }
    if (in_a[s0]) return 1;
    std::vector<bool> can_reach = backward_reachable(fc, in_a);
    if (!can_reach[s0]) return 0;

    std::vector<std::size_t> index(n, n);
    std::vector<std::size_t> unknowns;
    std::vector<std::size_t> stack{s0};
    index[s0] = 0;
    unknowns.push_back(s0);
    while (!stack.empty()) {
        std::size_t s = stack.back();
        stack.pop_back();
        for (const auto& [t, p] : fc.row(s)) {
            if (in_a[t] || !can_reach[t] || index[t] != n) continue;
            index[t] = unknowns.size();
            unknowns.push_back(t);
            stack.push_back(t);
        }
    }
    const std::size_t k = unknowns.size();
    std::vector<std::vector<Rational>> a(k, std::vector<Rational>(k));
    std::vector<Rational> b(k);
    for (std::size_t i = 0; i < k; ++i) {
        a[i][i] += 1;
        for (const auto& [t, p] : fc.row(unknowns[i])) {
            if (in_a[t]) {
                b[i] += p;
            } else if (index[t] != n) {
                a[i][index[t]] -= p;
            }
        }
    }
    return solve_linear_system(a, b)[0];
}

std::vector<std::vector<std::size_t>> SccDecomposition::bottom_components() const {
    std::vector<std::vector<std::size_t>> out;
    for (std::size_t c = 0; c < components.size(); ++c) {
        if (bottom[c]) out.push_back(components[c]);
    }
    return out;
}

SccDecomposition bsccs(const FiniteChain& fc) {
    const std::size_t n = fc.size();
    constexpr std::size_t unvisited = static_cast<std::size_t>(-1);
    std::vector<std::size_t> order(n, unvisited);
    std::vector<std::size_t> low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<std::size_t> stack;
    SccDecomposition out;
    out.component_of.assign(n, unvisited);
    std::size_t counter = 0;

    struct Frame {
        std::size_t state;
        std::size_t edge;
    };
    for (std::size_t root = 0; root < n; ++root) {
        if (order[root] != unvisited) continue;
        std::vector<Frame> call{{root, 0}};
        order[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!call.empty()) {
            Frame& f = call.back();
            const auto& row = fc.row(f.state);
            if (f.edge < row.size()) {
                std::size_t t = row[f.edge++].first;
                if (order[t] == unvisited) {
                    order[t] = low[t] = counter++;
                    stack.push_back(t);
                    on_stack[t] = true;
                    call.push_back({t, 0});
                } else if (on_stack[t]) {
                    low[f.state] = std::min(low[f.state], order[t]);
                }
                continue;
            }
            std::size_t s = f.state;
            call.pop_back();
            if (!call.empty()) low[call.back().state] = std::min(low[call.back().state], low[s]);
            if (low[s] != order[s]) continue;
            std::vector<std::size_t> component;
            std::size_t t;
            do {
                t = stack.back();
                stack.pop_back();
                on_stack[t] = false;
                out.component_of[t] = out.components.size();
                component.push_back(t);
            } while (t != s);
            std::sort(component.begin(), component.end());
            out.components.push_back(std::move(component));
        }
    }
    out.bottom.assign(out.components.size(), true);
    for (std::size_t s = 0; s < n; ++s) {
        for (const auto& [t, p] : fc.row(s)) {
            if (out.component_of[t] != out.component_of[s]) out.bottom[out.component_of[s]] = false;
        }
    }
    return out;
}

}  // namespace decisive
