#include "decisive/generators.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <sstream>

#include "decisive/error.hpp"
#include "decisive/weights.hpp"

namespace decisive {

CounterProgram::CounterProgram(std::vector<Instruction> instructions) : instructions_(std::move(instructions)) {
    if (instructions_.empty()) throw InputError("program has no instructions");
    const std::size_t n = instructions_.size() - 1;
    auto check_label = [&](std::size_t i, std::size_t label) {
        if (label > n) {
            throw InputError("instruction " + std::to_string(i) + " jumps to " + std::to_string(label) +
                             " beyond the halt instruction " + std::to_string(n));
        }
    };
    auto check_counter = [&](std::size_t i, std::size_t c) {
        if (c > 1) throw InputError("instruction " + std::to_string(i) + " uses an unknown counter");
    };
    for (std::size_t i = 0; i <= n; ++i) {
        const Instruction& ins = instructions_[i];
        if (std::holds_alternative<Halt>(ins) != (i == n)) {
            throw InputError("Halt must be the last instruction, and only the last");
        }
        if (const auto* inc = std::get_if<Inc>(&ins)) {
            check_counter(i, inc->counter);
            check_label(i, inc->next);
        } else if (const auto* test = std::get_if<Test>(&ins)) {
            check_counter(i, test->counter);
            check_label(i, test->then_next);
            check_label(i, test->else_next);
        }
    }
}

std::size_t CounterProgram::test_count() const {
    std::size_t k = 0;
    for (const auto& ins : instructions_) k += std::holds_alternative<Test>(ins) ? 1 : 0;
    return k;
}

std::size_t CounterProgram::inc_count() const {
    std::size_t k = 0;
    for (const auto& ins : instructions_) k += std::holds_alternative<Inc>(ins) ? 1 : 0;
    return k;
}

CounterProgram CounterProgram::parse(std::string_view text) {
    std::vector<Instruction> out;
    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw.substr(0, raw.find("//"));
        std::vector<std::pair<std::string, std::size_t>> words;
        for (std::size_t i = 0; i < line.size();) {
            if (std::isspace(static_cast<unsigned char>(line[i]))) {
                ++i;
                continue;
            }
            std::size_t start = i;
            while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
            words.emplace_back(line.substr(start, i - start), start + 1);
        }
        if (words.empty()) continue;
        std::size_t w = 0;
        auto fail = [&](std::size_t col, const std::string& msg) -> ParseError {
            return ParseError(line_no, col, msg);
        };
        auto column = [&] { return w < words.size() ? words[w].second : line.size() + 1; };
        auto expect = [&](const std::string& word) {
            if (w >= words.size() || words[w].first != word) throw fail(column(), "expected '" + word + "'");
            ++w;
        };
        auto number = [&] {
            if (w >= words.size()) throw fail(column(), "expected a number");
            const std::string& s = words[w].first;
            if (s.empty() || s.size() > 9 ||
                !std::all_of(s.begin(), s.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); })) {
                throw fail(column(), "expected a number");
            }
            ++w;
            return static_cast<std::size_t>(std::stoul(s));
        };
        auto counter = [&] {
            if (w < words.size() && (words[w].first == "c1" || words[w].first == "c2")) {
                return static_cast<std::size_t>(words[w++].first == "c1" ? 0 : 1);
            }
            throw fail(column(), "expected 'c1' or 'c2'");
        };
        if (words[0].first.back() == ':') {
            std::string label = words[0].first.substr(0, words[0].first.size() - 1);
            if (label != std::to_string(out.size())) {
                throw fail(words[0].second, "label " + label + " out of sequence (expected " +
                                                std::to_string(out.size()) + ")");
            }
            ++w;
        }
        if (w >= words.size()) throw fail(column(), "expected an instruction");
        const std::string op = words[w].first;
        if (op == "inc") {
            ++w;
            Inc ins;
            ins.counter = counter();
            expect("goto");
            ins.next = number();
            out.emplace_back(ins);
        } else if (op == "test") {
            ++w;
            Test ins;
            ins.counter = counter();
            expect("goto");
            ins.then_next = number();
            expect("else");
            ins.else_next = number();
            out.emplace_back(ins);
        } else if (op == "halt") {
            ++w;
            out.emplace_back(Halt{});
        } else {
            throw fail(column(), "unknown instruction '" + op + "'");
        }
        if (w < words.size()) throw fail(column(), "trailing input");
    }
    try {
        return CounterProgram(std::move(out));
    } catch (const InputError& e) {
        throw ParseError(line_no == 0 ? 1 : line_no, 1, e.what());
    }
}

std::string CounterProgram::to_string() const {
    std::ostringstream out;
    for (std::size_t i = 0; i < instructions_.size(); ++i) {
        out << i << ": ";
        const Instruction& ins = instructions_[i];
        if (const auto* inc = std::get_if<Inc>(&ins)) {
            out << "inc c" << inc->counter + 1 << " goto " << inc->next;
        } else if (const auto* test = std::get_if<Test>(&ins)) {
            out << "test c" << test->counter + 1 << " goto " << test->then_next << " else " << test->else_next;
        } else {
            out << "halt";
        }
        out << "\n";
    }
    return out.str();
}

bool is_normalized(const CounterProgram& prog) {
    const auto& ins = prog.instructions();
    if (ins.size() < 5) return false;
    const std::size_t n = ins.size() - 1;
    auto is_test = [&](std::size_t i, std::size_t c, std::size_t then_next, std::size_t else_next) {
        const auto* t = std::get_if<Test>(&ins[i]);
        return t && *t == Test{c, then_next, else_next};
    };
    if (!is_test(0, 0, 0, 1) || !is_test(1, 1, 1, 2)) return false;
    if (!is_test(n - 2, 0, n - 2, n - 1) || !is_test(n - 1, 1, n - 1, n)) return false;
    for (std::size_t i = 2; i < n - 2; ++i) {
        if (const auto* inc = std::get_if<Inc>(&ins[i])) {
            if (inc->next > n - 2) return false;
        } else if (const auto* t = std::get_if<Test>(&ins[i])) {
            if (t->then_next > n - 2 || t->else_next > n - 2) return false;
        }
    }
    return true;
}

CounterProgram normalize(const CounterProgram& prog, std::uint64_t v1, std::uint64_t v2) {
    std::vector<Instruction> out;
    out.push_back(Test{0, 0, 1});
    out.push_back(Test{1, 1, 2});
    for (std::uint64_t i = 0; i < v1; ++i) out.push_back(Inc{0, out.size() + 1});
    for (std::uint64_t i = 0; i < v2; ++i) out.push_back(Inc{1, out.size() + 1});
    const std::size_t offset = out.size();
    const auto& body = prog.instructions();
    for (std::size_t i = 0; i + 1 < body.size(); ++i) {
        if (const auto* inc = std::get_if<Inc>(&body[i])) {
            out.push_back(Inc{inc->counter, inc->next + offset});
        } else {
            const auto& t = std::get<Test>(body[i]);
            out.push_back(Test{t.counter, t.then_next + offset, t.else_next + offset});
        }
    }
    const std::size_t exit = out.size();
    out.push_back(Test{0, exit, exit + 1});
    out.push_back(Test{1, exit + 1, exit + 2});
    out.push_back(Halt{});
    return CounterProgram(std::move(out));
}

RunResult interpret(const CounterProgram& prog, std::uint64_t v1, std::uint64_t v2, std::uint64_t step_cap,
                    bool record_trace) {
    std::array<std::uint64_t, 2> c{v1, v2};
    std::size_t pc = 0;
    RunResult out;
    const auto& ins = prog.instructions();
    for (;;) {
        if (pc == prog.halt_index()) {
            out.halted = true;
            return out;
        }
        if (out.steps == step_cap) return out;
        if (record_trace) out.trace.push_back(pc);
        if (const auto* inc = std::get_if<Inc>(&ins[pc])) {
            ++c[inc->counter];
            pc = inc->next;
        } else {
            const auto& t = std::get<Test>(ins[pc]);
            if (c[t.counter] > 0) {
                --c[t.counter];
                pc = t.then_next;
            } else {
                pc = t.else_next;
            }
        }
        ++out.steps;
    }
}

namespace {

void require_normalized(const CounterProgram& prog) {
    if (!is_normalized(prog)) throw InputError("program is not normalized");
}

Marking unit(std::size_t d, std::size_t i, std::uint64_t k = 1) {
    Marking m(d, 0);
    m[i] = k;
    return m;
}

}  // namespace

Model program_to_static_pcm(const CounterProgram& prog) {
    require_normalized(prog);
    const std::size_t n = prog.halt_index();
    const std::vector<std::string> counters{"c1", "c2"};
    std::vector<std::string> states;
    for (std::size_t i = 0; i <= n; ++i) states.push_back("i" + std::to_string(i));
    auto constant = [&](int w) { return Polynomial::constant(w, counters); };
    std::vector<Transition> ts;
    for (std::size_t i = 0; i < n; ++i) {
        Transition restart;
        restart.name = "restart_" + std::to_string(i);
        restart.source = i;
        restart.target = 0;
        restart.pre = {0, 0};
        restart.post = {1, 0};
        restart.weight = constant(4);
        ts.push_back(restart);

        const Instruction& ins = prog.instructions()[i];
        if (const auto* inc = std::get_if<Inc>(&ins)) {
            Transition t;
            t.name = "inc_" + std::to_string(i);
            t.source = i;
            t.target = inc->next;
            t.pre = {0, 0};
            t.post = unit(2, inc->counter);
            t.weight = constant(1);
            ts.push_back(t);
        } else {
            const auto& test = std::get<Test>(ins);
            Transition dec;
            dec.name = "dec_" + std::to_string(i);
            dec.source = i;
            dec.target = test.then_next;
            dec.pre = unit(2, test.counter);
            dec.post = {0, 0};
            dec.weight = constant(1);
            ts.push_back(dec);
            Transition zero;
            zero.name = "zero_" + std::to_string(i);
            zero.kind = TransitionKind::ZeroTest;
            zero.source = i;
            zero.target = test.else_next;
            zero.tested_counter = test.counter;
            zero.post = {0, 0};
            zero.weight = constant(1);
            ts.push_back(zero);
        }
    }
    Model m{CounterMachine(states, counters, std::move(ts)), Configuration{0, {0, 0}}, std::nullopt};
    m.target = TargetSet::finite({Configuration{n, {0, 0}}});
    return m;
}

Model program_to_ppn(const CounterProgram& prog, PpnTarget target) {
    require_normalized(prog);
    const std::size_t n = prog.halt_index();
    const auto& ins = prog.instructions();
    std::vector<std::string> places;
    for (std::size_t i = 0; i <= n; ++i) places.push_back("p" + std::to_string(i));
    std::vector<std::size_t> q_place(n + 1, 0);
    for (std::size_t i = 0; i <= n; ++i) {
        if (std::holds_alternative<Test>(ins[i])) {
            q_place[i] = places.size();
            places.push_back("q" + std::to_string(i));
        }
    }
    const std::size_t c1 = places.size();
    places.push_back("c1");
    places.push_back("c2");
    const std::size_t sim = places.size();
    places.push_back("sim");
    const std::size_t stop = places.size();
    places.push_back("stop");
    const std::size_t d = places.size();

    const Polynomial sim_var = Polynomial::variable(sim, places);
    const Polynomial one = Polynomial::constant(1, places);
    const Polynomial sim2_plus_1 = sim_var * sim_var + one;
    auto make = [&](std::string name, Marking pre, Marking post, Polynomial w) {
        Transition t;
        t.name = std::move(name);
        t.pre = std::move(pre);
        t.post = std::move(post);
        t.weight = std::move(w);
        return t;
    };
    auto plus = [](Marking a, const Marking& b) {
        for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
        return a;
    };
    Polynomial sim4 = sim_var * sim_var * sim_var * sim_var;
    Polynomial w_dec = sim4.scaled(2) + one.scaled(2);

    std::vector<Transition> ts;
    for (std::size_t i = 0; i < n; ++i) {
        const std::string s = std::to_string(i);
        if (const auto* inc = std::get_if<Inc>(&ins[i])) {
            ts.push_back(make("inc_" + s, unit(d, i), plus(unit(d, inc->next), unit(d, c1 + inc->counter)),
                              sim2_plus_1));
            ts.push_back(make("exit_" + s, unit(d, i), unit(d, stop), one));
        } else {
            const auto& t = std::get<Test>(ins[i]);
            const std::size_t cj = c1 + t.counter;
            ts.push_back(make("dec_" + s, plus(unit(d, i), unit(d, cj)), unit(d, t.then_next), w_dec));
            ts.push_back(make("begZ_" + s, unit(d, i), unit(d, q_place[i]), sim2_plus_1));
            ts.push_back(make("endZ_" + s, unit(d, q_place[i]), unit(d, t.else_next), one));
            ts.push_back(make("exit_" + s, unit(d, i), unit(d, stop), one));
            const Marking guard = plus(unit(d, q_place[i]), unit(d, cj));
            ts.push_back(make("rm_" + s, plus(guard, unit(d, sim, 2)), guard, one.scaled(2)));
        }
    }
    ts.push_back(make("again", unit(d, n), plus(unit(d, 0), unit(d, sim)), one));
    ts.push_back(make("clean_1", plus(unit(d, stop), unit(d, c1)), unit(d, stop), one));
    ts.push_back(make("clean_2", plus(unit(d, stop), unit(d, c1 + 1)), unit(d, stop), one));
    ts.push_back(make("clean_3", plus(unit(d, stop), unit(d, sim)), unit(d, stop), one));

    Model m{CounterMachine({"net"}, places, std::move(ts)), Configuration{0, unit(d, 0)}, std::nullopt};
    Configuration stop_only{0, unit(d, stop)};
    m.target = target == PpnTarget::Finite ? TargetSet::finite({stop_only}) : TargetSet::upward({stop_only});
    return m;
}

std::vector<std::string> ppn_gadget_replay(const CounterProgram& prog, std::uint64_t step_cap) {
    require_normalized(prog);
    RunResult run = interpret(prog, 0, 0, step_cap, true);
    if (!run.halted) throw DomainError("program does not halt within the step cap");
    std::array<std::uint64_t, 2> c{0, 0};
    std::vector<std::string> names;
    for (std::size_t pc : run.trace) {
        const std::string s = std::to_string(pc);
        if (const auto* inc = std::get_if<Inc>(&prog.instructions()[pc])) {
            ++c[inc->counter];
            names.push_back("inc_" + s);
        } else {
            const auto& t = std::get<Test>(prog.instructions()[pc]);
            if (c[t.counter] > 0) {
                --c[t.counter];
                names.push_back("dec_" + s);
            } else {
                names.push_back("begZ_" + s);
                names.push_back("endZ_" + s);
            }
        }
    }
    names.push_back("again");
    return names;
}

Model hilbert_pcm(const Polynomial& p, std::uint64_t start) {
    const std::vector<std::string> counters{"c"};
    std::vector<Transition> ts(2);
    ts[0].name = "dec";
    ts[0].pre = {1};
    ts[0].post = {0};
    ts[0].weight = Polynomial::constant(1, counters);
    ts[1].name = "inc";
    ts[1].pre = {1};
    ts[1].post = {2};
    ts[1].weight = OpaqueWeight{"g", std::make_shared<HilbertWeight>(p)};
    return Model{CounterMachine({"q"}, counters, std::move(ts)), Configuration{0, {start}}, TargetSet::zero_counter()};
}

Model walk_pcm(const Polynomial& dec, const Polynomial& inc, std::uint64_t start) {
    const std::vector<std::string> counters{"c"};
    auto adapt = [&](const Polynomial& p) {
        if (p.arity() == 0) return Polynomial::constant(p.constant_term(), counters);
        if (p.arity() != 1) throw InputError("walk weights must be univariate");
        return p.renamed(counters);
    };
    std::vector<Transition> ts(2);
    ts[0].name = "dec";
    ts[0].pre = {1};
    ts[0].post = {0};
    ts[0].weight = adapt(dec);
    ts[1].name = "inc";
    ts[1].pre = {1};
    ts[1].post = {2};
    ts[1].weight = adapt(inc);
    return Model{CounterMachine({"q"}, counters, std::move(ts)), Configuration{0, {start}}, TargetSet::zero_counter()};
}

}  // namespace decisive
