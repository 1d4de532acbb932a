#include <gtest/gtest.h>

#include <algorithm>
#include <deque>
#include <unordered_set>

#include "decisive/generators.hpp"
#include "decisive/reach.hpp"
#include "decisive/weights.hpp"
#include "support.hpp"

using namespace decisive;
using namespace testing_support;

namespace {

std::size_t count_tests(const CounterProgram& p) {
    return static_cast<std::size_t>(std::count_if(p.instructions().begin(), p.instructions().end(),
                                                  [](const Instruction& i) { return std::holds_alternative<Test>(i); }));
}

// Six instructions: c1 += 2, then move c1 into c2, then halt.
const char* kMoveProgram =
    "0: inc c1 goto 1\n"
    "1: inc c1 goto 2\n"
    "2: test c1 goto 3 else 4\n"
    "3: inc c2 goto 2\n"
    "4: test c2 goto 4 else 5\n"
    "5: halt\n";

std::size_t transition_index(const CounterMachine& c, const std::string& name) {
    for (std::size_t i = 0; i < c.transitions().size(); ++i) {
        if (c.transitions()[i].name == name) return i;
    }
    throw std::runtime_error("no transition " + name);
}

}  // namespace

TEST(Program, ParseAndPrint) {
    CounterProgram p = CounterProgram::parse(kMoveProgram);
    EXPECT_EQ(p.instructions().size(), 6u);
    EXPECT_EQ(CounterProgram::parse(p.to_string()), p);
    EXPECT_EQ(count_tests(p), 2u);
    EXPECT_THROW(CounterProgram::parse("0: inc c3 goto 0\n1: halt\n"), ParseError);
    EXPECT_THROW(CounterProgram::parse("0: halt\n1: halt\n"), ParseError);
    EXPECT_THROW(CounterProgram::parse("0: inc c1 goto 7\n1: halt\n"), ParseError);
}

TEST(Interpret, Examples) {
    RunResult halt = interpret(CounterProgram::parse("0: halt\n"), 0, 0, 10);
    EXPECT_TRUE(halt.halted);
    EXPECT_EQ(halt.steps, 0u);

    for (std::uint64_t cap : {0, 1, 100, 10000}) {
        EXPECT_FALSE(interpret(CounterProgram::parse("0: inc c1 goto 0\n1: halt\n"), 0, 0, cap).halted);
    }

    RunResult drain = interpret(CounterProgram::parse("0: test c1 goto 0 else 1\n1: halt\n"), 3, 0, 100);
    EXPECT_TRUE(drain.halted);
    EXPECT_EQ(drain.steps, 4u);
}

TEST(Normalize, LengthAndShape) {
    std::mt19937_64 rng(61);
    for (int i = 0; i < 50; ++i) {
        CounterProgram p = random_program(rng, uniform(rng, 1, 5));
        CounterProgram n = normalize(p, 0, 0);
        EXPECT_EQ(n.instructions().size(), 2 + p.instructions().size() + 2);
        EXPECT_TRUE(is_normalized(n));
        CounterProgram shifted = normalize(p, 2, 1);
        EXPECT_EQ(shifted.instructions().size(), 2 + 3 + p.instructions().size() + 2);
        EXPECT_TRUE(is_normalized(shifted));
    }
    EXPECT_FALSE(is_normalized(CounterProgram::parse(kMoveProgram)));
}

TEST(Normalize, PreservesHalting) {
    std::mt19937_64 rng(62);
    int halting = 0;
    for (int i = 0; i < 300; ++i) {
        CounterProgram p = random_program(rng, uniform(rng, 1, 5));
        const std::uint64_t v1 = uniform(rng, 0, 3);
        const std::uint64_t v2 = uniform(rng, 0, 3);
        // The normalized run replays the original after a prefix, so it needs strictly more steps.
        RunResult original = interpret(p, v1, v2, 2000);
        RunResult normalized = interpret(normalize(p, v1, v2), 7, 3, 4000);
        if (original.halted) {
            EXPECT_TRUE(normalized.halted);
            ++halting;
        } else {
            EXPECT_FALSE(normalized.halted);
        }
    }
    EXPECT_GT(halting, 20);
}

TEST(StaticPcm, Counts) {
    CounterProgram p = normalize(CounterProgram::parse(kMoveProgram), 0, 0);
    const std::size_t n = p.halt_index();
    Model m = program_to_static_pcm(p);
    std::size_t restarts = 0;
    std::size_t zero_tests = 0;
    std::size_t decrements = 0;
    for (const auto& t : m.machine.transitions()) {
        if (t.name.rfind("restart_", 0) == 0) {
            ++restarts;
            EXPECT_EQ(t.target, 0u);
            EXPECT_EQ(std::get<Polynomial>(t.weight), Polynomial::constant(4, m.machine.counters()));
        }
        if (t.kind == TransitionKind::ZeroTest) ++zero_tests;
        if (t.name.rfind("dec_", 0) == 0) ++decrements;
    }
    EXPECT_EQ(restarts, n);
    EXPECT_EQ(zero_tests, count_tests(p));
    EXPECT_EQ(decrements, count_tests(p));
    Classification k = classify(m.machine);
    EXPECT_EQ(k.is_static, Flag::Yes);
    EXPECT_EQ(k.is_polynomial, Flag::Yes);
    EXPECT_EQ(m.initial, (Configuration{0, {0, 0}}));
    EXPECT_EQ(*m.target, TargetSet::finite({Configuration{n, {0, 0}}}));
    EXPECT_THROW(program_to_static_pcm(CounterProgram::parse(kMoveProgram)), InputError);
}

TEST(StaticPcm, TightLoopNeverHalts) {
    CounterProgram p = normalize(CounterProgram::parse("0: test c1 goto 0 else 0\n1: halt\n"), 0, 0);
    Model m = program_to_static_pcm(p);
    const TargetSet a = *m.target;
    auto oracle = bounded_oracle(truncated(semantics(m.machine), 20),
                                 std::function<bool(const Configuration&)>(
                                     [a](const Configuration& s) { return membership(a, s); }),
                                 10'000);
    EXPECT_EQ(oracle(*m.initial), ReachAnswer::Unreachable);
}

TEST(Ppn, PlaceAndTransitionCounts) {
    CounterProgram p = normalize(CounterProgram::parse(kMoveProgram), 0, 0);
    const std::size_t n = p.halt_index();
    const std::size_t tests = count_tests(p);
    const std::size_t incs = n - tests;
    Model m = program_to_ppn(p);
    EXPECT_EQ(m.machine.dimension(), (n + 1) + tests + 2 + 2);
    EXPECT_EQ(m.machine.transitions().size(), 2 * incs + 5 * tests + 4);
    Classification k = classify(m.machine);
    EXPECT_TRUE(k.is_pPN);
    EXPECT_EQ(k.is_polynomial, Flag::Yes);
    EXPECT_EQ(k.is_static, Flag::No);
}

TEST(Ppn, GadgetWeights) {
    Model m = program_to_ppn(normalize(CounterProgram::parse(kMoveProgram), 0, 0));
    const CounterMachine& net = m.machine;
    Marking zero(net.dimension(), 0);
    const std::size_t sim = *net.counter_index("sim");
    for (const auto& t : net.transitions()) {
        const auto& w = std::get<Polynomial>(t.weight);
        if (t.name.rfind("dec_", 0) == 0) {
            EXPECT_EQ(w.evaluate(zero), 2);
            Marking m3 = zero;
            m3[sim] = 3;
            EXPECT_EQ(w.evaluate(m3), 2 * 81 + 2);
        } else if (t.name.rfind("inc_", 0) == 0 || t.name.rfind("begZ_", 0) == 0) {
            EXPECT_EQ(w.to_string(), "sim^2 + 1");
        } else if (t.name.rfind("rm_", 0) == 0) {
            EXPECT_EQ(w.evaluate(zero), 2);
            EXPECT_EQ(t.pre[sim], 2u);
            EXPECT_EQ(t.post[sim], 0u);
        } else {
            EXPECT_EQ(w.evaluate(zero), 1);
        }
    }
}

TEST(Ppn, ReplayMarksHaltThenRestarts) {
    CounterProgram p = normalize(CounterProgram::parse(kMoveProgram), 0, 0);
    Model m = program_to_ppn(p);
    const CounterMachine& net = m.machine;
    std::vector<std::string> replay = ppn_gadget_replay(p, 10'000);
    ASSERT_EQ(replay.back(), "again");
    Configuration s = *m.initial;
    for (std::size_t i = 0; i + 1 < replay.size(); ++i) {
        std::size_t t = transition_index(net, replay[i]);
        auto en = enabled(net, s);
        ASSERT_NE(std::find(en.begin(), en.end(), t), en.end()) << replay[i];
        s = fire(net, s, t);
    }
    const std::size_t pn = *net.counter_index("p" + std::to_string(p.halt_index()));
    EXPECT_EQ(s.marking[pn], 1u);
    s = fire(net, s, transition_index(net, "again"));
    EXPECT_EQ(s.marking[*net.counter_index("p0")], 1u);
    EXPECT_EQ(s.marking[*net.counter_index("sim")], 1u);
    EXPECT_EQ(s.marking[pn], 0u);
    EXPECT_THROW(ppn_gadget_replay(normalize(CounterProgram::parse("0: inc c1 goto 0\n1: halt\n"), 0, 0), 1000),
                 DomainError);
}

TEST(Ppn, StopCoverableEverywhere) {
    CounterProgram p = normalize(CounterProgram::parse("0: inc c1 goto 1\n1: test c1 goto 2 else 2\n2: halt\n"), 0, 0);
    Model m = program_to_ppn(p, PpnTarget::Upward);
    auto cover = coverability_oracle(m.machine, *m.target);
    std::unordered_set<Configuration> seen{*m.initial};
    std::deque<Configuration> queue{*m.initial};
    while (!queue.empty() && seen.size() < 2000) {
        Configuration s = queue.front();
        queue.pop_front();
        EXPECT_EQ(cover(s), ReachAnswer::Reachable);
        for (std::size_t t : enabled(m.machine, s)) {
            Configuration next = fire(m.machine, s, t);
            if (seen.insert(next).second) queue.push_back(next);
        }
    }
}

namespace {

// min over n1+..+nk <= n of P^2 + 1, enumerating tuples directly.
Integer hilbert_oracle(const Polynomial& p, std::uint64_t n) {
    const std::size_t k = p.arity();
    std::vector<std::uint64_t> tuple(k, 0);
    std::optional<Integer> best;
    for (;;) {
        std::uint64_t sum = 0;
        for (auto x : tuple) sum += x;
        if (sum <= n) {
            Integer v = p.evaluate(tuple);
            v = v * v + 1;
            if (!best || v < *best) best = v;
        }
        std::size_t i = 0;
        while (i < k && tuple[i] == n) tuple[i++] = 0;
        if (i == k) break;
        ++tuple[i];
    }
    return *best;
}

}  // namespace

TEST(Hilbert, IdentityRootGivesSymmetricWalk) {
    Polynomial x = parse_polynomial("x1", {"x1"});
    HilbertWeight g(x);
    for (std::uint64_t n = 0; n <= 12; ++n) EXPECT_EQ(g.at(n), 1);
    Model m = hilbert_pcm(x, 3);
    auto chain = semantics(m.machine);
    for (std::uint64_t k = 1; k <= 6; ++k) {
        for (const auto& [s, p] : chain.successors(Configuration{0, {k}})) EXPECT_EQ(p, make_rational(1, 2));
    }
}

TEST(Hilbert, NoRootStaysAboveOne) {
    HilbertWeight g(parse_polynomial("x1^2 + 1", {"x1"}));
    for (std::uint64_t n = 0; n <= 12; ++n) EXPECT_GE(g.at(n), 2);
}

TEST(Hilbert, MatchesEnumerationAndIsNonincreasing) {
    const std::vector<std::string> vars{"x1", "x2"};
    for (const char* text : {"x1 - 2*x2 + 1", "x1*x2 - 6", "x1^2 - 3*x2 + 2", "2*x1 + 3"}) {
        Polynomial p = parse_polynomial(text, vars);
        HilbertWeight g(p);
        Integer last = g.at(0);
        for (std::uint64_t n = 0; n <= 8; ++n) {
            EXPECT_EQ(g.at(n), hilbert_oracle(p, n)) << text << " n=" << n;
            EXPECT_LE(g.at(n), last);
            last = g.at(n);
        }
    }
    EXPECT_THROW(HilbertWeight(parse_polynomial("x1^2 + 1", {"x1"})).at(31), DomainError);
    EXPECT_EQ(HilbertWeight(parse_polynomial("x1", {"x1"})).at(1000), 1);
}

TEST(Walk, Construction) {
    const std::vector<std::string> c{"c"};
    Model m = walk_pcm(Polynomial::constant(2, c), Polynomial::constant(1, c), 5);
    EXPECT_EQ(m.machine.transitions().size(), 2u);
    EXPECT_EQ(m.initial->marking, Marking{5});
    EXPECT_EQ(m.target->kind(), TargetSet::Kind::ZeroCounter);
    Classification k = classify(m.machine);
    EXPECT_TRUE(k.is_safe_one_counter);
    EXPECT_TRUE(k.is_single_state);
}
