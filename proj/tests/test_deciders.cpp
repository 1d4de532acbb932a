#include <gtest/gtest.h>

#include "decisive/deciders.hpp"
#include "decisive/dsl.hpp"
#include "decisive/generators.hpp"
#include "decisive/reach.hpp"
#include "decisive/sim.hpp"
#include "support.hpp"

using namespace decisive;
using namespace testing_support;

namespace {

const std::vector<std::string> C{"c"};

Rational r(long n, long d) { return make_rational(n, d); }

Polynomial poly(const std::string& text) { return parse_polynomial(text, C); }

Transition update(std::string name, std::size_t from, std::uint64_t post, std::size_t to, Polynomial w) {
    Transition t;
    t.name = std::move(name);
    t.source = from;
    t.target = to;
    t.pre = {1};
    t.post = {post};
    t.weight = std::move(w);
    return t;
}

}  // namespace

TEST(Gambler, Boundaries) {
    std::vector<Rational> rho{r(1, 3), 2, 5};
    EXPECT_EQ(gambler_exact(rho, 0), 1);
    EXPECT_EQ(gambler_exact(rho, 4), 0);
    EXPECT_THROW(gambler_exact(rho, 5), InputError);
    EXPECT_THROW(gambler_exact({0, 1}, 1), InputError);
}

TEST(Gambler, SymmetricAndBiased) {
    EXPECT_EQ(gambler_exact({1, 1, 1}, 1), r(3, 4));
    EXPECT_EQ(solve_reach_exact(birth_death({1, 1, 1}), 1, {0}), r(3, 4));
    EXPECT_EQ(gambler_exact({r(1, 2), r(1, 2)}, 1), r(3, 7));
    EXPECT_EQ(solve_reach_exact(birth_death({r(1, 2), r(1, 2)}), 1, {0}), r(3, 7));
}

TEST(Gambler, MatchesLinearSolve) {
    std::mt19937_64 rng(41);
    for (int i = 0; i < 40; ++i) {
        std::vector<Rational> rho(uniform(rng, 1, 7));
        for (auto& x : rho) x = random_positive_rational(rng);
        FiniteChain fc = birth_death(rho);
        for (std::size_t m = 0; m <= rho.size() + 1; ++m) {
            EXPECT_EQ(gambler_exact(rho, m), solve_reach_exact(fc, m, {0}));
        }
    }
}

TEST(WalkReach, DivergentSeriesGivesOne) {
    WalkResult w = walk_reach_prob(WalkRatio::from_polynomials(poly("2"), poly("1")), 1, 50);
    EXPECT_EQ(w.kind, WalkResult::Kind::One);
    EXPECT_EQ(w.lower, 1);
}

TEST(WalkReach, GeometricTailEnclosesHalf) {
    Rational last_width = 2;
    for (std::uint64_t h : {5, 10, 20, 40}) {
        WalkResult w = walk_reach_prob(WalkRatio::from_polynomials(poly("1"), poly("2")), 1, h);
        ASSERT_EQ(w.kind, WalkResult::Kind::Value);
        EXPECT_LE(w.lower, r(1, 2));
        EXPECT_GE(w.upper, r(1, 2));
        EXPECT_LT(w.upper - w.lower, last_width);
        last_width = w.upper - w.lower;
    }
    EXPECT_LT(last_width, r(1, 1'000'000));
}

TEST(WalkReach, OpaqueRatioIsInconclusive) {
    auto rho = WalkRatio::from_function([](std::uint64_t k) { return k >= 3 ? 1 - make_rational(2, k) : r(1, 2); });
    WalkResult w = walk_reach_prob(rho, 1, 30);
    EXPECT_EQ(w.kind, WalkResult::Kind::Inconclusive);
    EXPECT_LE(w.lower, w.upper);
}

TEST(WalkReach, EnclosureMatchesGamblerLimit) {
    // Pr from m equals the limit of the truncated gambler chain as n grows.
    std::mt19937_64 rng(43);
    for (int i = 0; i < 30; ++i) {
        Polynomial dec = random_polynomial(rng, 2, 4);
        Polynomial inc = random_polynomial(rng, 2, 4);
        WalkRatio rho = WalkRatio::from_polynomials(dec, inc);
        const std::uint64_t m = uniform(rng, 1, 4);
        WalkResult w = walk_reach_prob(rho, m, 60);
        std::vector<Rational> ratios;
        for (std::uint64_t k = 1; k < 60; ++k) ratios.push_back(rho.at(k));
        Rational truncated = gambler_exact(ratios, m);
        if (w.kind == WalkResult::Kind::Value) {
            EXPECT_LE(w.lower, truncated);
            EXPECT_GE(w.upper, w.lower);
        }
        if (w.kind == WalkResult::Kind::One) EXPECT_EQ(decide_one_counter(dec, inc).answer, Answer::Decisive);
    }
}

TEST(OneCounter, LabeledExamples) {
    Verdict a = decide_one_counter(poly("1"), poly("2"));
    EXPECT_EQ(a.answer, Answer::NotDecisive);
    Verdict b = decide_one_counter(poly("c+1"), poly("c+1"));
    EXPECT_EQ(b.answer, Answer::Decisive);
    EXPECT_EQ(b.headline(), "Decisive (case: W(dec)=W(inc))");
    Verdict c = decide_one_counter(poly("c"), poly("c+2"));
    EXPECT_EQ(c.answer, Answer::NotDecisive);
    ASSERT_NE(c.find("alpha"), nullptr);
    EXPECT_EQ(*c.find("alpha"), "2/1");
    Verdict d = decide_one_counter(poly("c+1"), poly("c+2"));
    EXPECT_EQ(d.answer, Answer::Decisive);
    ASSERT_NE(d.find("alpha"), nullptr);
    EXPECT_EQ(*d.find("alpha"), "1/1");
}

TEST(OneCounter, CasesPartitionTheInputs) {
    std::mt19937_64 rng(44);
    for (int i = 0; i < 500; ++i) {
        Polynomial dec = random_polynomial(rng);
        Polynomial inc = random_polynomial(rng);
        std::vector<int> hits = matching_cases(dec, inc);
        ASSERT_EQ(hits.size(), 1u) << dec.to_string() << " / " << inc.to_string();
        Verdict v = decide_one_counter(dec, inc);
        EXPECT_EQ(*v.find("case"), std::to_string(hits[0]));
        EXPECT_EQ(v.answer, hits[0] <= 5 ? Answer::Decisive : Answer::NotDecisive);
    }
}

TEST(OneCounter, DecisiveVerdictsHaveNoGeometricCertificate) {
    std::mt19937_64 rng(45);
    for (int i = 0; i < 200; ++i) {
        Polynomial dec = random_polynomial(rng);
        Polynomial inc = random_polynomial(rng);
        Verdict v = decide_one_counter(dec, inc);
        WalkResult w = walk_reach_prob(WalkRatio::from_polynomials(dec, inc), 3, 40);
        if (v.answer == Answer::Decisive) EXPECT_NE(w.kind, WalkResult::Kind::Value);
        if (v.answer == Answer::NotDecisive) EXPECT_EQ(w.kind, WalkResult::Kind::Value);
    }
}

TEST(OneCounter, NotDecisiveWalksMissZeroInSimulation) {
    std::mt19937_64 rng(46);
    int checked = 0;
    for (int i = 0; i < 60 && checked < 15; ++i) {
        Polynomial dec = random_polynomial(rng);
        Polynomial inc = random_polynomial(rng);
        if (decide_one_counter(dec, inc).answer != Answer::NotDecisive) continue;
        SampleReport rep = estimate_walk(dec, inc, 10, 10'000, 2'000, 7 + i);
        EXPECT_LT(rep.high, 1) << dec.to_string() << " / " << inc.to_string();
        ++checked;
    }
    EXPECT_GT(checked, 5);
}

TEST(OneCounter, RejectsBadInput) {
    EXPECT_THROW(decide_one_counter(Polynomial(C), poly("1")), InputError);
    EXPECT_THROW(decide_one_counter(poly("c - 1"), poly("1")), InputError);
    Polynomial xy = parse_polynomial("x + y", {"x", "y"});
    EXPECT_EQ(decide_one_counter(xy, xy).answer, Answer::Unsupported);
}

TEST(SingleState, TargetAboveStartIsConfined) {
    Model m = walk_pcm(poly("1"), poly("2"), 2);
    Verdict below = decide_single_state(m.machine, Configuration{0, {2}}, TargetSet::finite({Configuration{0, {5}}}));
    EXPECT_EQ(below.answer, Answer::Decisive);
    EXPECT_EQ(below.case_label, "finite region below the target");
    Verdict above = decide_single_state(m.machine, Configuration{0, {7}}, TargetSet::finite({Configuration{0, {5}}}));
    EXPECT_EQ(above.answer, Answer::NotDecisive);
    Verdict at = decide_single_state(m.machine, Configuration{0, {5}}, TargetSet::finite({Configuration{0, {5}}}));
    EXPECT_EQ(at.case_label, "s0 in A");
}

TEST(SingleState, FiniteTruncationBelowTargetAbsorbs) {
    // Counter values 0..n_f form a finite chain; every path ends at n_f or in the trap at 0.
    Model m = walk_pcm(poly("1"), poly("3"), 1);
    const std::size_t n_f = 6;
    std::vector<FiniteChain::Row> rows(n_f + 1);
    auto chain = semantics(m.machine);
    for (std::size_t k = 0; k <= n_f; ++k) {
        if (k == n_f) {
            rows[k] = {{k, Rational(1)}};
            continue;
        }
        for (const auto& [s, p] : chain.successors(Configuration{0, {k}})) rows[k].emplace_back(s.marking[0], p);
    }
    FiniteChain fc(std::move(rows));
    Rational hit = solve_reach_exact(fc, 1, {n_f});
    Verdict v = decide_single_state(m.machine, Configuration{0, {1}}, TargetSet::finite({Configuration{0, {n_f}}}));
    EXPECT_EQ(v.answer, Answer::Decisive);
    EXPECT_GT(hit, 0);
    EXPECT_LT(hit, 1);
}

TEST(PiInfinity, StationaryOnRandomIrreducibleMatrices) {
    std::mt19937_64 rng(47);
    int checked = 0;
    while (checked < 30) {
        const std::size_t n = uniform(rng, 1, 5);
        std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n));
        for (std::size_t i = 0; i < n; ++i) {
            Rational total = 0;
            std::vector<Rational> w(n);
            for (std::size_t j = 0; j < n; ++j) {
                if (j == (i + 1) % n || uniform(rng, 0, 2) == 0) w[j] = Rational(static_cast<long>(uniform(rng, 1, 5)));
                total += w[j];
            }
            for (std::size_t j = 0; j < n; ++j) m[i][j] = w[j] / total;
        }
        ASSERT_TRUE(is_irreducible(m));
        std::vector<Rational> pi = invariant_distribution(m);
        Rational sum = 0;
        for (std::size_t j = 0; j < n; ++j) {
            Rational x = 0;
            for (std::size_t i = 0; i < n; ++i) x += pi[i] * m[i][j];
            EXPECT_EQ(x, pi[j]);
            EXPECT_GT(pi[j], 0);
            sum += pi[j];
        }
        EXPECT_EQ(sum, 1);
        ++checked;
    }
    EXPECT_FALSE(is_irreducible({{1, 0}, {r(1, 2), r(1, 2)}}));
}

TEST(Phm, ExampleMatrix) {
    ModelFile f = parse_model(read_text(data_path("phm_example.dcm")));
    Classification k = classify(f.model.machine);
    ASSERT_EQ(k.is_pHM, Flag::Yes);
    const auto& m = *k.phm_matrix;
    const std::vector<std::vector<Rational>> expected{{0, r(1, 2), r(1, 2)}, {1, 0, 0}, {1, 0, 0}};
    EXPECT_EQ(m, expected);
    Verdict v = phm_decide(f.model.machine, *f.model.initial);
    EXPECT_EQ(v.answer, Answer::Decisive);
}

TEST(Phm, DecrementDominantProfile) {
    // From q: to q1 and q2 each with dec c^2 and inc 1; q1, q2 return with dec weight c.
    // pi = (1/2, 1/4, 1/4) and, scaled by 4, P_-1 = 8c^4 + 4c^2 and P_1 = 4c^2.
    CounterMachine c({"q", "q1", "q2"}, C,
                     {update("a", 0, 0, 1, poly("c^2")), update("b", 0, 2, 1, poly("1")),
                      update("d", 0, 0, 2, poly("c^2")), update("e", 0, 2, 2, poly("1")),
                      update("f", 1, 0, 0, poly("c")), update("g", 2, 0, 0, poly("c"))});
    EXPECT_EQ(invariant_distribution(*classify(c).phm_matrix), (std::vector<Rational>{r(1, 2), r(1, 4), r(1, 4)}));
    Verdict v = phm_decide(c, Configuration{0, {5}});
    EXPECT_EQ(v.answer, Answer::Decisive);
    EXPECT_EQ(v.case_label, "walk d'<d");
    EXPECT_EQ(*v.find("P_-1"), "8*c^4 + 4*c^2");
    EXPECT_EQ(*v.find("P_1"), "4*c^2");
}

TEST(Phm, NeverDecreasingCounterHasFiniteRq) {
    CounterMachine c({"q", "q1"}, C, {update("up", 0, 2, 1, poly("c")), update("back", 1, 1, 0, poly("1"))});
    Verdict v = phm_decide(c, Configuration{0, {4}});
    EXPECT_EQ(v.answer, Answer::Decisive);
    EXPECT_EQ(v.case_label, "all r_q finite");
    EXPECT_EQ(*v.find("r_q"), "q=0, q1=0");
}

TEST(Phm, IncrementDominantResolvesTheStart) {
    CounterMachine c({"q", "q1"}, C,
                     {update("d0", 0, 0, 1, poly("1")), update("i0", 0, 2, 1, poly("2")),
                      update("d1", 1, 0, 0, poly("1")), update("i1", 1, 2, 0, poly("2"))});
    EXPECT_EQ(phm_decide(c, Configuration{0, {5}}).answer, Answer::NotDecisive);
    Verdict low = phm_decide(c, Configuration{0, {1}});
    EXPECT_EQ(low.answer, Answer::NotDecisive);
    EXPECT_NE(low.find("escape"), nullptr);
    EXPECT_EQ(phm_decide(c, Configuration{0, {0}}).case_label, "s0 in A");
}

TEST(Phm, ReducibleAndNonHomogeneousAreUnsupported) {
    CounterMachine reducible({"q", "q1"}, C, {update("a", 0, 0, 1, poly("1")), update("b", 1, 0, 1, poly("1"))});
    EXPECT_EQ(phm_decide(reducible, Configuration{0, {2}}).answer, Answer::Unsupported);
    CounterMachine mixed({"q", "q1"}, C,
                         {update("a", 0, 0, 1, poly("c")), update("b", 0, 0, 0, poly("1")),
                          update("c", 1, 0, 0, poly("1"))});
    EXPECT_EQ(phm_decide(mixed, Configuration{0, {2}}).answer, Answer::Unsupported);
}

TEST(Phm, DichotomyHoldsOnRandomMachines) {
    std::mt19937_64 rng(48);
    for (int i = 0; i < 50; ++i) {
        CounterMachine c = random_phm(rng, uniform(rng, 1, 3));
        ASSERT_EQ(classify(c).is_pHM, Flag::Yes);
        RqTable t = compute_rq(c);
        EXPECT_TRUE(t.all_finite() || t.all_infinite());
        Verdict v = phm_decide(c, Configuration{0, {uniform(rng, 0, 6)}});
        EXPECT_NE(v.answer, Answer::Unsupported) << v.case_label;
    }
}

TEST(Phm, ZeroCompletionFollowsTheMatrix) {
    ModelFile f = parse_model(read_text(data_path("phm_example.dcm")));
    CounterMachine z = phm_zero_completion(f.model.machine);
    std::size_t zero_tests = 0;
    for (const auto& t : z.transitions()) {
        if (t.kind == TransitionKind::ZeroTest) ++zero_tests;
    }
    EXPECT_EQ(zero_tests, 4u);
    EXPECT_EQ(classify(z).phm_matrix, classify(f.model.machine).phm_matrix);
}

namespace {

const std::vector<std::string> P1{"p"};

Transition net_transition(std::string name, Marking pre, Marking post, long w, const std::vector<std::string>& places) {
    Transition t;
    t.name = std::move(name);
    t.pre = std::move(pre);
    t.post = std::move(post);
    t.weight = Polynomial::constant(w, places);
    return t;
}

}  // namespace

TEST(RegularPpn, SinglePath) {
    CounterMachine net({"net"}, P1, {net_transition("eat", {1}, {0}, 1, P1)});
    RegularResult res = regular_ppn_decide(net, {2}, {0}, 2);
    EXPECT_EQ(res.verdict.answer, Answer::Decisive);
    EXPECT_EQ(res.probability, 1);
}

TEST(RegularPpn, WeightedChoice) {
    const std::vector<std::string> places{"p", "a", "b"};
    CounterMachine net({"net"}, places,
                       {net_transition("to_a", {1, 0, 0}, {0, 1, 0}, 1, places),
                        net_transition("to_b", {1, 0, 0}, {0, 0, 1}, 2, places)});
    RegularResult res = regular_ppn_decide(net, {1, 0, 0}, {0, 1, 0}, 1);
    EXPECT_EQ(res.probability, r(1, 3));
    EXPECT_EQ(res.graph_size, 3u);
    EXPECT_EQ(res.bscc_target, 1u);
    RegularResult absent = regular_ppn_decide(net, {1, 0, 0}, {0, 2, 0}, 1);
    EXPECT_EQ(absent.verdict.answer, Answer::Decisive);
    EXPECT_EQ(absent.probability, 0);
}

TEST(RegularPpn, MatchesFullReachabilityChain) {
    std::mt19937_64 rng(49);
    int checked = 0;
    while (checked < 30) {
        CounterMachine net = random_net(rng);
        Marking m0(net.dimension());
        for (auto& x : m0) x = uniform(rng, 0, 2);
        std::uint64_t b = 0;
        try {
            b = bound_helper_bounded_net(net, m0, 5000);
        } catch (const DomainError&) {
            continue;
        } catch (const BudgetExhausted&) {
            continue;
        }
        std::vector<Marking> reach = reachable_markings(net, m0);
        Marking m1 = reach[uniform(rng, 0, reach.size() - 1)];
        if (uniform(rng, 0, 5) == 0) m1[0] += 50;
        RegularResult res = regular_ppn_decide(net, m0, m1, b);
        EXPECT_EQ(res.probability, full_chain_probability(net, m0, m1));
        ++checked;
    }
}

TEST(RegularPpn, RejectsNonPpn) {
    CounterMachine two({"q", "r"}, C, {update("a", 0, 0, 1, poly("1"))});
    EXPECT_THROW(regular_ppn_decide(two, {1}, {0}, 1), UnsupportedError);
}

TEST(BoundHelper, Examples) {
    const std::vector<std::string> places{"a", "b"};
    CounterMachine cycle({"net"}, places,
                         {net_transition("ab", {1, 0}, {0, 1}, 1, places),
                          net_transition("ba", {0, 1}, {1, 0}, 1, places)});
    EXPECT_EQ(bound_helper_bounded_net(cycle, {1, 0}), 1u);
    // Tokens move from a to b two at a time, and b is drained one at a time into c.
    const std::vector<std::string> abc{"a", "b", "c"};
    CounterMachine split({"net"}, abc,
                         {net_transition("grow", {1, 0, 0}, {0, 2, 0}, 1, abc),
                          net_transition("drain", {0, 1, 0}, {0, 0, 1}, 1, abc)});
    EXPECT_EQ(bound_helper_bounded_net(split, {1, 0, 0}), 2u);
    CounterMachine three({"net"}, places, {net_transition("x", {1, 0}, {0, 2}, 1, places)});
    EXPECT_EQ(bound_helper_bounded_net(three, {3, 0}), 6u);
    CounterMachine pair({"net"}, places, {net_transition("x", {0, 1}, {0, 0}, 1, places)});
    EXPECT_EQ(bound_helper_bounded_net(pair, {3, 2}), 3u);
    CounterMachine pump({"net"}, P1, {net_transition("inc", {1}, {2}, 1, P1)});
    EXPECT_THROW(bound_helper_bounded_net(pump, {1}), DomainError);
}

TEST(BoundHelper, EqualsMaximumOverReachableMarkings) {
    std::mt19937_64 rng(50);
    int checked = 0;
    while (checked < 30) {
        CounterMachine net = random_net(rng);
        Marking m0(net.dimension());
        for (auto& x : m0) x = uniform(rng, 0, 2);
        std::uint64_t b = 0;
        try {
            b = bound_helper_bounded_net(net, m0, 5000);
        } catch (const DomainError&) {
            continue;
        } catch (const BudgetExhausted&) {
            continue;
        }
        std::uint64_t best = 0;
        for (const auto& m : reachable_markings(net, m0)) best = std::max(best, *std::max_element(m.begin(), m.end()));
        EXPECT_EQ(b, best);
        ++checked;
    }
}

TEST(DecideModel, Dispatch) {
    Model walk = walk_pcm(poly("c+1"), poly("c+1"), 3);
    EXPECT_EQ(decide_model(walk).verdict.headline(), "Decisive (case: W(dec)=W(inc))");

    ModelFile phm = parse_model(read_text(data_path("phm_example.dcm")));
    EXPECT_EQ(decide_model(phm.model).verdict.answer, Answer::Decisive);

    const std::vector<std::string> places{"p", "a", "b"};
    Model net{CounterMachine({"net"}, places,
                             {net_transition("to_a", {1, 0, 0}, {0, 1, 0}, 1, places),
                              net_transition("to_b", {1, 0, 0}, {0, 0, 1}, 2, places)}),
              Configuration{0, {1, 0, 0}}, TargetSet::finite({Configuration{0, {0, 1, 0}}})};
    DecideOutcome out = decide_model(net);
    ASSERT_TRUE(out.probability.has_value());
    EXPECT_EQ(*out.probability, r(1, 3));

    CounterProgram loop = CounterProgram::parse("0: inc c1 goto 0\n1: halt\n");
    Model ppn = program_to_ppn(normalize(loop, 0, 0), PpnTarget::Upward);
    DecideOutcome u = decide_model(ppn);
    EXPECT_EQ(u.verdict.answer, Answer::Unsupported);
    EXPECT_NE(u.verdict.case_label.find("undecidable"), std::string::npos);

    Model stat = program_to_static_pcm(normalize(loop, 0, 0));
    EXPECT_EQ(decide_model(stat).verdict.case_label, "decisiveness is undecidable for static pCM with a finite target");
}
