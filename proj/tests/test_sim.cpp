#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rotor/sim.hpp"
#include "property_suites.hpp"
#include "test_support.hpp"

using namespace rotor;

TEST_CASE("sampled configurations are pure functions of (seed, vertex)") {
    SupportDistribution dist = SupportDistribution::rotation_model(RotorSequence::parse("(012)", 2));
    TreeAssignment a = TreeAssignment::sampled(dist, 7);
    TreeAssignment b = TreeAssignment::sampled(dist, 7);
    TreeVertexKey v = tree_child_key(tree_child_key(tree_root_key(), 1), 2);
    CHECK(a.at(v) == b.at(v));
    CHECK(a.at(tree_root_key()) == a.at(tree_root_key()));

    // a different seed gives a different configuration somewhere
    TreeAssignment c = TreeAssignment::sampled(dist, 8);
    bool differs = false;
    TreeVertexKey cur = tree_root_key();
    for (int i = 0; i < 64 && !differs; ++i) {
        if (!(a.at(cur) == c.at(cur))) differs = true;
        cur = tree_child_key(cur, 1 + (i % 2));
    }
    CHECK(differs);

    // point mass: every vertex gets the single atom
    SupportDistribution pm = SupportDistribution::parse("(-+)=1", 1);
    UnaryAssignment u = UnaryAssignment::sampled(pm, 99);
    for (std::int64_t vtx = 0; vtx < 50; ++vtx) CHECK(u.at(vtx) == RotorSequence::parse("(-+)", 1));
}

TEST_CASE("unary excursions: the escape-then-finite pattern") {
    UnaryAssignment assign = UnaryAssignment::homogeneous(RotorSequence::parse("(+-)", 1));
    sim::UnaryRunParams p;
    p.num_excursions = 5;
    sim::UnaryRunResult r = sim::run_excursions(assign, p);
    REQUIRE(r.outcomes.size() == 5);
    CHECK(r.outcomes[0].kind == ExcursionKind::infinite);
    for (int i = 1; i < 5; ++i) {
        CHECK(r.outcomes[i].kind == ExcursionKind::finite);
        CHECK(r.outcomes[i].steps == 2 * i - 1); // ever-deeper retraced paths
    }
    CHECK(r.record.origin_loop_count == 4);
    CHECK(r.leftover_valid);
}

TEST_CASE("unary excursions: self-organizing zigzag of (-+)") {
    UnaryAssignment assign = UnaryAssignment::homogeneous(RotorSequence::parse("(-+)", 1));
    sim::UnaryRunParams p;
    p.num_excursions = 6;
    sim::UnaryRunResult r = sim::run_excursions(assign, p);
    std::int64_t prev = 0;
    for (const auto& o : r.outcomes) {
        CHECK(o.kind == ExcursionKind::finite);
        CHECK(o.steps > prev); // ever-deeper retraced paths
        CHECK(o.steps % 2 == 1);
        prev = o.steps;
    }
}

TEST_CASE("tree excursions stay finite when the type process dies") {
    TreeAssignment assign = TreeAssignment::homogeneous(RotorSequence::parse("(012)", 2));
    sim::TreeRunParams p;
    p.num_excursions = 3;
    sim::TreeRunResult r = sim::run_tree_excursions(assign, p);
    for (const auto& o : r.outcomes) CHECK(o.kind == ExcursionKind::finite);
    CHECK(r.record.origin_loop_count == 3);
}

TEST_CASE("tree z expansion") {
    // all (012): the root's children both have type 0
    auto died = sim::z_tree_expand(TreeAssignment::homogeneous(RotorSequence::parse("(012)", 2)), 1, 1000);
    CHECK(died.status == sim::ZTreeStatus::died);
    CHECK(died.live_nodes == 1);

    // all (120): every child has type 1, the frontier doubles per level
    auto alive = sim::z_tree_expand(TreeAssignment::homogeneous(RotorSequence::parse("(120)", 2)), 1, 2000);
    CHECK(alive.status == sim::ZTreeStatus::alive_at_budget);
    REQUIRE(alive.level_histograms.size() >= 4);
    for (int level = 0; level < 4; ++level) {
        CHECK(alive.level_histograms[static_cast<std::size_t>(level)].at(1) == (std::int64_t(1) << level));
    }

    // critical sampled family: most seeds die, slow seeds stay inconclusive
    SupportDistribution dist = SupportDistribution::rotation_model(RotorSequence::parse("(012)", 2));
    int died_count = 0;
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        auto r = sim::z_tree_expand(TreeAssignment::sampled(dist, seed), 1, 100'000);
        if (r.status == sim::ZTreeStatus::died) ++died_count;
    }
    CHECK(died_count >= 25);

    CHECK_THROWS_AS(sim::z_tree_expand(TreeAssignment::homogeneous(RotorSequence::parse("(012)", 2)), 0, 10),
                    std::invalid_argument);
}

TEST_CASE("monte carlo") {
    // point mass (-+) on N: every trial certifies recurrence
    sim::MonteCarloParams mp;
    mp.k = 2;
    mp.trials = 50;
    mp.budget = 10'000;
    mp.seed = 3;
    auto pm = sim::monte_carlo(SupportDistribution::parse("(-+)=1", 1), mp);
    CHECK(pm.decided_recurrent == 50);
    CHECK(pm.decided_transient == 0);
    CHECK(pm.undecided == 0);

    // supercritical tree family: the observed escape fraction is within
    // 4 sigma of the survival probability of the type process
    SupportDistribution trans = SupportDistribution::rotation_model(RotorSequence::parse("(010122)", 2));
    sim::MonteCarloParams mt;
    mt.k = 1;
    mt.trials = 200;
    mt.budget = 100'000;
    mt.escape_level = 30;
    mt.seed = 7;
    mt.jobs = 2;
    auto sum = sim::monte_carlo(trans, mt);
    CHECK(sum.decided_transient > 0);
    CHECK(sum.trials == sum.decided_recurrent + sum.decided_transient + sum.undecided);

    // extinction fixed point for the 2-type process (test-side oracle)
    double e1 = 0, e2 = 0;
    for (int it = 0; it < 20'000; ++it) {
        double n1 = 0, n2 = 0;
        for (const auto& atom : trans.atoms()) {
            const double w = atom.weight.to_double();
            double prod1 = 1, prod2 = 1;
            for (int i = 1; i <= 2; ++i) {
                const std::int64_t t1 = u_value(atom.sequence, i, 1);
                const std::int64_t t2 = u_value(atom.sequence, i, 2);
                prod1 *= t1 == 0 ? 1.0 : (t1 == 1 ? e1 : e2);
                prod2 *= t2 == 0 ? 1.0 : (t2 == 1 ? e1 : e2);
            }
            n1 += w * prod1;
            n2 += w * prod2;
        }
        e1 = n1;
        e2 = n2;
    }
    const double q = 1 - e1; // trial starts one particle of type k = 1
    const double freq = static_cast<double>(sum.decided_transient) / static_cast<double>(sum.trials);
    const double sigma = std::sqrt(q * (1 - q) / static_cast<double>(sum.trials));
    CHECK(std::abs(freq - q) <= 4 * sigma);

    // reproducibility: rerunning a single trial's seed reproduces its outcome
    for (std::size_t t : {std::size_t(0), std::size_t(13), std::size_t(111)}) {
        TreeAssignment assign = TreeAssignment::sampled(trans, sum.trial_seeds[t]);
        auto st = sim::seek_escape(assign, mt.k, mt.escape_level, mt.budget);
        const char expected = sum.trial_outcomes[t];
        if (expected == 't') CHECK(st == sim::EscapeStatus::escaped);
        if (expected == 'r') CHECK(st == sim::EscapeStatus::died);
    }
}

TEST_CASE("unary rotation-model trials never certify transience") {
    testsupport::Rng rng(515);
    for (int i = 0; i < 10; ++i) {
        RotorSequence base = testsupport::random_nondegenerate_sequence(rng, rng.range(2, 14), 1);
        sim::MonteCarloParams mp;
        mp.k = rng.range(1, 5);
        mp.trials = 30;
        mp.budget = 200'000;
        mp.seed = rng.next();
        auto sum = sim::monte_carlo(SupportDistribution::rotation_model(base), mp);
        CHECK(sum.decided_transient == 0);
        CHECK(sum.decided_recurrent + sum.undecided == 30);
    }
}

TEST_CASE("sim property suites") {
    for (const auto& r : {propsuite::prop_conservation(), propsuite::prop_frontier_certificate_validation(),
                          propsuite::prop_leftover_composability(),
                          propsuite::prop_determinism(), propsuite::prop_sampling_frequency(),
                          propsuite::prop_tree_oracle_equivalence()}) {
        INFO(r.name, ": ", r.detail);
        CHECK(r.pass);
    }
}
