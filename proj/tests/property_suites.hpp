#pragma once

// The per-module randomized invariants, packaged as named checks so the
// unit tests and the acceptance suite run the same code. All generators are
// seeded; every run sees the same inputs.

#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "rotor/sim.hpp"
#include "rotor/tree.hpp"
#include "rotor/unary.hpp"
#include "test_support.hpp"

namespace propsuite {

using namespace rotor;
using testsupport::Rng;

struct PropertyResult {
    std::string name;
    bool pass = true;
    std::string detail;
};

namespace detail {

struct Checker {
    explicit Checker(std::string name) : result{std::move(name), true, ""} {}
    void fail(const std::string& msg) {
        result.pass = false;
        if (!result.detail.empty()) result.detail += "; ";
        if (failures++ < 4) result.detail += msg;
    }
    void note(const std::string& msg) {
        if (result.detail.empty()) result.detail = msg;
    }
    PropertyResult result;
    int failures = 0;
};

} // namespace detail

// --- core -------------------------------------------------------------------

inline PropertyResult prop_format_roundtrip() {
    detail::Checker c("core: format/parse round trip");
    Rng rng(101);
    int n = 0;
    for (int t = 0; t < 200; ++t) {
        const int d = static_cast<int>(rng.range(1, 4));
        const std::int64_t L = rng.range(d + 1, 12);
        RotorSequence s = testsupport::random_nondegenerate_sequence(rng, L, d);
        if (rng.range(0, 1)) {
            std::vector<RotorSequence::Symbol> pre;
            for (int i = 0, m = static_cast<int>(rng.range(0, 4)); i < m; ++i) {
                pre.push_back(static_cast<RotorSequence::Symbol>(rng.range(0, d)));
            }
            s = RotorSequence(d, pre, s.period());
        }
        for (bool signs : {false, true}) {
            RotorSequence back = RotorSequence::parse(s.format(signs), d);
            if (!(back == s)) c.fail("round trip failed for " + s.format());
        }
        ++n;
    }
    c.note(std::to_string(n) + " sequences");
    return c.result;
}

inline PropertyResult prop_rotation_group() {
    detail::Checker c("core: rotations compose as the cyclic group");
    Rng rng(102);
    for (int t = 0; t < 100; ++t) {
        const int d = static_cast<int>(rng.range(1, 4));
        RotorSequence s = testsupport::random_nondegenerate_sequence(rng, rng.range(d + 1, 10), d);
        const int i = static_cast<int>(rng.range(0, d));
        const int j = static_cast<int>(rng.range(0, d));
        if (!(s.rotated(i).rotated(j) == s.rotated((i + j) % (d + 1)))) c.fail("composition failed");
        RotorSequence full = s;
        for (int r = 0; r <= d; ++r) full = full.rotated(1);
        if (!(full == s)) c.fail("d+1 rotations are not the identity");
        if (!(s.rotated(0) == s)) c.fail("rotate by 0 changed the sequence");
    }
    return c.result;
}

inline PropertyResult prop_shift_semigroup() {
    detail::Checker c("core: shifts compose additively");
    Rng rng(103);
    for (int t = 0; t < 100; ++t) {
        const int d = static_cast<int>(rng.range(1, 3));
        RotorSequence s = testsupport::random_nondegenerate_sequence(rng, rng.range(d + 1, 10), d);
        const std::int64_t i = rng.range(0, 15);
        const std::int64_t j = rng.range(0, 15);
        if (!(s.shifted(i).shifted(j) == s.shifted(i + j))) c.fail("shift composition failed");
        if (!(s.shifted(s.period_length()) == s)) c.fail("shift by L is not the identity");
    }
    return c.result;
}

inline PropertyResult prop_closed_form_agreement() {
    detail::Checker c("core: u_table closed form equals direct scan");
    Rng rng(104);
    int checks = 0;
    for (int t = 0; t < 200; ++t) {
        const int d = static_cast<int>(rng.range(1, 4));
        const std::int64_t L = rng.range(d + 1, 24);
        RotorSequence s = testsupport::random_nondegenerate_sequence(rng, L, d);
        UTable table = UTable::build(s);
        const std::int64_t Ls = s.period_length();
        for (std::int64_t x = 0; x <= 10 * Ls; ++x) {
            for (int i = 1; i <= d; ++i) {
                if (table.u(i, x) != u_value(s, i, x)) {
                    c.fail("table disagrees with scan on " + s.format() + " at x=" + std::to_string(x));
                }
                ++checks;
            }
        }
    }
    c.note(std::to_string(checks) + " evaluations");
    return c.result;
}

inline PropertyResult prop_monotonicity() {
    detail::Checker c("core: U is monotonically non-decreasing");
    Rng rng(105);
    for (int t = 0; t < 100; ++t) {
        const int d = static_cast<int>(rng.range(1, 4));
        RotorSequence s = testsupport::random_nondegenerate_sequence(rng, rng.range(d + 1, 16), d);
        UTable table = UTable::build(s);
        for (int i = 1; i <= d; ++i) {
            std::int64_t prev = 0;
            for (std::int64_t x = 0; x <= 10 * s.period_length(); ++x) {
                const std::int64_t v = table.u(i, x);
                if (v < prev) c.fail("monotonicity violated on " + s.format());
                prev = v;
            }
        }
    }
    return c.result;
}

inline PropertyResult prop_subduality() {
    detail::Checker c("core: subduality U_ta(U_a(x)) < x for x > 0");
    Rng rng(106);
    for (int t = 0; t < 150; ++t) {
        RotorSequence a = testsupport::random_nondegenerate_sequence(rng, rng.range(2, 16), 1);
        RotorSequence ta = a.rotated(1); // the transposition of the two symbols
        UTable ua = UTable::build(a);
        UTable uta = UTable::build(ta);
        if (uta.u(1, ua.u(1, 0)) != 0 || ua.u(1, uta.u(1, 0)) != 0) c.fail("equality at 0 failed");
        for (std::int64_t x = 1; x <= 10 * a.period_length(); ++x) {
            if (uta.u(1, ua.u(1, x)) >= x || ua.u(1, uta.u(1, x)) >= x) {
                c.fail("subduality violated on " + a.format(true) + " at x=" + std::to_string(x));
            }
        }
    }
    return c.result;
}

inline PropertyResult prop_balance_identity() {
    detail::Checker c("core: balanced sequences satisfy U(beta) <= N");
    Rng rng(107);
    for (int t = 0; t < 150; ++t) {
        const int d = static_cast<int>(rng.range(1, 4));
        const std::int64_t n = rng.range(1, 4);
        RotorSequence s = testsupport::random_balanced_sequence(rng, n * (d + 1), d);
        if (!s.non_degenerate()) continue;
        UTable table = UTable::build(s);
        for (std::int64_t beta = 1; beta <= n; ++beta) {
            for (int i = 1; i <= d; ++i) {
                if (table.u(i, beta) > n) c.fail("balance identity violated on " + s.format());
            }
        }
        // periodic decomposition: U(alpha*N + beta) = alpha*N + U(beta)
        for (std::int64_t alpha = 1; alpha <= 3; ++alpha) {
            for (std::int64_t beta = 1; beta <= n; ++beta) {
                for (int i = 1; i <= d; ++i) {
                    if (table.u(i, alpha * n + beta) != alpha * n + table.u(i, beta)) {
                        c.fail("periodic decomposition failed on " + s.format());
                    }
                }
            }
        }
    }
    return c.result;
}

// --- unary ------------------------------------------------------------------

inline PropertyResult prop_z_vs_simulator() {
    detail::Checker c("unary: z-process matches the simulator oracle");
    Rng rng(201);
    int decided = 0, undecided = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const std::int64_t L = 2 * rng.range(1, 4);
        const std::size_t natoms = static_cast<std::size_t>(rng.range(1, 3));
        SupportDistribution dist = testsupport::random_balanced_distribution(rng, L, 1, natoms);
        const std::uint64_t seed = rng.next();
        UnaryAssignment assign = UnaryAssignment::sampled(dist, seed);
        for (std::int64_t k = 1; k <= 3; ++k) {
            ZParams zp;
            zp.horizon = 100'000;
            ZTrajectory z = z_trajectory(assign, k, zp);
            sim::UnaryRunParams p;
            p.num_excursions = k;
            p.budget = 500'000;
            sim::UnaryRunResult run = sim::run_excursions(assign, p);
            bool all_finite = true;
            for (const auto& o : run.outcomes) {
                if (o.kind != ExcursionKind::finite) all_finite = false;
            }
            if (z.outcome == ZOutcome::hit_zero) {
                ++decided;
                if (!all_finite) c.fail("z hit zero but the walk did not finish " + std::to_string(k) + " excursions");
                if (run.record.max_vertex + 1 > z.resolved_at) {
                    c.fail("walk depth exceeded the z hitting index");
                }
            } else {
                ++undecided;
                if (all_finite && z.resolved_at >= run.record.max_vertex + 2) {
                    c.fail("walk finished but z failed to hit zero within an adequate horizon");
                }
            }
        }
    }
    c.note(std::to_string(decided) + " decided, " + std::to_string(undecided) + " undecided-consistent");
    return c.result;
}

inline PropertyResult prop_kstar_period_reduction() {
    detail::Checker c("unary: scanning k <= N decides k* (vs 10N)");
    Rng rng(202);
    for (int trial = 0; trial < 200; ++trial) {
        const std::int64_t L = 2 * rng.range(1, 4);
        SupportDistribution dist = testsupport::random_balanced_distribution(rng, L, 1, static_cast<std::size_t>(rng.range(1, 3)));
        auto ks = unary::k_star(dist);
        // independent wide scan by direct evaluation
        std::optional<std::int64_t> wide;
        const std::int64_t n = dist.common_period() / 2;
        for (std::int64_t k = 1; k <= 10 * n && !wide; ++k) {
            bool all = true;
            for (const auto& a : dist.atoms()) {
                if (u_value(a.sequence, 1, k) < k) all = false;
            }
            if (all) wide = k;
        }
        if (ks != wide) c.fail("narrow and wide scans disagree at L=" + std::to_string(L));
    }
    return c.result;
}

inline PropertyResult prop_shift_classification_consistency() {
    detail::Checker c("unary: balanced shift model is recurrent both ways");
    Rng rng(203);
    for (int trial = 0; trial < 150; ++trial) {
        const std::int64_t L = 2 * rng.range(1, 4);
        RotorSequence s = testsupport::random_balanced_sequence(rng, L, 1);
        if (!s.non_degenerate()) continue;
        if (unary::classify_shift_model(s) != unary::ShiftVerdict::recurrent) {
            c.fail("counting classifier called balanced " + s.format(true) + " transient");
        }
        if (unary::classify_unary_balanced(SupportDistribution::shift_model(s)) != Verdict::recurrent) {
            c.fail("k* classifier called the balanced shift model of " + s.format(true) + " transient");
        }
    }
    return c.result;
}

inline PropertyResult prop_cycle_lemma_postcondition() {
    detail::Checker c("unary: the cycle-lemma shift gives U(x) < x");
    Rng rng(204);
    for (int trial = 0; trial < 200; ++trial) {
        const std::int64_t L = 2 * rng.range(1, 6);
        RotorSequence s = testsupport::random_balanced_sequence(rng, L, 1);
        const std::int64_t j = unary::find_nonpositive_shift(s);
        RotorSequence shifted = s.shifted(j - 1);
        UTable table = UTable::build(shifted);
        for (std::int64_t x = 1; x <= 10 * L; ++x) {
            if (table.u(1, x) >= x) c.fail("U(x) >= x after the shift of " + s.format(true));
        }
        // smallest such shift: every earlier start has a positive partial sum
        for (std::int64_t jj = 1; jj < j; ++jj) {
            bool all_nonpos = true;
            std::int64_t sum = 0;
            for (std::int64_t t = 0; t < L && all_nonpos; ++t) {
                sum += s.at(jj + t) == 1 ? 1 : -1;
                if (sum > 0) all_nonpos = false;
            }
            if (all_nonpos) c.fail("a smaller shift already works for " + s.format(true));
        }
    }
    return c.result;
}

inline PropertyResult prop_infinite_excursion_bound() {
    detail::Checker c("unary: certified infinite excursions never exceed L/2");
    Rng rng(205);
    int runs = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const std::int64_t L = 2 * rng.range(1, 4);
        const bool cyclic = rng.range(0, 1) == 1;
        UnaryAssignment assign = [&] {
            if (!cyclic) return UnaryAssignment::homogeneous(testsupport::random_balanced_sequence(rng, L, 1));
            std::vector<RotorSequence> list;
            for (int i = 0, m = static_cast<int>(rng.range(2, 3)); i < m; ++i) {
                list.push_back(testsupport::random_balanced_sequence(rng, L, 1));
            }
            return UnaryAssignment::cyclic(list);
        }();
        auto rep = unary::count_infinite_excursions(assign, L / 2 + 3, 1'000'000, 100'000);
        bool und = false;
        for (const auto& o : rep.outcomes) {
            if (o.kind == ExcursionKind::undecided) und = true;
        }
        if (und) {
            c.fail("undecided excursion in a balanced deterministic assignment");
            continue;
        }
        if (rep.infinite_count > L / 2) c.fail("bound violated at L=" + std::to_string(L));
        ++runs;
    }
    c.note(std::to_string(runs) + " fully decided runs");
    return c.result;
}

inline PropertyResult prop_uniform_rotation_recurrence() {
    detail::Checker c("unary: rotation model certifies recurrent (>= 99%)");
    Rng rng(206);
    int certified = 0, undecided = 0, transient = 0, total = 0;
    for (int trial = 0; trial < 500; ++trial) {
        const std::int64_t L = rng.range(2, 20);
        RotorSequence base = testsupport::random_nondegenerate_sequence(rng, L, 1);
        SupportDistribution dist = SupportDistribution::rotation_model(base);
        UnaryAssignment assign = UnaryAssignment::sampled(dist, rng.next());
        const std::int64_t k = rng.range(1, 5);
        ZParams zp;
        zp.horizon = 1'000'000;
        ZTrajectory z = z_trajectory(assign, k, zp);
        ++total;
        if (z.outcome == ZOutcome::hit_zero) ++certified;
        else if (z.outcome == ZOutcome::cycle_certified) ++transient;
        else ++undecided;
    }
    if (transient != 0) c.fail("a rotation-model sample was certified transient");
    if (certified * 100 < total * 99) {
        c.fail("only " + std::to_string(certified) + "/" + std::to_string(total) + " certified recurrent");
    }
    c.note(std::to_string(certified) + "/" + std::to_string(total) + " certified, " +
           std::to_string(undecided) + " undecided");
    return c.result;
}

// --- tree -------------------------------------------------------------------

inline PropertyResult prop_row_sum_bound() {
    detail::Checker c("tree: moment matrix rows sum to at most d");
    Rng rng(301);
    for (int trial = 0; trial < 100; ++trial) {
        const int d = static_cast<int>(rng.range(2, 4));
        const std::int64_t n = rng.range(1, 3);
        SupportDistribution dist = testsupport::random_balanced_distribution(rng, n * (d + 1), d, static_cast<std::size_t>(rng.range(1, 3)));
        const std::int64_t K = dist.common_period() / (d + 1);
        RatMatrix m = tree::moment_matrix(dist, K); // throws if a type escapes
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (m.row_sum(i) > Rat(d)) c.fail("row sum exceeds d");
        }
    }
    return c.result;
}

inline PropertyResult prop_piece_spectral_identity() {
    detail::Checker c("tree: m-standard pieces have Perron root exactly 1");
    for (std::int64_t m = 1; m <= 4; ++m) {
        std::vector<RotorSequence::Symbol> word;
        for (int sym = 0; sym <= 2; ++sym) word.insert(word.end(), static_cast<std::size_t>(m), static_cast<RotorSequence::Symbol>(sym));
        for (int r = 0; r <= 2; ++r) {
            RotorSequence s = RotorSequence(2, {}, word).rotated(r);
            tree::TreeClassification cls = tree::classify_tree_balanced(SupportDistribution::rotation_model(s));
            if (!cls.rho.exactly_one) c.fail("rho != 1 for the " + std::to_string(m) + "-standard piece");
            if (cls.verdict != Verdict::recurrent) c.fail("piece family classified transient");
            // column structure: all columns zero except the m-th (the 1-vector)
            for (std::size_t i = 0; i < cls.matrix.size(); ++i) {
                for (std::size_t j = 0; j < cls.matrix.size(); ++j) {
                    const Rat expected = (j + 1 == static_cast<std::size_t>(m)) ? Rat(1) : Rat(0);
                    if (!(cls.matrix.at(i, j) == expected)) c.fail("unexpected matrix structure at m=" + std::to_string(m));
                }
            }
        }
    }
    return c.result;
}

inline PropertyResult prop_classifier_agreement_T2() {
    detail::Checker c("tree: pieces agree with the Perron sign on L in {3,6,9}");
    int total = 0;
    for (std::int64_t L : {3, 6, 9}) {
        for (const auto& w : tree::balanced_words(L, 2)) {
            RotorSequence s(2, {}, w);
            Verdict pieces = tree::classify_uniform_rotation(s);
            tree::TreeClassification cls = tree::classify_tree_balanced(SupportDistribution::rotation_model(s));
            if (pieces != cls.verdict) c.fail("disagreement on " + s.format());
            ++total;
        }
    }
    c.note(std::to_string(total) + " sequences");
    return c.result;
}

inline PropertyResult prop_kernel_consistency() {
    detail::Checker c("tree: child_types reproduces the moment matrix");
    Rng rng(302);
    for (int trial = 0; trial < 100; ++trial) {
        const int d = static_cast<int>(rng.range(2, 4));
        const std::int64_t n = rng.range(1, 3);
        SupportDistribution dist = testsupport::random_balanced_distribution(rng, n * (d + 1), d, static_cast<std::size_t>(rng.range(1, 3)));
        const std::int64_t K = dist.common_period() / (d + 1);
        RatMatrix m = tree::moment_matrix(dist, K);
        for (std::int64_t k = 1; k <= K; ++k) {
            for (std::int64_t l = 1; l <= K; ++l) {
                Rat expected(0);
                for (const auto& atom : dist.atoms()) {
                    std::int64_t hits = 0;
                    for (std::int64_t t : tree::child_types(atom.sequence, k)) {
                        if (t == l) ++hits;
                    }
                    expected += atom.weight * Rat(hits);
                }
                if (!(expected == m.at(static_cast<std::size_t>(k - 1), static_cast<std::size_t>(l - 1)))) {
                    c.fail("kernel mismatch at k=" + std::to_string(k));
                }
            }
        }
    }
    return c.result;
}

inline PropertyResult prop_child_monotonicity() {
    detail::Checker c("tree: child types are monotone in the parent type");
    Rng rng(303);
    for (int trial = 0; trial < 100; ++trial) {
        const int d = static_cast<int>(rng.range(2, 5));
        RotorSequence s = testsupport::random_nondegenerate_sequence(rng, rng.range(d + 1, 20), d);
        std::vector<std::int64_t> prev(static_cast<std::size_t>(d), 0);
        for (std::int64_t k = 1; k <= 30; ++k) {
            auto cur = tree::child_types(s, k);
            for (int i = 0; i < d; ++i) {
                if (cur[static_cast<std::size_t>(i)] < prev[static_cast<std::size_t>(i)]) {
                    c.fail("coordinate decreased on " + s.format());
                }
            }
            prev = cur;
        }
    }
    return c.result;
}

inline PropertyResult prop_td_lower_bound() {
    detail::Checker c("tree: d >= 3 rotation models escape (bound (3d-2)/(d+1) > 1)");
    Rng rng(304);
    int sequences = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const int d = static_cast<int>(rng.range(3, 5));
        RotorSequence s = testsupport::random_nondegenerate_sequence(rng, rng.range(d + 1, 16), d);
        if (!(tree::rotation_offspring_bound(d) > Rat(1))) c.fail("bound not above 1");
        if (tree::classify_uniform_rotation(s) != Verdict::transient) c.fail("d>=3 rotation not transient");
        sim::MonteCarloParams mp;
        mp.k = 1;
        mp.trials = 100;
        mp.budget = 20'000;
        mp.escape_level = 30;
        mp.seed = rng.next();
        auto sum = sim::monte_carlo(SupportDistribution::rotation_model(s), mp);
        if (sum.decided_transient < 1) c.fail("no escape observed for " + s.format());
        ++sequences;
    }
    c.note(std::to_string(sequences) + " sequences");
    return c.result;
}

// --- sim --------------------------------------------------------------------

inline PropertyResult prop_conservation() {
    detail::Checker c("sim: entries minus departures stay in {0,1} and close to 0");
    Rng rng(401);
    for (int trial = 0; trial < 40; ++trial) {
        const std::int64_t L = 2 * rng.range(1, 4);
        SupportDistribution dist = testsupport::random_balanced_distribution(rng, L, 1, 2);
        UnaryAssignment assign = UnaryAssignment::sampled(dist, rng.next());
        bool bad = false;
        // incremental check: only the previous and current vertex change per step
        std::int64_t prev_pos = 0;
        std::int64_t origin_visits = 0;
        sim::StepObserver observer = [&](std::int64_t pos, const std::vector<std::int64_t>& entries,
                                         const std::vector<std::int64_t>& departures) {
            for (std::int64_t v : {prev_pos, pos}) {
                if (v <= 0 || v >= static_cast<std::int64_t>(entries.size())) continue;
                const std::int64_t diff = entries[static_cast<std::size_t>(v)] - departures[static_cast<std::size_t>(v)];
                if (diff < 0 || diff > 1) bad = true;
            }
            if (pos == 0 && (++origin_visits & 63) == 0) {
                for (std::size_t v = 1; v < entries.size(); ++v) {
                    if (entries[v] != departures[v]) bad = true;
                }
            }
            prev_pos = pos;
        };
        sim::UnaryRunParams p;
        p.num_excursions = 3;
        p.budget = 100'000;
        sim::UnaryRunResult run = sim::run_excursions(assign, p, {}, observer);
        bool all_finite = true;
        for (const auto& o : run.outcomes) {
            if (o.kind != ExcursionKind::finite) all_finite = false;
        }
        if (all_finite && bad) c.fail("conservation violated");
    }
    return c.result;
}

inline PropertyResult prop_leftover_composability() {
    detail::Checker c("sim: leftover extraction composes across excursions");
    Rng rng(402);
    int compared = 0;
    for (int trial = 0; trial < 60; ++trial) {
        const std::int64_t L = 2 * rng.range(1, 4);
        SupportDistribution dist = testsupport::random_balanced_distribution(rng, L, 1, 2);
        const std::uint64_t seed = rng.next();
        UnaryAssignment assign = UnaryAssignment::sampled(dist, seed);
        sim::UnaryRunParams p3;
        p3.num_excursions = 3;
        p3.budget = 300'000;
        sim::UnaryRunResult once = sim::run_excursions(assign, p3);
        bool all_finite = true;
        for (const auto& o : once.outcomes) {
            if (o.kind != ExcursionKind::finite) all_finite = false;
        }
        if (!all_finite) continue;
        sim::UnaryRunParams p1;
        p1.num_excursions = 1;
        p1.budget = 300'000;
        LeftoverConfig left;
        for (int e = 0; e < 3; ++e) left = sim::run_excursions(assign, p1, left).leftover;
        for (std::int64_t v = 0; v < std::max(once.leftover.tail_start(), left.tail_start()) + 4; ++v) {
            if (once.leftover.offset(v) != left.offset(v)) c.fail("sequential leftover differs at v=" + std::to_string(v));
        }
        // record-based extraction agrees on fully finite runs
        LeftoverConfig from_record = leftover_config(once.record);
        for (std::int64_t v = 0; v < once.leftover.tail_start() + 4; ++v) {
            if (from_record.offset(v) != once.leftover.offset(v)) c.fail("record extraction differs at v=" + std::to_string(v));
        }
        ++compared;
    }
    c.note(std::to_string(compared) + " fully finite runs compared");
    return c.result;
}

inline PropertyResult prop_determinism() {
    detail::Checker c("sim: identical inputs give byte-identical summaries across jobs");
    SupportDistribution dist = SupportDistribution::rotation_model(RotorSequence::parse("(010122)", 2));
    sim::MonteCarloParams mp;
    mp.k = 1;
    mp.trials = 64;
    mp.budget = 50'000;
    mp.escape_level = 25;
    mp.seed = 12345;
    mp.jobs = 1;
    auto a = sim::monte_carlo(dist, mp);
    mp.jobs = 4;
    auto b = sim::monte_carlo(dist, mp);
    if (a.trial_outcomes != b.trial_outcomes || a.trial_seeds != b.trial_seeds ||
        a.decided_recurrent != b.decided_recurrent || a.decided_transient != b.decided_transient) {
        c.fail("montecarlo summaries differ between 1 and 4 workers");
    }
    auto s1 = tree::sweep_shift_conjecture(6, 2, 1);
    auto s4 = tree::sweep_shift_conjecture(6, 2, 4);
    if (s1.rows.size() != s4.rows.size()) {
        c.fail("sweep row counts differ across workers");
    } else {
        for (std::size_t i = 0; i < s1.rows.size(); ++i) {
            if (!(s1.rows[i].representative == s4.rows[i].representative) ||
                s1.rows[i].verdict != s4.rows[i].verdict ||
                !(s1.rows[i].rho.lo == s4.rows[i].rho.lo) || !(s1.rows[i].rho.hi == s4.rows[i].rho.hi)) {
                c.fail("sweep rows differ across workers");
            }
        }
    }
    return c.result;
}

inline PropertyResult prop_sampling_frequency() {
    detail::Checker c("sim: sampled atom frequencies within 3 sigma at depth <= 12");
    SupportDistribution dist = SupportDistribution::rotation_model(RotorSequence::parse("(012)", 2));
    TreeAssignment assign = TreeAssignment::sampled(dist, 424242);
    std::vector<std::int64_t> counts(dist.size(), 0);
    std::int64_t total = 0;
    std::vector<TreeVertexKey> frontier{tree_root_key()};
    for (int depth = 0; depth <= 12; ++depth) {
        std::vector<TreeVertexKey> next;
        for (const auto& v : frontier) {
            ++counts[assign.atom_index_at(v)];
            ++total;
            if (depth < 12) {
                for (int i = 1; i <= 2; ++i) next.push_back(tree_child_key(v, i));
            }
        }
        frontier = std::move(next);
    }
    for (std::size_t i = 0; i < dist.size(); ++i) {
        const double p = dist.atom(i).weight.to_double();
        const double sigma = std::sqrt(p * (1 - p) * static_cast<double>(total));
        const double dev = std::abs(static_cast<double>(counts[i]) - p * static_cast<double>(total));
        if (dev > 3 * sigma) c.fail("atom " + std::to_string(i) + " off by " + std::to_string(dev / sigma) + " sigma");
    }
    // determinism of the drawn configuration
    for (int rep = 0; rep < 3; ++rep) {
        if (assign.atom_index_at(tree_root_key()) != assign.atom_index_at(tree_root_key())) c.fail("unstable draw");
    }
    c.note(std::to_string(total) + " vertices");
    return c.result;
}

inline PropertyResult prop_frontier_certificate_validation() {
    detail::Checker c("sim: certified infinite-excursion leftovers match raw stepping");
    Rng rng(404);
    int validated = 0;
    for (int trial = 0; trial < 200 && validated < 60; ++trial) {
        const std::int64_t L = 2 * rng.range(1, 4);
        const bool cyclic = rng.range(0, 1) == 1;
        UnaryAssignment assign = [&] {
            if (!cyclic) return UnaryAssignment::homogeneous(testsupport::random_balanced_sequence(rng, L, 1));
            std::vector<RotorSequence> list;
            for (int i = 0, m = static_cast<int>(rng.range(2, 3)); i < m; ++i) {
                list.push_back(testsupport::random_balanced_sequence(rng, L, 1));
            }
            return UnaryAssignment::cyclic(list);
        }();
        // walk excursion by excursion until a certified infinite one shows up
        LeftoverConfig before;
        std::optional<LeftoverConfig> after;
        for (int e = 0; e < static_cast<int>(L / 2 + 2); ++e) {
            sim::UnaryRunParams p;
            p.num_excursions = 1;
            p.budget = 400'000;
            sim::UnaryRunResult run = sim::run_excursions(assign, p, before);
            if (run.outcomes[0].kind == ExcursionKind::infinite) {
                after = run.leftover;
                break;
            }
            if (run.outcomes[0].kind == ExcursionKind::undecided) break;
            before = run.leftover;
        }
        if (!after) continue;
        ++validated;

        // independent raw stepper from the same starting environment
        const std::int64_t horizon = 200'000;
        std::vector<std::int64_t> consumed;
        auto ensure = [&](std::int64_t v) {
            while (static_cast<std::int64_t>(consumed.size()) <= v) {
                consumed.push_back(before.offset(static_cast<std::int64_t>(consumed.size())));
            }
        };
        std::int64_t pos = 0;
        ensure(0);
        std::vector<std::int64_t> positions;
        positions.reserve(static_cast<std::size_t>(horizon));
        bool ended = false;
        for (std::int64_t t = 0; t < horizon && !ended; ++t) {
            ensure(pos);
            const int sym = assign.at(pos).at(consumed[static_cast<std::size_t>(pos)] + 1);
            consumed[static_cast<std::size_t>(pos)] += 1;
            if (pos == 0 && sym == 0) ended = true; // would contradict the certificate
            else pos += sym == 1 ? 1 : -1;
            positions.push_back(pos);
        }
        if (ended) {
            c.fail("raw walk finished an excursion that was certified infinite");
            continue;
        }
        // vertices the raw walk can no longer touch are final
        std::int64_t future_min = positions.back();
        std::vector<std::int64_t> min_after(positions.size());
        for (std::size_t t = positions.size(); t-- > 0;) {
            future_min = std::min(future_min, positions[t]);
            min_after[t] = future_min;
        }
        const std::int64_t settled = min_after[positions.size() / 2]; // final below this by mid-run
        const std::int64_t ts = after->tail_start();
        for (std::int64_t v = 0; v < std::min(ts, settled); ++v) {
            if (consumed[static_cast<std::size_t>(v)] != after->offset(v)) {
                c.fail("exact prefix offset differs at v=" + std::to_string(v));
            }
        }
        for (std::int64_t v = ts; v < settled; ++v) {
            const std::int64_t per = assign.at(v).period_length();
            const std::int64_t diff = consumed[static_cast<std::size_t>(v)] - after->offset(v);
            if ((diff % per + per) % per != 0) {
                c.fail("tail band offset differs (mod period) at v=" + std::to_string(v));
            }
        }
    }
    c.note(std::to_string(validated) + " certified excursions replayed");
    return c.result;
}

inline PropertyResult prop_tree_oracle_equivalence() {
    detail::Checker c("sim: tree z-death certificates match the walk oracle");
    Rng rng(403);
    int died = 0;
    for (int trial = 0; trial < 300 && died < 100; ++trial) {
        SupportDistribution dist = SupportDistribution::rotation_model(RotorSequence::parse("(012)", 2));
        const std::uint64_t seed = rng.next();
        TreeAssignment assign = TreeAssignment::sampled(dist, seed);
        const std::int64_t k = rng.range(1, 2);
        auto z = sim::z_tree_expand(assign, k, 200'000);
        if (z.status != sim::ZTreeStatus::died) continue;
        ++died;
        sim::TreeWalker walker(assign);
        sim::TreeRunParams p;
        p.num_excursions = k;
        p.budget = 4'000'000;
        auto run = sim::run_tree_excursions(walker, p);
        for (const auto& o : run.outcomes) {
            if (o.kind != ExcursionKind::finite) c.fail("walk did not finish despite a death certificate");
        }
        const RotorSequence& root_seq = assign.at(tree_root_key());
        for (int i = 1; i <= 2; ++i) {
            if (walker.root_child_returns(i) != u_value(root_seq, i, k)) {
                c.fail("root-child return count differs from the type value");
            }
        }
    }
    c.note(std::to_string(died) + " death-certified configurations");
    return c.result;
}

inline std::vector<PropertyResult> run_all_property_suites() {
    return {
        prop_format_roundtrip(),
        prop_rotation_group(),
        prop_shift_semigroup(),
        prop_closed_form_agreement(),
        prop_monotonicity(),
        prop_subduality(),
        prop_balance_identity(),
        prop_z_vs_simulator(),
        prop_kstar_period_reduction(),
        prop_shift_classification_consistency(),
        prop_cycle_lemma_postcondition(),
        prop_infinite_excursion_bound(),
        prop_uniform_rotation_recurrence(),
        prop_row_sum_bound(),
        prop_piece_spectral_identity(),
        prop_classifier_agreement_T2(),
        prop_kernel_consistency(),
        prop_child_monotonicity(),
        prop_td_lower_bound(),
        prop_conservation(),
        prop_frontier_certificate_validation(),
        prop_leftover_composability(),
        prop_determinism(),
        prop_sampling_frequency(),
        prop_tree_oracle_equivalence(),
    };
}

} // namespace propsuite
