#pragma once

/**
 * @file sim.hpp
 * @brief Exact rotor-walk simulation on the unary tree and on T_d.
 *
 * The walk consumes, at each visit to v, entry local_time(v)+1 of v's
 * sequence (on top of any leftover offset) and moves in that direction; an
 * excursion ends exactly when the origin's direction-0 rotor (the self-loop)
 * is consumed. Successive excursions chain through the leftover offsets.
 *
 * Unary infinite excursions are certified by frontier cycle detection: when
 * the walk first reaches two fresh vertices p and p+D whose trailing
 * consumption windows agree modulo the sequence periods (and the walk never
 * backtracked below the window in between), the future evolution repeats
 * shifted by D forever. That both proves the excursion infinite and pins
 * the final leftover environment: exact offsets up to a point, then a
 * D-periodic band. Tree excursions are never certified infinite by
 * simulation; only extinction of the type process is a sound certificate
 * there.
 */

#include <cstdint>
#include <functional>
#include <future>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "rotor/assignment.hpp"
#include "rotor/walk.hpp"
#include "rotor/zprocess.hpp"

namespace rotor::sim {

struct UnaryRunParams {
    std::int64_t num_excursions = 1;
    std::int64_t budget = 1'000'000;   // steps per excursion
    std::int64_t escape_level = 100'000;
    std::int64_t window = 512;         // frontier snapshot depth
    std::size_t max_events = 48;
};

struct UnaryRunResult {
    std::vector<ExcursionOutcome> outcomes;
    UnaryWalkRecord record;
    LeftoverConfig leftover;
    bool leftover_valid = true;
    std::int64_t infinite_count() const {
        std::int64_t n = 0;
        for (const auto& o : outcomes) {
            if (o.kind == ExcursionKind::infinite) ++n;
        }
        return n;
    }
};

/// Test instrumentation: called after every step with the per-run entry and
/// departure counts and the walker position.
using StepObserver = std::function<void(std::int64_t pos,
                                        const std::vector<std::int64_t>& entries,
                                        const std::vector<std::int64_t>& departures)>;

namespace detail {

struct FrontierEvent {
    std::int64_t p = 0;
    std::int64_t min_after = 0;
    std::int64_t win_lo = 0;
    std::vector<std::int64_t> win; // consumed totals over [win_lo, p)
};

class UnaryEngine {
public:
    UnaryEngine(const UnaryAssignment& base, LeftoverConfig left, const StepObserver& observer)
        : base_(base), left_(std::move(left)), observer_(observer) {
        if (base_.degree() != 1) throw std::domain_error("unary engine requires degree 1");
        certs_enabled_ = !base_.is_sampled();
        if (certs_enabled_) {
            for (const auto& s : base_.list()) {
                if (!s.purely_periodic()) certs_enabled_ = false;
            }
        }
    }

    const LeftoverConfig& leftover() const { return left_; }
    bool leftover_valid() const { return leftover_valid_; }

    ExcursionOutcome run_one(const UnaryRunParams& params, UnaryWalkRecord& record) {
        if (!leftover_valid_) return {ExcursionKind::undecided, 0, "environment after an uncharted infinite excursion"};
        const LeftoverConfig run_start = left_;

        consumed_ = left_.prefix();
        entries_run_.assign(consumed_.size(), 0);
        departures_run_.assign(consumed_.size(), 0);
        seqs_.clear();
        for (std::size_t v = 0; v < consumed_.size(); ++v) seqs_.push_back(&base_.at(static_cast<std::int64_t>(v)));
        const std::int64_t frontier_floor = left_.tail_start();
        const std::int64_t m_struct = certs_enabled_
            ? lcm_checked(*base_.cycle_length(), left_.tail_period()) : 0;

        std::vector<FrontierEvent> events;
        std::int64_t pos = 0;
        std::int64_t alltime_max = -1;
        std::int64_t steps = 0;
        ensure(0);
        entries_run_[0] += 1;

        while (steps < params.budget) {
            ensure(pos);
            const RotorSequence& seq = *seqs_[static_cast<std::size_t>(pos)];
            const int sym = seq.at(consumed_[static_cast<std::size_t>(pos)] + 1);
            consumed_[static_cast<std::size_t>(pos)] += 1;
            departures_run_[static_cast<std::size_t>(pos)] += 1;
            ++steps;
            record.step_count += 1;

            if (pos == 0 && sym == 0) {
                // self-loop: the excursion is over
                record.origin_loop_count += 1;
                if (observer_) observer_(pos, entries_run_, departures_run_);
                finish_finite(record);
                return {ExcursionKind::finite, steps, ""};
            }
            pos += (sym == 0 ? -1 : +1);
            ensure(pos);
            entries_run_[static_cast<std::size_t>(pos)] += 1;
            record.max_vertex = std::max(record.max_vertex, pos);
            if (observer_) observer_(pos, entries_run_, departures_run_);

            for (auto& e : events) e.min_after = std::min(e.min_after, pos);

            if (certs_enabled_ && pos > alltime_max && pos >= frontier_floor) {
                alltime_max = pos;
                if (auto leftover = try_certify(events, pos, m_struct)) {
                    left_ = std::move(*leftover);
                    finish_infinite(record);
                    return {ExcursionKind::infinite, steps,
                            "frontier-cycle at " + std::to_string(pos)};
                }
                record_event(events, pos, params);
            }
        }

        // Budget exhausted. If the walker escaped far, the Z-process may
        // still certify survival of this excursion exactly; the leftover
        // beyond it stays unknown, so the chain cannot continue.
        if (certs_enabled_ && alltime_max >= params.escape_level) {
            ZParams zp;
            zp.horizon = params.budget;
            ZTrajectory z = z_trajectory(base_, 1, zp, run_start);
            if (z.outcome == ZOutcome::cycle_certified) {
                leftover_valid_ = false;
                finish_infinite(record);
                return {ExcursionKind::infinite, steps, "escape with z-survival (" + z.certificate + ")"};
            }
        }
        leftover_valid_ = false;
        return {ExcursionKind::undecided, steps, "step budget exhausted"};
    }

private:
    void ensure(std::int64_t v) {
        while (static_cast<std::int64_t>(consumed_.size()) <= v) {
            const auto idx = static_cast<std::int64_t>(consumed_.size());
            consumed_.push_back(left_.offset(idx));
            seqs_.push_back(&base_.at(idx));
            entries_run_.push_back(0);
            departures_run_.push_back(0);
        }
    }

    void record_event(std::vector<FrontierEvent>& events, std::int64_t p, const UnaryRunParams& params) {
        FrontierEvent e;
        e.p = p;
        e.min_after = p;
        e.win_lo = std::max<std::int64_t>(0, p - params.window);
        e.win.assign(consumed_.begin() + static_cast<std::ptrdiff_t>(e.win_lo),
                     consumed_.begin() + static_cast<std::ptrdiff_t>(p));
        if (events.size() >= params.max_events) events.erase(events.begin());
        events.push_back(std::move(e));
    }

    /// Matches the fresh vertex p against earlier frontier events; on
    /// success returns the exact final leftover of this (infinite)
    /// excursion.
    std::optional<LeftoverConfig> try_certify(const std::vector<FrontierEvent>& events,
                                              std::int64_t p, std::int64_t m_struct) {
        for (const auto& e : events) {
            const std::int64_t delta = p - e.p;
            if (delta <= 0 || delta % m_struct != 0) continue;
            if (e.min_after < e.win_lo) continue; // backtracked past the snapshot
            bool match = true;
            for (std::int64_t v = e.min_after; v < e.p && match; ++v) {
                const std::int64_t lv = seqs_[static_cast<std::size_t>(v)]->period_length();
                const std::int64_t then = e.win[static_cast<std::size_t>(v - e.win_lo)];
                const std::int64_t now = consumed_[static_cast<std::size_t>(v + delta)];
                if (((now - then) % lv + lv) % lv != 0) match = false;
            }
            if (!match) continue;
            // Future from p repeats the segment after e.p shifted by delta:
            // vertices below min_after+delta are final, then a delta-band.
            const std::int64_t tail_start = e.min_after + delta;
            std::vector<std::int64_t> prefix(consumed_.begin(),
                                             consumed_.begin() + static_cast<std::ptrdiff_t>(tail_start));
            std::vector<std::int64_t> band(consumed_.begin() + static_cast<std::ptrdiff_t>(e.min_after),
                                           consumed_.begin() + static_cast<std::ptrdiff_t>(tail_start));
            return LeftoverConfig(std::move(prefix), std::move(band));
        }
        return std::nullopt;
    }

    void finish_finite(UnaryWalkRecord& record) {
        // untouched tail keeps the old band, rotated to the new start
        const std::int64_t old_ts = left_.tail_start();
        const std::int64_t period = left_.tail_period();
        const std::int64_t new_ts = static_cast<std::int64_t>(consumed_.size());
        std::vector<std::int64_t> band(static_cast<std::size_t>(period));
        for (std::int64_t j = 0; j < period; ++j) {
            band[static_cast<std::size_t>(j)] = left_.tail_band()[static_cast<std::size_t>(((new_ts + j - old_ts) % period + period) % period)];
        }
        left_ = LeftoverConfig(consumed_, std::move(band));
        record.current_vertex = 0;
        sync_record(record);
    }

    void finish_infinite(UnaryWalkRecord& record) {
        record.current_vertex = -1; // walked off to infinity
        sync_record(record);
    }

    void sync_record(UnaryWalkRecord& record) {
        for (std::int64_t v = 0; v < left_.tail_start(); ++v) {
            const std::int64_t t = left_.offset(v);
            if (t != 0) record.local_times[v] = t;
        }
        for (std::size_t v = 0; v < entries_run_.size(); ++v) {
            if (entries_run_[v] != 0) record.entries[static_cast<std::int64_t>(v)] += entries_run_[v];
        }
    }

    const UnaryAssignment& base_;
    LeftoverConfig left_;
    const StepObserver& observer_;
    bool certs_enabled_ = false;
    bool leftover_valid_ = true;
    std::vector<std::int64_t> consumed_;
    std::vector<const RotorSequence*> seqs_;
    std::vector<std::int64_t> entries_run_;
    std::vector<std::int64_t> departures_run_;
};

} // namespace detail

/// Runs successive excursions chained through leftover environments.
inline UnaryRunResult run_excursions(const UnaryAssignment& base, const UnaryRunParams& params,
                                     LeftoverConfig initial = {}, const StepObserver& observer = {}) {
    if (params.num_excursions < 1 || params.budget < 1 || params.escape_level < 1) {
        throw std::invalid_argument("run parameters must be >= 1");
    }
    UnaryRunResult result;
    detail::UnaryEngine engine(base, std::move(initial), observer);
    for (std::int64_t e = 0; e < params.num_excursions; ++e) {
        ExcursionOutcome out = engine.run_one(params, result.record);
        result.outcomes.push_back(out);
        result.record.excursion_log.push_back(out);
    }
    result.leftover = engine.leftover();
    result.leftover_valid = engine.leftover_valid();
    return result;
}

// --------------------------------------------------------------------------
// Trees
// --------------------------------------------------------------------------

struct TreeWalkRecord {
    std::vector<int> current_path; // word over {1..d}; empty = root
    std::vector<ExcursionOutcome> excursion_log;
    std::int64_t step_count = 0;
    std::int64_t origin_loop_count = 0;
    std::int64_t max_depth = 0;
    std::int64_t nodes_touched = 0;
};

struct TreeRunParams {
    std::int64_t num_excursions = 1;
    std::int64_t budget = 1'000'000;
};

class TreeWalker {
public:
    explicit TreeWalker(const TreeAssignment& assign) : assign_(assign), d_(assign.degree()) {
        const TreeVertexKey root = tree_root_key();
        nodes_.push_back(Node{-1, 0, root, &assign.at(root), 0, 0,
                              std::vector<std::int32_t>(static_cast<std::size_t>(d_), -1)});
    }

    ExcursionOutcome run_one(std::int64_t budget, TreeWalkRecord& record) {
        std::int32_t pos = 0;
        std::int64_t steps = 0;
        while (steps < budget) {
            Node& node = nodes_[static_cast<std::size_t>(pos)];
            const int sym = node.seq->at(node.consumed + 1);
            node.consumed += 1;
            ++steps;
            record.step_count += 1;
            if (sym == 0) {
                if (pos == 0) {
                    record.origin_loop_count += 1;
                    record.current_path.clear();
                    return {ExcursionKind::finite, steps, ""};
                }
                node.to_parent += 1;
                pos = node.parent;
            } else {
                pos = child(pos, sym);
                record.max_depth = std::max(record.max_depth, nodes_[static_cast<std::size_t>(pos)].key.depth);
            }
        }
        return {ExcursionKind::undecided, steps, "step budget exhausted"};
    }

    /// Departures toward the parent, per direction-i child of the root.
    std::int64_t root_child_returns(int i) {
        std::int32_t c = nodes_[0].children[static_cast<std::size_t>(i - 1)];
        return c < 0 ? 0 : nodes_[static_cast<std::size_t>(c)].to_parent;
    }

    std::int64_t local_time_at_root() const { return nodes_[0].consumed; }
    std::size_t node_count() const { return nodes_.size(); }

private:
    struct Node {
        std::int32_t parent;
        std::int64_t consumed;
        TreeVertexKey key;
        const RotorSequence* seq;
        std::int64_t to_parent;
        std::int64_t entries;
        std::vector<std::int32_t> children;
    };

    std::int32_t child(std::int32_t at, int dir) {
        Node& node = nodes_[static_cast<std::size_t>(at)];
        std::int32_t c = node.children[static_cast<std::size_t>(dir - 1)];
        if (c >= 0) {
            nodes_[static_cast<std::size_t>(c)].entries += 1;
            return c;
        }
        c = static_cast<std::int32_t>(nodes_.size());
        node.children[static_cast<std::size_t>(dir - 1)] = c;
        const TreeVertexKey key = tree_child_key(node.key, dir);
        nodes_.push_back(Node{at, 0, key, &assign_.at(key), 0, 1,
                              std::vector<std::int32_t>(static_cast<std::size_t>(d_), -1)});
        return c;
    }

    const TreeAssignment& assign_;
    int d_;
    std::vector<Node> nodes_;
};

struct TreeRunResult {
    std::vector<ExcursionOutcome> outcomes;
    TreeWalkRecord record;
};

inline TreeRunResult run_tree_excursions(TreeWalker& walker, const TreeRunParams& params) {
    if (params.num_excursions < 1 || params.budget < 1) {
        throw std::invalid_argument("run parameters must be >= 1");
    }
    TreeRunResult result;
    bool blocked = false;
    for (std::int64_t e = 0; e < params.num_excursions; ++e) {
        ExcursionOutcome out;
        if (blocked) {
            out = {ExcursionKind::undecided, 0, "environment after an undecided excursion"};
        } else {
            out = walker.run_one(params.budget, result.record);
            if (out.kind != ExcursionKind::finite) blocked = true;
        }
        result.outcomes.push_back(out);
        result.record.excursion_log.push_back(out);
    }
    result.record.nodes_touched = static_cast<std::int64_t>(walker.node_count());
    return result;
}

inline TreeRunResult run_tree_excursions(const TreeAssignment& assign, const TreeRunParams& params) {
    TreeWalker walker(assign);
    return run_tree_excursions(walker, params);
}

// --------------------------------------------------------------------------
// Tree Z-process expansion
// --------------------------------------------------------------------------

enum class ZTreeStatus { died, alive_at_budget, overflow };

struct ZTreeResult {
    ZTreeStatus status = ZTreeStatus::died;
    std::int64_t live_nodes = 0;      // live (type > 0) nodes expanded, root included
    std::int64_t frontier_size = 0;   // live nodes in the queue when stopping
    std::int64_t deepest_level = 0;
    std::vector<std::map<std::int64_t, std::int64_t>> level_histograms; // per level: type -> count
};

/// Breadth-first expansion of the type process on T_d: the root has type k,
/// the i-th child of a type-x vertex has type U^(i)(x) of the vertex's
/// sequence, and type-0 vertices are dead. An emptied frontier is an exact
/// certificate that the first k excursions are finite.
inline ZTreeResult z_tree_expand(const TreeAssignment& assign, std::int64_t k, std::int64_t node_budget,
                                 std::int64_t max_histogram_levels = 64) {
    if (k < 1) throw std::invalid_argument("excursion index k must be >= 1");
    if (node_budget < 1) throw std::invalid_argument("node budget must be >= 1");
    const int d = assign.degree();
    if (d < 2) throw std::domain_error("tree z-expansion requires degree >= 2");

    rotor::detail::ShiftedTableCache tables;
    struct Item {
        TreeVertexKey key;
        std::int64_t type;
    };
    ZTreeResult res;
    std::vector<Item> frontier{{tree_root_key(), k}};
    std::int64_t expanded = 0;
    constexpr std::int64_t type_cap = std::int64_t(1) << 50;
    while (!frontier.empty()) {
        if (expanded >= node_budget) {
            res.status = ZTreeStatus::alive_at_budget;
            res.frontier_size = static_cast<std::int64_t>(frontier.size());
            return res;
        }
        std::vector<Item> next;
        for (const Item& it : frontier) {
            ++expanded;
            ++res.live_nodes;
            res.deepest_level = std::max(res.deepest_level, it.key.depth);
            if (it.key.depth < max_histogram_levels) {
                if (static_cast<std::int64_t>(res.level_histograms.size()) <= it.key.depth) {
                    res.level_histograms.resize(static_cast<std::size_t>(it.key.depth) + 1);
                }
                res.level_histograms[static_cast<std::size_t>(it.key.depth)][it.type] += 1;
            }
            const RotorSequence& seq = assign.at(it.key);
            const UTable& table = tables.get(seq, assign.atom_index_at(it.key), 0);
            for (int i = 1; i <= d; ++i) {
                const std::int64_t child_type = table.u(i, it.type);
                if (child_type > type_cap) {
                    res.status = ZTreeStatus::overflow;
                    res.frontier_size = static_cast<std::int64_t>(frontier.size());
                    return res;
                }
                if (child_type > 0) next.push_back({tree_child_key(it.key, i), child_type});
            }
            if (expanded >= node_budget && !next.empty()) {
                res.status = ZTreeStatus::alive_at_budget;
                res.frontier_size = static_cast<std::int64_t>(next.size());
                return res;
            }
        }
        frontier = std::move(next);
    }
    res.status = ZTreeStatus::died;
    return res;
}

enum class EscapeStatus { escaped, died, budget_exhausted, overflow };

/// Depth-first search for a live node at depth >= escape_level. Exhausting
/// the whole live subtree without reaching it is the same extinction
/// certificate as a died z_tree_expand.
inline EscapeStatus seek_escape(const TreeAssignment& assign, std::int64_t k,
                                std::int64_t escape_level, std::int64_t node_budget) {
    const int d = assign.degree();
    if (d < 2) throw std::domain_error("escape search requires degree >= 2");
    rotor::detail::ShiftedTableCache tables;
    struct Item {
        TreeVertexKey key;
        std::int64_t type;
    };
    std::vector<Item> stack{{tree_root_key(), k}};
    std::int64_t expanded = 0;
    constexpr std::int64_t type_cap = std::int64_t(1) << 50;
    while (!stack.empty()) {
        if (++expanded > node_budget) return EscapeStatus::budget_exhausted;
        Item it = stack.back();
        stack.pop_back();
        if (it.key.depth >= escape_level) return EscapeStatus::escaped;
        const RotorSequence& seq = assign.at(it.key);
        const UTable& table = tables.get(seq, assign.atom_index_at(it.key), 0);
        for (int i = 1; i <= d; ++i) {
            const std::int64_t child_type = table.u(i, it.type);
            if (child_type > type_cap) return EscapeStatus::overflow;
            if (child_type > 0) stack.push_back({tree_child_key(it.key, i), child_type});
        }
    }
    return EscapeStatus::died;
}

// --------------------------------------------------------------------------
// Monte Carlo
// --------------------------------------------------------------------------

struct MonteCarloParams {
    std::int64_t k = 1;
    std::int64_t trials = 100;
    std::int64_t budget = 1'000'000;     // z horizon (unary) / node budget (tree)
    std::int64_t escape_level = 30;
    std::uint64_t seed = 1;
    int jobs = 1;
};

struct MonteCarloSummary {
    std::int64_t trials = 0;
    std::int64_t decided_recurrent = 0;  // first k excursions certified finite
    std::int64_t decided_transient = 0;  // unary: exact certificate; tree: deep escape
    std::int64_t undecided = 0;
    std::vector<std::uint64_t> trial_seeds;
    std::vector<char> trial_outcomes;    // 'r', 't', 'u' per trial
    MonteCarloParams params;
};

inline MonteCarloSummary monte_carlo(const SupportDistribution& dist, const MonteCarloParams& params) {
    if (params.trials < 1) throw std::invalid_argument("trials must be >= 1");
    MonteCarloSummary sum;
    sum.trials = params.trials;
    sum.params = params;
    sum.trial_seeds.resize(static_cast<std::size_t>(params.trials));
    sum.trial_outcomes.assign(static_cast<std::size_t>(params.trials), 'u');

    auto run_trial = [&](std::int64_t t) -> char {
        const std::uint64_t trial_seed = derive_stream(params.seed, static_cast<std::uint64_t>(t) + 1);
        sum.trial_seeds[static_cast<std::size_t>(t)] = trial_seed;
        if (dist.degree() == 1) {
            UnaryAssignment assign = UnaryAssignment::sampled(dist, trial_seed);
            ZParams zp;
            zp.horizon = params.budget;
            ZTrajectory z = z_trajectory(assign, params.k, zp);
            if (z.outcome == ZOutcome::hit_zero) return 'r';
            if (z.outcome == ZOutcome::cycle_certified) return 't';
            return 'u';
        }
        TreeAssignment assign = TreeAssignment::sampled(dist, trial_seed);
        switch (seek_escape(assign, params.k, params.escape_level, params.budget)) {
            case EscapeStatus::died: return 'r';
            case EscapeStatus::escaped: return 't';
            default: return 'u';
        }
    };

    const int jobs = std::max(1, params.jobs);
    if (jobs == 1) {
        for (std::int64_t t = 0; t < params.trials; ++t) sum.trial_outcomes[static_cast<std::size_t>(t)] = run_trial(t);
    } else {
        std::vector<std::future<void>> futs;
        std::int64_t chunk = (params.trials + jobs - 1) / jobs;
        for (int j = 0; j < jobs; ++j) {
            std::int64_t lo = j * chunk;
            std::int64_t hi = std::min(params.trials, lo + chunk);
            if (lo >= hi) break;
            futs.push_back(std::async(std::launch::async, [&, lo, hi] {
                for (std::int64_t t = lo; t < hi; ++t) sum.trial_outcomes[static_cast<std::size_t>(t)] = run_trial(t);
            }));
        }
        for (auto& f : futs) f.get();
    }
    for (char c : sum.trial_outcomes) {
        if (c == 'r') ++sum.decided_recurrent;
        else if (c == 't') ++sum.decided_transient;
        else ++sum.undecided;
    }
    return sum;
}

} // namespace rotor::sim
