#pragma once

/**
 * @file unary.hpp
 * @brief Recurrence and transience criteria on the unary tree.
 *
 * For i.i.d. configurations drawn from balanced L-periodic sequences the
 * walk is transient iff
 *
 *     k* = min{ k >= 1 : U_i(k) >= k for every support sequence i }
 *
 * is finite. Periodicity makes the search exact: U(alpha*N + beta) =
 * alpha*N + U(beta) with N = L/2, so if every k <= N fails the condition,
 * every larger k fails it too, and scanning k <= N decides k*.
 *
 * The shift model (uniform over all L shifts of one periodic sequence) is
 * classified by a counting criterion: transient to the right iff the period
 * holds strictly more 1s than 0s, recurrent otherwise. The recurrent
 * direction rests on a cycle-lemma shift with all partial sums <= 0, which
 * find_nonpositive_shift computes.
 */

#include <cstdint>
#include <optional>
#include <vector>

#include "rotor/distribution.hpp"
#include "rotor/sequence.hpp"
#include "rotor/sim.hpp"
#include "rotor/utable.hpp"
#include "rotor/zprocess.hpp"

namespace rotor::unary {

using rotor::Verdict;

enum class ShiftVerdict { recurrent, transient_right };

inline const char* to_string(ShiftVerdict v) {
    return v == ShiftVerdict::recurrent ? "Recurrent" : "TransientRight";
}

namespace detail {

inline void require_balanced_unary(const SupportDistribution& dist) {
    if (dist.degree() != 1) throw std::domain_error("criterion requires degree 1");
    for (const auto& a : dist.atoms()) {
        if (!a.sequence.purely_periodic()) {
            throw std::domain_error("atom " + a.sequence.format(true) + " is not purely periodic");
        }
        if (!a.sequence.balanced()) {
            throw std::domain_error("atom " + a.sequence.format(true) +
                                    " is unbalanced; use the shift-model classifier instead");
        }
    }
}

} // namespace detail

/// k* = min{k : U_i(k) >= k for every atom}, or nullopt for infinity. Atoms
/// must be balanced and purely periodic; they are aligned to the least
/// common period L, and only k in 1..L/2 need examination.
inline std::optional<std::int64_t> k_star(const SupportDistribution& dist) {
    detail::require_balanced_unary(dist);
    const std::int64_t L = dist.common_period();
    const std::int64_t n = L / 2;
    std::vector<UTable> tables;
    tables.reserve(dist.size());
    for (const auto& a : dist.atoms()) tables.push_back(UTable::build(a.sequence));
    for (std::int64_t k = 1; k <= n; ++k) {
        bool all = true;
        for (const UTable& t : tables) {
            if (t.u(1, k) < k) {
                all = false;
                break;
            }
        }
        if (all) return k;
    }
    return std::nullopt;
}

/// Balanced periodic criterion: transient iff k* is finite.
inline Verdict classify_unary_balanced(const SupportDistribution& dist) {
    return k_star(dist) ? Verdict::transient : Verdict::recurrent;
}

/// Shift model on one L-periodic sequence: transient to the right iff the
/// period holds strictly more 1s than 0s.
inline ShiftVerdict classify_shift_model(const RotorSequence& s) {
    if (s.degree() != 1) throw std::domain_error("shift-model classifier requires degree 1");
    if (!s.purely_periodic()) throw std::domain_error("shift model requires a purely periodic sequence");
    if (!s.non_degenerate()) throw std::domain_error("degenerate sequence");
    return s.period_count(1) > s.period_count(0) ? ShiftVerdict::transient_right : ShiftVerdict::recurrent;
}

/// Cycle-lemma starting point: for a balanced 2n-periodic sequence (symbols
/// read as +1/-1), the smallest j in {1..2n} such that every partial sum of
/// the sequence started at position j is <= 0. The prefix-sum walk attains
/// its maximum there, and the shifted sequence then satisfies U(x) < x for
/// all x > 0.
inline std::int64_t find_nonpositive_shift(const RotorSequence& s) {
    if (s.degree() != 1) throw std::domain_error("cycle-lemma shift requires degree 1");
    if (!s.balanced()) throw std::domain_error("cycle-lemma shift requires a balanced sequence");
    const std::int64_t L = s.period_length();
    std::int64_t sum = 0, best = 0, best_at = 0;
    for (std::int64_t i = 1; i < L; ++i) {
        sum += (s.at(i) == 1 ? 1 : -1);
        if (sum > best) {
            best = sum;
            best_at = i;
        }
    }
    return best_at + 1;
}

struct InfiniteExcursionReport {
    std::vector<ExcursionOutcome> outcomes;
    std::int64_t infinite_count = 0;
    LeftoverConfig final_leftover;
    bool leftover_valid = true;
};

/// Chains successive walkers through leftover environments and reports each
/// excursion as finite, infinite (certified) or undecided. For balanced
/// L-periodic assignments the certified infinite count can never exceed
/// L/2.
inline InfiniteExcursionReport count_infinite_excursions(const UnaryAssignment& assignment,
                                                         std::int64_t max_excursions,
                                                         std::int64_t budget,
                                                         std::int64_t escape_level) {
    if (assignment.degree() != 1) throw std::domain_error("excursion counting requires degree 1");
    if (assignment.is_sampled()) {
        throw std::domain_error("excursion counting requires a deterministic assignment");
    }
    std::int64_t L = 0;
    for (const auto& s : assignment.list()) {
        if (!s.balanced()) {
            throw std::domain_error("assignment sequence " + s.format(true) + " is unbalanced");
        }
        L = L == 0 ? s.period_length() : lcm_checked(L, s.period_length());
    }
    sim::UnaryRunParams params;
    params.num_excursions = max_excursions;
    params.budget = budget;
    params.escape_level = escape_level;
    sim::UnaryRunResult run = sim::run_excursions(assignment, params);
    InfiniteExcursionReport report;
    report.outcomes = run.outcomes;
    report.infinite_count = run.infinite_count();
    report.final_leftover = run.leftover;
    report.leftover_valid = run.leftover_valid;
    if (report.infinite_count > L / 2) {
        throw std::logic_error("certified infinite excursions exceed L/2, which is impossible");
    }
    return report;
}

} // namespace rotor::unary
