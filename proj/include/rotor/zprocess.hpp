#pragma once

/**
 * @file zprocess.hpp
 * @brief The Z-process on the unary tree: Z_0 = k, Z_n = U_{a_{n-1}}(Z_{n-1}).
 *
 * Hitting zero certifies that the first k excursions of the rotor walk are
 * finite. Survival is certified exactly in two situations:
 *
 *   - state cycle: for assignments that are eventually cyclic in the vertex
 *     index (homogeneous, cyclic lists, or a leftover prefix over those),
 *     a repeat of the pair (value, vertex phase) pins the orbit to a loop
 *     that never reaches zero;
 *   - uniform growth: if every sequence in the (tail) support satisfies
 *     U(x) > x for all x >= g, any value >= g grows forever.
 *
 * Everything else is reported as survived-to-horizon, which is an honest
 * "undecided": for sampled configurations no finite certificate exists.
 */

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "rotor/assignment.hpp"
#include "rotor/rational.hpp"
#include "rotor/utable.hpp"
#include "rotor/walk.hpp"

namespace rotor {

enum class ZOutcome { hit_zero, survived_horizon, cycle_certified };

struct ZTrajectory {
    std::int64_t k = 1;
    std::vector<std::int64_t> values; // Z_0, Z_1, ... (possibly truncated; huge values saturate)
    bool values_truncated = false;
    bool value_overflow = false;      // a value outgrew 128 bits; no claim is made
    ZOutcome outcome = ZOutcome::survived_horizon;
    std::int64_t resolved_at = 0; // index n of the terminating event
    std::string certificate;
};

inline const char* to_string(ZOutcome o) {
    switch (o) {
        case ZOutcome::hit_zero: return "hit_zero";
        case ZOutcome::survived_horizon: return "survived_horizon";
        case ZOutcome::cycle_certified: return "cycle_certified";
    }
    return "?";
}

namespace detail {

/// Smallest x0 such that U(x) > x for all x >= x0, or nullopt if there is
/// no such threshold (i.e. ones-per-period <= zeros-per-period).
inline std::optional<std::int64_t> growth_threshold(const UTable& t) {
    const std::int64_t z = t.zeros_per_period();
    const std::int64_t c1 = t.count_per_period(1);
    if (c1 <= z) return std::nullopt;
    std::int64_t x0 = 1;
    for (std::int64_t beta = 1; beta <= z; ++beta) {
        const std::int64_t gap = beta - t.base(1, beta); // need alpha*(c1-z) > gap
        std::int64_t alpha_min = 0;
        if (gap >= 0) alpha_min = gap / (c1 - z) + 1;
        x0 = std::max(x0, alpha_min * z + beta);
    }
    return x0;
}

/// U-table cache keyed by (atom index, shift offset modulo the period).
class ShiftedTableCache {
public:
    const UTable& get(const RotorSequence& base, std::size_t atom_idx, std::int64_t offset) {
        const std::int64_t L = base.period_length();
        const std::int64_t key_off = base.purely_periodic() ? offset % L : offset;
        auto key = std::make_pair(atom_idx, key_off);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        auto [pos, inserted] = cache_.emplace(key, UTable::build(base.shifted(key_off)));
        return pos->second;
    }

private:
    std::map<std::pair<std::size_t, std::int64_t>, UTable> cache_;
};

} // namespace detail

struct ZParams {
    std::int64_t horizon = 1'000'000;
    std::size_t max_stored_values = 4096;
};

/// Runs the Z-process for excursion index k over the assignment, optionally
/// on top of a leftover environment.
inline ZTrajectory z_trajectory(const UnaryAssignment& assign, std::int64_t k,
                                const ZParams& params = {},
                                const LeftoverConfig& left = {}) {
    if (assign.degree() != 1) throw std::domain_error("z-process requires degree 1");
    if (k < 1) throw std::invalid_argument("excursion index k must be >= 1");
    if (params.horizon < 1) throw std::invalid_argument("horizon must be >= 1");

    ZTrajectory traj;
    traj.k = k;
    traj.values.push_back(k);

    detail::ShiftedTableCache tables;

    // Certificates are available when the assignment (beyond the leftover
    // prefix) repeats with a finite structural period.
    const auto cycle = assign.cycle_length();
    const std::int64_t tail_start = left.tail_start();
    std::int64_t m_total = 0;
    if (cycle) m_total = lcm_checked(*cycle, left.tail_period());

    // Uniform growth threshold over the tail support: all atoms at all tail
    // band offsets must grow.
    std::optional<std::int64_t> grow;
    {
        bool all_grow = true;
        std::int64_t g = 1;
        const std::size_t natoms = assign.is_sampled() ? assign.distribution()->size() : assign.list().size();
        for (std::size_t ai = 0; ai < natoms && all_grow; ++ai) {
            const RotorSequence& s = assign.is_sampled() ? assign.distribution()->atom(ai).sequence : assign.list()[ai];
            for (std::int64_t off : left.tail_band()) {
                auto th = detail::growth_threshold(tables.get(s, ai, off));
                if (!th) { all_grow = false; break; }
                g = std::max(g, *th);
            }
        }
        if (all_grow) grow = g;
    }

    std::set<std::pair<int128, std::int64_t>> seen; // (value, phase)
    int128 z = k;
    for (std::int64_t n = 1; n <= params.horizon; ++n) {
        const std::int64_t vertex = n - 1;
        const RotorSequence& base = assign.at(vertex);
        const UTable& table = tables.get(base, assign.atom_index_at(vertex), left.offset(vertex));
        try {
            z = table.u128(1, z);
        } catch (const std::overflow_error&) {
            traj.value_overflow = true;
            traj.outcome = ZOutcome::survived_horizon;
            traj.resolved_at = n;
            traj.certificate = "value-overflow";
            return traj;
        }
        if (traj.values.size() < params.max_stored_values) {
            traj.values.push_back(z > int128(INT64_MAX) ? INT64_MAX : static_cast<std::int64_t>(z));
        } else {
            traj.values_truncated = true;
        }

        if (z == 0) {
            traj.outcome = ZOutcome::hit_zero;
            traj.resolved_at = n;
            return traj;
        }
        if (grow && vertex >= tail_start && z >= *grow) {
            traj.outcome = ZOutcome::cycle_certified;
            traj.resolved_at = n;
            traj.certificate = "uniform-growth";
            return traj;
        }
        if (m_total > 0 && n >= tail_start) {
            // next map to apply is the one at vertex n
            const std::int64_t phase = (n - tail_start) % m_total;
            if (!seen.insert({z, phase}).second) {
                traj.outcome = ZOutcome::cycle_certified;
                traj.resolved_at = n;
                traj.certificate = "state-cycle";
                return traj;
            }
        }
    }
    traj.outcome = ZOutcome::survived_horizon;
    traj.resolved_at = params.horizon;
    return traj;
}

} // namespace rotor
