#pragma once

/**
 * @file walk.hpp
 * @brief Shared state types for walk simulation: leftover configurations,
 *        excursion outcomes and walk records.
 *
 * A leftover configuration stores, per vertex, how many rotors have been
 * consumed there by completed walks; rotor t of the leftover environment at
 * v is rotor offset_v + t of the base sequence. Offsets are kept as an
 * exact dense prefix plus a periodic tail band, which is the shape produced
 * by a certified infinite excursion: finitely many exceptional vertices,
 * then a pattern repeating with some period. For purely periodic base
 * sequences a tail offset only matters modulo the period, so the band
 * describes the environment exactly.
 */

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace rotor {

class LeftoverConfig {
public:
    LeftoverConfig() : band_{0} {}
    LeftoverConfig(std::vector<std::int64_t> prefix, std::vector<std::int64_t> tail_band)
        : prefix_(std::move(prefix)), band_(std::move(tail_band)) {
        if (band_.empty()) band_ = {0};
    }

    std::int64_t offset(std::int64_t v) const {
        if (v < 0) throw std::out_of_range("vertex index must be non-negative");
        if (v < static_cast<std::int64_t>(prefix_.size())) return prefix_[static_cast<std::size_t>(v)];
        return band_[static_cast<std::size_t>((v - tail_start()) % tail_period())];
    }

    std::int64_t tail_start() const { return static_cast<std::int64_t>(prefix_.size()); }
    std::int64_t tail_period() const { return static_cast<std::int64_t>(band_.size()); }
    const std::vector<std::int64_t>& prefix() const { return prefix_; }
    const std::vector<std::int64_t>& tail_band() const { return band_; }

    bool trivial() const {
        for (std::int64_t v : prefix_) {
            if (v != 0) return false;
        }
        for (std::int64_t v : band_) {
            if (v != 0) return false;
        }
        return true;
    }

    /// Offsets compose additively: consuming |a| rotors and then |b| rotors
    /// of the remainder equals consuming |a|+|b| rotors.
    friend LeftoverConfig operator+(const LeftoverConfig& a, const LeftoverConfig& b) {
        std::int64_t start = std::max(a.tail_start(), b.tail_start());
        std::int64_t period = 1;
        {
            // lcm of the two band lengths
            std::int64_t x = a.tail_period(), y = b.tail_period(), g = x;
            std::int64_t t = y;
            while (t) { std::int64_t r = g % t; g = t; t = r; }
            period = x / g * y;
        }
        std::vector<std::int64_t> prefix(static_cast<std::size_t>(start));
        for (std::int64_t v = 0; v < start; ++v) prefix[static_cast<std::size_t>(v)] = a.offset(v) + b.offset(v);
        std::vector<std::int64_t> band(static_cast<std::size_t>(period));
        for (std::int64_t j = 0; j < period; ++j) band[static_cast<std::size_t>(j)] = a.offset(start + j) + b.offset(start + j);
        return LeftoverConfig(std::move(prefix), std::move(band));
    }

    bool operator==(const LeftoverConfig&) const = default;

private:
    std::vector<std::int64_t> prefix_;
    std::vector<std::int64_t> band_;
};

enum class Verdict { recurrent, transient };

inline const char* to_string(Verdict v) {
    return v == Verdict::recurrent ? "Recurrent" : "Transient";
}

enum class ExcursionKind { finite, infinite, undecided };

struct ExcursionOutcome {
    ExcursionKind kind = ExcursionKind::undecided;
    std::int64_t steps = 0;      // for finite: total steps including the closing self-loop
    std::string certificate;     // for infinite: how it was certified
};

inline const char* to_string(ExcursionKind k) {
    switch (k) {
        case ExcursionKind::finite: return "finite";
        case ExcursionKind::infinite: return "infinite";
        case ExcursionKind::undecided: return "undecided";
    }
    return "?";
}

/// Simulator log for a run on the unary tree.
struct UnaryWalkRecord {
    std::int64_t current_vertex = 0;
    std::map<std::int64_t, std::int64_t> local_times; // departures per vertex
    std::map<std::int64_t, std::int64_t> entries;     // arrivals per vertex (origin starts counted once)
    std::vector<ExcursionOutcome> excursion_log;
    std::int64_t step_count = 0;
    std::int64_t origin_loop_count = 0;
    std::int64_t max_vertex = 0;

    bool fully_decided() const {
        for (const auto& o : excursion_log) {
            if (o.kind == ExcursionKind::undecided) return false;
        }
        return true;
    }
};

/// Extracts the leftover environment of a completed run: offsets equal the
/// accumulated local times. Undecided walks leave local times undetermined,
/// so they are rejected.
inline LeftoverConfig leftover_config(const UnaryWalkRecord& record) {
    if (!record.fully_decided()) {
        throw std::domain_error("leftover of a record with an undecided walk");
    }
    std::int64_t hi = -1;
    for (const auto& [v, t] : record.local_times) {
        if (t != 0) hi = std::max(hi, v);
    }
    std::vector<std::int64_t> prefix(static_cast<std::size_t>(hi + 1), 0);
    for (const auto& [v, t] : record.local_times) {
        if (v <= hi) prefix[static_cast<std::size_t>(v)] = t;
    }
    return LeftoverConfig(std::move(prefix), {0});
}

} // namespace rotor
