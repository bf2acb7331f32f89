#pragma once

/**
 * @file assignment.hpp
 * @brief Per-vertex rotor configurations on the unary tree and on T_d.
 *
 * Three kinds of assignment are supported:
 *   - homogeneous: one sequence at every vertex,
 *   - cyclic:      a finite list cycled by vertex index (by depth on trees),
 *   - sampled:     i.i.d. draws from a SupportDistribution.
 *
 * Sampled assignments are a pure function of (seed, vertex): the atom at a
 * vertex is drawn from a SplitMix64 stream keyed by the master seed and a
 * canonical vertex encoding (the index on the unary tree, a path hash on
 * T_d). Lazy exploration order therefore never changes the configuration.
 */

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "rotor/distribution.hpp"
#include "rotor/rng.hpp"
#include "rotor/sequence.hpp"

namespace rotor {

/// Draws atom indices from exact rational weights, bias-free.
class AtomSampler {
public:
    explicit AtomSampler(const SupportDistribution& dist) {
        std::int64_t denom = 1;
        for (const auto& a : dist.atoms()) denom = lcm_checked(denom, a.weight.den());
        denom_ = static_cast<std::uint64_t>(denom);
        std::uint64_t cum = 0;
        for (const auto& a : dist.atoms()) {
            cum += static_cast<std::uint64_t>(a.weight.num() * (denom / a.weight.den()));
            cum_.push_back(cum);
        }
        // weights sum to exactly 1, so the last boundary is the denominator
        if (cum_.back() != denom_) throw std::logic_error("weight table does not close");
    }

    std::size_t index_for(std::uint64_t seed, std::uint64_t vertex_key) const {
        Rng rng(derive_stream(seed, vertex_key));
        std::uint64_t r = rng.below(denom_);
        for (std::size_t i = 0; i < cum_.size(); ++i) {
            if (r < cum_[i]) return i;
        }
        return cum_.size() - 1;
    }

private:
    std::uint64_t denom_;
    std::vector<std::uint64_t> cum_;
};

enum class AssignmentKind { homogeneous, cyclic, sampled };

class UnaryAssignment {
public:
    static UnaryAssignment homogeneous(RotorSequence s) {
        return UnaryAssignment(AssignmentKind::homogeneous, {std::move(s)}, std::nullopt, 0);
    }
    static UnaryAssignment cyclic(std::vector<RotorSequence> list) {
        if (list.empty()) throw std::invalid_argument("cyclic assignment needs at least one sequence");
        return UnaryAssignment(AssignmentKind::cyclic, std::move(list), std::nullopt, 0);
    }
    static UnaryAssignment sampled(SupportDistribution dist, std::uint64_t seed) {
        return UnaryAssignment(AssignmentKind::sampled, {}, std::move(dist), seed);
    }

    AssignmentKind kind() const { return kind_; }
    bool is_sampled() const { return kind_ == AssignmentKind::sampled; }
    std::uint64_t seed() const { return seed_; }
    const std::optional<SupportDistribution>& distribution() const { return dist_; }

    int degree() const {
        return dist_ ? dist_->degree() : list_.front().degree();
    }

    /// Length of the structural repetition pattern: 1 for homogeneous, the
    /// list length for cyclic, nullopt for sampled.
    std::optional<std::int64_t> cycle_length() const {
        if (kind_ == AssignmentKind::sampled) return std::nullopt;
        return static_cast<std::int64_t>(list_.size());
    }

    std::size_t atom_index_at(std::int64_t v) const {
        switch (kind_) {
            case AssignmentKind::homogeneous: return 0;
            case AssignmentKind::cyclic: return static_cast<std::size_t>(v % static_cast<std::int64_t>(list_.size()));
            case AssignmentKind::sampled: return sampler_->index_for(seed_, static_cast<std::uint64_t>(v) + 1);
        }
        return 0;
    }

    const RotorSequence& at(std::int64_t v) const {
        if (v < 0) throw std::out_of_range("vertex index must be non-negative");
        if (kind_ == AssignmentKind::sampled) return dist_->atom(atom_index_at(v)).sequence;
        return list_[atom_index_at(v)];
    }

    const std::vector<RotorSequence>& list() const { return list_; }

private:
    UnaryAssignment(AssignmentKind kind, std::vector<RotorSequence> list,
                    std::optional<SupportDistribution> dist, std::uint64_t seed)
        : kind_(kind), list_(std::move(list)), dist_(std::move(dist)), seed_(seed) {
        if (dist_) sampler_.emplace(*dist_);
    }

    AssignmentKind kind_;
    std::vector<RotorSequence> list_;
    std::optional<SupportDistribution> dist_;
    std::optional<AtomSampler> sampler_;
    std::uint64_t seed_ = 0;
};

/// Canonical vertex key on T_d: the root has a fixed key, a child key is a
/// scramble of the parent key and the child direction.
struct TreeVertexKey {
    std::uint64_t hash;
    std::int64_t depth;
};

inline TreeVertexKey tree_root_key() { return {0x6d8f3c2b5a1e4d71ULL, 0}; }

inline TreeVertexKey tree_child_key(const TreeVertexKey& parent, int direction) {
    std::uint64_t h = mix64(parent.hash ^ (0xa0761d6478bd642fULL * static_cast<std::uint64_t>(direction + 1)));
    return {h, parent.depth + 1};
}

class TreeAssignment {
public:
    static TreeAssignment homogeneous(RotorSequence s) {
        return TreeAssignment(AssignmentKind::homogeneous, {std::move(s)}, std::nullopt, 0);
    }
    /// Cycled by depth: every vertex at depth k uses list[k mod m].
    static TreeAssignment cyclic(std::vector<RotorSequence> list) {
        if (list.empty()) throw std::invalid_argument("cyclic assignment needs at least one sequence");
        return TreeAssignment(AssignmentKind::cyclic, std::move(list), std::nullopt, 0);
    }
    static TreeAssignment sampled(SupportDistribution dist, std::uint64_t seed) {
        return TreeAssignment(AssignmentKind::sampled, {}, std::move(dist), seed);
    }

    AssignmentKind kind() const { return kind_; }
    bool is_sampled() const { return kind_ == AssignmentKind::sampled; }
    std::uint64_t seed() const { return seed_; }
    const std::optional<SupportDistribution>& distribution() const { return dist_; }

    int degree() const { return dist_ ? dist_->degree() : list_.front().degree(); }

    std::size_t atom_index_at(const TreeVertexKey& v) const {
        switch (kind_) {
            case AssignmentKind::homogeneous: return 0;
            case AssignmentKind::cyclic: return static_cast<std::size_t>(v.depth % static_cast<std::int64_t>(list_.size()));
            case AssignmentKind::sampled: return sampler_->index_for(seed_, v.hash);
        }
        return 0;
    }

    const RotorSequence& at(const TreeVertexKey& v) const {
        if (kind_ == AssignmentKind::sampled) return dist_->atom(atom_index_at(v)).sequence;
        return list_[atom_index_at(v)];
    }

private:
    TreeAssignment(AssignmentKind kind, std::vector<RotorSequence> list,
                   std::optional<SupportDistribution> dist, std::uint64_t seed)
        : kind_(kind), list_(std::move(list)), dist_(std::move(dist)), seed_(seed) {
        if (dist_) sampler_.emplace(*dist_);
    }

    AssignmentKind kind_;
    std::vector<RotorSequence> list_;
    std::optional<SupportDistribution> dist_;
    std::optional<AtomSampler> sampler_;
    std::uint64_t seed_ = 0;
};

} // namespace rotor
