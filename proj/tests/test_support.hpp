#pragma once

// Shared test utilities: seeded random generators for sequences and
// distributions, and a small structural JSON-schema checker for the CLI
// output contracts.

#include <string>
#include <vector>

#include <json.hpp>

#include "rotor/distribution.hpp"
#include "rotor/rng.hpp"
#include "rotor/sequence.hpp"

namespace testsupport {

using rotor::Rat;
using rotor::Rng;
using rotor::RotorSequence;
using rotor::SupportDistribution;

using Word = std::vector<RotorSequence::Symbol>;

inline Word balanced_word(Rng& rng, std::int64_t L, int d) {
    Word w(static_cast<std::size_t>(L));
    const std::int64_t n = L / (d + 1);
    for (std::int64_t i = 0; i < L; ++i) w[static_cast<std::size_t>(i)] = static_cast<RotorSequence::Symbol>(i / n);
    for (std::int64_t i = L - 1; i > 0; --i) {
        std::swap(w[static_cast<std::size_t>(i)], w[static_cast<std::size_t>(rng.range(0, i))]);
    }
    return w;
}

inline RotorSequence random_balanced_sequence(Rng& rng, std::int64_t L, int d) {
    return RotorSequence(d, {}, balanced_word(rng, L, d));
}

/// Purely periodic, every symbol present in the period.
inline RotorSequence random_nondegenerate_sequence(Rng& rng, std::int64_t L, int d) {
    if (L < d + 1) throw std::invalid_argument("period too short to be non-degenerate");
    for (;;) {
        Word w(static_cast<std::size_t>(L));
        for (auto& s : w) s = static_cast<RotorSequence::Symbol>(rng.range(0, d));
        RotorSequence seq(d, {}, w);
        if (seq.non_degenerate()) return seq;
    }
}

/// Random exact weights: positive integers over their sum.
inline std::vector<Rat> random_weights(Rng& rng, std::size_t n) {
    std::vector<std::int64_t> nums(n);
    std::int64_t total = 0;
    for (auto& v : nums) {
        v = rng.range(1, 20);
        total += v;
    }
    std::vector<Rat> out;
    for (auto v : nums) out.emplace_back(v, total);
    return out;
}

inline SupportDistribution random_balanced_distribution(Rng& rng, std::int64_t L, int d, std::size_t atoms) {
    std::vector<SupportDistribution::Atom> list;
    auto weights = random_weights(rng, atoms);
    for (std::size_t i = 0; i < atoms; ++i) {
        list.push_back({random_balanced_sequence(rng, L, d), weights[i]});
    }
    // merging of duplicate atoms keeps the weight sum at 1
    return SupportDistribution(std::move(list));
}

// ---------------------------------------------------------------------------
// Minimal JSON schema checker: type / properties / required / items / enum /
// anyOf. Enough to pin the shipped output contracts.
// ---------------------------------------------------------------------------

inline bool schema_check(const nlohmann::json& schema, const nlohmann::json& value, std::string& error);

inline bool schema_type_ok(const std::string& type, const nlohmann::json& value) {
    if (type == "object") return value.is_object();
    if (type == "array") return value.is_array();
    if (type == "string") return value.is_string();
    if (type == "number") return value.is_number();
    if (type == "integer") return value.is_number_integer() || value.is_number_unsigned();
    if (type == "boolean") return value.is_boolean();
    if (type == "null") return value.is_null();
    return false;
}

inline bool schema_check(const nlohmann::json& schema, const nlohmann::json& value, std::string& error) {
    if (schema.contains("anyOf")) {
        for (const auto& sub : schema["anyOf"]) {
            std::string e;
            if (schema_check(sub, value, e)) return true;
        }
        error = "no anyOf branch matched at " + value.dump().substr(0, 80);
        return false;
    }
    if (schema.contains("type")) {
        const std::string type = schema["type"].get<std::string>();
        if (!schema_type_ok(type, value)) {
            error = "expected " + type + ", got " + value.dump().substr(0, 80);
            return false;
        }
    }
    if (schema.contains("enum")) {
        bool found = false;
        for (const auto& v : schema["enum"]) {
            if (v == value) found = true;
        }
        if (!found) {
            error = "value " + value.dump() + " not in enum";
            return false;
        }
    }
    if (schema.contains("required")) {
        for (const auto& key : schema["required"]) {
            if (!value.contains(key.get<std::string>())) {
                error = "missing required key " + key.get<std::string>();
                return false;
            }
        }
    }
    if (schema.contains("properties") && value.is_object()) {
        for (auto it = schema["properties"].begin(); it != schema["properties"].end(); ++it) {
            if (value.contains(it.key())) {
                if (!schema_check(it.value(), value[it.key()], error)) {
                    error = it.key() + ": " + error;
                    return false;
                }
            }
        }
    }
    if (schema.contains("items") && value.is_array()) {
        for (const auto& item : value) {
            if (!schema_check(schema["items"], item, error)) return false;
        }
    }
    return true;
}

} // namespace testsupport
