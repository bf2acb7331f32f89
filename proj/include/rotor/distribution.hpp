#pragma once

/**
 * @file distribution.hpp
 * @brief Finitely supported distributions over rotor sequences.
 *
 * Atoms carry exact rational weights that must be strictly positive and sum
 * to 1; all atoms share one degree and each atom is non-degenerate. The two
 * named i.i.d. models are provided as factories: the rotation model (all
 * d+1 rotations of one sequence, uniformly) and the shift model (all L
 * shifts of a purely periodic sequence, uniformly).
 */

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "rotor/rational.hpp"
#include "rotor/sequence.hpp"

namespace rotor {

class SupportDistribution {
public:
    struct Atom {
        RotorSequence sequence;
        Rat weight;
        bool operator==(const Atom&) const = default;
    };

    SupportDistribution(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
        if (atoms_.empty()) throw std::invalid_argument("distribution needs at least one atom");
        degree_ = atoms_.front().sequence.degree();
        Rat total(0);
        for (const Atom& a : atoms_) {
            if (a.sequence.degree() != degree_) throw std::invalid_argument("atoms of mixed degree");
            if (!a.sequence.non_degenerate()) {
                throw std::invalid_argument("degenerate atom " + a.sequence.format());
            }
            if (!(a.weight > Rat(0))) throw std::invalid_argument("atom weight must be positive");
            total += a.weight;
        }
        if (!(total == Rat(1))) {
            throw std::invalid_argument("atom weights sum to " + total.to_string() + ", expected 1");
        }
        merge_duplicates();
    }

    /// Uniform distribution on the d+1 rotations of s.
    static SupportDistribution rotation_model(const RotorSequence& s) {
        const int d = s.degree();
        std::vector<Atom> atoms;
        for (int i = 0; i <= d; ++i) atoms.push_back({s.rotated(i), Rat(1, d + 1)});
        return SupportDistribution(std::move(atoms));
    }

    /// Uniform distribution on the L shifts of a purely periodic s (L = the
    /// primitive period; all shifts of a primitive word are distinct).
    static SupportDistribution shift_model(const RotorSequence& s) {
        if (!s.purely_periodic()) {
            throw std::invalid_argument("shift model requires a purely periodic sequence");
        }
        const std::int64_t L = s.period_length();
        std::vector<Atom> atoms;
        for (std::int64_t i = 0; i < L; ++i) atoms.push_back({s.shifted(i), Rat(1, L)});
        return SupportDistribution(std::move(atoms));
    }

    /// Parses  DIST := ITEM (';' ITEM)*  with  ITEM := SEQ '=' RATIONAL.
    static SupportDistribution parse(std::string_view text, int degree) {
        std::vector<Atom> atoms;
        std::size_t start = 0;
        while (start <= text.size()) {
            std::size_t end = text.find(';', start);
            std::string_view item = text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
            auto eq = item.rfind('=');
            if (eq == std::string_view::npos) throw std::invalid_argument("distribution item without '='");
            atoms.push_back({RotorSequence::parse(item.substr(0, eq), degree), Rat::parse(item.substr(eq + 1))});
            if (end == std::string_view::npos) break;
            start = end + 1;
        }
        return SupportDistribution(std::move(atoms));
    }

    std::string format(bool unary_signs = false) const {
        std::string out;
        for (std::size_t i = 0; i < atoms_.size(); ++i) {
            if (i) out += ';';
            out += atoms_[i].sequence.format(unary_signs);
            out += '=';
            out += atoms_[i].weight.to_string();
        }
        return out;
    }

    int degree() const { return degree_; }
    std::size_t size() const { return atoms_.size(); }
    const Atom& atom(std::size_t i) const { return atoms_.at(i); }
    const std::vector<Atom>& atoms() const { return atoms_; }

    bool all_purely_periodic() const {
        for (const Atom& a : atoms_) {
            if (!a.sequence.purely_periodic()) return false;
        }
        return true;
    }

    bool all_balanced() const {
        for (const Atom& a : atoms_) {
            if (!a.sequence.balanced()) return false;
        }
        return true;
    }

    /// Least common period of all (purely periodic) atoms.
    std::int64_t common_period() const {
        std::int64_t L = 1;
        for (const Atom& a : atoms_) {
            if (!a.sequence.purely_periodic()) {
                throw std::domain_error("common period of a non purely periodic atom");
            }
            L = lcm_checked(L, a.sequence.period_length());
        }
        return L;
    }

    bool operator==(const SupportDistribution&) const = default;

private:
    void merge_duplicates() {
        std::vector<Atom> merged;
        for (Atom& a : atoms_) {
            bool found = false;
            for (Atom& m : merged) {
                if (m.sequence == a.sequence) {
                    m.weight += a.weight;
                    found = true;
                    break;
                }
            }
            if (!found) merged.push_back(std::move(a));
        }
        atoms_ = std::move(merged);
    }

    int degree_;
    std::vector<Atom> atoms_;
};

} // namespace rotor
