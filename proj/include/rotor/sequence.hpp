#pragma once

/**
 * @file sequence.hpp
 * @brief Eventually periodic rotor sequences over the alphabet {0,...,d}.
 *
 * A rotor sequence attached to a vertex of the d-ary tree is an infinite
 * word over {0,...,d}: symbol 0 points to the parent (at the root, to the
 * self-loop) and symbol i >= 1 to the i-th child. This library restricts
 * itself to eventually periodic sequences stored as (preperiod, period).
 *
 * Construction canonicalizes: the period is primitive (not a power of a
 * shorter word) and the preperiod is shortest possible, so value equality
 * is structural equality. Indexing is 1-based throughout, matching the
 * convention that the walk consumes rotor a(1) first.
 */

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rotor {

class RotorSequence {
public:
    using Symbol = std::uint8_t;

    RotorSequence(int degree, std::vector<Symbol> preperiod, std::vector<Symbol> period)
        : degree_(degree), pre_(std::move(preperiod)), per_(std::move(period)) {
        if (degree_ < 1) throw std::invalid_argument("degree must be >= 1");
        if (per_.empty()) throw std::invalid_argument("period must be nonempty");
        auto check = [&](const std::vector<Symbol>& w) {
            for (Symbol s : w) {
                if (s > degree_) throw std::invalid_argument("symbol out of range 0.." + std::to_string(degree_));
            }
        };
        check(pre_);
        check(per_);
        canonicalize();
    }

    /// Parses the grammar  SEQ := PRE? '(' PERIOD ')'  over digit symbols
    /// 0..d (d <= 9). For d = 1 the aliases '-' for 0 and '+' for 1 are
    /// accepted.
    static RotorSequence parse(std::string_view text, int degree) {
        if (degree < 1) throw std::invalid_argument("degree must be >= 1");
        if (degree > 9) throw std::invalid_argument("text grammar supports degree <= 9 only");
        auto open = text.find('(');
        auto close = text.rfind(')');
        if (open == std::string_view::npos || close == std::string_view::npos ||
            close != text.size() - 1 || close < open) {
            throw std::invalid_argument("malformed sequence text: expected PRE?(PERIOD)");
        }
        auto decode = [&](std::string_view w) {
            std::vector<Symbol> out;
            out.reserve(w.size());
            for (char c : w) {
                int v;
                if (c == '-' && degree == 1) v = 0;
                else if (c == '+' && degree == 1) v = 1;
                else if (c >= '0' && c <= '9') v = c - '0';
                else throw std::invalid_argument(std::string("invalid symbol '") + c + "'");
                if (v > degree) throw std::invalid_argument(std::string("symbol '") + c + "' out of range 0.." + std::to_string(degree));
                out.push_back(static_cast<Symbol>(v));
            }
            return out;
        };
        std::vector<Symbol> pre = decode(text.substr(0, open));
        std::vector<Symbol> per = decode(text.substr(open + 1, close - open - 1));
        if (per.empty()) throw std::invalid_argument("empty period");
        return RotorSequence(degree, std::move(pre), std::move(per));
    }

    int degree() const { return degree_; }
    const std::vector<Symbol>& preperiod() const { return pre_; }
    const std::vector<Symbol>& period() const { return per_; }
    std::int64_t preperiod_length() const { return static_cast<std::int64_t>(pre_.size()); }
    std::int64_t period_length() const { return static_cast<std::int64_t>(per_.size()); }
    bool purely_periodic() const { return pre_.empty(); }

    /// 1-based symbol access: at(1) is the first rotor consumed.
    int at(std::int64_t x) const {
        if (x < 1) throw std::out_of_range("sequence index is 1-based");
        std::int64_t i = x - 1;
        if (i < preperiod_length()) return pre_[static_cast<std::size_t>(i)];
        return per_[static_cast<std::size_t>((i - preperiod_length()) % period_length())];
    }

    /// Count of a symbol inside one period.
    std::int64_t period_count(int symbol) const {
        return std::count(per_.begin(), per_.end(), static_cast<Symbol>(symbol));
    }

    bool non_degenerate() const {
        for (int s = 0; s <= degree_; ++s) {
            if (period_count(s) == 0) return false;
        }
        return true;
    }

    /// Purely periodic with every symbol appearing exactly L/(d+1) times per
    /// period.
    bool balanced() const {
        if (!pre_.empty()) return false;
        const std::int64_t L = period_length();
        if (L % (degree_ + 1) != 0) return false;
        const std::int64_t n = L / (degree_ + 1);
        for (int s = 0; s <= degree_; ++s) {
            if (period_count(s) != n) return false;
        }
        return true;
    }

    /// N = L/(d+1) for a balanced sequence.
    std::int64_t balance_parameter() const {
        if (!balanced()) throw std::domain_error("balance parameter of an unbalanced sequence");
        return period_length() / (degree_ + 1);
    }

    /// Pointwise application of the rotation n -> n+i mod (d+1).
    RotorSequence rotated(int i) const {
        if (i < 0 || i > degree_) throw std::out_of_range("rotation index out of 0..d");
        auto map = [&](std::vector<Symbol> w) {
            for (Symbol& s : w) s = static_cast<Symbol>((s + i) % (degree_ + 1));
            return w;
        };
        return RotorSequence(degree_, map(pre_), map(per_));
    }

    /// Drops the first i symbols. Eventually periodic is closed under shift.
    RotorSequence shifted(std::int64_t i) const {
        if (i < 0) throw std::out_of_range("shift must be non-negative");
        if (i == 0) return *this;
        if (i <= preperiod_length()) {
            std::vector<Symbol> pre(pre_.begin() + static_cast<std::ptrdiff_t>(i), pre_.end());
            return RotorSequence(degree_, std::move(pre), per_);
        }
        std::int64_t k = (i - preperiod_length()) % period_length();
        std::vector<Symbol> per(per_.begin() + static_cast<std::ptrdiff_t>(k), per_.end());
        per.insert(per.end(), per_.begin(), per_.begin() + static_cast<std::ptrdiff_t>(k));
        return RotorSequence(degree_, {}, std::move(per));
    }

    /// Canonical text form; round-trips through parse. With unary_signs (and
    /// d = 1) the symbols are written as '-'/'+'.
    std::string format(bool unary_signs = false) const {
        const bool signs = unary_signs && degree_ == 1;
        auto encode = [&](const std::vector<Symbol>& w, std::string& out) {
            for (Symbol s : w) {
                if (signs) out += (s == 0 ? '-' : '+');
                else out += static_cast<char>('0' + s);
            }
        };
        std::string out;
        encode(pre_, out);
        out += '(';
        encode(per_, out);
        out += ')';
        return out;
    }

    bool operator==(const RotorSequence&) const = default;

    /// Ordering for deterministic sweep reports: by degree, period length,
    /// then lexicographic content.
    friend bool operator<(const RotorSequence& a, const RotorSequence& b) {
        if (a.degree_ != b.degree_) return a.degree_ < b.degree_;
        if (a.per_.size() != b.per_.size()) return a.per_.size() < b.per_.size();
        if (a.per_ != b.per_) return a.per_ < b.per_;
        return a.pre_ < b.pre_;
    }

private:
    void canonicalize() {
        // primitive period: keep the shortest word whose power spells the period
        const std::size_t L = per_.size();
        for (std::size_t len = 1; len <= L / 2; ++len) {
            if (L % len != 0) continue;
            bool ok = true;
            for (std::size_t i = len; i < L && ok; ++i) {
                if (per_[i] != per_[i - len]) ok = false;
            }
            if (ok) {
                per_.resize(len);
                break;
            }
        }
        // shortest preperiod: absorb a matching tail symbol by rotating the
        // period right (the spelled-out infinite word is unchanged)
        while (!pre_.empty() && pre_.back() == per_.back()) {
            pre_.pop_back();
            std::rotate(per_.rbegin(), per_.rbegin() + 1, per_.rend());
        }
    }

    int degree_;
    std::vector<Symbol> pre_;
    std::vector<Symbol> per_;
};

/// Position of the x-th occurrence of symbol 0 (1-based position), by direct
/// scan. T(0) = 0.
inline std::int64_t t_value(const RotorSequence& s, std::int64_t x) {
    if (x < 0) throw std::domain_error("t_value at negative x");
    if (!s.non_degenerate()) throw std::domain_error("t_value of a degenerate sequence");
    if (x == 0) return 0;
    std::int64_t zeros = 0;
    for (std::int64_t pos = 1;; ++pos) {
        if (s.at(pos) == 0) {
            if (++zeros == x) return pos;
        }
    }
}

/// Number of occurrences of symbol i strictly before the x-th occurrence of
/// symbol 0. This direct scan is the defining semantics; every closed form
/// in the library must agree with it.
inline std::int64_t u_value(const RotorSequence& s, int i, std::int64_t x) {
    if (i < 1 || i > s.degree()) throw std::out_of_range("direction index out of 1..d");
    if (x < 0) throw std::domain_error("u_value at negative x");
    if (!s.non_degenerate()) throw std::domain_error("u_value of a degenerate sequence");
    if (x == 0) return 0;
    std::int64_t zeros = 0;
    std::int64_t count = 0;
    for (std::int64_t pos = 1;; ++pos) {
        int sym = s.at(pos);
        if (sym == 0) {
            if (++zeros == x) return count;
        } else if (sym == i) {
            ++count;
        }
    }
}

} // namespace rotor
