#pragma once

/**
 * @file utable.hpp
 * @brief Closed-form evaluation of the vector U-function.
 *
 * U^(i)(x) counts occurrences of direction i strictly before the x-th
 * occurrence of direction 0. For an eventually periodic sequence the values
 * decompose into a tabulated prefix part plus a per-period linear part:
 * with z zeros and c_i copies of symbol i per period,
 *
 *     U^(i)(alpha*z + beta) = alpha*c_i + base[beta][i]   (pure tail,
 *                                                          1 <= beta <= z)
 *
 * which for a balanced sequence (z = c_i = N) reduces to the familiar
 * U(alpha*N + beta) = alpha*N + U(beta). Evaluation through the table is
 * exact and O(1); u_value() by direct scan is the semantic ground truth the
 * table is tested against.
 */

#include <cstdint>
#include <vector>

#include "rotor/rational.hpp"
#include "rotor/sequence.hpp"

namespace rotor {

class UTable {
public:
    static UTable build(const RotorSequence& s) {
        if (!s.non_degenerate()) throw std::domain_error("u_table of a degenerate sequence");
        UTable t;
        t.degree_ = s.degree();
        const int d = t.degree_;
        const auto& per = s.period();
        const auto& pre = s.preperiod();

        t.counts_per_period_.assign(d, 0);
        std::vector<std::int64_t> running(static_cast<std::size_t>(d), 0);
        for (std::size_t pos = 0; pos < per.size(); ++pos) {
            int sym = per[pos];
            if (sym == 0) {
                t.base_.push_back(running);
                t.tail_zero_pos_.push_back(static_cast<std::int64_t>(pos) + 1);
            } else {
                ++running[static_cast<std::size_t>(sym - 1)];
            }
        }
        t.counts_per_period_ = running;
        t.zeros_per_period_ = static_cast<std::int64_t>(t.base_.size());

        t.pre_counts_.assign(static_cast<std::size_t>(d), 0);
        for (std::size_t pos = 0; pos < pre.size(); ++pos) {
            int sym = pre[pos];
            if (sym == 0) {
                t.pre_table_.push_back(t.pre_counts_);
                t.pre_zero_pos_.push_back(static_cast<std::int64_t>(pos) + 1);
            } else {
                ++t.pre_counts_[static_cast<std::size_t>(sym - 1)];
            }
        }
        t.pre_zeros_ = static_cast<std::int64_t>(t.pre_table_.size());
        t.pre_len_ = static_cast<std::int64_t>(pre.size());
        t.period_len_ = static_cast<std::int64_t>(per.size());
        return t;
    }

    int degree() const { return degree_; }
    std::int64_t zeros_per_period() const { return zeros_per_period_; }
    std::int64_t count_per_period(int i) const { return counts_per_period_.at(static_cast<std::size_t>(i - 1)); }
    std::int64_t period_length() const { return period_len_; }

    /// Base value U^(i)(beta) of the pure periodic tail, 1 <= beta <= z.
    std::int64_t base(int i, std::int64_t beta) const {
        return base_.at(static_cast<std::size_t>(beta - 1)).at(static_cast<std::size_t>(i - 1));
    }

    std::int64_t u(int i, std::int64_t x) const {
        if (i < 1 || i > degree_) throw std::out_of_range("direction index out of 1..d");
        if (x < 0) throw std::domain_error("u at negative x");
        if (x == 0) return 0;
        if (x <= pre_zeros_) return pre_table_[static_cast<std::size_t>(x - 1)][static_cast<std::size_t>(i - 1)];
        const std::int64_t xp = x - pre_zeros_;
        const std::int64_t alpha = (xp - 1) / zeros_per_period_;
        const std::int64_t beta = xp - alpha * zeros_per_period_;
        int128 v = int128(alpha) * counts_per_period_[static_cast<std::size_t>(i - 1)] +
                   base_[static_cast<std::size_t>(beta - 1)][static_cast<std::size_t>(i - 1)] +
                   pre_counts_[static_cast<std::size_t>(i - 1)];
        return detail::narrow128(v, "u_table");
    }

    /// 128-bit evaluation for processes whose values outgrow 64 bits (the
    /// Z-process under heavily unbalanced supports). Throws on overflow
    /// beyond 128 bits.
    int128 u128(int i, int128 x) const {
        if (i < 1 || i > degree_) throw std::out_of_range("direction index out of 1..d");
        if (x < 0) throw std::domain_error("u at negative x");
        if (x == 0) return 0;
        if (x <= pre_zeros_) return pre_table_[static_cast<std::size_t>(x - 1)][static_cast<std::size_t>(i - 1)];
        const int128 xp = x - pre_zeros_;
        const int128 alpha = (xp - 1) / zeros_per_period_;
        const int128 beta = xp - alpha * zeros_per_period_;
        int128 prod;
        if (__builtin_mul_overflow(alpha, int128(counts_per_period_[static_cast<std::size_t>(i - 1)]), &prod)) {
            throw std::overflow_error("u128 value exceeds 128 bits");
        }
        int128 v;
        if (__builtin_add_overflow(prod,
                                   int128(base_[static_cast<std::size_t>(beta - 1)][static_cast<std::size_t>(i - 1)] +
                                          pre_counts_[static_cast<std::size_t>(i - 1)]),
                                   &v)) {
            throw std::overflow_error("u128 value exceeds 128 bits");
        }
        return v;
    }

    std::vector<std::int64_t> u_vec(std::int64_t x) const {
        std::vector<std::int64_t> out(static_cast<std::size_t>(degree_));
        for (int i = 1; i <= degree_; ++i) out[static_cast<std::size_t>(i - 1)] = u(i, x);
        return out;
    }

    /// Position of the x-th zero; equals x + sum_i U^(i)(x).
    std::int64_t t(std::int64_t x) const {
        if (x < 0) throw std::domain_error("t at negative x");
        if (x == 0) return 0;
        if (x <= pre_zeros_) return pre_zero_pos_[static_cast<std::size_t>(x - 1)];
        const std::int64_t xp = x - pre_zeros_;
        const std::int64_t alpha = (xp - 1) / zeros_per_period_;
        const std::int64_t beta = xp - alpha * zeros_per_period_;
        int128 v = int128(pre_len_) + int128(alpha) * period_len_ +
                   tail_zero_pos_[static_cast<std::size_t>(beta - 1)];
        return detail::narrow128(v, "t_table");
    }

private:
    int degree_ = 0;
    std::int64_t pre_len_ = 0;
    std::int64_t period_len_ = 0;
    std::int64_t pre_zeros_ = 0;
    std::int64_t zeros_per_period_ = 0;
    std::vector<std::int64_t> pre_counts_;
    std::vector<std::int64_t> counts_per_period_;
    std::vector<std::vector<std::int64_t>> pre_table_;
    std::vector<std::vector<std::int64_t>> base_;
    std::vector<std::int64_t> pre_zero_pos_;
    std::vector<std::int64_t> tail_zero_pos_;
};

/// Closed-form U-table for a purely periodic non-degenerate sequence.
/// (Eventually periodic sequences are handled too; the preperiod part is
/// tabulated explicitly.)
inline UTable u_table(const RotorSequence& s) { return UTable::build(s); }

} // namespace rotor
