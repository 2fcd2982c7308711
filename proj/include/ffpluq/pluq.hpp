#pragma once

#include "ffpluq/blas.hpp"

namespace ffpluq {

/// Outcome of an in-place factorization. The input matrix holds the packed
/// factors: L unit-lower within the first `rank` pivot columns, U upper
/// within the first `rank` pivot rows, both in the permuted positions. P and
/// Q record the row/column moves the algorithm applied; replaying them on an
/// index array recovers where each original index ended up.
struct PluqResult {
    PermSeq P;
    PermSeq Q;
    usize rank = 0;
    /// true when P and Q consist of order-preserving rotations only, the
    /// contract that makes rank profiles recoverable.
    bool rank_revealing = false;
};

/// Sorted original indices of the pivot rows/columns.
struct RankProfiles {
    std::vector<u32> rows;
    std::vector<u32> cols;
    usize rank = 0;

    bool operator==(const RankProfiles& o) const {
        return rank == o.rank && rows == o.rows && cols == o.cols;
    }
};

/// Row and column rank profiles of a rotation-pivoted factorization.
inline RankProfiles extract_profiles(const PluqResult& res) {
    if (!res.rank_revealing) throw NotRankRevealing();
    RankProfiles out;
    out.rank = res.rank;
    auto rows = res.P.to_array();
    auto cols = res.Q.to_array();
    out.rows.assign(rows.begin(), rows.begin() + res.rank);
    out.cols.assign(cols.begin(), cols.begin() + res.rank);
    std::sort(out.rows.begin(), out.rows.end());
    std::sort(out.cols.begin(), out.cols.end());
    return out;
}

namespace detail {

/// Delayed signed dot accumulator with capacity flushes. A flush is an
/// ordinary counted fold; the closing fold is the caller's call.
class FoldAcc {
public:
    FoldAcc(const PrimeField& F, elem seed) : F_(F), acc_(i64(seed)) {
        budget_ = F.n_star_seeded < 1 ? 1 : F.n_star_seeded;
    }

    void sub_product(elem a, elem b) {
        acc_ -= i64(u64(a) * b);
        touched_ = true;
        if (++terms_ == budget_) {
            acc_ = i64(F_.residue(acc_));
            count_reduction();
            terms_ = 0;
        }
    }

    /// Whether any term entered the accumulation (zero or not).
    bool touched() const { return touched_; }
    i64 raw() const { return acc_; }

    /// Canonical value; counted iff the accumulation is nonempty.
    elem fold_counted() const {
        if (!touched_) return elem(acc_);
        return F_.reduce(acc_);
    }

    /// Canonical value with no counter traffic (divisor preparation).
    elem fold_free() const { return F_.residue(acc_); }

private:
    const PrimeField& F_;
    i64 acc_;
    u64 terms_ = 0;
    u64 budget_;
    bool touched_ = false;
};

} // namespace detail

} // namespace ffpluq
