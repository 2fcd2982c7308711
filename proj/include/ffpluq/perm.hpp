#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "ffpluq/matrix.hpp"

namespace ffpluq {

/// Elementary permutation moves. Rot(i,j) sends position j to position i and
/// shifts positions i..j-1 down by one; it preserves the relative order of
/// every other index, which is what keeps rank profiles recoverable.
struct PermMove {
    enum Type : u32 { Swap, Rot } type;
    u32 i;
    u32 j;
};

enum class Axis { rows, cols };
enum class Dir { forward, inverse };

/// A permutation as an ordered sequence of elementary moves, applied
/// left-to-right. Immutable once an algorithm has finished building it.
class PermSeq {
public:
    PermSeq() = default;
    explicit PermSeq(usize n) : size_(n) {}

    usize size() const { return size_; }
    bool is_identity() const { return moves_.empty(); }
    const std::vector<PermMove>& moves() const { return moves_; }

    void push_swap(usize i, usize j) {
        if (i != j) moves_.push_back({PermMove::Swap, u32(i), u32(j)});
    }
    void push_rot(usize i, usize j) {
        if (i != j) moves_.push_back({PermMove::Rot, u32(i), u32(j)});
    }

    /// The order-preserving block gather: positions [mid, mid+len) move in
    /// front of [first, mid), everything else keeps its relative order.
    /// Recorded as the equivalent Rot sequence.
    void push_rot_block(usize first, usize mid, usize len) {
        for (usize t = 0; t < len; ++t) push_rot(first + t, mid + t);
    }

    /// Append `inner` acting on index range [at, at+inner.size()).
    void append_embedded(const PermSeq& inner, usize at) {
        if (at + inner.size() > size_) throw DimMismatch("embedded permutation exceeds range");
        for (const auto& m : inner.moves_)
            moves_.push_back({m.type, u32(m.i + at), u32(m.j + at)});
    }

    void append(const PermSeq& other) {
        if (other.size_ != size_) throw DimMismatch("permutation size mismatch");
        moves_.insert(moves_.end(), other.moves_.begin(), other.moves_.end());
    }

    template <class T>
    void apply_to(std::vector<T>& v, Dir dir = Dir::forward) const {
        if (v.size() != size_) throw DimMismatch("array size does not match permutation");
        auto rot_fwd = [&v](usize i, usize j) {
            T tmp = std::move(v[j]);
            for (usize t = j; t > i; --t) v[t] = std::move(v[t - 1]);
            v[i] = std::move(tmp);
        };
        auto rot_inv = [&v](usize i, usize j) {
            T tmp = std::move(v[i]);
            for (usize t = i; t < j; ++t) v[t] = std::move(v[t + 1]);
            v[j] = std::move(tmp);
        };
        if (dir == Dir::forward) {
            for (const auto& m : moves_)
                if (m.type == PermMove::Swap)
                    std::swap(v[m.i], v[m.j]);
                else
                    rot_fwd(m.i, m.j);
        } else {
            for (auto it = moves_.rbegin(); it != moves_.rend(); ++it)
                if (it->type == PermMove::Swap)
                    std::swap(v[it->i], v[it->j]);
                else
                    rot_inv(it->i, it->j);
        }
    }

    /// The permutation as an index array: entry t = original index now living
    /// at position t.
    std::vector<u32> to_array() const {
        std::vector<u32> v(size_);
        std::iota(v.begin(), v.end(), 0);
        apply_to(v);
        return v;
    }

    /// Rebuild some move sequence realizing `arr` (selection into swaps);
    /// to_array() of the result reproduces `arr` exactly.
    static PermSeq from_array(const std::vector<u32>& arr) {
        PermSeq p(arr.size());
        std::vector<u32> v(arr.size()), pos(arr.size());
        std::iota(v.begin(), v.end(), 0);
        std::iota(pos.begin(), pos.end(), 0);
        for (u32 t = 0; t < v.size(); ++t) {
            u32 s = pos[arr[t]];
            if (s != t) {
                p.push_swap(t, s);
                std::swap(v[t], v[s]);
                pos[v[t]] = t;
                pos[v[s]] = s;
            }
        }
        return p;
    }

private:
    usize size_ = 0;
    std::vector<PermMove> moves_;
};

namespace detail {

inline void swap_rows(MatView a, usize i, usize j) {
    elem* ri = a.row(i);
    elem* rj = a.row(j);
    for (usize c = 0; c < a.cols; ++c) std::swap(ri[c], rj[c]);
}

inline void rot_rows_fwd(MatView a, usize i, usize j) {
    std::vector<elem> tmp(a.row(j), a.row(j) + a.cols);
    for (usize t = j; t > i; --t) std::memcpy(a.row(t), a.row(t - 1), a.cols * sizeof(elem));
    std::memcpy(a.row(i), tmp.data(), a.cols * sizeof(elem));
}

inline void rot_rows_inv(MatView a, usize i, usize j) {
    std::vector<elem> tmp(a.row(i), a.row(i) + a.cols);
    for (usize t = i; t < j; ++t) std::memcpy(a.row(t), a.row(t + 1), a.cols * sizeof(elem));
    std::memcpy(a.row(j), tmp.data(), a.cols * sizeof(elem));
}

inline void swap_cols(MatView a, usize i, usize j) {
    for (usize r = 0; r < a.rows; ++r) std::swap(a.row(r)[i], a.row(r)[j]);
}

inline void rot_cols_fwd(MatView a, usize i, usize j) {
    for (usize r = 0; r < a.rows; ++r) {
        elem* row = a.row(r);
        elem tmp = row[j];
        for (usize t = j; t > i; --t) row[t] = row[t - 1];
        row[i] = tmp;
    }
}

inline void rot_cols_inv(MatView a, usize i, usize j) {
    for (usize r = 0; r < a.rows; ++r) {
        elem* row = a.row(r);
        elem tmp = row[i];
        for (usize t = i; t < j; ++t) row[t] = row[t + 1];
        row[j] = tmp;
    }
}

} // namespace detail

/// Permute rows or columns of `a` in place. forward applies the recorded
/// moves in order; inverse undoes them, so forward-then-inverse restores `a`.
inline void apply_perm(const PermSeq& p, MatView a, Axis axis, Dir dir = Dir::forward) {
    const usize dim = (axis == Axis::rows) ? a.rows : a.cols;
    if (p.size() != dim) throw DimMismatch("permutation does not match matrix dimension");
    auto one = [&](const PermMove& m, bool fwd) {
        if (axis == Axis::rows) {
            if (m.type == PermMove::Swap)
                detail::swap_rows(a, m.i, m.j);
            else if (fwd)
                detail::rot_rows_fwd(a, m.i, m.j);
            else
                detail::rot_rows_inv(a, m.i, m.j);
        } else {
            if (m.type == PermMove::Swap)
                detail::swap_cols(a, m.i, m.j);
            else if (fwd)
                detail::rot_cols_fwd(a, m.i, m.j);
            else
                detail::rot_cols_inv(a, m.i, m.j);
        }
    };
    const auto& mv = p.moves();
    if (dir == Dir::forward) {
        for (const auto& m : mv) one(m, true);
    } else {
        for (auto it = mv.rbegin(); it != mv.rend(); ++it) one(*it, false);
    }
}

/// Gather rows [mid, mid+len) in front of rows [first, mid) in one pass;
/// identical outcome to the Rot sequence push_rot_block records.
inline void rotate_rows_block(MatView a, usize first, usize mid, usize len) {
    if (len == 0 || mid == first) return;
    const usize span = mid - first;
    std::vector<elem> tmp(span * a.cols);
    for (usize t = 0; t < span; ++t)
        std::memcpy(tmp.data() + t * a.cols, a.row(first + t), a.cols * sizeof(elem));
    for (usize t = 0; t < len; ++t)
        std::memcpy(a.row(first + t), a.row(mid + t), a.cols * sizeof(elem));
    for (usize t = 0; t < span; ++t)
        std::memcpy(a.row(first + len + t), tmp.data() + t * a.cols, a.cols * sizeof(elem));
}

inline void rotate_cols_block(MatView a, usize first, usize mid, usize len) {
    if (len == 0 || mid == first) return;
    for (usize r = 0; r < a.rows; ++r) {
        elem* row = a.row(r);
        std::rotate(row + first, row + mid, row + mid + len);
    }
}

/// The permutation acting as `outer` after `inner` embedded on the index
/// range [embed_at, embed_at + inner.size()); moves compose left-to-right.
inline PermSeq perm_compose(const PermSeq& outer, const PermSeq& inner, usize embed_at) {
    if (embed_at + inner.size() > outer.size())
        throw DimMismatch("perm_compose: embedded range exceeds outer size");
    PermSeq out(outer.size());
    out.append_embedded(inner, embed_at);
    out.append(outer);
    return out;
}

} // namespace ffpluq
