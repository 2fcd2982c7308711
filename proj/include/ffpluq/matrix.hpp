#pragma once

#include <cstring>
#include <vector>

#include "ffpluq/field.hpp"

namespace ffpluq {

/// Non-owning rectangular window into row-major storage. Tiles, slabs and
/// quadrants are all views; writes go straight through to the parent matrix.
/// Concurrent tasks must operate on views with disjoint index ranges.
struct MatView {
    elem* data = nullptr;
    usize rows = 0;
    usize cols = 0;
    usize stride = 0;
    const PrimeField* field = nullptr;

    bool empty() const { return rows == 0 || cols == 0; }

    elem* row(usize i) { return data + i * stride; }
    const elem* row(usize i) const { return data + i * stride; }

    elem& at(usize i, usize j) { return data[i * stride + j]; }
    elem at(usize i, usize j) const { return data[i * stride + j]; }

    MatView subview(usize r0, usize c0, usize h, usize w) const {
        MatView v;
        v.data = data + r0 * stride + c0;
        v.rows = h;
        v.cols = w;
        v.stride = stride;
        v.field = field;
        return v;
    }

    void fill(elem x) {
        for (usize i = 0; i < rows; ++i)
            for (usize j = 0; j < cols; ++j)
                row(i)[j] = x;
    }
};

inline bool equal(const MatView& a, const MatView& b) {
    if (a.rows != b.rows || a.cols != b.cols) return false;
    for (usize i = 0; i < a.rows; ++i)
        if (std::memcmp(a.row(i), b.row(i), a.cols * sizeof(elem)) != 0) return false;
    return true;
}

/// FNV-1a over dimensions, modulus and entries; the determinism checksum.
inline u64 checksum(const MatView& a) {
    u64 h = 14695981039346656037ull;
    auto mix = [&h](u64 x) {
        for (int s = 0; s < 64; s += 8) {
            h ^= (x >> s) & 0xff;
            h *= 1099511628211ull;
        }
    };
    mix(a.rows);
    mix(a.cols);
    mix(a.field ? a.field->p : 0);
    for (usize i = 0; i < a.rows; ++i)
        for (usize j = 0; j < a.cols; ++j)
            mix(a.row(i)[j]);
    return h;
}

/// Owning dense matrix of canonical residues.
class Mat {
public:
    Mat() = default;
    Mat(usize m, usize n, const PrimeField& f) : rows_(m), cols_(n), field_(f), data_(m * n, 0) {}

    usize rows() const { return rows_; }
    usize cols() const { return cols_; }
    const PrimeField& field() const { return field_; }

    elem* row(usize i) { return data_.data() + i * cols_; }
    const elem* row(usize i) const { return data_.data() + i * cols_; }
    elem& at(usize i, usize j) { return data_[i * cols_ + j]; }
    elem at(usize i, usize j) const { return data_[i * cols_ + j]; }

    MatView view() {
        MatView v;
        v.data = data_.data();
        v.rows = rows_;
        v.cols = cols_;
        v.stride = cols_;
        v.field = &field_;
        return v;
    }
    MatView view() const {
        MatView v;
        v.data = const_cast<elem*>(data_.data());
        v.rows = rows_;
        v.cols = cols_;
        v.stride = cols_;
        v.field = &field_;
        return v;
    }

    bool operator==(const Mat& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && field_.p == o.field_.p && data_ == o.data_;
    }

private:
    usize rows_ = 0;
    usize cols_ = 0;
    PrimeField field_;
    std::vector<elem> data_;
};

// ---------------------------------------------------------------------------
// Block splitting

enum class SplitMode { quadrants, row_slabs, col_slabs, tiles };

/// Partition a view into sub-views, mirroring the classic block layouts.
/// quadrants: A1 (ceil(m/2) x ceil(n/2)), A2, A3, A4 in row-major order.
/// row_slabs/col_slabs(k): ceil(dim/k) slabs of thickness k, ragged tail.
/// tiles(k): row-major grid of at most k x k tiles; k is clamped to the dims.
inline std::vector<MatView> split(const MatView& a, SplitMode mode, usize k = 0) {
    if (a.rows == 0 || a.cols == 0) throw EmptyMatrix();
    std::vector<MatView> out;
    switch (mode) {
    case SplitMode::quadrants: {
        const usize m1 = (a.rows + 1) / 2, n1 = (a.cols + 1) / 2;
        out.push_back(a.subview(0, 0, m1, n1));
        out.push_back(a.subview(0, n1, m1, a.cols - n1));
        out.push_back(a.subview(m1, 0, a.rows - m1, n1));
        out.push_back(a.subview(m1, n1, a.rows - m1, a.cols - n1));
        break;
    }
    case SplitMode::row_slabs: {
        if (k < 1) throw InvalidBlock("slab thickness must be >= 1");
        k = std::min(k, a.rows);
        for (usize r = 0; r < a.rows; r += k)
            out.push_back(a.subview(r, 0, std::min(k, a.rows - r), a.cols));
        break;
    }
    case SplitMode::col_slabs: {
        if (k < 1) throw InvalidBlock("slab thickness must be >= 1");
        k = std::min(k, a.cols);
        for (usize c = 0; c < a.cols; c += k)
            out.push_back(a.subview(0, c, a.rows, std::min(k, a.cols - c)));
        break;
    }
    case SplitMode::tiles: {
        if (k < 1) throw InvalidBlock("tile size must be >= 1");
        k = std::min(k, std::min(a.rows, a.cols));
        for (usize r = 0; r < a.rows; r += k)
            for (usize c = 0; c < a.cols; c += k)
                out.push_back(
                    a.subview(r, c, std::min(k, a.rows - r), std::min(k, a.cols - c)));
        break;
    }
    }
    return out;
}

/// Evenly sized ranges for splitting one dimension into `parts` pieces.
inline std::vector<std::pair<usize, usize>> split_ranges(usize len, usize parts) {
    std::vector<std::pair<usize, usize>> r;
    if (len == 0) return r;
    parts = std::max<usize>(1, std::min(parts, len));
    const usize base = len / parts, extra = len % parts;
    usize pos = 0;
    for (usize i = 0; i < parts; ++i) {
        usize w = base + (i < extra ? 1 : 0);
        r.emplace_back(pos, pos + w);
        pos += w;
    }
    return r;
}

} // namespace ffpluq
