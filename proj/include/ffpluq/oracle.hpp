#pragma once

#include "ffpluq/pluq.hpp"

namespace ffpluq {

/// Slow references, deliberately independent of the optimized kernels: plain
/// u64 arithmetic, a reduction after every multiply-add, no counters.

inline Mat naive_gemm(const MatView& A, const MatView& B) {
    if (A.cols != B.rows) throw DimMismatch("naive_gemm: non-conforming shapes");
    const PrimeField& F = *A.field;
    const u64 p = F.p;
    Mat C(A.rows, B.cols, F);
    for (usize i = 0; i < A.rows; ++i)
        for (usize j = 0; j < B.cols; ++j) {
            u64 v = 0;
            for (usize t = 0; t < A.cols; ++t) v = (v + u64(A.at(i, t)) * B.at(t, j)) % p;
            C.at(i, j) = elem(v);
        }
    return C;
}

namespace detail {

inline usize gauss_rank(std::vector<std::vector<u64>> M, u64 p) {
    const usize m = M.size();
    if (m == 0) return 0;
    const usize n = M[0].size();
    usize r = 0;
    for (usize c = 0; c < n && r < m; ++c) {
        usize piv = m;
        for (usize i = r; i < m; ++i)
            if (M[i][c] % p != 0) {
                piv = i;
                break;
            }
        if (piv == m) continue;
        std::swap(M[r], M[piv]);
        // modular inverse by Fermat would need p prime; extended Euclid it is
        i64 t = 0, nt = 1, rr = i64(p), nr = i64(M[r][c] % p);
        while (nr != 0) {
            i64 q = rr / nr;
            i64 tmp = t - q * nt;
            t = nt;
            nt = tmp;
            tmp = rr - q * nr;
            rr = nr;
            nr = tmp;
        }
        if (t < 0) t += i64(p);
        const u64 inv = u64(t);
        for (usize i = r + 1; i < m; ++i) {
            const u64 f = (M[i][c] % p * inv) % p;
            if (!f) continue;
            for (usize j = c; j < n; ++j) {
                const u64 sub = (f * (M[r][j] % p)) % p;
                M[i][j] = (M[i][j] % p + p - sub) % p;
            }
        }
        ++r;
    }
    return r;
}

} // namespace detail

/// Definitional rank profiles: index i enters the row profile when the rank
/// of the leading i+1 rows grows, each rank from a fresh elimination of the
/// prefix. Cubic-times-linear; meant for n up to ~128.
inline RankProfiles naive_rank_profiles(const MatView& A) {
    const u64 p = A.field->p;
    RankProfiles out;
    std::vector<std::vector<u64>> rows;
    usize prev = 0;
    for (usize i = 0; i < A.rows; ++i) {
        rows.emplace_back(A.row(i), A.row(i) + A.cols);
        usize r = detail::gauss_rank(rows, p);
        if (r > prev) out.rows.push_back(u32(i));
        prev = r;
    }
    std::vector<std::vector<u64>> cols;
    prev = 0;
    for (usize j = 0; j < A.cols; ++j) {
        for (usize i = 0; i < A.rows; ++i) {
            if (j == 0) cols.emplace_back();
            cols[i].push_back(A.at(i, j));
        }
        usize r = detail::gauss_rank(cols, p);
        if (r > prev) out.cols.push_back(u32(j));
        prev = r;
    }
    out.rank = out.rows.size();
    return out;
}

/// Expand the packed factors of `res`, multiply with the naive product and
/// undo the recorded permutations; equality with the original input is the
/// defining check of a factorization.
inline Mat reconstruct(const MatView& packed, const PluqResult& res) {
    const PrimeField& F = *packed.field;
    const usize m = packed.rows, n = packed.cols, r = res.rank;
    Mat L(m, r, F), U(r, n, F);
    for (usize i = 0; i < m; ++i)
        for (usize j = 0; j < r; ++j) {
            if (j < i)
                L.at(i, j) = packed.at(i, j);
            else if (j == i)
                L.at(i, j) = 1;
        }
    for (usize i = 0; i < r; ++i)
        for (usize j = i; j < n; ++j) U.at(i, j) = packed.at(i, j);
    Mat prod = naive_gemm(L.view(), U.view());
    apply_perm(res.P, prod.view(), Axis::rows, Dir::inverse);
    apply_perm(res.Q, prod.view(), Axis::cols, Dir::inverse);
    return prod;
}

} // namespace ffpluq
