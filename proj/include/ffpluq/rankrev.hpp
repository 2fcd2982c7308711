#pragma once

#include "ffpluq/pluq.hpp"

namespace ffpluq {

enum class RRKind {
    base_crout,
    slab_recursive,
    tile_recursive,
    slab_iterative,
    tile_iterative
};

struct RRVariant {
    RRKind kind = RRKind::tile_recursive;
    usize k = 8;         // block size of the iterative kinds
    usize threshold = 8; // recursion cutoff of the recursive kinds
};

/// Rank-revealing base case with rotation pivoting. Pivots are searched in a
/// row-major fashion, the next row is considered only when a row has no
/// nonzero entry left after elimination; the pivot found at position (i, j)
/// is brought to (r, r) by rotating rows r..i and columns r..j, so the
/// relative order of non-pivot rows and columns is preserved and the sorted
/// original pivot indices are exactly the rank profiles. Elimination is
/// Crout-lazy: entries are materialized on first use, exhausted rows are
/// stored as their eliminated zeros.
inline PluqResult rr_base(MatView a) {
    const PrimeField& F = *a.field;
    const usize m = a.rows, n = a.cols;
    PluqResult res;
    res.P = PermSeq(m);
    res.Q = PermSeq(n);
    res.rank_revealing = true;
    if (m == 0 || n == 0) return res;
    KernelScope ks(Kernel::pluq_base);
    usize r = 0;
    usize row = 0;
    while (row < m && r < n) {
        usize pivcol = n;
        elem pivval = 0;
        for (usize j = r; j < n; ++j) {
            detail::FoldAcc acc(F, a.at(row, j));
            for (usize t = 0; t < r; ++t) acc.sub_product(a.at(row, t), a.at(t, j));
            elem v = acc.fold_counted();
            a.at(row, j) = v;
            if (v != 0) {
                pivcol = j;
                pivval = v;
                break;
            }
        }
        if (pivcol == n) {
            ++row; // exhausted row, eliminated zeros are stored
            continue;
        }
        res.P.push_rot(r, row);
        if (row != r) detail::rot_rows_fwd(a, r, row);
        res.Q.push_rot(r, pivcol);
        if (pivcol != r) detail::rot_cols_fwd(a, r, pivcol);
        const elem ipiv = F.inv_uncounted(pivval);
        for (usize j = pivcol + 1; j < n; ++j) {
            detail::FoldAcc acc(F, a.at(r, j));
            for (usize t = 0; t < r; ++t) acc.sub_product(a.at(r, t), a.at(t, j));
            a.at(r, j) = acc.fold_counted();
        }
        for (usize i = row + 1; i < m; ++i) {
            detail::FoldAcc acc(F, a.at(i, r));
            for (usize t = 0; t < r; ++t) acc.sub_product(a.at(i, t), a.at(t, r));
            a.at(i, r) = F.mul(acc.fold_counted(), ipiv);
        }
        ++r;
        ++row;
    }
    res.rank = r;
    return res;
}

namespace detail {

/// Four-quadrant recursion. When the top-left quadrant is rank deficient the
/// eliminations of the bottom-left and top-right quadrants run in parallel;
/// all updates go through the parallel product and solve kernels.
inline PluqResult tile_rec(MatView a, usize thr, const GemmPolicy& pol) {
    const usize m = a.rows, n = a.cols;
    PluqResult res;
    res.P = PermSeq(m);
    res.Q = PermSeq(n);
    res.rank_revealing = true;
    if (m == 0 || n == 0) return res;
    if (std::min(m, n) <= thr) return rr_base(a);
    const PrimeField& F = *a.field;
    const elem neg1 = elem(F.p - 1);
    const usize m1 = (m + 1) / 2, n1 = (n + 1) / 2;

    PluqResult res1 = tile_rec(a.subview(0, 0, m1, n1), thr, pol);
    const usize r1 = res1.rank;
    apply_perm(res1.P, a.subview(0, n1, m1, n - n1), Axis::rows);
    apply_perm(res1.Q, a.subview(m1, 0, m - m1, n1), Axis::cols);

    MatView L1 = a.subview(0, 0, r1, r1);
    MatView V1 = a.subview(0, r1, r1, n1 - r1);
    MatView M1 = a.subview(r1, 0, m1 - r1, r1);
    MatView D = a.subview(0, n1, r1, n - n1);
    MatView E = a.subview(r1, n1, m1 - r1, n - n1);
    MatView Fb = a.subview(m1, 0, m - m1, r1);
    MatView G = a.subview(m1, r1, m - m1, n1 - r1);
    MatView H = a.subview(m1, n1, m - m1, n - n1);

    if (r1 > 0) {
        if (!D.empty()) pftrsm(Side::left, UpLo::lower, Diag::unit, L1, D);
        if (!E.empty()) pfgemm(neg1, M1, D, 1, E, pol);
        if (!Fb.empty()) pftrsm(Side::right, UpLo::upper, Diag::nonunit, L1, Fb);
        if (!G.empty() && !V1.empty()) pfgemm(neg1, Fb, V1, 1, G, pol);
        if (!H.empty()) pfgemm(neg1, Fb, D, 1, H, pol);
    }

    PluqResult res2, res3;
    {
        TaskGroup g;
        g.spawn([&] { res2 = tile_rec(E, thr, pol); });
        g.spawn([&] { res3 = tile_rec(G, thr, pol); });
        g.wait();
    }
    const usize r2 = res2.rank, r3 = res3.rank;

    apply_perm(res2.P, a.subview(r1, 0, m1 - r1, r1), Axis::rows);
    apply_perm(res2.Q, a.subview(0, n1, r1, n - n1), Axis::cols);
    apply_perm(res2.Q, a.subview(m1, n1, m - m1, n - n1), Axis::cols);
    apply_perm(res3.P, a.subview(m1, 0, m - m1, r1), Axis::rows);
    apply_perm(res3.P, a.subview(m1, n1, m - m1, n - n1), Axis::rows);
    apply_perm(res3.Q, a.subview(0, r1, r1, n1 - r1), Axis::cols);

    MatView U2 = a.subview(r1, n1, r2, r2);
    MatView V2 = a.subview(r1, n1 + r2, r2, n - n1 - r2);
    MatView L3 = a.subview(m1, r1, r3, r3);
    MatView M3 = a.subview(m1 + r3, r1, m - m1 - r3, r3);
    MatView I = a.subview(m1, n1, r3, r2);
    MatView K = a.subview(m1 + r3, n1, m - m1 - r3, r2);
    MatView N = a.subview(m1, n1 + r2, r3, n - n1 - r2);
    MatView R = a.subview(m1 + r3, n1 + r2, m - m1 - r3, n - n1 - r2);

    if (r2 > 0 && !I.empty()) pftrsm(Side::right, UpLo::upper, Diag::nonunit, U2, I);
    if (r2 > 0 && !K.empty()) pftrsm(Side::right, UpLo::upper, Diag::nonunit, U2, K);
    if (r3 > 0 && !I.empty()) pftrsm(Side::left, UpLo::lower, Diag::unit, L3, I); // J
    if (r3 > 0 && !N.empty()) pftrsm(Side::left, UpLo::lower, Diag::unit, L3, N);
    if (!N.empty() && !I.empty()) pfgemm(neg1, I, V2, 1, N, pol); // O = N - J*V2
    if (!R.empty()) {
        if (!K.empty() && !V2.empty()) pfgemm(neg1, K, V2, 1, R, pol);
        if (!N.empty()) pfgemm(neg1, M3, N, 1, R, pol); // R -= M3*O
    }

    PluqResult res4 = tile_rec(R, thr, pol);
    const usize r4 = res4.rank;
    apply_perm(res4.P, a.subview(m1 + r3, 0, m - m1 - r3, r1 + r3), Axis::rows);
    if (r2 > 0)
        apply_perm(res4.P, a.subview(m1 + r3, n1, m - m1 - r3, r2), Axis::rows);
    apply_perm(res4.Q, a.subview(0, n1 + r2, r1, n - n1 - r2), Axis::cols);
    if (r2 > 0) apply_perm(res4.Q, a.subview(r1, n1 + r2, r2, n - n1 - r2), Axis::cols);
    if (r3 > 0) apply_perm(res4.Q, a.subview(m1, n1 + r2, r3, n - n1 - r2), Axis::cols);

    res.P.append_embedded(res1.P, 0);
    res.P.append_embedded(res2.P, r1);
    res.P.append_embedded(res3.P, m1);
    res.P.append_embedded(res4.P, m1 + r3);
    res.Q.append_embedded(res1.Q, 0);
    res.Q.append_embedded(res3.Q, r1);
    res.Q.append_embedded(res2.Q, n1);
    res.Q.append_embedded(res4.Q, n1 + r2);

    // gather pivots to the leading positions, preserving non-pivot order:
    // rows and columns end up grouped (A1, E, G, R)
    res.P.push_rot_block(r1 + r2, m1, r3 + r4);
    rotate_rows_block(a, r1 + r2, m1, r3 + r4);
    res.Q.push_rot_block(r1, n1, r2);
    rotate_cols_block(a, r1, n1, r2);
    res.Q.push_rot_block(r1 + r2 + r3, n1 + r2, r4);
    rotate_cols_block(a, r1 + r2 + r3, n1 + r2, r4);

    res.rank = r1 + r2 + r3 + r4;
    return res;
}

/// Row-halving recursion (sequential). Computes the rank and the row rank
/// profile; the column permutation is valid for reconstruction but its
/// profile is not claimed.
inline PluqResult slab_rec(MatView a, usize thr) {
    const usize m = a.rows, n = a.cols;
    PluqResult res;
    res.P = PermSeq(m);
    res.Q = PermSeq(n);
    res.rank_revealing = true;
    if (m == 0 || n == 0) return res;
    if (m <= thr) return rr_base(a);
    const PrimeField& F = *a.field;
    const elem neg1 = elem(F.p - 1);
    const usize m1 = (m + 1) / 2;

    PluqResult res1 = slab_rec(a.subview(0, 0, m1, n), thr);
    const usize r1 = res1.rank;
    apply_perm(res1.Q, a.subview(m1, 0, m - m1, n), Axis::cols);

    MatView U1 = a.subview(0, 0, r1, r1);
    MatView V1 = a.subview(0, r1, r1, n - r1);
    MatView Fb = a.subview(m1, 0, m - m1, r1);
    MatView H = a.subview(m1, r1, m - m1, n - r1);
    if (r1 > 0) {
        if (!Fb.empty()) ftrsm(Side::right, UpLo::upper, Diag::nonunit, U1, Fb);
        if (!H.empty() && !V1.empty()) fgemm(neg1, Fb, V1, 1, H);
    }
    PluqResult res2 = slab_rec(H, thr);
    const usize r2 = res2.rank;
    apply_perm(res2.P, a.subview(m1, 0, m - m1, r1), Axis::rows);
    apply_perm(res2.Q, a.subview(0, r1, r1, n - r1), Axis::cols);

    res.P.append_embedded(res1.P, 0);
    res.P.append_embedded(res2.P, m1);
    res.Q.append_embedded(res1.Q, 0);
    res.Q.append_embedded(res2.Q, r1);
    res.P.push_rot_block(r1, m1, r2);
    rotate_rows_block(a, r1, m1, r2);
    res.rank = r1 + r2;
    return res;
}

} // namespace detail

inline PluqResult pluq_tile_recursive(MatView a, usize threshold = 8, const GemmPolicy& pol = {},
                                      unsigned wrk = 0) {
    if (wrk) set_workers(wrk);
    return detail::tile_rec(a, std::max<usize>(1, threshold), pol);
}

inline PluqResult pluq_slab_recursive(MatView a, usize threshold = 8) {
    return detail::slab_rec(a, std::max<usize>(1, threshold));
}

/// Row-slab loop with dynamic column starts. Each slab is first permuted by
/// the accumulated column moves and eliminated against the pivots found so
/// far (left-looking across slabs; both updates are parallel kernels), then
/// the remaining region is factored by the sequential base case and the new
/// pivots are packed behind the previous ones by rotations.
inline PluqResult pluq_slab_iterative(MatView a, usize k, const GemmPolicy& pol = {},
                                      unsigned wrk = 0) {
    if (wrk) set_workers(wrk);
    const usize m = a.rows, n = a.cols;
    PluqResult res;
    res.P = PermSeq(m);
    res.Q = PermSeq(n);
    res.rank_revealing = true;
    if (m == 0 || n == 0) return res;
    const PrimeField& F = *a.field;
    const elem neg1 = elem(F.p - 1);
    k = std::max<usize>(1, k);
    usize R = 0;
    for (usize s0 = 0; s0 < m; s0 += k) {
        const usize kb = std::min(k, m - s0);
        MatView slab = a.subview(s0, 0, kb, n);
        apply_perm(res.Q, slab, Axis::cols); // deferred column moves
        if (R > 0) {
            MatView X = a.subview(s0, 0, kb, R);
            pftrsm(Side::right, UpLo::upper, Diag::nonunit, a.subview(0, 0, R, R), X);
            if (n > R)
                pfgemm(neg1, X, a.subview(0, R, R, n - R), 1, a.subview(s0, R, kb, n - R),
                       pol);
        }
        PluqResult sub = rr_base(a.subview(s0, R, kb, n - R));
        apply_perm(sub.P, a.subview(s0, 0, kb, R), Axis::rows);
        if (R > 0) apply_perm(sub.Q, a.subview(0, R, R, n - R), Axis::cols);
        res.P.append_embedded(sub.P, s0);
        res.Q.append_embedded(sub.Q, R);
        const usize rs = sub.rank;
        if (rs > 0 && s0 > R) {
            res.P.push_rot_block(R, s0, rs);
            rotate_rows_block(a, R, s0, rs);
        }
        R += rs;
    }
    res.rank = R;
    return res;
}

/// Row-slab loop whose panel factorization is itself a column-tile loop:
/// a sequential base case per tile, then parallel updates of the remaining
/// panel columns, with rotations packing the new pivot columns in place.
inline PluqResult pluq_tile_iterative(MatView a, usize k, const GemmPolicy& pol = {},
                                      unsigned wrk = 0) {
    if (wrk) set_workers(wrk);
    const usize m = a.rows, n = a.cols;
    PluqResult res;
    res.P = PermSeq(m);
    res.Q = PermSeq(n);
    res.rank_revealing = true;
    if (m == 0 || n == 0) return res;
    const PrimeField& F = *a.field;
    const elem neg1 = elem(F.p - 1);
    k = std::max<usize>(1, k);
    usize R = 0;
    for (usize s0 = 0; s0 < m; s0 += k) {
        const usize kb = std::min(k, m - s0);
        MatView slab = a.subview(s0, 0, kb, n);
        apply_perm(res.Q, slab, Axis::cols);
        if (R > 0) {
            MatView X = a.subview(s0, 0, kb, R);
            pftrsm(Side::right, UpLo::upper, Diag::nonunit, a.subview(0, 0, R, R), X);
            if (n > R)
                pfgemm(neg1, X, a.subview(0, R, R, n - R), 1, a.subview(s0, R, kb, n - R),
                       pol);
        }
        usize pr = 0; // pivots found in this panel
        usize C0 = R; // next unprocessed column, moves by the tile width
        while (pr < kb && C0 < n) {
            const usize tw = std::min(k, n - C0);
            PluqResult sub = rr_base(a.subview(s0 + pr, C0, kb - pr, tw));
            const usize rt = sub.rank;
            apply_perm(sub.P, a.subview(s0 + pr, 0, kb - pr, C0), Axis::rows);
            if (C0 + tw < n)
                apply_perm(sub.P, a.subview(s0 + pr, C0 + tw, kb - pr, n - C0 - tw),
                           Axis::rows);
            if (R > 0) apply_perm(sub.Q, a.subview(0, C0, R, tw), Axis::cols);
            if (pr > 0) apply_perm(sub.Q, a.subview(s0, C0, pr, tw), Axis::cols);
            res.P.append_embedded(sub.P, s0 + pr);
            res.Q.append_embedded(sub.Q, C0);
            if (rt > 0 && C0 > R + pr) {
                // pack the new pivot columns behind the previous ones
                res.Q.push_rot_block(R + pr, C0, rt);
                if (R > 0) rotate_cols_block(a.subview(0, 0, R, n), R + pr, C0, rt);
                rotate_cols_block(slab, R + pr, C0, rt);
            }
            if (rt > 0 && C0 + tw < n) {
                MatView Lt = a.subview(s0 + pr, R + pr, rt, rt);
                MatView Ur = a.subview(s0 + pr, C0 + tw, rt, n - C0 - tw);
                pftrsm(Side::left, UpLo::lower, Diag::unit, Lt, Ur);
                if (pr + rt < kb) {
                    MatView Mt = a.subview(s0 + pr + rt, R + pr, kb - pr - rt, rt);
                    MatView rest =
                        a.subview(s0 + pr + rt, C0 + tw, kb - pr - rt, n - C0 - tw);
                    pfgemm(neg1, Mt, Ur, 1, rest, pol);
                }
            }
            pr += rt;
            C0 += tw;
        }
        if (pr > 0 && s0 > R) {
            res.P.push_rot_block(R, s0, pr);
            rotate_rows_block(a, R, s0, pr);
        }
        R += pr;
    }
    res.rank = R;
    return res;
}

inline PluqResult pluq_rank_revealing(MatView a, const RRVariant& var,
                                      const GemmPolicy& pol = {}, unsigned wrk = 0) {
    switch (var.kind) {
    case RRKind::base_crout: return rr_base(a);
    case RRKind::slab_recursive: return pluq_slab_recursive(a, var.threshold);
    case RRKind::tile_recursive: return pluq_tile_recursive(a, var.threshold, pol, wrk);
    case RRKind::slab_iterative: return pluq_slab_iterative(a, var.k, pol, wrk);
    case RRKind::tile_iterative: return pluq_tile_iterative(a, var.k, pol, wrk);
    }
    throw InvalidBlock("unknown variant");
}

} // namespace ffpluq
