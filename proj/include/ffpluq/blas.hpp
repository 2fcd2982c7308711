#pragma once

#include <vector>

#include "ffpluq/matrix.hpp"
#include "ffpluq/perm.hpp"
#include "ffpluq/pool.hpp"

namespace ffpluq {

/// Knobs for the multiplication cascade and the parallel splits.
/// winograd_levels = 0 forces the classical kernel (count verification mode).
struct GemmPolicy {
    int winograd_levels = 0;
    usize winograd_threshold = 2400;
    unsigned parallel_grain = 0; // 0: use the worker count
};

namespace detail {

inline void check_gemm_shapes(const MatView& a, const MatView& b, const MatView& c) {
    if (a.cols != b.rows || c.rows != a.rows || c.cols != b.cols)
        throw DimMismatch("gemm: non-conforming shapes");
}

} // namespace detail

/// C <- alpha*A*B + beta*C with delayed reduction: one fold per output entry
/// per pass of at most n_star products. alpha in {1, p-1} and beta in {0, 1}
/// stay on the fast path; other scalars cost one extra product per entry.
inline void fgemm_classical(elem alpha, const MatView& A, const MatView& B, elem beta,
                            MatView C) {
    detail::check_gemm_shapes(A, B, C);
    const PrimeField& F = *C.field;
    KernelScope ks(Kernel::gemm);
    const usize m = A.rows, kk = A.cols, n = B.cols;
    if (m == 0 || n == 0) return;

    if (beta != 0 && beta != 1) {
        for (usize i = 0; i < m; ++i) {
            elem* c = C.row(i);
            for (usize j = 0; j < n; ++j) c[j] = F.mul(beta, c[j]);
        }
        beta = 1;
    }
    if (alpha == 0 || kk == 0) {
        if (beta == 0)
            for (usize i = 0; i < m; ++i)
                for (usize j = 0; j < n; ++j) C.row(i)[j] = 0;
        return; // empty accumulation folds nothing
    }

    const bool negate = (alpha == F.p - 1 && F.p > 2);
    const bool plain = (alpha == 1) || negate;
    const u64 chunk = F.n_star < 1 ? 1 : F.n_star;

    std::vector<i64> acc(n);
    for (usize i = 0; i < m; ++i) {
        const elem* arow = A.row(i);
        elem* crow = C.row(i);
        if (plain && beta == 1)
            for (usize j = 0; j < n; ++j) acc[j] = i64(crow[j]);
        else
            for (usize j = 0; j < n; ++j) acc[j] = 0;

        usize t0 = 0;
        while (t0 < kk) {
            const usize t1 = usize(std::min<u64>(kk, t0 + chunk));
            if (negate) {
                for (usize t = t0; t < t1; ++t) {
                    const u64 a = arow[t];
                    if (!a) continue;
                    const elem* brow = B.row(t);
                    for (usize j = 0; j < n; ++j) acc[j] -= i64(a * brow[j]);
                }
            } else {
                for (usize t = t0; t < t1; ++t) {
                    const u64 a = arow[t];
                    if (!a) continue;
                    const elem* brow = B.row(t);
                    for (usize j = 0; j < n; ++j) acc[j] += i64(a * brow[j]);
                }
            }
            t0 = t1;
            if (t0 < kk) { // intermediate pass
                for (usize j = 0; j < n; ++j) acc[j] = i64(F.residue(acc[j]));
                count_reductions(n);
            }
        }

        if (plain) {
            for (usize j = 0; j < n; ++j) crow[j] = F.residue(acc[j]);
            count_reductions(n);
        } else {
            for (usize j = 0; j < n; ++j) {
                elem r = F.residue(acc[j]);
                count_reduction();
                elem v = F.mul(alpha, r);
                crow[j] = (beta == 1) ? F.add(crow[j], v) : v;
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Winograd cascade

namespace detail {

inline void mat_add(const MatView& a, const MatView& b, MatView out) {
    const PrimeField& F = *out.field;
    for (usize i = 0; i < out.rows; ++i) {
        const elem *x = a.row(i), *y = b.row(i);
        elem* z = out.row(i);
        for (usize j = 0; j < out.cols; ++j) z[j] = F.add(x[j], y[j]);
    }
}

inline void mat_sub(const MatView& a, const MatView& b, MatView out) {
    const PrimeField& F = *out.field;
    for (usize i = 0; i < out.rows; ++i) {
        const elem *x = a.row(i), *y = b.row(i);
        elem* z = out.row(i);
        for (usize j = 0; j < out.cols; ++j) z[j] = F.sub(x[j], y[j]);
    }
}

inline void mat_add_inplace(MatView out, const MatView& a) {
    const PrimeField& F = *out.field;
    for (usize i = 0; i < out.rows; ++i) {
        const elem* x = a.row(i);
        elem* z = out.row(i);
        for (usize j = 0; j < out.cols; ++j) z[j] = F.add(z[j], x[j]);
    }
}

inline void mat_sub_inplace(MatView out, const MatView& a) {
    const PrimeField& F = *out.field;
    for (usize i = 0; i < out.rows; ++i) {
        const elem* x = a.row(i);
        elem* z = out.row(i);
        for (usize j = 0; j < out.cols; ++j) z[j] = F.sub(z[j], x[j]);
    }
}

/// C <- A*B, recursing with Winograd's seven-product schedule while the
/// dimensions stay above the threshold. Operands are canonical residues going
/// in, so every recursive product sees reduced inputs; the post-additions use
/// conditional correction and keep everything canonical.
inline void winograd_into(const MatView& A, const MatView& B, MatView C,
                          const GemmPolicy& pol, int depth) {
    const usize m = A.rows, k = A.cols, n = B.cols;
    const usize thr = std::max<usize>(2, pol.winograd_threshold);
    if (depth >= pol.winograd_levels || std::min({m, k, n}) < thr) {
        fgemm_classical(1, A, B, 0, C);
        return;
    }

    const usize m2 = m / 2, k2 = k / 2, n2 = n / 2;
    const usize me = m2 * 2, ke = k2 * 2, ne = n2 * 2;
    const PrimeField& F = *C.field;

    MatView A11 = A.subview(0, 0, m2, k2), A12 = A.subview(0, k2, m2, k2);
    MatView A21 = A.subview(m2, 0, m2, k2), A22 = A.subview(m2, k2, m2, k2);
    MatView B11 = B.subview(0, 0, k2, n2), B12 = B.subview(0, n2, k2, n2);
    MatView B21 = B.subview(k2, 0, k2, n2), B22 = B.subview(k2, n2, k2, n2);
    MatView C11 = C.subview(0, 0, m2, n2), C12 = C.subview(0, n2, m2, n2);
    MatView C21 = C.subview(m2, 0, m2, n2), C22 = C.subview(m2, n2, m2, n2);

    Mat tmpS(m2, k2, F), tmpT(k2, n2, F), tmpP(m2, n2, F);
    MatView S = tmpS.view(), T = tmpT.view(), P = tmpP.view();

    mat_sub(A11, A21, S);                     // S3
    mat_sub(B22, B12, T);                     // T3
    winograd_into(S, T, C21, pol, depth + 1); // P7
    mat_add(A21, A22, S);                     // S1
    mat_sub(B12, B11, T);                     // T1
    winograd_into(S, T, C22, pol, depth + 1); // P5
    mat_sub(S, A11, S);                       // S2
    mat_sub(B22, T, T);                       // T2
    winograd_into(S, T, C12, pol, depth + 1); // P6
    mat_sub(A12, S, S);                       // S4
    winograd_into(S, B22, C11, pol, depth + 1); // P3
    winograd_into(A11, B11, P, pol, depth + 1); // P1
    mat_add_inplace(C12, P);                  // U2 = P1 + P6
    mat_add_inplace(C21, C12);                // U3 = U2 + P7
    mat_add_inplace(C12, C22);                // U4 = U2 + P5
    mat_add_inplace(C22, C21);                // U7 = U3 + P5  (C22 final)
    mat_add_inplace(C12, C11);                // U5 = U4 + P3  (C12 final)
    mat_sub(T, B21, T);                       // T4 = T2 - B21
    winograd_into(A22, T, C11, pol, depth + 1); // P4
    mat_sub(C21, C11, C21);                   // U6 = U3 - P4  (C21 final)
    winograd_into(A12, B21, C11, pol, depth + 1); // P2
    mat_add_inplace(C11, P);                  // U1 = P2 + P1  (C11 final)

    // odd-dimension peeling: fix up the trimmed row/column/inner term
    if (ke < k) {
        MatView acol = A.subview(0, ke, me, 1);
        MatView brow = B.subview(ke, 0, 1, ne);
        MatView ce = C.subview(0, 0, me, ne);
        fgemm_classical(1, acol, brow, 1, ce);
    }
    if (me < m) {
        MatView arow = A.subview(me, 0, 1, k);
        MatView crow = C.subview(me, 0, 1, n);
        fgemm_classical(1, arow, B, 0, crow);
    }
    if (ne < n) {
        MatView bcol = B.subview(0, ne, k, 1);
        MatView ccol = C.subview(0, ne, me, 1);
        fgemm_classical(1, A.subview(0, 0, me, k), bcol, 0, ccol);
    }
}

} // namespace detail

/// Cascaded multiply: Winograd recursion above the threshold, the delayed
/// reduction classical kernel at the leaves. Bit-identical to
/// fgemm_classical on every input.
inline void fgemm(elem alpha, const MatView& A, const MatView& B, elem beta, MatView C,
                  const GemmPolicy& pol = {}) {
    detail::check_gemm_shapes(A, B, C);
    const PrimeField& F = *C.field;
    const usize m = A.rows, k = A.cols, n = B.cols;
    if (pol.winograd_levels <= 0 || std::min({m, k, n}) < std::max<usize>(2, pol.winograd_threshold) ||
        alpha == 0 || k == 0) {
        fgemm_classical(alpha, A, B, beta, C);
        return;
    }
    KernelScope ks(Kernel::gemm);
    if (alpha == 1 && beta == 0) {
        detail::winograd_into(A, B, C, pol, 0);
        return;
    }
    Mat tmp(m, n, F);
    MatView R = tmp.view();
    detail::winograd_into(A, B, R, pol, 0);
    for (usize i = 0; i < m; ++i) {
        const elem* r = R.row(i);
        elem* c = C.row(i);
        for (usize j = 0; j < n; ++j) {
            elem v = (alpha == 1) ? r[j] : (alpha == F.p - 1) ? F.neg(r[j]) : F.mul(alpha, r[j]);
            c[j] = (beta == 0) ? v : (beta == 1) ? F.add(c[j], v) : F.add(F.mul(beta, c[j]), v);
        }
    }
}

/// Parallel multiply: the row dimension of A and the column dimension of B
/// are split into `grain` parts each, one sequential fgemm task per C tile.
inline void pfgemm(elem alpha, const MatView& A, const MatView& B, elem beta, MatView C,
                   const GemmPolicy& pol = {}, unsigned wrk = 0) {
    detail::check_gemm_shapes(A, B, C);
    if (wrk == 0) wrk = workers();
    const unsigned grain = pol.parallel_grain ? pol.parallel_grain : std::max(1u, wrk);
    if (grain <= 1 || C.rows == 0 || C.cols == 0) {
        fgemm(alpha, A, B, beta, C, pol);
        return;
    }
    const auto rparts = split_ranges(C.rows, grain);
    const auto cparts = split_ranges(C.cols, grain);
    TaskGroup g;
    for (const auto& rp : rparts)
        for (const auto& cp : cparts) {
            MatView Ai = A.subview(rp.first, 0, rp.second - rp.first, A.cols);
            MatView Bj = B.subview(0, cp.first, B.rows, cp.second - cp.first);
            MatView Cij =
                C.subview(rp.first, cp.first, rp.second - rp.first, cp.second - cp.first);
            g.spawn([=] { fgemm(alpha, Ai, Bj, beta, Cij, pol); });
        }
    g.wait();
}

// ---------------------------------------------------------------------------
// Triangular solves

enum class Side { left, right };
enum class UpLo { lower, upper };
enum class Diag { unit, nonunit };

namespace detail {

/// Left solve: op(A) X = B, X overwrites B. Row r of the solution costs one
/// fold per entry (skipped for the first solved row) plus, for a non-unit
/// diagonal, one scaling product per entry.
inline void trsm_left(UpLo uplo, Diag diag, const MatView& A, MatView B) {
    const PrimeField& F = *B.field;
    const usize t = A.rows, n = B.cols;
    KernelScope ks(diag == Diag::unit ? Kernel::utrsm : Kernel::trsm);
    std::vector<i64> acc(n);
    std::vector<PreppedDivisor> dinv;
    if (diag == Diag::nonunit) {
        dinv.resize(t);
        for (usize i = 0; i < t; ++i) {
            dinv[i] = prep_divisor(F, i64(A.at(i, i)));
            if (dinv[i].zero) throw SingularDiagonal(i);
        }
    }
    const u64 budget = F.n_star_seeded < 1 ? 1 : F.n_star_seeded;
    for (usize step = 0; step < t; ++step) {
        const usize r = (uplo == UpLo::lower) ? step : t - 1 - step;
        const elem* arow = A.row(r);
        elem* xr = B.row(r);
        if (step == 0) {
            if (diag == Diag::nonunit) {
                for (usize j = 0; j < n; ++j) xr[j] = F.mul(xr[j], dinv[r].inverse);
            }
            continue; // unit: first solved row is a plain copy
        }
        for (usize j = 0; j < n; ++j) acc[j] = i64(xr[j]);
        u64 folded = 0;
        auto fold_row = [&](usize s) {
            const u64 a = arow[s];
            if (a) {
                const elem* xs = B.row(s);
                for (usize j = 0; j < n; ++j) acc[j] -= i64(a * xs[j]);
            }
            if (++folded == budget) { // capacity flush, counted like any fold
                for (usize j = 0; j < n; ++j) acc[j] = i64(F.residue(acc[j]));
                count_reductions(n);
                folded = 0;
            }
        };
        if (uplo == UpLo::lower)
            for (usize s = 0; s < r; ++s) fold_row(s);
        else
            for (usize s = r + 1; s < t; ++s) fold_row(s);
        if (diag == Diag::unit) {
            for (usize j = 0; j < n; ++j) xr[j] = F.residue(acc[j]);
            count_reductions(n);
        } else {
            for (usize j = 0; j < n; ++j) {
                elem v = F.residue(acc[j]);
                count_reduction();
                xr[j] = F.mul(v, dinv[r].inverse);
            }
        }
    }
}

/// Right solve: X op(A) = B, X overwrites B. Mirrors trsm_left with the
/// roles of rows and columns transposed; rows of B are independent.
inline void trsm_right(UpLo uplo, Diag diag, const MatView& A, MatView B) {
    const PrimeField& F = *B.field;
    const usize t = A.cols, m = B.rows;
    KernelScope ks(diag == Diag::unit ? Kernel::utrsm : Kernel::trsm);
    std::vector<PreppedDivisor> dinv;
    if (diag == Diag::nonunit) {
        dinv.resize(t);
        for (usize i = 0; i < t; ++i) {
            dinv[i] = prep_divisor(F, i64(A.at(i, i)));
            if (dinv[i].zero) throw SingularDiagonal(i);
        }
    }
    std::vector<i64> acc(t);
    for (usize r = 0; r < m; ++r) {
        elem* xr = B.row(r);
        for (usize c = 0; c < t; ++c) acc[c] = i64(xr[c]);
        for (usize step = 0; step < t; ++step) {
            const usize c = (uplo == UpLo::upper) ? step : t - 1 - step;
            elem v;
            if (step == 0) {
                v = xr[c];
            } else {
                v = F.residue(acc[c]);
                count_reduction();
            }
            if (diag == Diag::nonunit) v = F.mul(v, dinv[c].inverse);
            xr[c] = v;
            if (v) { // fold the solved entry into the remaining accumulation
                const elem* arow = A.row(c);
                if (uplo == UpLo::upper)
                    for (usize j = step + 1; j < t; ++j) {
                        usize cc = j;
                        acc[cc] -= i64(u64(v) * arow[cc]);
                    }
                else
                    for (usize j = step + 1; j < t; ++j) {
                        usize cc = t - 1 - j;
                        acc[cc] -= i64(u64(v) * arow[cc]);
                    }
            }
        }
    }
}

} // namespace detail

/// Triangular solve with the t x t triangle of A against B, in place.
inline void ftrsm(Side side, UpLo uplo, Diag diag, const MatView& A, MatView B) {
    if (A.rows != A.cols) throw DimMismatch("trsm: triangle must be square");
    const usize need = (side == Side::left) ? B.rows : B.cols;
    if (A.rows != need) throw DimMismatch("trsm: triangle does not match B");
    if (A.rows == 0 || B.rows == 0 || B.cols == 0) return;
    if (side == Side::left)
        detail::trsm_left(uplo, diag, A, B);
    else
        detail::trsm_right(uplo, diag, A, B);
}

/// Parallel solve: the non-triangular dimension of B is split into `grain`
/// independent blocks, each solved by the sequential kernel.
inline void pftrsm(Side side, UpLo uplo, Diag diag, const MatView& A, MatView B,
                   unsigned grain = 0) {
    if (grain == 0) grain = workers();
    const usize free_dim = (side == Side::left) ? B.cols : B.rows;
    if (grain <= 1 || free_dim <= 1) {
        ftrsm(side, uplo, diag, A, B);
        return;
    }
    const auto parts = split_ranges(free_dim, grain);
    TaskGroup g;
    for (const auto& pr : parts) {
        MatView Bp = (side == Side::left)
                         ? B.subview(0, pr.first, B.rows, pr.second - pr.first)
                         : B.subview(pr.first, 0, pr.second - pr.first, B.cols);
        g.spawn([=] { ftrsm(side, uplo, diag, A, Bp); });
    }
    g.wait();
}

/// Row/column permutation application (the swap/rotation replay).
inline void flaswp(const PermSeq& p, MatView a, Axis axis, Dir dir = Dir::forward) {
    apply_perm(p, a, axis, dir);
}

/// Parallel variant: the non-permuted dimension is split into `grain` blocks.
inline void pflaswp(const PermSeq& p, MatView a, Axis axis, Dir dir = Dir::forward,
                    unsigned grain = 0) {
    if (grain == 0) grain = workers();
    const usize free_dim = (axis == Axis::rows) ? a.cols : a.rows;
    if (grain <= 1 || free_dim <= 1) {
        apply_perm(p, a, axis, dir);
        return;
    }
    const auto parts = split_ranges(free_dim, grain);
    TaskGroup g;
    for (const auto& pr : parts) {
        MatView ap = (axis == Axis::rows) ? a.subview(0, pr.first, a.rows, pr.second - pr.first)
                                          : a.subview(pr.first, 0, pr.second - pr.first, a.cols);
        g.spawn([=] { apply_perm(p, ap, axis, dir); });
    }
    g.wait();
}

} // namespace ffpluq
