#pragma once

#include <string>

#include "ffpluq/pluq.hpp"

namespace ffpluq {

enum class Looking { right, left, crout };

struct FullRankVariant {
    Looking kind = Looking::right;
    usize k = 1;
};

/// Unblocked Crout elimination of a square view with generic rank profile,
/// A = LU packed in place, P = Q = identity.
///
/// Reduction placement: at step s the column below the pivot costs one fold
/// plus one scaling product per entry and the row to the right one fold per
/// entry (step 0 folds nothing, its accumulations are empty); pivots are
/// normalized and inverted straight from their accumulators except the last
/// one, which is never a divisor and pays one closing fold. Total for k >= 2:
/// (3/2)k^2 - (7/2)k + 3.
inline PluqResult crout_base(MatView a) {
    if (a.rows != a.cols) throw DimMismatch("crout_base: square block expected");
    const PrimeField& F = *a.field;
    const usize k = a.rows;
    KernelScope ks(Kernel::pluq_base);
    for (usize s = 0; s < k; ++s) {
        detail::FoldAcc pacc(F, a.at(s, s));
        for (usize t = 0; t < s; ++t) pacc.sub_product(a.at(s, t), a.at(t, s));
        PreppedDivisor piv;
        if (s + 1 < k) {
            piv = prep_divisor(F, pacc.raw());
            if (piv.zero) throw ZeroPivot(s);
            a.at(s, s) = piv.value;
        } else {
            elem v = pacc.fold_counted();
            if (v == 0) throw ZeroPivot(s);
            a.at(s, s) = v;
            break; // nothing below or right of the last pivot
        }
        for (usize r = s + 1; r < k; ++r) {
            detail::FoldAcc acc(F, a.at(r, s));
            for (usize t = 0; t < s; ++t) acc.sub_product(a.at(r, t), a.at(t, s));
            a.at(r, s) = F.mul(acc.fold_counted(), piv.inverse);
        }
        for (usize b = s + 1; b < k; ++b) {
            detail::FoldAcc acc(F, a.at(s, b));
            for (usize t = 0; t < s; ++t) acc.sub_product(a.at(s, t), a.at(t, b));
            a.at(s, b) = acc.fold_counted();
        }
    }
    PluqResult res;
    res.P = PermSeq(k);
    res.Q = PermSeq(k);
    res.rank = k;
    res.rank_revealing = false;
    return res;
}

namespace detail {

inline void rethrow_pivot_offset(const ZeroPivot& e, usize offset) {
    throw ZeroPivot(e.step + offset);
}

/// Unblocked right-looking elimination: divide the column, then apply the
/// rank-1 trailing update eagerly, one counted product per touched entry.
inline void fullrank_k1_right(MatView a) {
    const PrimeField& F = *a.field;
    const usize n = a.rows;
    for (usize i = 0; i < n; ++i) {
        PreppedDivisor piv = prep_divisor(F, i64(a.at(i, i)));
        if (piv.zero) throw ZeroPivot(i);
        {
            KernelScope ks(Kernel::trsm);
            for (usize r = i + 1; r < n; ++r) a.at(r, i) = F.mul(a.at(r, i), piv.inverse);
        }
        KernelScope ks(Kernel::gemm);
        for (usize r = i + 1; r < n; ++r) {
            const elem l = a.at(r, i);
            if (!l) {
                // the model still charges the update fold for every entry
                count_reductions(n - i - 1);
                continue;
            }
            const elem* urow = a.row(i);
            elem* crow = a.row(r);
            for (usize c = i + 1; c < n; ++c) crow[c] = F.sub(crow[c], F.mul(l, urow[c]));
        }
    }
}

/// Unblocked left-looking elimination. The pivot is folded by the panel
/// update and then inverted explicitly, so each column pays one inversion on
/// top of its solves and updates.
inline void fullrank_k1_left(MatView a) {
    const PrimeField& F = *a.field;
    const usize n = a.rows;
    for (usize j = 0; j < n; ++j) {
        {
            KernelScope ks(Kernel::utrsm);
            for (usize r = 1; r < j; ++r) {
                FoldAcc acc(F, a.at(r, j));
                for (usize t = 0; t < r; ++t) acc.sub_product(a.at(r, t), a.at(t, j));
                a.at(r, j) = acc.fold_counted();
            }
        }
        {
            KernelScope ks(Kernel::gemm);
            for (usize r = j; r < n; ++r) {
                FoldAcc acc(F, a.at(r, j));
                for (usize t = 0; t < j; ++t) acc.sub_product(a.at(r, t), a.at(t, j));
                a.at(r, j) = acc.fold_counted();
            }
        }
        elem ipiv;
        {
            KernelScope ks(Kernel::pluq_base);
            try {
                ipiv = F.inv(a.at(j, j));
            } catch (const ZeroDivision&) {
                throw ZeroPivot(j);
            }
        }
        KernelScope ks(Kernel::trsm);
        for (usize r = j + 1; r < n; ++r) a.at(r, j) = F.mul(a.at(r, j), ipiv);
    }
}

/// Blocked right-looking loop: base case, then the block row/column solves,
/// then one independent trailing-update product task per trailing block
/// column.
inline void fullrank_blocked_right(MatView a, usize k, const GemmPolicy& pol) {
    const usize n = a.rows;
    const PrimeField& F = *a.field;
    for (usize c = 0; c < n; c += k) {
        const usize kb = std::min(k, n - c);
        try {
            crout_base(a.subview(c, c, kb, kb));
        } catch (const ZeroPivot& e) {
            rethrow_pivot_offset(e, c);
        }
        const usize t = n - c - kb;
        if (t == 0) continue;
        MatView diag = a.subview(c, c, kb, kb);
        {
            TaskGroup g;
            for (usize b = c + kb; b < n; b += k) {
                const usize w = std::min(k, n - b);
                MatView u12 = a.subview(c, b, kb, w);
                g.spawn([=] { ftrsm(Side::left, UpLo::lower, Diag::unit, diag, u12); });
            }
            for (usize b = c + kb; b < n; b += k) {
                const usize h = std::min(k, n - b);
                MatView l21 = a.subview(b, c, h, kb);
                g.spawn([=] { ftrsm(Side::right, UpLo::upper, Diag::nonunit, diag, l21); });
            }
            g.wait();
        }
        const elem minus_one = elem(F.p - 1);
        MatView l21 = a.subview(c + kb, c, t, kb);
        TaskGroup g;
        for (usize b = c + kb; b < n; b += k) {
            const usize w = std::min(k, n - b);
            MatView u12 = a.subview(c, b, kb, w);
            MatView trail = a.subview(c + kb, b, t, w);
            g.spawn([=] { fgemm(minus_one, l21, u12, 1, trail, pol); });
        }
        g.wait();
    }
}

/// Blocked Crout loop: the two panel products are independent tasks, then the
/// base case, then the block solves.
inline void fullrank_blocked_crout(MatView a, usize k, const GemmPolicy& pol) {
    const usize n = a.rows;
    const PrimeField& F = *a.field;
    const elem minus_one = elem(F.p - 1);
    for (usize c = 0; c < n; c += k) {
        const usize kb = std::min(k, n - c);
        const usize t = n - c - kb;
        if (c > 0) {
            TaskGroup g;
            MatView colL = a.subview(c, 0, n - c, c);
            MatView colU = a.subview(0, c, c, kb);
            MatView panel = a.subview(c, c, n - c, kb);
            g.spawn([=] { fgemm(minus_one, colL, colU, 1, panel, pol); });
            if (t > 0) {
                MatView rowL = a.subview(c, 0, kb, c);
                MatView rowU = a.subview(0, c + kb, c, t);
                MatView rpanel = a.subview(c, c + kb, kb, t);
                g.spawn([=] { fgemm(minus_one, rowL, rowU, 1, rpanel, pol); });
            }
            g.wait();
        }
        try {
            crout_base(a.subview(c, c, kb, kb));
        } catch (const ZeroPivot& e) {
            rethrow_pivot_offset(e, c);
        }
        if (t == 0) continue;
        MatView diag = a.subview(c, c, kb, kb);
        MatView u12 = a.subview(c, c + kb, kb, t);
        MatView l21 = a.subview(c + kb, c, t, kb);
        TaskGroup g;
        g.spawn([=] { ftrsm(Side::left, UpLo::lower, Diag::unit, diag, u12); });
        g.spawn([=] { ftrsm(Side::right, UpLo::upper, Diag::nonunit, diag, l21); });
        g.wait();
    }
}

/// Blocked left-looking loop with a fused panel: the history product is kept
/// as a delayed accumulation and folded inside the base case and the
/// below-block solve, one fold per finalized entry.
inline void fullrank_blocked_left(MatView a, usize k, const GemmPolicy&) {
    const usize n = a.rows;
    const PrimeField& F = *a.field;
    for (usize c = 0; c < n; c += k) {
        const usize kb = std::min(k, n - c);
        const usize h = c;
        if (h > 0) {
            MatView prevL = a.subview(0, 0, h, h);
            MatView top = a.subview(0, c, h, kb);
            ftrsm(Side::left, UpLo::lower, Diag::unit, prevL, top);
        }
        // W = A[h.., c..c+kb) - L[h.., 0..h) * U[0..h, c..c+kb), unreduced
        const usize wr = n - h;
        std::vector<i64> W(wr * kb);
        {
            KernelScope ks(Kernel::gemm);
            const u64 budget = F.n_star_seeded < 1 ? 1 : F.n_star_seeded;
            for (usize r = 0; r < wr; ++r) {
                i64* wrow = &W[r * kb];
                const elem* lrow = a.row(h + r);
                for (usize j = 0; j < kb; ++j) wrow[j] = i64(a.at(h + r, c + j));
                u64 folded = 0;
                for (usize t = 0; t < h; ++t) {
                    const u64 l = lrow[t];
                    if (l) {
                        const elem* urow = a.row(t) + c;
                        for (usize j = 0; j < kb; ++j) wrow[j] -= i64(l * urow[j]);
                    }
                    if (++folded == budget) { // capacity flush
                        for (usize j = 0; j < kb; ++j) wrow[j] = i64(F.residue(wrow[j]));
                        count_reductions(kb);
                        folded = 0;
                    }
                }
            }
        }
        auto wat = [&](usize r, usize j) -> i64& { return W[r * kb + j]; };
        const bool hist = (h > 0);
        std::vector<PreppedDivisor> piv(kb);
        {
            // Crout base case continuing the history accumulations
            KernelScope ks(Kernel::pluq_base);
            for (usize s = 0; s < kb; ++s) {
                detail::FoldAcc pacc(F, 0);
                i64 pv = wat(s, s);
                for (usize t = 0; t < s; ++t)
                    pacc.sub_product(a.at(c + s, c + t), a.at(c + t, c + s));
                pv += pacc.raw();
                const bool nonempty = hist || s > 0;
                if (s + 1 < kb) {
                    piv[s] = prep_divisor(F, pv);
                    if (piv[s].zero) throw ZeroPivot(c + s);
                    a.at(c + s, c + s) = piv[s].value;
                } else {
                    // the last pivot is not a divisor inside the block, its
                    // accumulator pays the closing fold; the below-block
                    // solve still needs its inverse
                    elem v = nonempty ? F.reduce(pv) : F.residue(pv);
                    if (v == 0) throw ZeroPivot(c + s);
                    a.at(c + s, c + s) = v;
                    piv[s] = PreppedDivisor{v, F.inv_uncounted(v), false};
                }
                for (usize r = s + 1; r < kb; ++r) {
                    detail::FoldAcc acc(F, 0);
                    i64 av = wat(r, s);
                    for (usize t = 0; t < s; ++t)
                        acc.sub_product(a.at(c + r, c + t), a.at(c + t, c + s));
                    av += acc.raw();
                    elem v = nonempty ? F.reduce(av) : F.residue(av);
                    a.at(c + r, c + s) = F.mul(v, piv[s].inverse);
                }
                for (usize b = s + 1; b < kb; ++b) {
                    detail::FoldAcc acc(F, 0);
                    i64 av = wat(s, b);
                    for (usize t = 0; t < s; ++t)
                        acc.sub_product(a.at(c + s, c + t), a.at(c + t, c + b));
                    av += acc.raw();
                    a.at(c + s, c + b) = nonempty ? F.reduce(av) : elem(F.residue(av));
                }
            }
        }
        // below-block solve against the fresh pivot block, fused with the
        // history accumulation: one fold plus one scaling product per entry
        KernelScope ks(Kernel::trsm);
        for (usize r = kb; r < wr; ++r) {
            for (usize s = 0; s < kb; ++s) {
                detail::FoldAcc acc(F, 0);
                i64 av = wat(r, s);
                for (usize t = 0; t < s; ++t)
                    acc.sub_product(a.at(h + r, c + t), a.at(c + t, c + s));
                av += acc.raw();
                const bool nonempty = hist || s > 0;
                elem v = nonempty ? F.reduce(av) : F.residue(av);
                a.at(h + r, c + s) = F.mul(v, piv[s].inverse);
            }
        }
    }
}

} // namespace detail

/// Tile-iterative LU of a square matrix with generic rank profile in the
/// right-looking, left-looking or Crout ordering. P = Q = identity, rank = n,
/// packed L\U in place. The three variants produce bit-identical factors and
/// differ only in when updates are applied, hence in their reduction counts
/// and task graphs. Parallel tasks follow the loop body of the chosen
/// variant; all products inside the loops are sequential kernels.
inline PluqResult pluq_fullrank(MatView a, FullRankVariant var, const GemmPolicy& pol = {},
                                unsigned wrk = 0) {
    if (a.rows != a.cols) throw DimMismatch("pluq_fullrank: square matrix expected");
    if (wrk) set_workers(wrk);
    const usize n = a.rows;
    PluqResult res;
    res.P = PermSeq(n);
    res.Q = PermSeq(n);
    res.rank = n;
    res.rank_revealing = false;
    if (n == 0) return res;
    usize k = var.k < 1 ? 1 : std::min(var.k, n);
    if (k == 1) {
        switch (var.kind) {
        case Looking::right: detail::fullrank_k1_right(a); break;
        case Looking::left: detail::fullrank_k1_left(a); break;
        case Looking::crout: crout_base(a); break;
        }
        return res;
    }
    switch (var.kind) {
    case Looking::right: detail::fullrank_blocked_right(a, k, pol); break;
    case Looking::left: detail::fullrank_blocked_left(a, k, pol); break;
    case Looking::crout: detail::fullrank_blocked_crout(a, k, pol); break;
    }
    return res;
}

// ---------------------------------------------------------------------------
// Task-graph description (structure only, used to reason about parallelism)

struct TileRange {
    usize r0, r1, c0, c1;
    bool overlaps(const TileRange& o) const {
        return r0 < o.r1 && o.r0 < r1 && c0 < o.c1 && o.c0 < c1;
    }
};

struct TaskDesc {
    Kernel kind;
    std::string name;
    std::vector<TileRange> reads;
    std::vector<TileRange> writes;
    std::vector<usize> deps; // indices of earlier tasks in the same iteration
};

struct IterationTasks {
    std::vector<TaskDesc> tasks;
};

/// Kernel tasks and data dependencies per iteration of the chosen variant's
/// main loop; requires k | n. Dependencies are derived from read/write tile
/// intersections, so tests can assert e.g. that the right-looking update
/// products of one iteration are mutually independent.
inline std::vector<IterationTasks> variant_task_graph(Looking kind, usize n, usize k) {
    if (k < 1 || n % k != 0) throw InvalidBlock("variant_task_graph: need k | n");
    const usize q = n / k;
    std::vector<IterationTasks> iters;
    auto finalize_deps = [](IterationTasks& it) {
        for (usize t = 0; t < it.tasks.size(); ++t)
            for (usize s = 0; s < t; ++s) {
                bool dep = false;
                for (const auto& w : it.tasks[s].writes) {
                    for (const auto& r : it.tasks[t].reads)
                        if (w.overlaps(r)) dep = true;
                    for (const auto& w2 : it.tasks[t].writes)
                        if (w.overlaps(w2)) dep = true;
                }
                if (dep) it.tasks[t].deps.push_back(s);
            }
    };
    for (usize i = 1; i <= q; ++i) {
        IterationTasks it;
        const usize c = (i - 1) * k;
        const TileRange diag{c, c + k, c, c + k};
        switch (kind) {
        case Looking::right: {
            it.tasks.push_back({Kernel::pluq_base, "pluq", {diag}, {diag}, {}});
            for (usize b = c + k; b < n; b += k)
                it.tasks.push_back(
                    {Kernel::utrsm, "utrsm", {diag}, {{c, c + k, b, b + k}}, {}});
            for (usize b = c + k; b < n; b += k)
                it.tasks.push_back(
                    {Kernel::trsm, "trsm", {diag}, {{b, b + k, c, c + k}}, {}});
            for (usize b = c + k; b < n; b += k)
                it.tasks.push_back({Kernel::gemm,
                                    "gemm",
                                    {{c + k, n, c, c + k}, {c, c + k, b, b + k}},
                                    {{c + k, n, b, b + k}},
                                    {}});
            break;
        }
        case Looking::crout: {
            if (c > 0) {
                it.tasks.push_back({Kernel::gemm,
                                    "gemm",
                                    {{c, n, 0, c}, {0, c, c, c + k}},
                                    {{c, n, c, c + k}},
                                    {}});
                if (c + k < n)
                    it.tasks.push_back({Kernel::gemm,
                                        "gemm",
                                        {{c, c + k, 0, c}, {0, c, c + k, n}},
                                        {{c, c + k, c + k, n}},
                                        {}});
            }
            it.tasks.push_back({Kernel::pluq_base, "pluq", {diag}, {diag}, {}});
            if (c + k < n) {
                it.tasks.push_back(
                    {Kernel::utrsm, "utrsm", {diag}, {{c, c + k, c + k, n}}, {}});
                it.tasks.push_back(
                    {Kernel::trsm, "trsm", {diag}, {{c + k, n, c, c + k}}, {}});
            }
            break;
        }
        case Looking::left: {
            if (c > 0) {
                it.tasks.push_back({Kernel::utrsm,
                                    "utrsm",
                                    {{0, c, 0, c}},
                                    {{0, c, c, c + k}},
                                    {}});
                it.tasks.push_back({Kernel::gemm,
                                    "gemm",
                                    {{c, n, 0, c}, {0, c, c, c + k}},
                                    {{c, n, c, c + k}},
                                    {}});
            }
            it.tasks.push_back({Kernel::pluq_base, "pluq", {diag}, {diag}, {}});
            if (c + k < n)
                it.tasks.push_back(
                    {Kernel::trsm, "trsm", {diag}, {{c + k, n, c, c + k}}, {}});
            break;
        }
        }
        finalize_deps(it);
        iters.push_back(std::move(it));
    }
    return iters;
}

} // namespace ffpluq
