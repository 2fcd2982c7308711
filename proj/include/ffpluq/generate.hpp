#pragma once

#include "ffpluq/pluq.hpp"

namespace ffpluq {

/// SplitMix64: the fixed counter-based generator behind every seeded input.
/// The generator identity is part of the reproducibility contract — same
/// seed, same matrix, on any platform.
struct SplitMix64 {
    u64 state;
    explicit SplitMix64(u64 seed) : state(seed) {}

    u64 next() {
        u64 z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, bound); bound <= 2^26 here, so the modulo bias is
    /// far below anything observable and determinism is what matters.
    u64 below(u64 bound) { return bound ? next() % bound : 0; }
};

struct GeneratedMatrix {
    Mat A;
    RankProfiles intended;
};

namespace detail {

inline std::vector<u32> sorted_subset(SplitMix64& rng, usize dim, usize count) {
    std::vector<u32> all(dim);
    std::iota(all.begin(), all.end(), 0);
    for (usize i = dim; i > 1; --i) std::swap(all[i - 1], all[rng.below(i)]);
    all.resize(count);
    std::sort(all.begin(), all.end());
    return all;
}

} // namespace detail

/// Random n x m matrix of the requested rank with uniformly distributed
/// independent rows R and columns C: A = X * Y where X restricted to rows R
/// is unit lower triangular (random below the diagonal) and every other row
/// is a random combination of the X columns already introduced above it;
/// Y restricted to columns C is upper triangular with nonzero diagonal, every
/// other column a combination of the Y rows introduced to its left. The
/// intended profiles are exactly (R, C); rank = min gives a matrix with
/// generic rank profile.
inline GeneratedMatrix generate_matrix(usize n, usize m, usize rank, const PrimeField& F,
                                       u64 seed) {
    if (rank > std::min(n, m)) throw InvalidRank("generate_matrix: rank exceeds min(n, m)");
    SplitMix64 rng(seed);
    const u64 p = F.p;
    const auto R = detail::sorted_subset(rng, n, rank);
    const auto C = detail::sorted_subset(rng, m, rank);

    Mat X(n, rank, F), Y(rank, m, F);
    {
        usize t = 0; // count of R-members before row i
        for (usize i = 0; i < n; ++i) {
            const bool is_pivot = t < rank && R[t] == i;
            for (usize u = 0; u < t; ++u) X.at(i, u) = elem(rng.below(p));
            if (is_pivot) {
                X.at(i, t) = 1;
                ++t;
            }
        }
    }
    {
        usize t = 0;
        for (usize j = 0; j < m; ++j) {
            const bool is_pivot = t < rank && C[t] == j;
            for (usize u = 0; u < t; ++u) Y.at(u, j) = elem(rng.below(p));
            if (is_pivot) {
                Y.at(t, j) = elem(1 + rng.below(p - 1)); // nonzero diagonal
                ++t;
            }
        }
    }

    GeneratedMatrix out{Mat(n, m, F), {}};
    // plain product, kept independent of the instrumented kernels
    for (usize i = 0; i < n; ++i)
        for (usize j = 0; j < m; ++j) {
            u64 v = 0;
            for (usize u = 0; u < rank; ++u) v = (v + u64(X.at(i, u)) * Y.at(u, j)) % p;
            out.A.at(i, j) = elem(v);
        }
    out.intended.rows = R;
    out.intended.cols = C;
    out.intended.rank = rank;
    return out;
}

} // namespace ffpluq
