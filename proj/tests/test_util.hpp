#pragma once

#include <initializer_list>

#include "ffpluq/ffpluq.hpp"

namespace ffpluq::testing {

inline Mat mat_of(const PrimeField& F, std::initializer_list<std::initializer_list<u64>> rows) {
    const usize m = rows.size();
    const usize n = m ? rows.begin()->size() : 0;
    Mat a(m, n, F);
    usize i = 0;
    for (const auto& r : rows) {
        usize j = 0;
        for (u64 v : r) a.at(i, j++) = elem(v % F.p);
        ++i;
    }
    return a;
}

inline Mat random_mat(const PrimeField& F, usize m, usize n, u64 seed) {
    SplitMix64 rng(seed);
    Mat a(m, n, F);
    for (usize i = 0; i < m; ++i)
        for (usize j = 0; j < n; ++j) a.at(i, j) = elem(rng.below(F.p));
    return a;
}

} // namespace ffpluq::testing
