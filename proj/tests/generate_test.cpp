#include <gtest/gtest.h>

#include "test_util.hpp"

using namespace ffpluq;

TEST(Generate, FullRankForcesFullProfiles) {
    PrimeField F(131071);
    auto g = generate_matrix(9, 9, 9, F, 1);
    for (usize i = 0; i < 9; ++i) {
        EXPECT_EQ(g.intended.rows[i], i);
        EXPECT_EQ(g.intended.cols[i], i);
    }
    EXPECT_EQ(naive_rank_profiles(g.A.view()), g.intended);
}

TEST(Generate, FullRankIsGeneric) {
    // all leading principal minors nonzero: the unblocked elimination with no
    // pivoting must run to completion
    PrimeField F(65521);
    for (u64 seed = 0; seed < 10; ++seed) {
        auto g = generate_matrix(12, 12, 12, F, seed);
        EXPECT_NO_THROW(crout_base(g.A.view()));
    }
}

TEST(Generate, RankZeroIsZeroMatrix) {
    PrimeField F(5);
    auto g = generate_matrix(6, 4, 0, F, 3);
    EXPECT_EQ(g.A, Mat(6, 4, F));
    EXPECT_TRUE(g.intended.rows.empty());
}

TEST(Generate, IntendedProfilesMatchOracle) {
    u64 seed = 100;
    for (u64 p : {2ull, 5ull, 131071ull}) {
        PrimeField F(p);
        SplitMix64 rng(p + 1);
        for (int t = 0; t < 10; ++t) {
            usize n = 1 + rng.below(40), m = 1 + rng.below(40);
            usize rank = rng.below(std::min(n, m) + 1);
            auto g = generate_matrix(n, m, rank, F, seed++);
            ASSERT_EQ(naive_rank_profiles(g.A.view()), g.intended)
                << "p=" << p << " n=" << n << " m=" << m << " rank=" << rank;
        }
    }
}

TEST(Generate, SameSeedSameMatrix) {
    PrimeField F(131071);
    auto a = generate_matrix(20, 30, 13, F, 99);
    auto b = generate_matrix(20, 30, 13, F, 99);
    EXPECT_EQ(a.A, b.A);
    EXPECT_EQ(checksum(a.A.view()), checksum(b.A.view()));
    auto c = generate_matrix(20, 30, 13, F, 100);
    EXPECT_NE(a.A, c.A);
}

TEST(Generate, RankAboveMinRejected) {
    PrimeField F(5);
    EXPECT_THROW(generate_matrix(3, 5, 4, F, 1), InvalidRank);
}

TEST(Generate, DeskScaleLowDeficiencyShape) {
    // 1600 x 1600 of rank 1550; validated against the factorization profiles
    // (the prefix-rank oracle is far too slow at this size)
    PrimeField F(131071);
    auto g = generate_matrix(1600, 1600, 1550, F, 16);
    Mat a = g.A;
    auto res = pluq_tile_recursive(a.view(), 64);
    EXPECT_EQ(res.rank, 1550u);
    EXPECT_EQ(extract_profiles(res), g.intended);
}
