#include <gtest/gtest.h>

#include "test_util.hpp"

using namespace ffpluq;
using ffpluq::testing::mat_of;

namespace {

struct NamedVariant {
    RRVariant v;
    const char* name;
    bool col_profile_claimed;
};

const NamedVariant kVariants[] = {
    {{RRKind::base_crout, 0, 0}, "base", true},
    {{RRKind::slab_recursive, 0, 2}, "slab-rec", false},
    {{RRKind::tile_recursive, 0, 2}, "tile-rec", true},
    {{RRKind::slab_iterative, 3, 0}, "slab-iter", true},
    {{RRKind::tile_iterative, 3, 0}, "tile-iter", true},
};

Mat rank2_example(const PrimeField& F) {
    // row 1 = 2*row 0 and col 2 = 2*col 1: rank 2, profiles ({0,2},{0,1})
    return mat_of(F, {{0, 1, 2}, {0, 2, 4}, {1, 0, 0}});
}

} // namespace

TEST(RrBase, ZeroMatrix) {
    PrimeField F(5);
    for (auto [m, n] : {std::pair<usize, usize>{3, 3}, {1, 4}, {5, 2}}) {
        Mat a(m, n, F);
        auto res = rr_base(a.view());
        EXPECT_EQ(res.rank, 0u);
        EXPECT_TRUE(res.P.is_identity());
        EXPECT_TRUE(res.Q.is_identity());
        auto prof = extract_profiles(res);
        EXPECT_TRUE(prof.rows.empty());
        EXPECT_TRUE(prof.cols.empty());
    }
}

TEST(RrBase, Identity) {
    PrimeField F(131071);
    const usize n = 6;
    Mat a(n, n, F);
    for (usize i = 0; i < n; ++i) a.at(i, i) = 1;
    Mat orig = a;
    auto res = rr_base(a.view());
    EXPECT_EQ(res.rank, n);
    auto prof = extract_profiles(res);
    for (usize i = 0; i < n; ++i) {
        EXPECT_EQ(prof.rows[i], i);
        EXPECT_EQ(prof.cols[i], i);
    }
    EXPECT_EQ(reconstruct(a.view(), res), orig);
}

TEST(RrBase, Rank2Example) {
    PrimeField F(5);
    Mat a = rank2_example(F);
    Mat orig = a;
    auto res = rr_base(a.view());
    EXPECT_EQ(res.rank, 2u);
    auto prof = extract_profiles(res);
    EXPECT_EQ(prof.rows, (std::vector<u32>{0, 2}));
    EXPECT_EQ(prof.cols, (std::vector<u32>{0, 1}));
    EXPECT_EQ(reconstruct(a.view(), res), orig);
}

TEST(RrBase, SingleEntry) {
    PrimeField F(5);
    Mat a(4, 4, F);
    a.at(2, 3) = 3;
    Mat orig = a;
    auto res = rr_base(a.view());
    EXPECT_EQ(res.rank, 1u);
    auto prof = extract_profiles(res);
    EXPECT_EQ(prof.rows, (std::vector<u32>{2}));
    EXPECT_EQ(prof.cols, (std::vector<u32>{3}));
    EXPECT_EQ(reconstruct(a.view(), res), orig);
}

TEST(RankRevealing, OracleBattery) {
    u64 seed = 1;
    for (u64 p : {2ull, 3ull, 5ull, 65521ull, 131071ull}) {
        PrimeField F(p);
        SplitMix64 rng(p);
        for (int t = 0; t < 8; ++t) {
            const usize n = 1 + rng.below(26), m = 1 + rng.below(26);
            const usize mn = std::min(n, m);
            const usize rank = rng.below(mn + 1);
            auto g = generate_matrix(n, m, rank, F, seed++);
            auto want = naive_rank_profiles(g.A.view());
            ASSERT_EQ(want, g.intended) << "generator vs oracle p=" << p;
            for (const auto& nv : kVariants) {
                Mat a = g.A;
                auto res = pluq_rank_revealing(a.view(), nv.v);
                ASSERT_EQ(res.rank, rank) << nv.name << " p=" << p << " n=" << n << " m=" << m;
                ASSERT_EQ(reconstruct(a.view(), res), g.A)
                    << nv.name << " p=" << p << " n=" << n << " m=" << m << " r=" << rank;
                auto prof = extract_profiles(res);
                ASSERT_EQ(prof.rows, want.rows) << nv.name << " p=" << p;
                if (nv.col_profile_claimed) ASSERT_EQ(prof.cols, want.cols) << nv.name;
            }
        }
    }
}

TEST(RankRevealing, VariantsAgreeOnProfiles) {
    PrimeField F(65521);
    u64 seed = 400;
    for (int t = 0; t < 12; ++t) {
        SplitMix64 rng(seed);
        const usize n = 4 + rng.below(28), m = 4 + rng.below(28);
        const usize rank = rng.below(std::min(n, m) + 1);
        auto g = generate_matrix(n, m, rank, F, seed++);
        RankProfiles ref;
        bool have_ref = false;
        for (const auto& nv : kVariants) {
            Mat a = g.A;
            auto prof = extract_profiles(pluq_rank_revealing(a.view(), nv.v));
            if (!have_ref) {
                ref = prof;
                have_ref = true;
            } else {
                EXPECT_EQ(prof.rows, ref.rows) << nv.name;
                EXPECT_EQ(prof.rank, ref.rank) << nv.name;
                if (nv.col_profile_claimed) EXPECT_EQ(prof.cols, ref.cols) << nv.name;
            }
        }
    }
}

TEST(TileRecursive, ThresholdInvariance) {
    PrimeField F(131071);
    auto g = generate_matrix(64, 64, 48, F, 777);
    RankProfiles ref;
    bool have = false;
    for (usize thr : {1, 4, 16}) {
        Mat a = g.A;
        auto res = pluq_tile_recursive(a.view(), thr);
        EXPECT_EQ(reconstruct(a.view(), res), g.A) << "thr=" << thr;
        auto prof = extract_profiles(res);
        if (!have) {
            ref = prof;
            have = true;
        } else {
            EXPECT_EQ(prof, ref) << "thr=" << thr;
        }
    }
    EXPECT_EQ(ref, naive_rank_profiles(g.A.view()));
}

TEST(TileRecursive, Rank2ExampleMatchesBase) {
    PrimeField F(5);
    Mat a = rank2_example(F);
    auto res = pluq_tile_recursive(a.view(), 1);
    auto prof = extract_profiles(res);
    EXPECT_EQ(prof.rows, (std::vector<u32>{0, 2}));
    EXPECT_EQ(prof.cols, (std::vector<u32>{0, 1}));
}

TEST(SlabRecursive, RowProfileOnRectangles) {
    PrimeField F(65521);
    u64 seed = 900;
    for (int t = 0; t < 6; ++t) {
        auto g = generate_matrix(32, 48, 20, F, seed++);
        Mat a = g.A;
        auto res = pluq_slab_recursive(a.view(), 2);
        EXPECT_EQ(res.rank, 20u);
        EXPECT_EQ(reconstruct(a.view(), res), g.A);
        EXPECT_EQ(extract_profiles(res).rows, g.intended.rows);
    }
}

TEST(SlabIterative, DegeneratesToBaseWhenKCoversMatrix) {
    PrimeField F(5);
    Mat a = rank2_example(F);
    Mat b = a;
    auto r1 = pluq_slab_iterative(a.view(), 8);
    auto r2 = rr_base(b.view());
    EXPECT_EQ(a, b);
    EXPECT_EQ(extract_profiles(r1), extract_profiles(r2));
}

TEST(SlabIterative, K1AndZeroSlabs) {
    PrimeField F(5);
    {
        Mat a = rank2_example(F);
        Mat orig = a;
        auto res = pluq_slab_iterative(a.view(), 1);
        auto prof = extract_profiles(res);
        EXPECT_EQ(prof.rows, (std::vector<u32>{0, 2}));
        EXPECT_EQ(prof.cols, (std::vector<u32>{0, 1}));
        EXPECT_EQ(reconstruct(a.view(), res), orig);
    }
    {
        // middle slab eliminates to zero (row1 = 2*row0 mod 5): it
        // contributes no pivots and the dynamic column start stays put
        Mat dep = mat_of(F, {{1, 2, 3}, {2, 4, 1}, {0, 3, 1}});
        Mat orig = dep;
        auto res = pluq_slab_iterative(dep.view(), 1);
        EXPECT_EQ(res.rank, 2u);
        auto prof = extract_profiles(res);
        EXPECT_EQ(prof.rows, (std::vector<u32>{0, 2}));
        EXPECT_EQ(reconstruct(dep.view(), res), orig);
    }
}

TEST(TileIterative, OracleProfilesSmallK) {
    PrimeField F(5);
    Mat a = rank2_example(F);
    Mat orig = a;
    auto res = pluq_tile_iterative(a.view(), 1);
    auto prof = extract_profiles(res);
    EXPECT_EQ(prof.rows, (std::vector<u32>{0, 2}));
    EXPECT_EQ(prof.cols, (std::vector<u32>{0, 1}));
    EXPECT_EQ(reconstruct(a.view(), res), orig);
}

TEST(TileIterative, LowRankDeficiencyShape) {
    // n=64 with rank 56, the low-deficiency regime, block width 8
    PrimeField F(131071);
    auto g = generate_matrix(64, 64, 56, F, 4242);
    Mat a = g.A;
    auto res = pluq_tile_iterative(a.view(), 8);
    EXPECT_EQ(res.rank, 56u);
    EXPECT_EQ(reconstruct(a.view(), res), g.A);
    EXPECT_EQ(extract_profiles(res), naive_rank_profiles(g.A.view()));
}

TEST(Profiles, FullRankResultIsNotRankRevealing) {
    PrimeField F(131071);
    auto g = generate_matrix(8, 8, 8, F, 11);
    Mat a = g.A;
    auto res = pluq_fullrank(a.view(), {Looking::crout, 2});
    EXPECT_THROW(extract_profiles(res), NotRankRevealing);
}

TEST(RankRevealing, ParallelDeterminismWithDeficientTopLeft) {
    // rank < n/2 guarantees a deficient top-left quadrant, so the two middle
    // recursions actually run as sibling tasks
    PrimeField F(131071);
    auto g = generate_matrix(48, 48, 17, F, 555);
    struct Case {
        RRVariant v;
        const char* name;
    };
    for (Case c : {Case{{RRKind::tile_recursive, 0, 4}, "tile-rec"},
                   Case{{RRKind::slab_iterative, 8, 0}, "slab-iter"},
                   Case{{RRKind::tile_iterative, 8, 0}, "tile-iter"}}) {
        Mat ref;
        RedLedger refled;
        for (unsigned w : {1u, 2u, 4u, 8u}) {
            Mat a = g.A;
            set_workers(w);
            CountSession s;
            auto res = pluq_rank_revealing(a.view(), c.v);
            EXPECT_EQ(res.rank, 17u);
            if (w == 1) {
                ref = a;
                refled = s.ledger();
            } else {
                ASSERT_EQ(a, ref) << c.name << " w=" << w;
                ASSERT_EQ(s.ledger(), refled) << c.name << " w=" << w;
            }
        }
    }
    set_workers(1);
}

TEST(RankRevealing, PackedLayoutHasZeroTrailingBlock) {
    PrimeField F(65521);
    auto g = generate_matrix(20, 24, 9, F, 31);
    for (const auto& nv : kVariants) {
        Mat a = g.A;
        auto res = pluq_rank_revealing(a.view(), nv.v);
        const usize r = res.rank;
        for (usize i = r; i < 20; ++i)
            for (usize j = r; j < 24; ++j)
                ASSERT_EQ(a.at(i, j), 0u) << nv.name << " at " << i << "," << j;
    }
}
