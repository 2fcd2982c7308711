#include <gtest/gtest.h>

#include <sstream>

#include "test_util.hpp"

using namespace ffpluq;
using ffpluq::testing::mat_of;
using ffpluq::testing::random_mat;

TEST(Split, Quadrants) {
    PrimeField F(5);
    Mat a = random_mat(F, 4, 4, 1);
    auto q = split(a.view(), SplitMode::quadrants);
    ASSERT_EQ(q.size(), 4u);
    for (const auto& v : q) {
        EXPECT_EQ(v.rows, 2u);
        EXPECT_EQ(v.cols, 2u);
    }
    EXPECT_EQ(q[0].at(0, 0), a.at(0, 0));
    EXPECT_EQ(q[3].at(1, 1), a.at(3, 3));
}

TEST(Split, RaggedRowSlabs) {
    PrimeField F(5);
    Mat a = random_mat(F, 5, 5, 2);
    auto s = split(a.view(), SplitMode::row_slabs, 2);
    ASSERT_EQ(s.size(), 3u);
    EXPECT_EQ(s[0].rows, 2u);
    EXPECT_EQ(s[1].rows, 2u);
    EXPECT_EQ(s[2].rows, 1u);
}

TEST(Split, TileSizeClamped) {
    PrimeField F(5);
    Mat a = random_mat(F, 3, 3, 3);
    auto t = split(a.view(), SplitMode::tiles, 4);
    ASSERT_EQ(t.size(), 1u);
    EXPECT_EQ(t[0].rows, 3u);
    EXPECT_EQ(t[0].cols, 3u);
}

TEST(Split, EmptyMatrixRejected) {
    PrimeField F(5);
    Mat a(0, 3, F);
    EXPECT_THROW(split(a.view(), SplitMode::quadrants), EmptyMatrix);
}

TEST(Views, AliasParentExactly) {
    PrimeField F(7);
    Mat a(6, 6, F);
    a.view().fill(1);
    MatView tile = a.view().subview(2, 3, 2, 2);
    tile.fill(5);
    usize changed = 0;
    for (usize i = 0; i < 6; ++i)
        for (usize j = 0; j < 6; ++j)
            if (a.at(i, j) == 5) {
                ++changed;
                EXPECT_GE(i, 2u);
                EXPECT_LT(i, 4u);
                EXPECT_GE(j, 3u);
                EXPECT_LT(j, 5u);
            }
    EXPECT_EQ(changed, 4u);
}

TEST(Perm, SwapRows) {
    PrimeField F(7);
    Mat a = mat_of(F, {{1, 2}, {3, 4}, {5, 6}});
    PermSeq p(3);
    p.push_swap(0, 2);
    apply_perm(p, a.view(), Axis::rows);
    EXPECT_EQ(a, mat_of(F, {{5, 6}, {3, 4}, {1, 2}}));
}

TEST(Perm, RotRows) {
    PrimeField F(7);
    Mat a = mat_of(F, {{1, 2}, {3, 4}, {5, 6}});
    PermSeq p(3);
    p.push_rot(0, 2);
    apply_perm(p, a.view(), Axis::rows);
    EXPECT_EQ(a, mat_of(F, {{5, 6}, {1, 2}, {3, 4}}));
}

TEST(Perm, EmptyMoveListIsIdentity) {
    PrimeField F(7);
    Mat a = mat_of(F, {{1, 2}, {3, 4}, {5, 6}});
    Mat b = a;
    apply_perm(PermSeq(3), a.view(), Axis::rows);
    EXPECT_EQ(a, b);
}

TEST(Perm, ForwardThenInverseRestores) {
    PrimeField F(65521);
    SplitMix64 rng(11);
    for (int t = 0; t < 50; ++t) {
        Mat a = random_mat(F, 7, 5, 100 + t);
        Mat orig = a;
        PermSeq p(7);
        for (int mv = 0; mv < 8; ++mv) {
            usize i = rng.below(7), j = rng.below(7);
            if (i > j) std::swap(i, j);
            if (rng.below(2))
                p.push_swap(i, j);
            else
                p.push_rot(i, j);
        }
        apply_perm(p, a.view(), Axis::rows);
        apply_perm(p, a.view(), Axis::rows, Dir::inverse);
        EXPECT_EQ(a, orig);
    }
}

TEST(Perm, ArrayRoundTrip) {
    SplitMix64 rng(5);
    for (int t = 0; t < 100; ++t) {
        usize n = 1 + rng.below(12);
        PermSeq p(n);
        for (int mv = 0; mv < 6; ++mv) {
            usize i = rng.below(n), j = rng.below(n);
            if (i > j) std::swap(i, j);
            if (rng.below(2))
                p.push_swap(i, j);
            else
                p.push_rot(i, j);
        }
        auto arr = p.to_array();
        EXPECT_EQ(PermSeq::from_array(arr).to_array(), arr);
    }
}

TEST(Perm, RotPreservesRelativeOrder) {
    // applying Rot(i,j) to (0..n-1): dropping the moved value j leaves an
    // increasing sequence
    const usize n = 9;
    for (usize i = 0; i < n; ++i)
        for (usize j = i; j < n; ++j) {
            PermSeq p(n);
            p.push_rot(i, j);
            auto arr = p.to_array();
            std::vector<u32> rest;
            for (u32 v : arr)
                if (v != j) rest.push_back(v);
            EXPECT_TRUE(std::is_sorted(rest.begin(), rest.end()));
        }
}

TEST(Perm, RotBlockMatchesBlockRotate) {
    PrimeField F(65521);
    Mat a = random_mat(F, 10, 4, 3);
    Mat b = a;
    PermSeq p(10);
    p.push_rot_block(2, 6, 3); // rows 6,7,8 move in front of rows 2..5
    apply_perm(p, a.view(), Axis::rows);
    rotate_rows_block(b.view(), 2, 6, 3);
    EXPECT_EQ(a, b);
}

TEST(Perm, ComposeIdentity) {
    PermSeq id4(4);
    auto c = perm_compose(id4, PermSeq(4), 0);
    EXPECT_TRUE(c.is_identity());
}

TEST(Perm, ComposeEmbedShiftsIndices) {
    PermSeq id6(6);
    PermSeq inner(4);
    inner.push_swap(0, 1);
    auto c = perm_compose(id6, inner, 2);
    std::vector<u32> want{0, 1, 3, 2, 4, 5};
    EXPECT_EQ(c.to_array(), want);
}

TEST(Perm, ComposeMatchesDensePermutationProduct) {
    // agreement with multiplication of 0/1 permutation matrices
    PrimeField F(5);
    SplitMix64 rng(17);
    for (int t = 0; t < 40; ++t) {
        const usize n = 6;
        auto rand_perm = [&](usize sz) {
            PermSeq p(sz);
            for (int mv = 0; mv < 5; ++mv) {
                usize i = rng.below(sz), j = rng.below(sz);
                if (i > j) std::swap(i, j);
                if (rng.below(2))
                    p.push_swap(i, j);
                else
                    p.push_rot(i, j);
            }
            return p;
        };
        PermSeq outer = rand_perm(n);
        usize at = rng.below(3);
        PermSeq inner = rand_perm(n - at);
        auto composed = perm_compose(outer, inner, at);

        auto as_matrix = [&](const std::vector<u32>& arr) {
            Mat P(n, n, F);
            // row i of the permuted identity picks original index arr[i]
            for (usize i = 0; i < n; ++i) P.at(i, arr[i]) = 1;
            return P;
        };
        std::vector<u32> inner_full(n);
        std::iota(inner_full.begin(), inner_full.end(), 0);
        {
            auto ia = inner.to_array();
            for (usize i = 0; i < ia.size(); ++i) inner_full[at + i] = u32(ia[i] + at);
        }
        Mat Pi = as_matrix(inner_full);
        Mat Po = as_matrix(outer.to_array());
        Mat prod = naive_gemm(Po.view(), Pi.view()); // outer after inner
        EXPECT_EQ(as_matrix(composed.to_array()), prod);
    }
}

TEST(Perm, DimMismatchRejected) {
    PrimeField F(5);
    Mat a = random_mat(F, 3, 4, 9);
    PermSeq p(4);
    EXPECT_THROW(apply_perm(p, a.view(), Axis::rows), DimMismatch);
    apply_perm(p, a.view(), Axis::cols); // matches the column count
}

TEST(Zpm, RoundTripBitExact) {
    PrimeField F(131071);
    Mat a = random_mat(F, 9, 13, 21);
    std::stringstream ss;
    write_zpm(ss, a.view());
    Mat b = read_zpm(ss);
    EXPECT_EQ(a, b);
    std::stringstream s2;
    write_zpm(s2, b.view());
    std::stringstream s3;
    write_zpm(s3, a.view());
    EXPECT_EQ(s2.str(), s3.str());
}

TEST(Zpm, RejectsBadInput) {
    std::stringstream bad1("2 2");
    EXPECT_THROW(read_zpm(bad1), BadFormat);
    std::stringstream bad2("2 2 5\n1 2\n3");
    EXPECT_THROW(read_zpm(bad2), BadFormat);
    std::stringstream bad3("1 1 5\n7\n");
    EXPECT_THROW(read_zpm(bad3), BadFormat); // not a canonical residue
}

TEST(Checksum, SensitiveToContent) {
    PrimeField F(5);
    Mat a = random_mat(F, 4, 4, 1);
    Mat b = a;
    EXPECT_EQ(checksum(a.view()), checksum(b.view()));
    b.at(2, 2) = F.add(b.at(2, 2), 1);
    EXPECT_NE(checksum(a.view()), checksum(b.view()));
}
