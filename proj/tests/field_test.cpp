#include <gtest/gtest.h>

#include "test_util.hpp"

using namespace ffpluq;

TEST(Field, BasicOps) {
    PrimeField F(5);
    EXPECT_EQ(F.add(3, 4), 2u);
    EXPECT_EQ(F.sub(1, 3), 3u);
    EXPECT_EQ(F.neg(0), 0u);
    EXPECT_EQ(F.neg(2), 3u);
    EXPECT_EQ(F.mul(0, 4), 0u);
    EXPECT_EQ(F.mul(3, 4), 2u);
}

TEST(Field, Reduce) {
    PrimeField F(5);
    EXPECT_EQ(F.reduce(23), 3u);
    EXPECT_EQ(F.reduce(-1), 4u);
    EXPECT_EQ(F.reduce(0), 0u);
}

TEST(Field, Inverse) {
    PrimeField F(5);
    EXPECT_EQ(F.inv(1), 1u);
    EXPECT_EQ(F.inv(3), 2u);
    EXPECT_THROW(F.inv(0), ZeroDivision);
    PrimeField F7(7);
    EXPECT_EQ(F7.inv(1), 1u);
}

TEST(Field, InverseInvolution) {
    // exhaustive for small primes
    for (u64 p : {2, 3, 5, 7, 11, 13, 31, 59, 97, 101}) {
        PrimeField F(p);
        for (elem a = 1; a < p; ++a) EXPECT_EQ(F.inv_uncounted(F.inv_uncounted(a)), a);
    }
}

TEST(Field, MaxDelay) {
    EXPECT_EQ(max_delay(2, 53), (u64(1) << 53) - 1);
    EXPECT_EQ(max_delay(131071, 53), 524304u); // floor((2^53-1)/131070^2)
    EXPECT_THROW(max_delay(3, 2), CapacityError);
}

TEST(Field, ConstructionValidation) {
    EXPECT_THROW(PrimeField(4), CapacityError);     // not prime
    EXPECT_THROW(PrimeField(1), CapacityError);     // below range
    EXPECT_THROW(PrimeField(1 << 26), CapacityError);
    PrimeField F(65521);
    EXPECT_EQ(F.n_star, ((u64(1) << 53) - 1) / (65520ull * 65520ull));
}

TEST(Field, ClosureRandomized) {
    for (u64 p : {2ull, 5ull, 65521ull, 131071ull}) {
        PrimeField F(p);
        SplitMix64 rng(p);
        for (int t = 0; t < 2000; ++t) {
            elem a = elem(rng.below(p)), b = elem(rng.below(p));
            EXPECT_LT(F.add(a, b), p);
            EXPECT_LT(F.sub(a, b), p);
            EXPECT_LT(F.neg(a), p);
            EXPECT_LT(F.mul(a, b), p);
        }
    }
}

TEST(Field, AccumulationSoundnessExhaustiveSmall) {
    // delayed sum reduced once vs term-by-term, all length-3 sequences over p=5
    PrimeField F(5);
    for (elem a0 = 0; a0 < 5; ++a0)
        for (elem b0 = 0; b0 < 5; ++b0)
            for (elem a1 = 0; a1 < 5; ++a1)
                for (elem b1 = 0; b1 < 5; ++b1)
                    for (elem a2 = 0; a2 < 5; ++a2)
                        for (elem b2 = 0; b2 < 5; ++b2) {
                            i64 acc = i64(u64(a0) * b0) + i64(u64(a1) * b1) + i64(u64(a2) * b2);
                            u64 ref = (u64(a0) * b0 + u64(a1) * b1 + u64(a2) * b2) % 5;
                            EXPECT_EQ(F.residue(acc), ref);
                        }
}

TEST(Field, AccumulationSoundnessAtCapacity) {
    PrimeField F(131071);
    SplitMix64 rng(7);
    const usize len = F.n_star;
    // randomized, plus the all-(p-1) worst case
    for (int trial = 0; trial < 2; ++trial) {
        Accumulator acc;
        u64 ref = 0;
        for (usize i = 0; i < len; ++i) {
            elem a = trial == 0 ? elem(F.p - 1) : elem(rng.below(F.p));
            elem b = trial == 0 ? elem(F.p - 1) : elem(rng.below(F.p));
            acc.madd(F, a, b);
            ref = (ref + u64(a) * b % F.p) % F.p;
        }
        EXPECT_LT(u64(acc.value < 0 ? -acc.value : acc.value), u64(1) << 53);
        EXPECT_EQ(acc.reduce(F), ref);
    }
}

TEST(Field, AccumulatorBudget) {
    PrimeField F(131071, 53);
    Accumulator acc;
    for (usize i = 0; i < F.n_star; ++i) acc.madd(F, elem(F.p - 1), elem(F.p - 1));
    EXPECT_THROW(acc.madd(F, 1, 1), CapacityError);
}

TEST(Field, ReductionCounting) {
    PrimeField F(5);
    CountSession s;
    F.mul(2, 3);
    F.add(4, 4);
    F.sub(1, 2);
    F.neg(3);
    F.reduce(17);
    F.inv(3);
    EXPECT_EQ(s.ledger().total(), 3u); // mul + reduce + inv; add/sub/neg free
}
