#pragma once

#include <numeric>

#include "ffpluq/errors.hpp"
#include "ffpluq/field.hpp"

namespace ffpluq {

enum class CountVariant { right_looking, left_looking, crout, tile_recursive, slab_recursive };

namespace detail {

/// Exact rational on __int128; thirds and sixths must cancel exactly.
struct Rat {
    __int128 num = 0;
    __int128 den = 1;

    static Rat of(i64 v) { return {v, 1}; }
    static Rat frac(i64 n, i64 d) {
        Rat r{n, d};
        r.norm();
        return r;
    }

    void norm() {
        if (den < 0) {
            den = -den;
            num = -num;
        }
        __int128 a = num < 0 ? -num : num, b = den;
        while (b) {
            __int128 t = a % b;
            a = b;
            b = t;
        }
        if (a > 1) {
            num /= a;
            den /= a;
        }
    }

    Rat operator+(const Rat& o) const {
        Rat r{num * o.den + o.num * den, den * o.den};
        r.norm();
        return r;
    }
    Rat operator-(const Rat& o) const {
        Rat r{num * o.den - o.num * den, den * o.den};
        r.norm();
        return r;
    }
    Rat operator*(const Rat& o) const {
        Rat r{num * o.num, den * o.den};
        r.norm();
        return r;
    }

    bool integral() const { return den == 1; }
};

inline u64 rat_to_count(const Rat& r, const char* what) {
    if (!r.integral() || r.num < 0)
        throw InvalidDim(std::string(what) + ": expression did not evaluate to a count");
    return u64(r.num);
}

inline bool is_pow2(u64 n) { return n && (n & (n - 1)) == 0; }

inline u32 log2_exact(u64 n) {
    u32 l = 0;
    while ((u64(1) << l) < n) ++l;
    return l;
}

} // namespace detail

/// Closed-form modular reduction counts for the full-rank factorization of an
/// n x n matrix. Iterative kinds take a block size k dividing n and use the
/// dedicated unblocked expressions at k = 1; recursive kinds need n a power
/// of two and ignore k.
inline u64 predicted_count(CountVariant v, u64 n, u64 k = 1) {
    using detail::Rat;
    if (n < 1) throw InvalidDim("predicted_count: n >= 1 required");
    const Rat N = Rat::of(i64(n));
    const Rat N2 = N * N;
    const Rat N3 = N2 * N;
    switch (v) {
    case CountVariant::right_looking:
    case CountVariant::left_looking:
    case CountVariant::crout: {
        if (k < 1 || k > n || n % k != 0)
            throw InvalidBlock("predicted_count: need 1 <= k <= n with k | n");
        const Rat K = Rat::of(i64(k));
        if (k == 1) {
            Rat r;
            if (v == CountVariant::right_looking)
                r = Rat::frac(1, 3) * N3 - Rat::frac(1, 3) * N;
            else if (v == CountVariant::left_looking)
                r = Rat::frac(3, 2) * N2 - Rat::frac(3, 2) * N + Rat::of(1);
            else
                r = Rat::frac(3, 2) * N2 - Rat::frac(7, 2) * N + Rat::of(3);
            return detail::rat_to_count(r, "predicted_count");
        }
        Rat r;
        if (v == CountVariant::right_looking) {
            r = Rat::frac(1, 3 * i64(k)) * N3 + (Rat::of(1) - Rat::frac(1, i64(k))) * N2 +
                (Rat::frac(i64(k), 6) - Rat::frac(5, 2) + Rat::frac(3, i64(k))) * N;
        } else if (v == CountVariant::left_looking) {
            r = (Rat::of(2) - Rat::frac(1, 2 * i64(k))) * N2 +
                (Rat::frac(-5 * i64(k), 2) - Rat::of(1) + Rat::frac(2, i64(k))) * N +
                Rat::of(2 * i64(k) * i64(k)) - Rat::of(2 * i64(k)) + Rat::of(1);
        } else {
            r = (Rat::frac(5, 2) - Rat::frac(1, i64(k))) * N2 +
                (Rat::of(-2 * i64(k)) - Rat::frac(5, 2) + Rat::frac(3, i64(k))) * N +
                K * K;
        }
        return detail::rat_to_count(r, "predicted_count");
    }
    case CountVariant::tile_recursive: {
        if (!detail::is_pow2(n)) throw InvalidDim("predicted_count: recursive kinds need n a power of two");
        const i64 lg = detail::log2_exact(n);
        Rat r = Rat::of(2) * N2 - Rat::of(lg) * N - N;
        return detail::rat_to_count(r, "predicted_count");
    }
    case CountVariant::slab_recursive: {
        if (!detail::is_pow2(n)) throw InvalidDim("predicted_count: recursive kinds need n a power of two");
        const i64 lg = detail::log2_exact(n);
        Rat r = (Rat::of(1) + Rat::frac(lg, 4)) * N2 - Rat::frac(lg, 2) * N - N;
        return detail::rat_to_count(r, "predicted_count");
    }
    }
    throw InvalidDim("predicted_count: unknown variant");
}

} // namespace ffpluq
