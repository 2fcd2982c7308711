#pragma once

#include <cstdint>

#include "ffpluq/errors.hpp"
#include "ffpluq/ledger.hpp"

namespace ffpluq {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;
using usize = std::size_t;

/// Canonical residue in [0, p). p < 2^26, so residues fit u32 and any product
/// of two residues fits the low 52 bits of an i64 accumulator.
using elem = u32;

inline bool is_prime_u64(u64 n) {
    if (n < 2) return false;
    for (u64 d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

/// Largest n with n*(p-1)^2 <= 2^acc_bits - 1: the number of residue products
/// one exact accumulator of acc_bits usable bits can absorb before a fold.
inline u64 max_delay(u64 p, int acc_bits) {
    if (p < 2 || acc_bits < 2 || acc_bits > 62)
        throw CapacityError("max_delay: need p >= 2 and 2 <= acc_bits <= 62");
    const u64 cap = (u64(1) << acc_bits) - 1;
    const u64 d = (p - 1) * (p - 1);
    if (d > cap) throw CapacityError("max_delay: a single product already overflows");
    return cap / d;
}

/// Arithmetic context for Z/pZ with the delayed-reduction capacity n_star.
/// Immutable after construction, safe to share across tasks.
struct PrimeField {
    u64 p = 2;
    int acc_bits = 53;
    u64 n_star = 0;        // max products per delayed accumulation
    u64 n_star_seeded = 0; // same, with one extra residue-sized seed term

    PrimeField() { *this = PrimeField(2); }

    explicit PrimeField(u64 modulus, int bits = 53) : p(modulus), acc_bits(bits) {
        if (p < 2 || p >= (u64(1) << 26)) throw CapacityError("modulus must satisfy 2 <= p < 2^26");
        if (!is_prime_u64(p)) throw CapacityError("modulus is not prime");
        n_star = max_delay(p, acc_bits); // throws CapacityError when even n=1 overflows
        const u64 cap = (u64(1) << acc_bits) - 1;
        const u64 d = (p - 1) * (p - 1);
        n_star_seeded = (cap - (p - 1)) / d;
    }

    bool operator==(const PrimeField& o) const { return p == o.p && acc_bits == o.acc_bits; }

    elem add(elem a, elem b) const {
        u64 s = u64(a) + b;
        if (s >= p) s -= p;
        return elem(s);
    }

    elem sub(elem a, elem b) const {
        return a >= b ? elem(a - b) : elem(a + p - b);
    }

    elem neg(elem a) const { return a == 0 ? 0 : elem(p - a); }

    elem mul(elem a, elem b) const {
        count_reduction();
        return elem((u64(a) * b) % p);
    }

    /// Fold a delayed accumulator back to its canonical residue.
    elem reduce(i64 acc) const {
        count_reduction();
        i64 r = acc % i64(p);
        if (r < 0) r += i64(p);
        return elem(r);
    }

    /// Residue of an accumulator without touching the counters; used only by
    /// divisor preparation, whose cost is carried by the scaling products.
    elem residue(i64 acc) const {
        i64 r = acc % i64(p);
        if (r < 0) r += i64(p);
        return elem(r);
    }

    elem inv_uncounted(elem a) const {
        if (a == 0) throw ZeroDivision();
        // extended Euclid on (a, p)
        i64 t = 0, newt = 1;
        i64 r = i64(p), newr = i64(a);
        while (newr != 0) {
            i64 q = r / newr;
            i64 tmp = t - q * newt;
            t = newt;
            newt = tmp;
            tmp = r - q * newr;
            r = newr;
            newr = tmp;
        }
        if (t < 0) t += i64(p);
        return elem(t);
    }

    elem inv(elem a) const {
        count_reduction();
        return inv_uncounted(a);
    }

    elem div(elem a, elem b) const { return mul(a, inv_uncounted(b)); }
};

/// Canonical residue plus inverse of a pivot/diagonal entry, produced straight
/// from the entry's accumulator.
struct PreppedDivisor {
    elem value = 0;
    elem inverse = 0;
    bool zero = true;
};

inline PreppedDivisor prep_divisor(const PrimeField& F, i64 acc) {
    PreppedDivisor d;
    d.value = F.residue(acc);
    d.zero = (d.value == 0);
    if (!d.zero) d.inverse = F.inv_uncounted(d.value);
    return d;
}

/// Exact signed accumulator with the term budget of its field.
struct Accumulator {
    i64 value = 0;
    u64 terms = 0;

    void clear() { value = 0; terms = 0; }

    /// value += a*b; caller keeps terms <= n_star (checked here).
    void madd(const PrimeField& F, elem a, elem b) {
        if (terms >= F.n_star) throw CapacityError("accumulator term budget exceeded");
        value += i64(u64(a) * b);
        ++terms;
    }

    void msub(const PrimeField& F, elem a, elem b) {
        if (terms >= F.n_star) throw CapacityError("accumulator term budget exceeded");
        value -= i64(u64(a) * b);
        ++terms;
    }

    elem reduce(const PrimeField& F) {
        elem r = F.reduce(value);
        value = r;
        terms = 0;
        return r;
    }
};

} // namespace ffpluq
