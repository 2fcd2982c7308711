#pragma once

#include <cstdint>
#include <string>

namespace ffpluq {

/// Kernel families the reduction counters are attributed to.
enum class Kernel : int { gemm = 0, trsm = 1, utrsm = 2, pluq_base = 3, other = 4 };

/// Additive counters of modular reductions, one slot per kernel family.
///
/// Counting model (shared by every kernel in this library):
///   - folding a delayed accumulator back to a canonical residue: 1
///   - a product of two residues (including scaling by a pivot inverse): 1
///   - an explicit inverse via inv(): 1
///   - add/sub/neg by conditional correction: 0
///   - normalizing+inverting a divisor from its accumulator (prep): 0 — the
///     cost sits on the per-entry scaling products, which matches the
///     triangular-solve counts (2m-1)n exactly.
struct RedLedger {
    std::uint64_t gemm = 0;
    std::uint64_t trsm = 0;
    std::uint64_t utrsm = 0;
    std::uint64_t pluq_base = 0;
    std::uint64_t other = 0;

    std::uint64_t total() const { return gemm + trsm + utrsm + pluq_base + other; }

    void add(Kernel k, std::uint64_t n) {
        switch (k) {
        case Kernel::gemm: gemm += n; break;
        case Kernel::trsm: trsm += n; break;
        case Kernel::utrsm: utrsm += n; break;
        case Kernel::pluq_base: pluq_base += n; break;
        case Kernel::other: other += n; break;
        }
    }

    /// Componentwise sum; commutative and associative, so merge order at task
    /// joins never changes the result.
    void merge(const RedLedger& o) {
        gemm += o.gemm;
        trsm += o.trsm;
        utrsm += o.utrsm;
        pluq_base += o.pluq_base;
        other += o.other;
    }

    bool operator==(const RedLedger& o) const = default;

    /// CSV fragment, column order `red_total,red_gemm,red_trsm,red_utrsm,red_base`.
    std::string csv() const {
        return std::to_string(total()) + "," + std::to_string(gemm) + "," + std::to_string(trsm) +
               "," + std::to_string(utrsm) + "," + std::to_string(pluq_base);
    }
};

namespace detail {

struct LedgerTls {
    RedLedger* sink = nullptr;
    Kernel tag = Kernel::other;
};

inline LedgerTls& ledger_tls() {
    thread_local LedgerTls tls;
    return tls;
}

} // namespace detail

inline void count_reductions(std::uint64_t n) {
    auto& tls = detail::ledger_tls();
    if (tls.sink) tls.sink->add(tls.tag, n);
}

inline void count_reduction() { count_reductions(1); }

/// Scoped kernel attribution for counters recorded on this thread.
class KernelScope {
public:
    explicit KernelScope(Kernel k) : saved_(detail::ledger_tls().tag) {
        detail::ledger_tls().tag = k;
    }
    ~KernelScope() { detail::ledger_tls().tag = saved_; }
    KernelScope(const KernelScope&) = delete;
    KernelScope& operator=(const KernelScope&) = delete;

private:
    Kernel saved_;
};

/// Routes this thread's counters into `sink` for the scope's lifetime.
/// Task spawning re-targets workers explicitly, see pool.hpp.
class LedgerScope {
public:
    explicit LedgerScope(RedLedger* sink) : saved_(detail::ledger_tls().sink) {
        detail::ledger_tls().sink = sink;
    }
    ~LedgerScope() { detail::ledger_tls().sink = saved_; }
    LedgerScope(const LedgerScope&) = delete;
    LedgerScope& operator=(const LedgerScope&) = delete;

private:
    RedLedger* saved_;
};

/// Collects every reduction performed between construction and ledger().
///
///     CountSession s;
///     pluq_fullrank(...);
///     RedLedger measured = s.ledger();
class CountSession {
public:
    CountSession() : scope_(&ledger_) {}
    const RedLedger& ledger() const { return ledger_; }

private:
    RedLedger ledger_;
    LedgerScope scope_;
};

} // namespace ffpluq
