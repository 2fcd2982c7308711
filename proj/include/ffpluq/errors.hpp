#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ffpluq {

struct ZeroDivision : std::runtime_error {
    ZeroDivision() : std::runtime_error("division by zero in Z/pZ") {}
};

struct CapacityError : std::runtime_error {
    explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

struct DimMismatch : std::runtime_error {
    explicit DimMismatch(const std::string& what) : std::runtime_error(what) {}
};

struct EmptyMatrix : std::runtime_error {
    EmptyMatrix() : std::runtime_error("operation on an empty matrix") {}
};

/// Raised by the full-rank eliminations when a diagonal pivot vanishes,
/// i.e. the generic-rank-profile precondition does not hold.
struct ZeroPivot : std::runtime_error {
    std::size_t step;
    explicit ZeroPivot(std::size_t s)
        : std::runtime_error("zero pivot at elimination step " + std::to_string(s)), step(s) {}
};

struct SingularDiagonal : std::runtime_error {
    std::size_t index;
    explicit SingularDiagonal(std::size_t i)
        : std::runtime_error("zero diagonal entry " + std::to_string(i) + " in triangular solve"),
          index(i) {}
};

struct NotRankRevealing : std::runtime_error {
    NotRankRevealing()
        : std::runtime_error("rank profiles require a factorization with rotation pivoting") {}
};

struct InvalidBlock : std::runtime_error {
    explicit InvalidBlock(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidDim : std::runtime_error {
    explicit InvalidDim(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidRank : std::runtime_error {
    explicit InvalidRank(const std::string& what) : std::runtime_error(what) {}
};

struct BadFormat : std::runtime_error {
    explicit BadFormat(const std::string& what) : std::runtime_error(what) {}
};

} // namespace ffpluq
