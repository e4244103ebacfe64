#pragma once

// Points of the Magnus trace-coordinate spaces C^(3n-3) and C^(4n-3).

#include <vector>

#include "sl2orbit/core.hpp"

namespace sl2orbit {

/// (z1, z2, z12, z3, z13, z23, ..., zn, z1n, z2n)
class TraceVector {
public:
    TraceVector() = default;
    /// Throws InvalidInput unless coords.size() == 3n - 3 with n >= 2 and
    /// every coordinate is finite.
    TraceVector(std::size_t n, std::vector<Complex> coords);

    static std::size_t length(std::size_t n) { return 3 * n - 3; }
    static std::size_t index_single(std::size_t j);
    /// Unordered pair; throws CoordinateUnavailable unless one index is 1 or 2.
    static std::size_t index_pair(std::size_t j, std::size_t k);
    static bool has_pair(std::size_t j, std::size_t k);

    std::size_t n() const { return n_; }
    const std::vector<Complex>& coords() const { return coords_; }
    Complex single(std::size_t j) const;
    Complex pair(std::size_t j, std::size_t k) const;

private:
    std::size_t n_ = 0;
    std::vector<Complex> coords_;
};

/// (z1, z11, z2, z22, z12, z3, z33, z13, z23, ..., zn, znn, z1n, z2n)
class TraceVectorVn {
public:
    TraceVectorVn() = default;
    TraceVectorVn(std::size_t n, std::vector<Complex> coords);

    static std::size_t length(std::size_t n) { return 4 * n - 3; }
    static std::size_t index_single(std::size_t j);
    /// Unordered pair; j == k allowed. Throws CoordinateUnavailable unless
    /// j == k or one index is 1 or 2.
    static std::size_t index_pair(std::size_t j, std::size_t k);

    std::size_t n() const { return n_; }
    const std::vector<Complex>& coords() const { return coords_; }
    Complex single(std::size_t j) const;
    Complex pair(std::size_t j, std::size_t k) const;
    /// tau_jk(z) = z_jk - z_j z_k / 2
    Complex tau(std::size_t j, std::size_t k) const;

private:
    std::size_t n_ = 0;
    std::vector<Complex> coords_;
};

}  // namespace sl2orbit
