#include "sl2orbit/trace_vector.hpp"

#include <cmath>
#include <utility>

namespace sl2orbit {

namespace {

void check_finite(const std::vector<Complex>& coords) {
    for (std::size_t i = 0; i < coords.size(); ++i) {
        if (!std::isfinite(coords[i].real()) || !std::isfinite(coords[i].imag())) {
            throw Error(ErrorKind::InvalidInput,
                        "trace coordinate " + std::to_string(i) + " is not finite");
        }
    }
}

void check_index(std::size_t j, std::size_t n) {
    if (j < 1 || j > n) {
        throw Error(ErrorKind::IndexOutOfRange,
                    "index " + std::to_string(j) + " outside 1.." + std::to_string(n));
    }
}

}  // namespace

TraceVector::TraceVector(std::size_t n, std::vector<Complex> coords)
    : n_(n), coords_(std::move(coords)) {
    if (n < 2) throw Error(ErrorKind::InvalidInput, "trace vector needs n >= 2");
    if (coords_.size() != length(n)) {
        throw Error(ErrorKind::InvalidInput, "trace vector for n = " + std::to_string(n) +
                                                 " needs " + std::to_string(length(n)) +
                                                 " coordinates, got " +
                                                 std::to_string(coords_.size()));
    }
    check_finite(coords_);
}

std::size_t TraceVector::index_single(std::size_t j) {
    if (j == 1) return 0;
    if (j == 2) return 1;
    return 3 * (j - 3) + 3;
}

bool TraceVector::has_pair(std::size_t j, std::size_t k) {
    if (j > k) std::swap(j, k);
    return j != k && (j == 1 || j == 2);
}

std::size_t TraceVector::index_pair(std::size_t j, std::size_t k) {
    if (j > k) std::swap(j, k);
    if (!has_pair(j, k)) {
        throw Error(ErrorKind::CoordinateUnavailable,
                    "coordinate z" + std::to_string(j) + std::to_string(k) +
                        " is not part of the Magnus layout");
    }
    if (k == 2) return 2;
    return 3 * (k - 3) + 3 + j;
}

Complex TraceVector::single(std::size_t j) const {
    check_index(j, n_);
    return coords_[index_single(j)];
}

Complex TraceVector::pair(std::size_t j, std::size_t k) const {
    check_index(j, n_);
    check_index(k, n_);
    return coords_[index_pair(j, k)];
}

TraceVectorVn::TraceVectorVn(std::size_t n, std::vector<Complex> coords)
    : n_(n), coords_(std::move(coords)) {
    if (n < 2) throw Error(ErrorKind::InvalidInput, "trace vector needs n >= 2");
    if (coords_.size() != length(n)) {
        throw Error(ErrorKind::InvalidInput, "V_n trace vector for n = " + std::to_string(n) +
                                                 " needs " + std::to_string(length(n)) +
                                                 " coordinates, got " +
                                                 std::to_string(coords_.size()));
    }
    check_finite(coords_);
}

std::size_t TraceVectorVn::index_single(std::size_t j) {
    if (j == 1) return 0;
    if (j == 2) return 2;
    return 4 * (j - 3) + 5;
}

std::size_t TraceVectorVn::index_pair(std::size_t j, std::size_t k) {
    if (j > k) std::swap(j, k);
    if (j == k) {
        if (j == 1) return 1;
        if (j == 2) return 3;
        return 4 * (j - 3) + 6;
    }
    if (j != 1 && j != 2) {
        throw Error(ErrorKind::CoordinateUnavailable,
                    "coordinate z" + std::to_string(j) + std::to_string(k) +
                        " is not part of the V_n layout");
    }
    if (k == 2) return 4;
    return 4 * (k - 3) + 6 + j;
}

Complex TraceVectorVn::single(std::size_t j) const {
    check_index(j, n_);
    return coords_[index_single(j)];
}

Complex TraceVectorVn::pair(std::size_t j, std::size_t k) const {
    check_index(j, n_);
    check_index(k, n_);
    return coords_[index_pair(j, k)];
}

Complex TraceVectorVn::tau(std::size_t j, std::size_t k) const {
    return pair(j, k) - 0.5 * single(j) * single(k);
}

}  // namespace sl2orbit
