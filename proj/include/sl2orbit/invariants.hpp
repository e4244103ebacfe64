#pragma once

// Conjugation invariants of tuples: tau, nu, sigma, Delta, the tau Gram
// matrix and the trace fingerprint over the words of length <= 3.

#include <array>
#include <vector>

#include "sl2orbit/core.hpp"
#include "sl2orbit/trace_vector.hpp"

namespace sl2orbit {

/// tau_jk = tr(A_j A_k) - tr(A_j) tr(A_k) / 2
Complex tau(const Tuple& A, std::size_t j, std::size_t k);
/// Same value from the entries: e_j e_k / 2 + b_j c_k + c_j b_k.
Complex tau_entrywise(const Tuple& A, std::size_t j, std::size_t k);

/// nu_j = tau_jj. Nonzero iff A_j has distinct eigenvalues.
Complex nu(const Tuple& A, std::size_t j);

/// sigma_jk = tau_jk^2 - tau_jj tau_kk
Complex sigma(const Tuple& A, std::size_t j, std::size_t k);
/// (b_j c_k - c_j b_k)^2 - (b_j e_k - e_j b_k)(c_j e_k - e_j c_k)
Complex sigma_entrywise(const Tuple& A, std::size_t j, std::size_t k);
/// t_j^2 + t_k^2 + t_jk^2 - t_j t_k t_jk - 4, valid on SL2 tuples only.
Complex sigma_sl2_traces(const Tuple& A, std::size_t j, std::size_t k);

/// Delta_jkl = (tr(A_j A_k A_l) - tr(A_l A_k A_j))^2
Complex delta(const Tuple& A, std::size_t j, std::size_t k, std::size_t l);

/// Magnitude scales for the zero tests of sigma and Delta, which are of
/// degree 4 and 6 in the matrix entries.
double sigma_scale(const Tuple& A, std::size_t j, std::size_t k);
double delta_scale(const Tuple& A, std::size_t j, std::size_t k, std::size_t l);

/// Symmetric matrix of tau values over the index triple (j, k, l).
struct GramMatrix3 {
    std::array<std::array<Complex, 3>, 3> m{};

    Complex leading_minor() const;  ///< equals -sigma_jk
    Complex determinant() const;    ///< equals -Delta_jkl / 2
};

GramMatrix3 gram(const Tuple& A, std::size_t j, std::size_t k, std::size_t l);

/// Traces of the words in H_n: all e_j, then e_j e_k (j<k), then e_j e_k e_l
/// (j<k<l), each block in lexicographic order.
struct Fingerprint {
    std::size_t n = 0;
    std::vector<Complex> values;

    static std::size_t length(std::size_t n) { return (n * n * n + 5 * n) / 6; }
    /// The words of H_n in the same order as `values`.
    static std::vector<Word> words(std::size_t n);
};

/// Throws NotSL2 unless the tuple carries the SL2 flag.
Fingerprint fingerprint(const Tuple& A);

/// Per-coordinate absolute comparison.
bool fingerprints_match(const Fingerprint& x, const Fingerprint& y, double tol = 1e-7);
/// Largest per-coordinate difference; infinity when the lengths differ.
double fingerprint_distance(const Fingerprint& x, const Fingerprint& y);

/// tr(A_j A_k A_l) over all ordered (j, k, l) in {0..n}^3 with A_0 = I.
/// These generate every invariant of a V_n tuple, so equality identifies
/// closed orbits without the SL2 assumption.
std::vector<Complex> vn_fingerprint(const Tuple& A);

// The same functions read off trace coordinates (SL2 forms). Their pullback
// along the Magnus map equals the tuple versions above.

/// z_j^2 / 2 - 2
Complex nu_z(const TraceVector& z, std::size_t j);
/// z_j^2 + z_k^2 + z_jk^2 - z_j z_k z_jk - 4; zero for j == k. Throws
/// CoordinateUnavailable when z_jk is not a Magnus coordinate.
Complex sigma_z(const TraceVector& z, std::size_t j, std::size_t k);

}  // namespace sl2orbit
