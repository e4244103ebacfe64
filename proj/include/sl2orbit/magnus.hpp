#pragma once

// The Magnus trace map T_n(A) = (t1, t2, t12, ..., tk, t1k, t2k, ...), its
// inversion off sigma_12 = 0, fiber enumeration by transposing entries 3..n,
// emptiness detection on sigma_12 = 0, and the V_n reconstruction map.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "sl2orbit/core.hpp"
#include "sl2orbit/trace_vector.hpp"

namespace sl2orbit {

struct MagnusOptions {
    double tol = kDefaultTol;
    /// nu_1, nu_2, sigma_12 of z count as zero below this (scaled by
    /// max(1, |z|^2) resp. max(1, |z|^3)).
    double tol_branch = 1e-8;
    double residual_tol = 1e-8;
    double fingerprint_tol = 1e-7;
};

enum class FiberStatus { NonemptyFinite, Empty, Undetermined };

const char* to_string(FiberStatus s);

struct FiberOrbit {
    Tuple representative;
    /// One character per entry 3..n: '+' keeps A_k, '-' transposes it.
    std::string signs;
    double residual = 0.0;
};

struct Fiber {
    FiberStatus status = FiberStatus::Undetermined;
    std::vector<FiberOrbit> orbits;
    /// A point of a possibly positive-dimensional fiber on sigma_12 = 0.
    std::optional<FiberOrbit> witness;
    /// Index pair (k, l) whose minor obstructs the unipotent family.
    std::optional<std::array<std::size_t, 2>> obstruction;
    /// Machine-readable reason, e.g. "generic", "swap12", "parabolic",
    /// "z12-unipotent-rank2".
    std::string notes;
};

/// Throws NotSL2 unless the tuple is flagged SL2, InvalidInput if n < 2.
TraceVector forward_Tn(const Tuple& A);

/// max_i |T_n(A)_i - z_i| / max(1, |z_i|)
double forward_residual(const Tuple& A, const TraceVector& z);

/// The transposition-normal-form solution with principal square roots:
/// entries 1 and 2 symmetric, every entry in quaternion form. Requires
/// sigma_12(z) != 0; throws NotApplicable otherwise.
Tuple base_solution(const TraceVector& z, const MagnusOptions& opt = {}, std::string* branch = nullptr);

/// Full fiber over z. Off sigma_12 = 0 the result is NonemptyFinite with at
/// most 2^(n-2) orbits; on it the call is routed to invert_on_Z12.
Fiber invert_Tn(const TraceVector& z, const MagnusOptions& opt = {});

/// Transposes every subset of entries 3..n of `base` (binary order, entry 3
/// most significant) and keeps one representative per fingerprint. Throws
/// InvalidBase unless base maps to z, has symmetric entries 1, 2 and
/// sigma_12 != 0.
Fiber enumerate_fiber(const Tuple& base, const TraceVector& z, const MagnusOptions& opt = {});

/// Emptiness detection on sigma_12(z) = 0. Never returns NonemptyFinite.
Fiber invert_on_Z12(const TraceVector& z, const MagnusOptions& opt = {});

/// No SL2 requirement.
TraceVectorVn forward_That_n(const Tuple& A);
double forward_residual_vn(const Tuple& A, const TraceVectorVn& z);

/// 2 (tau12^2 tau_kk + tau1k^2 tau22 + tau2k^2 tau11 - 2 tau12 tau1k tau2k - tau11 tau22 tau_kk)
Complex delta_12k_z(const TraceVectorVn& z, std::size_t k);

/// Reconstruction on V_n; Undetermined unless sigma_12(z) and tau_11(z) are
/// nonzero. Orbits are deduplicated on vn_fingerprint.
Fiber invert_That_n(const TraceVectorVn& z, const MagnusOptions& opt = {});

struct CrossCheckReport {
    bool passed = false;
    TraceVector z;
    Fiber fiber;
    std::size_t matches = 0;
    std::optional<std::size_t> matched_orbit;
    double max_residual = 0.0;
    std::vector<std::string> failures;
};

/// forward_Tn, invert_Tn, then checks nonemptiness, residuals, the 2^(n-2)
/// bound and that the input fingerprint matches exactly one orbit.
CrossCheckReport fiber_cross_check(const Tuple& A, const MagnusOptions& opt = {});

}  // namespace sl2orbit
