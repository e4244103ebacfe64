#include "sl2orbit/magnus.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sl2orbit/invariants.hpp"

namespace sl2orbit {

namespace {

const Complex kI{0.0, 1.0};

double max_modulus(const std::vector<Complex>& v) {
    double m = 0.0;
    for (Complex x : v) m = std::max(m, std::abs(x));
    return m;
}

struct BranchScales {
    double nu;     // z^2
    double sigma;  // z^3
};

BranchScales branch_scales(const TraceVector& z) {
    const double m = max_modulus(z.coords());
    return {m * m, m * m * m};
}

bool nu_vanishes(const TraceVector& z, std::size_t j, const MagnusOptions& opt) {
    return near_zero(nu_z(z, j), opt.tol_branch, branch_scales(z).nu);
}

bool sigma12_vanishes(const TraceVector& z, const MagnusOptions& opt) {
    return near_zero(sigma_z(z, 1, 2), opt.tol_branch, branch_scales(z).sigma);
}

// z with the roles of generators 1 and 2 exchanged.
TraceVector swap12(const TraceVector& z) {
    std::vector<Complex> c = z.coords();
    std::swap(c[TraceVector::index_single(1)], c[TraceVector::index_single(2)]);
    for (std::size_t k = 3; k <= z.n(); ++k) {
        std::swap(c[TraceVector::index_pair(1, k)], c[TraceVector::index_pair(2, k)]);
    }
    return TraceVector(z.n(), std::move(c));
}

double sign_of(Complex x) { return x.real() >= 0.0 ? 1.0 : -1.0; }

std::vector<Mat2> solve_generic(const TraceVector& z) {
    const std::size_t n = z.n();
    std::vector<Complex> alpha(n + 1), beta(n + 1);
    for (std::size_t k = 1; k <= n; ++k) alpha[k] = 0.5 * z.single(k);
    beta[1] = std::sqrt(1.0 - alpha[1] * alpha[1]);
    for (std::size_t k = 2; k <= n; ++k) {
        const Complex tau1k = z.pair(1, k) - 2.0 * alpha[1] * alpha[k];
        beta[k] = -tau1k / (2.0 * beta[1]);
    }
    const Complex q22 = 1.0 - alpha[2] * alpha[2] - beta[2] * beta[2];
    const Complex delta2 = std::sqrt(q22);

    std::vector<Mat2> out;
    out.push_back(from_quaternion(alpha[1], beta[1], 0.0, 0.0));
    out.push_back(from_quaternion(alpha[2], beta[2], 0.0, delta2));
    for (std::size_t k = 3; k <= n; ++k) {
        const Complex qkk = 1.0 - alpha[k] * alpha[k] - beta[k] * beta[k];
        const Complex q2k = alpha[2] * alpha[k] - beta[2] * beta[k] - 0.5 * z.pair(2, k);
        const Complex deltak = q2k / delta2;
        const Complex gammak = std::sqrt(q22 * qkk - q2k * q2k) / delta2;
        out.push_back(from_quaternion(alpha[k], beta[k], gammak, deltak));
    }
    return out;
}

std::vector<Mat2> solve_parabolic(const TraceVector& z) {
    const std::size_t n = z.n();
    // nu_1 = nu_2 = 0 puts z1, z2 at +-2; snapping keeps the tuple unimodular.
    const Complex a1 = sign_of(z.single(1));
    const Complex a2 = sign_of(z.single(2));
    const Complex lambda = std::sqrt((2.0 * a1 * a2 - z.pair(1, 2)) / 4.0);

    std::vector<Mat2> out;
    out.push_back({a1 + lambda, kI * lambda, kI * lambda, a1 - lambda});
    out.push_back({a2 - lambda, kI * lambda, kI * lambda, a2 + lambda});
    for (std::size_t k = 3; k <= n; ++k) {
        const Complex ak = 0.5 * z.single(k);
        const Complex p = (z.pair(1, k) - 2.0 * a1 * ak) / (2.0 * lambda);
        const Complex q = (z.pair(2, k) - 2.0 * a2 * ak) / (2.0 * lambda);
        const Complex dk = -(p + q) / 2.0;
        const Complex bk = (p - q) / (2.0 * kI);
        const Complex gk = std::sqrt(1.0 - ak * ak - bk * bk - dk * dk);
        out.push_back(from_quaternion(ak, bk, gk, dk));
    }
    return out;
}

std::vector<Mat2> swap_back(std::vector<Mat2> m) {
    std::swap(m[0], m[1]);
    return m;
}

Tuple transpose_entries(const Tuple& base, const std::string& signs) {
    std::vector<Mat2> m(base.entries().begin(), base.entries().end());
    for (std::size_t i = 0; i < signs.size(); ++i) {
        if (signs[i] == '-') m[i + 2] = m[i + 2].transpose();
    }
    return Tuple::with_flag(std::move(m), base.sl2());
}

std::string sign_pattern(std::size_t index, std::size_t free) {
    std::string s(free, '+');
    for (std::size_t i = 0; i < free; ++i) {
        if ((index >> (free - 1 - i)) & 1U) s[i] = '-';
    }
    return s;
}

Fiber enumerate_unchecked(const Tuple& base, const TraceVector& z, const MagnusOptions& opt) {
    const std::size_t free = base.size() - 2;
    Fiber fiber;
    fiber.status = FiberStatus::NonemptyFinite;
    std::vector<Fingerprint> seen;
    for (std::size_t p = 0; p < (std::size_t{1} << free); ++p) {
        const std::string signs = sign_pattern(p, free);
        Tuple rep = transpose_entries(base, signs);
        Fingerprint fp = fingerprint(rep);
        const bool duplicate = std::any_of(seen.begin(), seen.end(), [&](const Fingerprint& f) {
            return fingerprints_match(f, fp, opt.fingerprint_tol);
        });
        if (duplicate) continue;
        seen.push_back(std::move(fp));
        const double r = forward_residual(rep, z);
        fiber.orbits.push_back({std::move(rep), signs, r});
    }
    return fiber;
}

double max_orbit_residual(const Fiber& f) {
    double r = 0.0;
    for (const auto& o : f.orbits) r = std::max(r, o.residual);
    return r;
}

}  // namespace

const char* to_string(FiberStatus s) {
    switch (s) {
        case FiberStatus::NonemptyFinite: return "NonemptyFinite";
        case FiberStatus::Empty: return "Empty";
        case FiberStatus::Undetermined: return "Undetermined";
    }
    return "Undetermined";
}

// ---------------------------------------------------------------- T_n

TraceVector forward_Tn(const Tuple& A) {
    if (!A.sl2()) throw Error(ErrorKind::NotSL2, "forward_Tn requires an SL2 tuple");
    const std::size_t n = A.size();
    if (n < 2) throw Error(ErrorKind::InvalidInput, "forward_Tn needs n >= 2");
    std::vector<Complex> c(TraceVector::length(n));
    for (std::size_t k = 1; k <= n; ++k) c[TraceVector::index_single(k)] = A[k].trace();
    for (std::size_t k = 2; k <= n; ++k) {
        c[TraceVector::index_pair(1, k)] = (A[1] * A[k]).trace();
        if (k >= 3) c[TraceVector::index_pair(2, k)] = (A[2] * A[k]).trace();
    }
    return TraceVector(n, std::move(c));
}

double forward_residual(const Tuple& A, const TraceVector& z) {
    if (A.size() != z.n()) return std::numeric_limits<double>::infinity();
    const auto t = forward_Tn(Tuple::with_flag({A.entries().begin(), A.entries().end()}, true));
    double r = 0.0;
    for (std::size_t i = 0; i < z.coords().size(); ++i) {
        const Complex zi = z.coords()[i];
        r = std::max(r, std::abs(t.coords()[i] - zi) / std::max(1.0, std::abs(zi)));
    }
    return r;
}

Tuple base_solution(const TraceVector& z, const MagnusOptions& opt, std::string* branch) {
    if (sigma12_vanishes(z, opt)) {
        throw Error(ErrorKind::NotApplicable, "base_solution requires sigma_12(z) != 0");
    }
    const bool nu1_zero = nu_vanishes(z, 1, opt);
    const bool nu2_zero = nu_vanishes(z, 2, opt);

    struct Candidate {
        std::string name;
        Tuple tuple;
        double residual;
    };
    auto make = [&](std::string name, std::vector<Mat2> m) {
        Tuple t = Tuple::with_flag(std::move(m), true);
        const double r = forward_residual(t, z);
        return Candidate{std::move(name), std::move(t), r};
    };

    std::vector<Candidate> tried;
    if (!nu1_zero) {
        tried.push_back(make("generic", solve_generic(z)));
    } else if (!nu2_zero) {
        tried.push_back(make("swap12", swap_back(solve_generic(swap12(z)))));
    } else {
        tried.push_back(make("parabolic", solve_parabolic(z)));
    }
    // Near a branch threshold the prescribed branch can be ill-conditioned;
    // the other valid branches give the same fiber.
    if (!(tried.front().residual <= opt.residual_tol)) {
        if (nu1_zero && !nu2_zero) tried.push_back(make("generic", solve_generic(z)));
        if (!nu1_zero) tried.push_back(make("swap12", swap_back(solve_generic(swap12(z)))));
    }
    auto best = std::min_element(tried.begin(), tried.end(), [](const auto& x, const auto& y) {
        if (std::isnan(y.residual)) return true;
        if (std::isnan(x.residual)) return false;
        return x.residual < y.residual;
    });
    if (branch) *branch = best->name;
    return best->tuple;
}

Fiber enumerate_fiber(const Tuple& base, const TraceVector& z, const MagnusOptions& opt) {
    auto fail = [](const std::string& why) {
        throw Error(ErrorKind::InvalidBase, "enumerate_fiber: " + why);
    };
    if (base.size() != z.n()) fail("base has " + std::to_string(base.size()) + " entries, z has n = " + std::to_string(z.n()));
    if (!base.sl2()) fail("base is not an SL2 tuple");
    for (std::size_t j = 1; j <= 2; ++j) {
        const Mat2& m = base[j];
        if (!near_zero(m.b - m.c, opt.residual_tol, m.norm())) {
            fail("entry " + std::to_string(j) + " is not transposition invariant");
        }
    }
    if (near_zero(sigma(base, 1, 2), opt.tol_branch, sigma_scale(base, 1, 2))) fail("sigma_12 vanishes");
    const double r = forward_residual(base, z);
    if (!(r <= opt.residual_tol)) fail("forward residual " + std::to_string(r) + " exceeds tolerance");
    Fiber f = enumerate_unchecked(base, z, opt);
    f.notes = "enumerated";
    return f;
}

Fiber invert_Tn(const TraceVector& z, const MagnusOptions& opt) {
    if (sigma12_vanishes(z, opt)) return invert_on_Z12(z, opt);
    std::string branch;
    const Tuple base = base_solution(z, opt, &branch);
    Fiber f = enumerate_unchecked(base, z, opt);
    f.notes = branch;
    if (!(max_orbit_residual(f) <= opt.residual_tol)) f.notes += ";residual-above-tolerance";
    return f;
}

// ---------------------------------------------------------------- sigma_12 = 0

namespace {

Fiber z12_unipotent(const TraceVector& z, const MagnusOptions& opt) {
    const std::size_t n = z.n();
    const double m = std::max(1.0, max_modulus(z.coords()));
    const double s1 = sign_of(z.single(1));
    const double s2 = sign_of(z.single(2));

    std::vector<Complex> u(n + 1), v(n + 1);
    for (std::size_t j = 3; j <= n; ++j) {
        u[j] = s1 * z.pair(1, j) - z.single(j);
        v[j] = s2 * z.pair(2, j) - z.single(j);
    }

    Fiber f;
    double best = 0.0;
    std::array<std::size_t, 2> arg{};
    for (std::size_t k = 3; k <= n; ++k)
        for (std::size_t l = k + 1; l <= n; ++l) {
            const double minor = std::abs(u[k] * v[l] - u[l] * v[k]);
            if (minor > best) {
                best = minor;
                arg = {k, l};
            }
        }
    if (!near_zero(best, opt.tol_branch, m * m)) {
        f.status = FiberStatus::Empty;
        f.obstruction = arg;
        f.notes = "z12-unipotent-rank2";
        return f;
    }

    // Rank <= 1: u = b1 c, v = b2 c.
    std::size_t lead = 0;
    for (std::size_t j = 3; j <= n; ++j) {
        if (lead == 0 || std::abs(u[j]) > std::abs(u[lead])) lead = j;
    }
    std::size_t vlead = 0;
    for (std::size_t j = 3; j <= n; ++j) {
        if (vlead == 0 || std::abs(v[j]) > std::abs(v[vlead])) vlead = j;
    }
    const bool u_zero = lead == 0 || near_zero(u[lead], opt.tol_branch, m);
    const bool v_zero = vlead == 0 || near_zero(v[vlead], opt.tol_branch, m);
    Complex b1 = 1.0, b2 = 1.0;
    std::vector<Complex> c(n + 1, 0.0);
    if (!u_zero) {
        b2 = v[lead] / u[lead];
        for (std::size_t j = 3; j <= n; ++j) c[j] = u[j];
    } else if (!v_zero) {
        b1 = 0.0;
        for (std::size_t j = 3; j <= n; ++j) c[j] = v[j];
    }

    std::vector<Mat2> mats;
    mats.push_back(s1 * Mat2{1.0, b1, 0.0, 1.0});
    mats.push_back(s2 * Mat2{1.0, b2, 0.0, 1.0});
    for (std::size_t j = 3; j <= n; ++j) {
        const Complex a = 0.5 * z.single(j);
        if (!near_zero(c[j], opt.tol_branch, m)) {
            mats.push_back({a, (a * a - 1.0) / c[j], c[j], a});
        } else {
            const Complex beta = std::sqrt(1.0 - a * a);
            mats.push_back({a + kI * beta, 0.0, c[j], a - kI * beta});
        }
    }
    Tuple w = Tuple::with_flag(std::move(mats), true);
    const double r = forward_residual(w, z);
    f.status = FiberStatus::Undetermined;
    f.witness = FiberOrbit{std::move(w), "", r};
    f.notes = "z12-unipotent-witness";
    return f;
}

// nu_1 != 0: A1 diagonal and A2 upper triangular after conjugation (a
// lower triangular A2 is the transpose of this case and has the same z).
Fiber z12_diagonal_first(const TraceVector& z, const MagnusOptions& opt, bool swapped) {
    const std::size_t n = z.n();
    const double m = std::max(1.0, max_modulus(z.coords()));
    std::vector<Complex> alpha(n + 1), beta(n + 1), c(n + 1), q(n + 1), tau1(n + 1), tau2(n + 1);
    for (std::size_t k = 1; k <= n; ++k) alpha[k] = 0.5 * z.single(k);
    beta[1] = std::sqrt(1.0 - alpha[1] * alpha[1]);
    for (std::size_t k = 2; k <= n; ++k) {
        tau1[k] = z.pair(1, k) - 2.0 * alpha[1] * alpha[k];
        beta[k] = -tau1[k] / (2.0 * beta[1]);
    }
    std::size_t bad_q = 0, bad_c = 0;
    for (std::size_t k = 3; k <= n; ++k) {
        tau2[k] = z.pair(2, k) - 2.0 * alpha[2] * alpha[k];
        c[k] = (beta[1] * tau2[k] - beta[2] * tau1[k]) / beta[1];
        q[k] = 1.0 - alpha[k] * alpha[k] - beta[k] * beta[k];
        const bool c_zero = near_zero(c[k], opt.tol_branch, m * m);
        if (c_zero && !near_zero(q[k], opt.tol_branch, m * m) && bad_q == 0) bad_q = k;
        if (!c_zero && bad_c == 0) bad_c = k;
    }

    Fiber f;
    auto diag_entry = [&](std::size_t k) { return Mat2::diag(alpha[k] + kI * beta[k], alpha[k] - kI * beta[k]); };
    std::vector<Mat2> mats{diag_entry(1)};
    if (bad_q == 0) {
        Mat2 a2 = diag_entry(2);
        a2.b = 1.0;
        mats.push_back(a2);
        for (std::size_t k = 3; k <= n; ++k) {
            Mat2 ak = diag_entry(k);
            ak.c = c[k];
            ak.b = near_zero(c[k], opt.tol_branch, m * m) ? Complex{0.0} : -q[k] / c[k];
            mats.push_back(ak);
        }
        f.notes = "z12-triangular-witness";
    } else if (bad_c == 0) {
        mats.push_back(diag_entry(2));
        for (std::size_t k = 3; k <= n; ++k) {
            Mat2 ak = diag_entry(k);
            ak.b = -q[k];
            ak.c = 1.0;
            mats.push_back(ak);
        }
        f.notes = "z12-diagonal-witness";
    } else {
        f.status = FiberStatus::Empty;
        f.obstruction = std::array<std::size_t, 2>{std::min(bad_q, bad_c), std::max(bad_q, bad_c)};
        f.notes = "z12-diagonal-first-inconsistent";
        return f;
    }
    if (swapped) mats = swap_back(std::move(mats));
    Tuple w = Tuple::with_flag(std::move(mats), true);
    f.status = FiberStatus::Undetermined;
    f.witness = FiberOrbit{std::move(w), "", 0.0};
    if (swapped) f.notes += ";swap12";
    return f;
}

}  // namespace

Fiber invert_on_Z12(const TraceVector& z, const MagnusOptions& opt) {
    const bool nu1_zero = nu_vanishes(z, 1, opt);
    const bool nu2_zero = nu_vanishes(z, 2, opt);
    Fiber f;
    if (nu1_zero && nu2_zero) {
        f = z12_unipotent(z, opt);
    } else if (!nu1_zero) {
        f = z12_diagonal_first(z, opt, false);
    } else {
        f = z12_diagonal_first(swap12(z), opt, true);
    }
    if (f.witness) {
        f.witness->residual = forward_residual(f.witness->representative, z);
        if (!(f.witness->residual <= opt.residual_tol)) f.notes += ";residual-above-tolerance";
    }
    return f;
}

// ---------------------------------------------------------------- V_n

TraceVectorVn forward_That_n(const Tuple& A) {
    const std::size_t n = A.size();
    if (n < 2) throw Error(ErrorKind::InvalidInput, "forward_That_n needs n >= 2");
    std::vector<Complex> c(TraceVectorVn::length(n));
    for (std::size_t k = 1; k <= n; ++k) {
        c[TraceVectorVn::index_single(k)] = A[k].trace();
        c[TraceVectorVn::index_pair(k, k)] = (A[k] * A[k]).trace();
    }
    for (std::size_t k = 2; k <= n; ++k) {
        c[TraceVectorVn::index_pair(1, k)] = (A[1] * A[k]).trace();
        if (k >= 3) c[TraceVectorVn::index_pair(2, k)] = (A[2] * A[k]).trace();
    }
    return TraceVectorVn(n, std::move(c));
}

double forward_residual_vn(const Tuple& A, const TraceVectorVn& z) {
    if (A.size() != z.n()) return std::numeric_limits<double>::infinity();
    const auto t = forward_That_n(A);
    double r = 0.0;
    for (std::size_t i = 0; i < z.coords().size(); ++i) {
        const Complex zi = z.coords()[i];
        r = std::max(r, std::abs(t.coords()[i] - zi) / std::max(1.0, std::abs(zi)));
    }
    return r;
}

Complex delta_12k_z(const TraceVectorVn& z, std::size_t k) {
    const Complex t11 = z.tau(1, 1), t22 = z.tau(2, 2), tkk = z.tau(k, k);
    const Complex t12 = z.tau(1, 2), t1k = z.tau(1, k), t2k = z.tau(2, k);
    return 2.0 * (t12 * t12 * tkk + t1k * t1k * t22 + t2k * t2k * t11 - 2.0 * t12 * t1k * t2k -
                  t11 * t22 * tkk);
}

Fiber invert_That_n(const TraceVectorVn& z, const MagnusOptions& opt) {
    const std::size_t n = z.n();
    const double m = max_modulus(z.coords());
    const Complex t11 = z.tau(1, 1);
    const Complex t12 = z.tau(1, 2);
    const Complex s12 = t12 * t12 - t11 * z.tau(2, 2);

    Fiber f;
    if (near_zero(s12, opt.tol_branch, m * m)) {
        f.notes = "vn-sigma12-zero";
        return f;
    }
    if (near_zero(t11, opt.tol_branch, m)) {
        f.notes = "vn-tau11-zero";
        return f;
    }

    std::vector<Complex> alpha(n + 1), beta(n + 1);
    for (std::size_t k = 1; k <= n; ++k) alpha[k] = 0.5 * z.single(k);
    beta[1] = std::sqrt(-t11 / 2.0);
    for (std::size_t k = 2; k <= n; ++k) beta[k] = -z.tau(1, k) / (2.0 * beta[1]);
    const Complex delta2 = std::sqrt(s12 / (2.0 * t11));

    std::vector<Mat2> mats;
    mats.push_back(from_quaternion(alpha[1], beta[1], 0.0, 0.0));
    mats.push_back(from_quaternion(alpha[2], beta[2], 0.0, delta2));
    for (std::size_t k = 3; k <= n; ++k) {
        const Complex deltak = (t12 * z.tau(1, k) - z.tau(2, k) * t11) / (2.0 * delta2 * t11);
        const Complex gammak = std::sqrt(-delta_12k_z(z, k) / (4.0 * s12));
        mats.push_back(from_quaternion(alpha[k], beta[k], gammak, deltak));
    }
    const Tuple base(mats, opt.tol);

    const std::size_t free = n - 2;
    std::vector<std::vector<Complex>> seen;
    f.status = FiberStatus::NonemptyFinite;
    f.notes = "vn-generic";
    for (std::size_t p = 0; p < (std::size_t{1} << free); ++p) {
        const std::string signs = sign_pattern(p, free);
        Tuple rep = transpose_entries(base, signs);
        auto fp = vn_fingerprint(rep);
        const bool duplicate = std::any_of(seen.begin(), seen.end(), [&](const auto& s) {
            for (std::size_t i = 0; i < s.size(); ++i) {
                if (std::abs(s[i] - fp[i]) > opt.fingerprint_tol) return false;
            }
            return true;
        });
        if (duplicate) continue;
        seen.push_back(std::move(fp));
        const double r = forward_residual_vn(rep, z);
        f.orbits.push_back({std::move(rep), signs, r});
    }
    if (!(max_orbit_residual(f) <= opt.residual_tol)) f.notes += ";residual-above-tolerance";
    return f;
}

// ---------------------------------------------------------------- cross check

CrossCheckReport fiber_cross_check(const Tuple& A, const MagnusOptions& opt) {
    CrossCheckReport rep;
    rep.z = forward_Tn(A);
    if (sigma12_vanishes(rep.z, opt)) {
        rep.failures.push_back("sigma_12 vanishes; the fiber is not finite-certified");
    }
    rep.fiber = invert_Tn(rep.z, opt);
    if (rep.fiber.status != FiberStatus::NonemptyFinite || rep.fiber.orbits.empty()) {
        rep.failures.push_back(std::string("fiber status ") + to_string(rep.fiber.status));
    }
    const std::size_t bound = std::size_t{1} << (A.size() - 2);
    if (rep.fiber.orbits.size() > bound) {
        rep.failures.push_back(std::to_string(rep.fiber.orbits.size()) + " orbits exceed 2^(n-2) = " +
                               std::to_string(bound));
    }
    const Fingerprint target = fingerprint(A);
    for (std::size_t i = 0; i < rep.fiber.orbits.size(); ++i) {
        const auto& o = rep.fiber.orbits[i];
        rep.max_residual = std::max(rep.max_residual, o.residual);
        if (!(o.residual <= opt.residual_tol)) {
            rep.failures.push_back("orbit " + o.signs + " has forward residual " + std::to_string(o.residual));
        }
        if (fingerprints_match(fingerprint(o.representative), target, opt.fingerprint_tol)) {
            ++rep.matches;
            if (!rep.matched_orbit) rep.matched_orbit = i;
        }
    }
    if (rep.matches != 1) {
        rep.failures.push_back("input fingerprint matches " + std::to_string(rep.matches) + " orbits");
    }
    rep.passed = rep.failures.empty();
    return rep;
}

}  // namespace sl2orbit
