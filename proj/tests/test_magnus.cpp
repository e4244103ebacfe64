#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sl2orbit/invariants.hpp"
#include "sl2orbit/magnus.hpp"
#include "sl2orbit/structure.hpp"
#include "support/corpus.hpp"

using namespace sl2orbit;

namespace {

const Complex I{0.0, 1.0};

// The zero-trace triple and its fiber.
Tuple zero_trace_tuple() { return Tuple{Mat2::diag(I, -I), Mat2{0.0, I, I, 0.0}, Mat2{0.0, 1.0, -1.0, 0.0}}; }

TraceVector tv(std::size_t n, std::vector<Complex> c) { return TraceVector(n, std::move(c)); }

Tuple random_with_sigma12(RandomStream& rs, std::size_t n) {
    Tuple A;
    do {
        A = corpus::random_sl2_tuple(rs, n);
    } while (std::abs(sigma(A, 1, 2)) < 0.1);
    return A;
}

// Sign actions on a quaternion-form tuple.
Tuple flip(const Tuple& A, bool beta, bool gamma, bool delta) {
    std::vector<Mat2> m;
    for (const Mat2& x : A.entries()) {
        Quaternion q = to_quaternion(x);
        if (beta) q.beta = -q.beta;
        if (gamma) q.gamma = -q.gamma;
        if (delta) q.delta = -q.delta;
        m.push_back(from_quaternion(q.alpha, q.beta, q.gamma, q.delta));
    }
    return Tuple::with_flag(std::move(m), true);
}

}  // namespace

TEST_CASE("forward_Tn") {
    const TraceVector ids = forward_Tn(Tuple(std::vector<Mat2>(3, Mat2::identity())));
    CHECK(ids.coords() == std::vector<Complex>(6, 2.0));

    const TraceVector z = forward_Tn(zero_trace_tuple());
    for (Complex c : z.coords()) CHECK(std::abs(c) < 1e-15);

    RandomStream rs(1);
    for (int i = 0; i < 50; ++i) {
        const Tuple A = corpus::random_sl2_tuple(rs, 5);
        const TraceVector a = forward_Tn(A);
        const TraceVector b = forward_Tn(conjugate_tuple(rs.conjugator(), A));
        for (std::size_t k = 0; k < a.coords().size(); ++k) {
            CHECK(std::abs(a.coords()[k] - b.coords()[k]) <= 1e-9 * std::max(1.0, std::abs(a.coords()[k])));
        }
        CHECK(a.pair(2, 5) == (A[2] * A[5]).trace());
    }
    CHECK_THROWS_AS(forward_Tn(Tuple::with_flag({Mat2::diag(2.0, 1.0), Mat2::identity()}, false)), Error);
}

TEST_CASE("trace vector layouts") {
    CHECK(TraceVector::index_single(3) == 3);
    CHECK(TraceVector::index_pair(1, 3) == 4);
    CHECK(TraceVector::index_pair(3, 2) == 5);
    CHECK(TraceVector::index_single(4) == 6);
    CHECK(TraceVectorVn::index_single(2) == 2);
    CHECK(TraceVectorVn::index_pair(2, 2) == 3);
    CHECK(TraceVectorVn::index_pair(1, 2) == 4);
    CHECK(TraceVectorVn::index_single(3) == 5);
    CHECK(TraceVectorVn::index_pair(3, 3) == 6);
    CHECK(TraceVectorVn::index_pair(2, 3) == 8);
    CHECK_THROWS_AS(TraceVector(3, std::vector<Complex>(5, 0.0)), Error);
    CHECK_THROWS_AS(TraceVector(3, std::vector<Complex>{0, 0, 0, 0, 0, Complex{NAN, 0}}), Error);
}

TEST_CASE("invert_Tn on the zero vector") {
    const TraceVector z = tv(3, std::vector<Complex>(6, 0.0));
    std::string branch;
    const Tuple base = base_solution(z, {}, &branch);
    CHECK(branch == "generic");
    const Tuple expected = zero_trace_tuple();
    for (std::size_t j = 1; j <= 3; ++j) CHECK(distance(base[j], expected[j]) < 1e-15);
    CHECK(forward_residual(base, z) == 0.0);

    const Fiber f = invert_Tn(z);
    CHECK(f.status == FiberStatus::NonemptyFinite);
    REQUIRE(f.orbits.size() == 2);
    CHECK(f.orbits[0].signs == "+");
    CHECK(f.orbits[1].signs == "-");
    const Tuple& p = f.orbits[0].representative;
    const Tuple& m = f.orbits[1].representative;
    CHECK(std::abs(corpus::trace_of_product({p[1], p[2], p[3]}) - 2.0) < 1e-12);
    CHECK(std::abs(corpus::trace_of_product({m[1], m[2], m[3]}) + 2.0) < 1e-12);
    CHECK(f.orbits[0].residual == 0.0);
    CHECK(f.orbits[1].residual == 0.0);
}

TEST_CASE("invert_Tn branches") {
    SUBCASE("n = 2") {
        const TraceVector z = tv(2, {3.0, 3.0, 3.0});
        CHECK(sigma_z(z, 1, 2) == Complex{-4.0});
        const Fiber f = invert_Tn(z);
        CHECK(f.status == FiberStatus::NonemptyFinite);
        REQUIRE(f.orbits.size() == 1);
        CHECK(f.orbits[0].signs.empty());
        CHECK(f.orbits[0].residual <= 1e-12);
    }
    SUBCASE("parabolic branch") {
        RandomStream rs(2);
        const TraceVector z = tv(3, {2.0, 2.0, -2.0, rs.normal(), rs.normal(), rs.normal()});
        CHECK(std::abs(sigma_z(z, 1, 2) - 16.0) < 1e-12);
        std::string branch;
        const Tuple base = base_solution(z, {}, &branch);
        CHECK(branch == "parabolic");
        // lambda^2 = (2 - (-2)) / 4 = 1: A1 = [[1 + l, i l], [i l, 1 - l]]
        const Complex lambda = base[1].a - 1.0;
        CHECK(std::abs(lambda * lambda - 1.0) < 1e-12);
        CHECK(std::abs(base[1].b - I * lambda) < 1e-12);
        CHECK(forward_residual(base, z) <= 1e-12);
    }
    SUBCASE("swapped branch") {
        RandomStream rs(3);
        std::vector<Complex> c(9);
        for (Complex& x : c) x = rs.normal();
        c[0] = -2.0;
        const TraceVector z = tv(4, c);
        REQUIRE(std::abs(sigma_z(z, 1, 2)) > 0.1);
        std::string branch;
        const Tuple base = base_solution(z, {}, &branch);
        CHECK(branch == "swap12");
        CHECK(forward_residual(base, z) <= 1e-10);
        CHECK(std::abs(base[2].b) < 1e-12);
        CHECK(std::abs(base[1].b - base[1].c) < 1e-12);
    }
    SUBCASE("non-finite input") { CHECK_THROWS_AS(tv(2, {0.0, INFINITY, 0.0}), Error); }
}

TEST_CASE("surjectivity off sigma_12 = 0") {
    RandomStream rs(4);
    int trials = 0;
    while (trials < 300) {
        const std::size_t n = 2 + trials % 7;
        std::vector<Complex> c(TraceVector::length(n));
        for (Complex& x : c) x = 2.0 * rs.normal();
        const TraceVector z(n, c);
        if (std::abs(sigma_z(z, 1, 2)) <= 0.1) continue;
        ++trials;
        const Fiber f = invert_Tn(z);
        CHECK(f.status == FiberStatus::NonemptyFinite);
        CHECK(f.orbits.size() <= (std::size_t{1} << (n - 2)));
        for (const auto& o : f.orbits) CHECK(o.residual <= 1e-8);
    }
}

TEST_CASE("enumerate_fiber") {
    const TraceVector z = tv(3, std::vector<Complex>(6, 0.0));
    SUBCASE("zero vector") {
        const Fiber f = enumerate_fiber(zero_trace_tuple(), z);
        CHECK(f.orbits.size() == 2);
    }
    SUBCASE("gamma_3 = 0 collapses the flip") {
        // A3 symmetric: alpha = 0.3, beta = 0.4, delta^2 = 1 - 0.09 - 0.16
        const Mat2 a3 = from_quaternion(0.3, 0.4, 0.0, std::sqrt(0.75));
        const Tuple base{Mat2::diag(I, -I), Mat2{0.0, I, I, 0.0}, a3};
        const Fiber f = enumerate_fiber(base, forward_Tn(base));
        CHECK(f.orbits.size() == 1);
    }
    SUBCASE("generic fibers have 2^(n-2) orbits in binary order") {
        RandomStream rs(5);
        const Tuple A = random_with_sigma12(rs, 5);
        const Fiber f = invert_Tn(forward_Tn(A));
        REQUIRE(f.orbits.size() == 8);
        const char* order[] = {"+++", "++-", "+-+", "+--", "-++", "-+-", "--+", "---"};
        for (std::size_t i = 0; i < 8; ++i) CHECK(f.orbits[i].signs == order[i]);
        for (std::size_t i = 0; i < 8; ++i)
            for (std::size_t j = i + 1; j < 8; ++j)
                CHECK_FALSE(fingerprints_match(fingerprint(f.orbits[i].representative), fingerprint(f.orbits[j].representative)));
    }
    SUBCASE("invalid bases") {
        auto kind = [&](const Tuple& b, const TraceVector& w) {
            try {
                enumerate_fiber(b, w);
            } catch (const Error& e) {
                return e.kind();
            }
            return ErrorKind::InvalidInput;
        };
        RandomStream rs(6);
        CHECK(kind(corpus::random_sl2_tuple(rs, 3), z) == ErrorKind::InvalidBase);
        const Tuple wrong{Mat2::diag(I, -I), Mat2{0.0, I, I, 0.0}, Mat2{0.0, 1.0, -1.0, 0.0}};
        CHECK(kind(wrong, tv(3, {0, 0, 0, 0, 0, 1.0})) == ErrorKind::InvalidBase);
        const Tuple tri{Mat2::diag(I, -I), Mat2::diag(I, -I), Mat2::identity()};
        CHECK(kind(tri, forward_Tn(tri)) == ErrorKind::InvalidBase);
    }
}

TEST_CASE("sign actions are conjugations") {
    RandomStream rs(7);
    for (int i = 0; i < 20; ++i) {
        const Tuple A = random_with_sigma12(rs, 4);
        const Tuple base = base_solution(forward_Tn(A));
        const Tuple s1 = flip(base, true, true, false);
        const Tuple s2 = flip(base, false, true, true);
        CHECK(conjugator(base, s1).has_value());
        CHECK(conjugator(base, s2).has_value());
        CHECK_FALSE(conjugator(base, flip(base, false, true, false)).has_value());
    }
}

TEST_CASE("fiber_cross_check") {
    const auto plus = fiber_cross_check(zero_trace_tuple());
    CHECK(plus.passed);
    REQUIRE(plus.matched_orbit);
    CHECK(plus.fiber.orbits[*plus.matched_orbit].signs == "+");

    const Tuple A = zero_trace_tuple();
    const auto minus = fiber_cross_check(Tuple{A[1], A[2], A[3].transpose()});
    CHECK(minus.passed);
    REQUIRE(minus.matched_orbit);
    CHECK(minus.fiber.orbits[*minus.matched_orbit].signs == "-");

    RandomStream rs(8);
    for (std::size_t n = 2; n <= 6; ++n) {
        for (int i = 0; i < 20; ++i) {
            const auto rep = fiber_cross_check(random_with_sigma12(rs, n));
            CHECK(rep.passed);
            CHECK(rep.matches == 1);
        }
    }
    const auto bad = fiber_cross_check(corpus::conjugated_upper(rs, 3));
    CHECK_FALSE(bad.passed);
    CHECK_FALSE(bad.failures.empty());
}

TEST_CASE("invert_on_Z12: unipotent family") {
    SUBCASE("rank 2 obstruction") {
        const Fiber f = invert_Tn(tv(4, {2, 2, 2, 0, 1, 0, 0, 0, 1}));
        CHECK(f.status == FiberStatus::Empty);
        REQUIRE(f.obstruction);
        CHECK((*f.obstruction)[0] == 3);
        CHECK((*f.obstruction)[1] == 4);
    }
    SUBCASE("sign variants are normalised") {
        // Negating A1 negates z1, z12, z13, z14.
        const Fiber f = invert_Tn(tv(4, {-2, 2, -2, 0, -1, 0, 0, 0, 1}));
        CHECK(f.status == FiberStatus::Empty);
    }
    SUBCASE("rank 0 gives a witness") {
        const TraceVector z = tv(3, {2, 2, 2, 1, 1, 1});
        const Fiber f = invert_on_Z12(z);
        CHECK(f.status == FiberStatus::Undetermined);
        REQUIRE(f.witness);
        CHECK(f.witness->residual <= 1e-8);
        CHECK(std::abs(f.witness->representative[3].c) < 1e-15);
        CHECK(f.orbits.empty());
    }
    SUBCASE("rank 1 gives a witness") {
        // u = (1, 2), v = (3, 6)
        const Complex z3 = 0.4, z4 = -0.7;
        const TraceVector z = tv(4, {2, 2, 2, z3, z3 + 1.0, z3 + 3.0, z4, z4 + 2.0, z4 + 6.0});
        const Fiber f = invert_Tn(z);
        CHECK(f.status == FiberStatus::Undetermined);
        REQUIRE(f.witness);
        CHECK(f.witness->residual <= 1e-8);
    }
}

TEST_CASE("invert_on_Z12: first generator with distinct eigenvalues") {
    // A1 = diag(a1 + i b1, a1 - i b1), A2 upper with off-diagonal 1 and
    // A_k with lower-left entry X_k: z2k picks up X_k.
    const Complex a1 = 0.3, b1 = std::sqrt(1.0 - 0.09);
    const Complex a2 = 0.2, b2 = -std::sqrt(1.0 - 0.04);
    auto coords = [&](const std::vector<std::array<Complex, 3>>& rest) {
        std::vector<Complex> c{2.0 * a1, 2.0 * a2, 2.0 * a1 * a2 - 2.0 * b1 * b2};
        for (const auto& [ak, bk, xk] : rest) {
            c.push_back(2.0 * ak);
            c.push_back(2.0 * a1 * ak - 2.0 * b1 * bk);
            c.push_back(2.0 * a2 * ak - 2.0 * b2 * bk + xk);
        }
        return c;
    };
    SUBCASE("c3 = 0 with q33 != 0 while c4 != 0 is empty") {
        const TraceVector z = tv(4, coords({{0.5, 0.1, 0.0}, {0.1, 0.7, 1.0}}));
        REQUIRE(std::abs(sigma_z(z, 1, 2)) < 1e-12);
        const Fiber f = invert_Tn(z);
        CHECK(f.status == FiberStatus::Empty);
        REQUIRE(f.obstruction);
        CHECK((*f.obstruction)[0] == 3);
        CHECK((*f.obstruction)[1] == 4);
    }
    SUBCASE("all c_k != 0 gives a witness") {
        const TraceVector z = tv(4, coords({{0.5, 0.1, 0.3}, {0.1, 0.7, 1.0}}));
        const Fiber f = invert_Tn(z);
        CHECK(f.status == FiberStatus::Undetermined);
        REQUIRE(f.witness);
        CHECK(f.witness->residual <= 1e-8);
    }
    SUBCASE("all c_k = 0 gives a diagonal witness") {
        const TraceVector z = tv(4, coords({{0.5, 0.1, 0.0}, {0.1, 0.7, 0.0}}));
        const Fiber f = invert_Tn(z);
        CHECK(f.status == FiberStatus::Undetermined);
        REQUIRE(f.witness);
        CHECK(f.witness->residual <= 1e-8);
        CHECK(std::abs(f.witness->representative[2].b) < 1e-12);
    }
    SUBCASE("swapped roles") {
        // exchange generators 1 and 2 with nu_1 = 0: A1 = I, A2 diagonal
        const TraceVector z = tv(3, {2.0, 2.0 * a1, 2.0 * a1, 1.0, 1.0, 2.0 * a1});
        const Fiber f = invert_Tn(z);
        CHECK(f.status == FiberStatus::Undetermined);
        REQUIRE(f.witness);
        CHECK(f.witness->residual <= 1e-8);
    }
}

TEST_CASE("no false Empty on images") {
    // z = T_n(A) for triangular (A1, A2) and arbitrary remaining entries.
    RandomStream rs(9);
    for (int i = 0; i < 300; ++i) {
        const std::size_t n = 2 + i % 5;
        std::vector<Mat2> m;
        if (i % 3 == 0) {
            m = {Mat2{1.0, rs.normal(), 0.0, 1.0}, Mat2{-1.0, rs.normal(), 0.0, -1.0}};
        } else {
            m = {corpus::upper(corpus::moderate(rs), rs.normal()), corpus::upper(corpus::moderate(rs), rs.normal())};
        }
        while (m.size() < n) m.push_back(rs.sl2());
        const Tuple A = corpus::conjugated(rs.conjugator(), m);
        const Fiber f = invert_Tn(forward_Tn(A));
        CHECK(f.status == FiberStatus::Undetermined);
        REQUIRE(f.witness);
        CHECK(f.witness->residual <= 1e-8);
    }
}

TEST_CASE("n = 3 fibers on sigma_12 = 0 are never reported empty") {
    RandomStream rs(10);
    for (int i = 0; i < 200; ++i) {
        std::vector<Complex> c(6);
        for (Complex& x : c) x = rs.normal();
        if (i % 2 == 0) {
            c[0] = 2.0;
            c[1] = i % 4 ? 2.0 : -2.0;
            c[2] = 0.5 * c[0] * c[1];
        } else {
            // z12 solving sigma_12 = 0 for random z1, z2
            const Complex p = c[0] * c[1];
            const Complex q = c[0] * c[0] + c[1] * c[1] - 4.0;
            c[2] = 0.5 * (p + std::sqrt(p * p - 4.0 * q));
        }
        const TraceVector z(3, c);
        const Fiber f = invert_Tn(z);
        CHECK(f.status == FiberStatus::Undetermined);
        REQUIRE(f.witness);
        CHECK(f.witness->residual <= 1e-8);
    }
}

TEST_CASE("V_n map") {
    const TraceVectorVn ids = forward_That_n(Tuple(std::vector<Mat2>(2, Mat2::identity())));
    CHECK(ids.coords() == std::vector<Complex>(5, 2.0));

    const Tuple A = Tuple::with_flag({Mat2::diag(2.0, 1.0), Mat2{1.0, 1.0, 0.0, 2.0}}, false);
    const TraceVectorVn z = forward_That_n(A);
    CHECK(z.coords() == std::vector<Complex>{3.0, 5.0, 3.0, 5.0, 4.0});
    const Fiber f = invert_That_n(z);
    CHECK(f.status == FiberStatus::Undetermined);
    CHECK(f.notes == "vn-sigma12-zero");

    RandomStream rs(11);
    for (int i = 0; i < 100; ++i) {
        const std::size_t n = 2 + i % 4;
        std::vector<Mat2> m;
        for (std::size_t j = 0; j < n; ++j) m.push_back(rs.matrix());
        const Tuple B = Tuple::with_flag(std::move(m), false);
        const TraceVectorVn w = forward_That_n(B);
        const TraceVectorVn wc = forward_That_n(conjugate_tuple(rs.conjugator(), B));
        CHECK(corpus::max_abs_diff(w.coords(), wc.coords()) <= 1e-9 * std::max(1.0, B.norm() * B.norm()));
        for (std::size_t k = 3; k <= n; ++k) {
            const Complex d = delta(B, 1, 2, k);
            CHECK(std::abs(delta_12k_z(w, k) - d) <= 1e-9 * std::max(1.0, std::abs(d)));
        }
        if (std::abs(sigma(B, 1, 2)) < 0.1 || std::abs(tau(B, 1, 1)) < 0.1) continue;
        const Fiber g = invert_That_n(w);
        REQUIRE(g.status == FiberStatus::NonemptyFinite);
        double best = INFINITY;
        for (const auto& o : g.orbits) {
            CHECK(o.residual <= 1e-8);
            best = std::min(best, corpus::max_abs_diff(vn_fingerprint(o.representative), vn_fingerprint(B)));
        }
        CHECK(best <= 1e-7);
    }

    const Tuple T = Tuple::with_flag({Mat2{0.0, 1.0, 1.0, 0.0}, Mat2{1.0, 2.0, 2.0, 1.0}}, false);
    CHECK(invert_That_n(forward_That_n(T)).notes == "vn-sigma12-zero");
    const Tuple P = Tuple::with_flag({Mat2{1.0, 1.0, 0.0, 1.0}, Mat2{1.0, 0.0, 1.0, 2.0}}, false);
    CHECK(invert_That_n(forward_That_n(P)).notes == "vn-tau11-zero");
}
