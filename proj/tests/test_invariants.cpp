#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sl2orbit/invariants.hpp"
#include "sl2orbit/magnus.hpp"
#include "support/corpus.hpp"

using namespace sl2orbit;

namespace {

const Complex I{0.0, 1.0};

bool near(Complex x, Complex y, double tol = 1e-12) { return std::abs(x - y) <= tol * std::max(1.0, std::abs(y)); }

// Non-SL2 triple with all sigma zero and Delta_123 = 1.
Tuple sigma_free_triple() {
    return Tuple::with_flag({Mat2::diag(2.0, 1.0), Mat2{1.0, 1.0, 0.0, 2.0}, Mat2{1.0, 0.0, -1.0, 2.0}}, false);
}

}  // namespace

TEST_CASE("tau") {
    const Tuple ids{Mat2::identity(), Mat2::identity()};
    CHECK(tau(ids, 1, 2) == Complex{0.0});
    const Tuple A = Tuple::with_flag({Mat2::diag(2.0, 1.0), Mat2{1.0, 1.0, 0.0, 2.0}}, false);
    // t12 = 4, t1 = t2 = 3
    CHECK(near(tau(A, 1, 2), -0.5));
    CHECK(near(tau_entrywise(A, 1, 2), -0.5));

    RandomStream rs(1);
    for (int i = 0; i < 1000; ++i) {
        const Tuple B = Tuple::with_flag({rs.matrix(), rs.matrix()}, false);
        CHECK(near(tau(B, 1, 2), tau_entrywise(B, 1, 2), 1e-12));
    }
    CHECK_THROWS_AS(tau(A, 1, 3), Error);
}

TEST_CASE("nu") {
    CHECK(nu(Tuple{Mat2::identity()}, 1) == Complex{0.0});
    // t = 2.5: nu = 6.25 / 2 - 2
    CHECK(near(nu(Tuple{Mat2::diag(2.0, 0.5)}, 1), 1.125));
    CHECK(nu(Tuple{Mat2{1.0, 1.0, 0.0, 1.0}}, 1) == Complex{0.0});
    RandomStream rs(2);
    for (int i = 0; i < 100; ++i) {
        const Tuple A = corpus::random_sl2_tuple(rs, 1);
        const Complex t = A[1].trace();
        CHECK(near(nu(A, 1), 0.5 * t * t - 2.0, 1e-10));
    }
}

TEST_CASE("sigma") {
    CHECK(sigma(Tuple{Mat2::diag(2.0, 0.5), Mat2{1.0, 1.0, 0.0, 1.0}}, 1, 2) == Complex{0.0});

    const Tuple A{Mat2::diag(2.0, 0.5), Mat2{0.0, 1.0, -1.0, 0.0}};
    CHECK(near(sigma(A, 1, 2), 2.25));
    CHECK(near(corpus::commutator_trace(A[1], A[2]) - 2.0, 2.25));
    CHECK(near(sigma_sl2_traces(A, 1, 2), 2.25));

    RandomStream rs(3);
    for (int i = 0; i < 200; ++i) {
        const Tuple B = Tuple::with_flag({rs.matrix(), rs.matrix(), rs.matrix()}, false);
        CHECK(near(sigma(B, 1, 2), sigma_entrywise(B, 1, 2), 1e-11));
        CHECK(near(sigma(B, 1, 3), sigma(B, 3, 1), 1e-12));
        CHECK(std::abs(sigma(B, 2, 2)) <= 1e-12 * std::max(1.0, sigma_scale(B, 2, 2)));
    }
}

TEST_CASE("delta") {
    const Tuple A = sigma_free_triple();
    const Complex t123 = trace_word(Word{1, 2, 3}, A);
    const Complex t321 = trace_word(Word{3, 2, 1}, A);
    CHECK(near(t123, 4.0));
    CHECK(near(t321, 5.0));
    CHECK(near(delta(A, 1, 2, 3), 1.0));
    // e1^2 b2^2 c3^2 with e1 = 1, b2 = 1, c3 = -1
    CHECK(near(delta(A, 1, 2, 3), std::pow(A[1].e() * A[2].b * A[3].c, 2)));
    CHECK(delta(A, 1, 1, 3) == Complex{0.0});
    for (std::size_t j = 1; j <= 3; ++j)
        for (std::size_t k = j + 1; k <= 3; ++k) CHECK(sigma(A, j, k) == Complex{0.0});

    RandomStream rs(4);
    for (int i = 0; i < 200; ++i) {
        const Tuple B = corpus::random_sl2_tuple(rs, 3);
        const Complex d = delta(B, 1, 2, 3);
        const double tol = 1e-10 * std::max(1.0, std::abs(d));
        CHECK(std::abs(delta(B, 1, 3, 2) - d) <= tol);
        CHECK(std::abs(delta(B, 2, 1, 3) - d) <= tol);
        CHECK(std::abs(delta(B, 2, 3, 1) - d) <= tol);
        CHECK(std::abs(delta(B, 3, 1, 2) - d) <= tol);
        CHECK(std::abs(delta(B, 3, 2, 1) - d) <= tol);
    }
}

TEST_CASE("gram matrix identities") {
    const Tuple ids{Mat2::identity(), Mat2::identity(), Mat2::identity()};
    const GramMatrix3 z = gram(ids, 1, 2, 3);
    for (const auto& row : z.m)
        for (Complex x : row) CHECK(x == Complex{0.0});

    RandomStream rs(5);
    for (int i = 0; i < 300; ++i) {
        const Tuple A = corpus::random_sl2_tuple(rs, 3);
        const GramMatrix3 g = gram(A, 1, 2, 3);
        const Complex s = sigma(A, 1, 2);
        const Complex d = delta(A, 1, 2, 3);
        CHECK(std::abs(g.leading_minor() + s) <= 1e-9 * std::max(1.0, std::abs(s)));
        CHECK(std::abs(g.determinant() + 0.5 * d) <= 1e-9 * std::max(1.0, std::abs(d)));
        CHECK(near(g.determinant(), corpus::det3(g.m), 1e-12));
        CHECK(g.m[0][1] == g.m[1][0]);
    }
}

TEST_CASE("fingerprint") {
    CHECK(Fingerprint::length(2) == 3);
    CHECK(Fingerprint::length(3) == 7);
    CHECK(Fingerprint::length(4) == 14);
    CHECK(Fingerprint::words(3).size() == 7);
    CHECK(Fingerprint::words(3)[6] == Word{1, 2, 3});

    const Tuple ids{Mat2::identity(), Mat2::identity(), Mat2::identity()};
    const Fingerprint f = fingerprint(ids);
    CHECK(f.values == std::vector<Complex>(7, 2.0));

    RandomStream rs(6);
    for (int i = 0; i < 50; ++i) {
        const Tuple A = corpus::random_sl2_tuple(rs, 4);
        const Tuple B = conjugate_tuple(rs.conjugator(), A);
        CHECK(fingerprints_match(fingerprint(A), fingerprint(B)));
        const auto words = Fingerprint::words(4);
        const Fingerprint fa = fingerprint(A);
        for (std::size_t w = 0; w < words.size(); ++w) CHECK(near(fa.values[w], trace_word(words[w], A), 1e-12));
    }
    try {
        fingerprint(Tuple::with_flag({Mat2::diag(2.0, 1.0)}, false));
        FAIL("expected NotSL2");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotSL2);
    }
}

TEST_CASE("vn_fingerprint covers words with repeats and the identity") {
    const Tuple A = sigma_free_triple();
    const auto v = vn_fingerprint(A);
    CHECK(v.size() == 64);
    CHECK(v[0] == Complex{2.0});
    CHECK(corpus::max_abs_diff(v, corpus::word_traces_upto3(A)) < 1e-12);
}

TEST_CASE("trace-coordinate forms") {
    const TraceVector twos(3, std::vector<Complex>(6, 2.0));
    CHECK(sigma_z(twos, 1, 2) == Complex{0.0});
    const TraceVector zeros(3, std::vector<Complex>(6, 0.0));
    CHECK(sigma_z(zeros, 1, 2) == Complex{-4.0});
    CHECK(nu_z(twos, 1) == Complex{0.0});
    CHECK(sigma_z(twos, 3, 3) == Complex{0.0});
    try {
        sigma_z(zeros, 3, 4);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK((e.kind() == ErrorKind::CoordinateUnavailable || e.kind() == ErrorKind::IndexOutOfRange));
    }
    const TraceVector z4(4, std::vector<Complex>(9, 0.0));
    try {
        sigma_z(z4, 3, 4);
        FAIL("expected CoordinateUnavailable");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::CoordinateUnavailable);
    }

    RandomStream rs(7);
    for (int i = 0; i < 100; ++i) {
        const Tuple A = corpus::random_sl2_tuple(rs, 4);
        const TraceVector z = forward_Tn(A);
        for (std::size_t k = 2; k <= 4; ++k) {
            CHECK(near(sigma_z(z, 1, k), sigma(A, 1, k), 1e-9));
            CHECK(near(sigma_z(z, 2, k == 2 ? 3 : k), sigma(A, 2, k == 2 ? 3 : k), 1e-9));
        }
        CHECK(near(nu_z(z, 3), nu(A, 3), 1e-10));
    }
}
