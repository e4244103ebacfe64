#include "sl2orbit/invariants.hpp"

#include <cmath>
#include <limits>

namespace sl2orbit {

Complex tau(const Tuple& A, std::size_t j, std::size_t k) {
    const Mat2& x = A[j];
    const Mat2& y = A[k];
    return (x * y).trace() - 0.5 * x.trace() * y.trace();
}

Complex tau_entrywise(const Tuple& A, std::size_t j, std::size_t k) {
    const Mat2& x = A[j];
    const Mat2& y = A[k];
    return 0.5 * x.e() * y.e() + x.b * y.c + x.c * y.b;
}

Complex nu(const Tuple& A, std::size_t j) { return tau(A, j, j); }

Complex sigma(const Tuple& A, std::size_t j, std::size_t k) {
    const Complex t = tau(A, j, k);
    return t * t - tau(A, j, j) * tau(A, k, k);
}

Complex sigma_entrywise(const Tuple& A, std::size_t j, std::size_t k) {
    const Mat2& x = A[j];
    const Mat2& y = A[k];
    const Complex bc = x.b * y.c - x.c * y.b;
    return bc * bc - (x.b * y.e() - x.e() * y.b) * (x.c * y.e() - x.e() * y.c);
}

Complex sigma_sl2_traces(const Tuple& A, std::size_t j, std::size_t k) {
    const Complex tj = A[j].trace();
    const Complex tk = A[k].trace();
    const Complex tjk = (A[j] * A[k]).trace();
    return tj * tj + tk * tk + tjk * tjk - tj * tk * tjk - 4.0;
}

Complex delta(const Tuple& A, std::size_t j, std::size_t k, std::size_t l) {
    const Complex d = (A[j] * A[k] * A[l]).trace() - (A[l] * A[k] * A[j]).trace();
    return d * d;
}

double sigma_scale(const Tuple& A, std::size_t j, std::size_t k) {
    const double s = A[j].norm() * A[k].norm();
    return s * s;
}

double delta_scale(const Tuple& A, std::size_t j, std::size_t k, std::size_t l) {
    const double s = A[j].norm() * A[k].norm() * A[l].norm();
    return s * s;
}

Complex GramMatrix3::leading_minor() const { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }

Complex GramMatrix3::determinant() const {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

GramMatrix3 gram(const Tuple& A, std::size_t j, std::size_t k, std::size_t l) {
    const std::array<std::size_t, 3> idx{j, k, l};
    GramMatrix3 g;
    for (int r = 0; r < 3; ++r) {
        for (int c = r; c < 3; ++c) {
            g.m[r][c] = tau(A, idx[r], idx[c]);
            g.m[c][r] = g.m[r][c];
        }
    }
    return g;
}

std::vector<Word> Fingerprint::words(std::size_t n) {
    const int m = static_cast<int>(n);
    std::vector<Word> out;
    out.reserve(length(n));
    for (int j = 1; j <= m; ++j) out.push_back(Word{j});
    for (int j = 1; j <= m; ++j)
        for (int k = j + 1; k <= m; ++k) out.push_back(Word{j, k});
    for (int j = 1; j <= m; ++j)
        for (int k = j + 1; k <= m; ++k)
            for (int l = k + 1; l <= m; ++l) out.push_back(Word{j, k, l});
    return out;
}

Fingerprint fingerprint(const Tuple& A) {
    if (!A.sl2()) throw Error(ErrorKind::NotSL2, "fingerprint requires an SL2 tuple");
    const std::size_t n = A.size();
    Fingerprint fp{n, {}};
    fp.values.reserve(Fingerprint::length(n));
    for (std::size_t j = 1; j <= n; ++j) fp.values.push_back(A[j].trace());
    for (std::size_t j = 1; j <= n; ++j)
        for (std::size_t k = j + 1; k <= n; ++k) fp.values.push_back((A[j] * A[k]).trace());
    for (std::size_t j = 1; j <= n; ++j)
        for (std::size_t k = j + 1; k <= n; ++k) {
            const Mat2 jk = A[j] * A[k];
            for (std::size_t l = k + 1; l <= n; ++l) fp.values.push_back((jk * A[l]).trace());
        }
    return fp;
}

double fingerprint_distance(const Fingerprint& x, const Fingerprint& y) {
    if (x.n != y.n || x.values.size() != y.values.size()) {
        return std::numeric_limits<double>::infinity();
    }
    double d = 0.0;
    for (std::size_t i = 0; i < x.values.size(); ++i) {
        d = std::max(d, std::abs(x.values[i] - y.values[i]));
    }
    return d;
}

bool fingerprints_match(const Fingerprint& x, const Fingerprint& y, double tol) {
    return fingerprint_distance(x, y) <= tol;
}

std::vector<Complex> vn_fingerprint(const Tuple& A) {
    const std::size_t n = A.size();
    auto comp = [&](std::size_t j) { return j == 0 ? Mat2::identity() : A[j]; };
    std::vector<Complex> out;
    out.reserve((n + 1) * (n + 1) * (n + 1));
    for (std::size_t j = 0; j <= n; ++j)
        for (std::size_t k = 0; k <= n; ++k) {
            const Mat2 jk = comp(j) * comp(k);
            for (std::size_t l = 0; l <= n; ++l) out.push_back((jk * comp(l)).trace());
        }
    return out;
}

Complex nu_z(const TraceVector& z, std::size_t j) {
    const Complex zj = z.single(j);
    return 0.5 * zj * zj - 2.0;
}

Complex sigma_z(const TraceVector& z, std::size_t j, std::size_t k) {
    if (j == k) {
        z.single(j);
        return 0.0;
    }
    const Complex zj = z.single(j);
    const Complex zk = z.single(k);
    const Complex zjk = z.pair(j, k);
    return zj * zj + zk * zk + zjk * zjk - zj * zk * zjk - 4.0;
}

}  // namespace sl2orbit
