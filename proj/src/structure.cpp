#include "sl2orbit/structure.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "sl2orbit/invariants.hpp"

namespace sl2orbit {

namespace {

// Witnesses that clear the tolerance by this factor are preferred when a
// generator change has a choice; the tolerance itself only decides zero-ness.
constexpr double kRobustMargin = 1e-6;

// Largest relative line residual accepted as a triangularization certificate.
constexpr double kCertificateTol = 1e-6;

bool sigma_nonzero(const Tuple& A, std::size_t j, std::size_t k, double tol) {
    return !near_zero(sigma(A, j, k), tol, sigma_scale(A, j, k));
}

Line normalized(Complex x, Complex y) {
    const double n = std::sqrt(std::norm(x) + std::norm(y));
    x /= n;
    y /= n;
    const Complex lead = std::abs(x) >= std::abs(y) ? x : y;
    const Complex phase = std::conj(lead) / std::abs(lead);
    return {x * phase, y * phase};
}

// Kernel of a rank-one 2x2 matrix from its dominant row.
Line kernel_direction(const Mat2& m) {
    const double r1 = std::norm(m.a) + std::norm(m.b);
    const double r2 = std::norm(m.c) + std::norm(m.d);
    if (r1 >= r2) return normalized(m.b, -m.a);
    return normalized(m.d, -m.c);
}

// Eigenvalues ordered (t + sqrt(disc)) / 2 first; a single value when the
// discriminant vanishes at tolerance.
std::vector<Complex> eigenvalues(const Mat2& m, double tol) {
    const Complex t = m.trace();
    const Complex disc = m.e() * m.e() + 4.0 * m.b * m.c;
    const double s = m.norm();
    if (near_zero(disc, tol, s * s)) return {0.5 * t};
    const Complex r = std::sqrt(disc);
    return {0.5 * (t + r), 0.5 * (t - r)};
}

std::vector<Line> eigenlines(const Mat2& m, double tol) {
    std::vector<Line> out;
    for (Complex lambda : eigenvalues(m, tol)) {
        out.push_back(kernel_direction(m - Mat2::diag(lambda, lambda)));
    }
    return out;
}

double component_line_residual(const Mat2& m, const Line& v) {
    const Complex wx = m.a * v.x + m.b * v.y;
    const Complex wy = m.c * v.x + m.d * v.y;
    const Complex lambda = std::conj(v.x) * wx + std::conj(v.y) * wy;
    const double r = std::sqrt(std::norm(wx - lambda * v.x) + std::norm(wy - lambda * v.y));
    return r / std::max(1.0, m.norm());
}

std::vector<Line> candidate_lines(const Tuple& A, double tol) {
    std::vector<Line> out;
    for (const Mat2& m : A.entries()) {
        if (m.is_scalar(tol)) continue;
        for (const Line& v : eigenlines(m, tol)) out.push_back(v);
    }
    if (out.empty()) {
        out.push_back({1.0, 0.0});
        out.push_back({0.0, 1.0});
    }
    return out;
}

// det-1 matrix whose columns are multiples of p and q.
Mat2 columns_to_sl2(Complex px, Complex py, Complex qx, Complex qy, double tol) {
    Mat2 P{px, qx, py, qy};
    const Complex det = P.det();
    if (near_zero(det, tol, P.norm() * P.norm())) {
        throw Error(ErrorKind::NumericalFailure, "basis completion is ill-conditioned");
    }
    P *= 1.0 / std::sqrt(det);
    return P;
}

// 4th root used to balance the off-diagonal entries b x^2 = c x^-2.
Mat2 balancing_diagonal(Complex b, Complex c) {
    const Complex x = std::sqrt(std::sqrt(c / b));
    return Mat2::diag(x, 1.0 / x);
}

}  // namespace

// ---------------------------------------------------------------- witnesses

std::string StabilityWitness::describe() const {
    std::ostringstream os;
    if (kind == Kind::Sigma) {
        os << "sigma_" << indices[0] << indices[1];
    } else {
        os << "Delta_" << indices[0] << indices[1] << indices[2];
    }
    // +0.0 turns a signed zero into a plain zero
    os << " = " << Complex(value.real() + 0.0, value.imag() + 0.0);
    return os.str();
}

std::optional<StabilityWitness> find_stability_witness(const Tuple& A, double tol) {
    const std::size_t n = A.size();
    for (std::size_t j = 1; j <= n; ++j)
        for (std::size_t k = j + 1; k <= n; ++k) {
            const Complex s = sigma(A, j, k);
            if (!near_zero(s, tol, sigma_scale(A, j, k))) {
                return StabilityWitness{StabilityWitness::Kind::Sigma, {j, k, 0}, s};
            }
        }
    for (std::size_t j = 1; j <= n; ++j)
        for (std::size_t k = j + 1; k <= n; ++k)
            for (std::size_t l = k + 1; l <= n; ++l) {
                const Complex d = delta(A, j, k, l);
                if (!near_zero(d, tol, delta_scale(A, j, k, l))) {
                    return StabilityWitness{StabilityWitness::Kind::Delta, {j, k, l}, d};
                }
            }
    return std::nullopt;
}

double line_residual(const Tuple& A, const Line& v) {
    double r = 0.0;
    for (const Mat2& m : A.entries()) r = std::max(r, component_line_residual(m, v));
    return r;
}

std::optional<Line> invariant_line_oracle(const Tuple& A, double tol) {
    for (const Line& v : candidate_lines(A, tol)) {
        if (line_residual(A, v) <= tol) return v;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------- triangularization

TriangularizationResult triangularize(const Tuple& A, double tol) {
    TriangularizationResult result;
    result.witness = find_stability_witness(A, tol);
    if (result.witness) return result;

    result.triangularizable = true;
    std::optional<Line> best;
    double best_residual = 0.0;
    for (const Line& v : candidate_lines(A, tol)) {
        const double r = line_residual(A, v);
        if (!best || r < best_residual) {
            best = v;
            best_residual = r;
        }
    }
    if (!best || best_residual > kCertificateTol) {
        throw Error(ErrorKind::NumericalFailure,
                    "invariants vanish but no invariant line was found (best residual " +
                        std::to_string(best_residual) + ")");
    }
    const Line& v = *best;
    // Unitary completion [v, w] with det = |v|^2 = 1; its inverse maps v to e1.
    const Mat2 basis{v.x, -std::conj(v.y), v.y, std::conj(v.x)};
    result.conjugator = basis.adjugate();
    return result;
}

StabilityVerdict is_stable(const Tuple& A, double tol) {
    auto w = find_stability_witness(A, tol);
    return {w.has_value(), w};
}

StabilityVerdict is_irreducible(const Tuple& A, double tol) {
    if (!A.sl2()) throw Error(ErrorKind::NotSL2, "is_irreducible requires an SL2 tuple");
    return is_stable(A, tol);
}

// ---------------------------------------------------------------- Culler-Shalen sampling

const char* to_string(CullerShalenEvidence::Verdict v) {
    switch (v) {
        case CullerShalenEvidence::Verdict::Irreducible: return "Irreducible";
        case CullerShalenEvidence::Verdict::Inconclusive: return "Inconclusive";
        case CullerShalenEvidence::Verdict::Unknown: return "Unknown";
    }
    return "Unknown";
}

namespace {

Word random_word(RandomStream& rs, int n, int max_len) {
    const int len = rs.uniform_int(1, std::max(1, max_len));
    std::vector<int> letters;
    for (int i = 0; i < len; ++i) {
        int g = rs.uniform_int(1, n);
        if (rs.uniform_int(0, 1) == 1) g = -g;
        letters.push_back(g);
    }
    return Word(std::move(letters));
}

Word random_commutator_word(RandomStream& rs, int n) {
    constexpr int kMaxLength = 16;
    const int depth = rs.uniform_int(1, 4);
    const int budget = kMaxLength / depth;  // per commutator, 2(|x| + |y|) <= budget
    Word w;
    for (int i = 0; i < depth; ++i) {
        const int half = budget / 2;
        const Word x = random_word(rs, n, half - 1);
        const Word y = random_word(rs, n, std::max(1, half - static_cast<int>(x.length())));
        w = w * Word::commutator(x, y);
    }
    return w;
}

}  // namespace

CullerShalenEvidence culler_shalen_sample(const Tuple& A, std::size_t samples, std::uint64_t seed,
                                          double certify) {
    if (!A.sl2()) throw Error(ErrorKind::NotSL2, "culler_shalen_sample requires an SL2 tuple");
    CullerShalenEvidence ev;
    ev.samples = samples;
    if (samples == 0) return ev;

    const int n = static_cast<int>(A.size());
    RandomStream rs(seed);
    for (std::size_t s = 0; s < samples; ++s) {
        Word w;
        if (s == 0 && n >= 2) {
            w = Word::commutator(Word{1}, Word{2});
        } else {
            w = random_commutator_word(rs, n);
        }
        const double dev = std::abs(trace_word(w, A) - 2.0);
        if (!ev.witness || dev > ev.max_deviation) {
            ev.max_deviation = dev;
            ev.witness = w;
        }
    }
    ev.verdict = ev.max_deviation > certify ? CullerShalenEvidence::Verdict::Irreducible
                                            : CullerShalenEvidence::Verdict::Inconclusive;
    return ev;
}

// ---------------------------------------------------------------- normal forms

ConjugatedTuple diagonalize_component(const Tuple& A, std::size_t j, double tol) {
    for (std::size_t k = 1; k <= A.size(); ++k) {
        if (!near_zero(A[k].c, tol, A[k].norm())) {
            throw Error(ErrorKind::NotApplicable, "diagonalize_component: component " +
                                                      std::to_string(k) +
                                                      " is not upper triangular");
        }
    }
    const Mat2& m = A[j];
    if (near_zero(m.e(), tol, m.norm())) {
        throw Error(ErrorKind::DegenerateEigenvalues,
                    "diagonalize_component: e_" + std::to_string(j) + " vanishes");
    }
    const Mat2 g{1.0, m.b / m.e(), 0.0, 1.0};
    return {conjugate_tuple(g, A, tol), g};
}

const char* to_string(NormalForm::Shape s) {
    switch (s) {
        case NormalForm::Shape::DiagonalFirst: return "DiagonalFirst";
        case NormalForm::Shape::DiagonalSecond: return "DiagonalSecond";
        case NormalForm::Shape::Parabolic: return "Parabolic";
    }
    return "Unknown";
}

namespace {

// x has distinct eigenvalues: diagonalise it, then balance y's off-diagonal.
Mat2 diagonal_pair_conjugator(const Mat2& x, const Mat2& y, double tol) {
    const auto lines = eigenlines(x, tol);
    const Mat2 P = columns_to_sl2(lines[0].x, lines[0].y, lines[1].x, lines[1].y, tol);
    const Mat2 g1 = P.adjugate();
    const Mat2 y1 = g1 * y * P;
    return balancing_diagonal(y1.b, y1.c) * g1;
}

// Both have a repeated eigenvalue: send x to upper and y to lower triangular
// form, balance, then rotate by (1/sqrt 2)[[1, i], [i, 1]].
Mat2 parabolic_pair_conjugator(const Mat2& x, const Mat2& y, double tol) {
    const Line vx = kernel_direction(x - Mat2::diag(0.5 * x.trace(), 0.5 * x.trace()));
    const Line vy = kernel_direction(y - Mat2::diag(0.5 * y.trace(), 0.5 * y.trace()));
    const Mat2 P = columns_to_sl2(vx.x, vx.y, vy.x, vy.y, tol);
    const Mat2 g1 = P.adjugate();
    const Mat2 x1 = g1 * x * P;
    const Mat2 y1 = g1 * y * P;
    const Mat2 D = balancing_diagonal(x1.b, y1.c);
    const Complex i{0.0, 1.0};
    const Mat2 h = (1.0 / std::sqrt(2.0)) * Mat2{1.0, i, i, 1.0};
    return h * D * g1;
}

bool symmetric(const Mat2& m, double tol) { return near_zero(m.b - m.c, tol, m.norm()); }

}  // namespace

NormalForm transposition_normal_form(const Tuple& A, double tol) {
    if (A.size() < 2) throw Error(ErrorKind::NotApplicable, "normal form needs n >= 2");
    if (!sigma_nonzero(A, 1, 2, tol)) {
        throw Error(ErrorKind::NotApplicable, "normal form needs sigma_12 != 0");
    }
    const Mat2& a1 = A[1];
    const Mat2& a2 = A[2];
    const bool nu1_zero = near_zero(nu(A, 1), tol, a1.norm() * a1.norm());
    const bool nu2_zero = near_zero(nu(A, 2), tol, a2.norm() * a2.norm());
    const Complex i{0.0, 1.0};

    NormalForm nf;
    if (!nu1_zero) {
        nf.shape = NormalForm::Shape::DiagonalFirst;
        const bool done = near_zero(a1.b, tol, a1.norm()) && near_zero(a1.c, tol, a1.norm()) &&
                          symmetric(a2, tol);
        nf.conjugator = done ? Mat2::identity() : diagonal_pair_conjugator(a1, a2, tol);
    } else if (!nu2_zero) {
        nf.shape = NormalForm::Shape::DiagonalSecond;
        const bool done = near_zero(a2.b, tol, a2.norm()) && near_zero(a2.c, tol, a2.norm()) &&
                          symmetric(a1, tol);
        nf.conjugator = done ? Mat2::identity() : diagonal_pair_conjugator(a2, a1, tol);
    } else {
        nf.shape = NormalForm::Shape::Parabolic;
        const bool done = symmetric(a1, tol) && symmetric(a2, tol);
        nf.conjugator = done ? Mat2::identity() : parabolic_pair_conjugator(a1, a2, tol);
    }
    nf.tuple = conjugate_tuple(nf.conjugator, A, tol);
    const Mat2& partner = nf.shape == NormalForm::Shape::DiagonalSecond ? nf.tuple[1] : nf.tuple[2];
    nf.parameter = nf.shape == NormalForm::Shape::Parabolic ? nf.tuple[1].b / i : partner.b / i;
    return nf;
}

// ---------------------------------------------------------------- generator changes

std::string GeneratorMove::describe() const {
    std::ostringstream os;
    if (kind == Kind::Transpose) {
        os << "swap e" << j << " <-> e" << k;
    } else {
        os << "e" << j << " -> e" << j << " e" << k << "^" << exponent;
    }
    return os.str();
}

namespace {

void apply_move(std::vector<Mat2>& m, const GeneratorMove& mv, int sign, double tol) {
    if (mv.kind == GeneratorMove::Kind::Transpose) {
        std::swap(m[mv.j - 1], m[mv.k - 1]);
    } else {
        m[mv.j - 1] = m[mv.j - 1] * power(m[mv.k - 1], sign * mv.exponent, tol);
    }
}

void check_move(const GeneratorMove& mv, std::size_t n) {
    if (mv.j < 1 || mv.k < 1 || mv.j > n || mv.k > n || mv.j == mv.k) {
        throw Error(ErrorKind::IndexOutOfRange, "generator move " + mv.describe() +
                                                    " is invalid for n = " + std::to_string(n));
    }
}

}  // namespace

Tuple GeneratorChange::apply(const Tuple& A, double tol) const {
    std::vector<Mat2> m(A.entries().begin(), A.entries().end());
    for (const auto& mv : moves_) {
        check_move(mv, m.size());
        apply_move(m, mv, +1, tol);
    }
    return Tuple::with_flag(std::move(m), A.sl2());
}

Tuple GeneratorChange::undo(const Tuple& A, double tol) const {
    std::vector<Mat2> m(A.entries().begin(), A.entries().end());
    for (auto it = moves_.rbegin(); it != moves_.rend(); ++it) {
        check_move(*it, m.size());
        apply_move(m, *it, -1, tol);
    }
    return Tuple::with_flag(std::move(m), A.sl2());
}

std::vector<Word> GeneratorChange::images(std::size_t n) const {
    std::vector<Word> w;
    for (std::size_t j = 1; j <= n; ++j) w.push_back(Word{static_cast<int>(j)});
    for (const auto& mv : moves_) {
        check_move(mv, n);
        if (mv.kind == GeneratorMove::Kind::Transpose) {
            std::swap(w[mv.j - 1], w[mv.k - 1]);
        } else {
            w[mv.j - 1] = w[mv.j - 1] * w[mv.k - 1].pow(mv.exponent);
        }
    }
    return w;
}

namespace {

class MoveRecorder {
public:
    MoveRecorder(const Tuple& A, double tol) : current_(A), tol_(tol) {}

    void transpose(std::size_t j, std::size_t k) {
        if (j == k) return;
        record({GeneratorMove::Kind::Transpose, j, k, 0});
    }
    void shift(std::size_t j, std::size_t k, int m) {
        record({GeneratorMove::Kind::Shift, j, k, m});
    }
    /// Moves the listed indices (distinct) to positions 1, 2, ...
    void bring_to_front(std::vector<std::size_t> targets) {
        for (std::size_t p = 0; p < targets.size(); ++p) {
            const std::size_t from = targets[p];
            const std::size_t to = p + 1;
            if (from == to) continue;
            transpose(to, from);
            for (std::size_t q = p + 1; q < targets.size(); ++q) {
                if (targets[q] == to) targets[q] = from;
            }
        }
    }

    const Tuple& tuple() const { return current_; }
    GeneratorChange change() const { return change_; }

private:
    void record(GeneratorMove mv) {
        GeneratorChange one;
        one.push(mv);
        current_ = one.apply(current_, tol_);
        change_.push(mv);
    }

    Tuple current_;
    GeneratorChange change_;
    double tol_;
};

double relative(Complex value, double scale) { return std::abs(value) / std::max(1.0, scale); }

std::optional<std::pair<std::size_t, std::size_t>> first_sigma_pair(const Tuple& A, double tol,
                                                                     std::size_t limit) {
    std::optional<std::pair<std::size_t, std::size_t>> fallback;
    for (std::size_t j = 1; j <= limit; ++j)
        for (std::size_t k = j + 1; k <= limit; ++k) {
            const double r = relative(sigma(A, j, k), sigma_scale(A, j, k));
            if (r > kRobustMargin) return std::make_pair(j, k);
            if (!fallback && r > tol) fallback = std::make_pair(j, k);
        }
    return fallback;
}

std::vector<int> shift_exponents() {
    std::vector<int> out;
    for (int m = 1; m <= 8; ++m) {
        out.push_back(m);
        out.push_back(-m);
    }
    return out;
}

}  // namespace

FixedGenerators fix_generators(const Tuple& A, double tol) {
    const auto verdict = is_irreducible(A, tol);
    if (!verdict.stable) {
        throw Error(ErrorKind::NotIrreducible, "fix_generators requires an irreducible tuple");
    }
    MoveRecorder rec(A, tol);
    const std::size_t n = A.size();

    auto pair = first_sigma_pair(rec.tuple(), tol, n);
    if (!pair) {
        // Every sigma vanishes: move a triple with Delta != 0 to the front
        // and shift one of its generators by another.
        const auto& w = *verdict.witness;
        rec.bring_to_front({w.indices[0], w.indices[1], w.indices[2]});
        bool found = false;
        std::optional<GeneratorMove> fallback;
        for (int m : shift_exponents()) {
            for (std::size_t a = 1; a <= 3 && !found; ++a)
                for (std::size_t b = 1; b <= 3 && !found; ++b) {
                    if (a == b) continue;
                    GeneratorChange trial;
                    trial.push({GeneratorMove::Kind::Shift, a, b, m});
                    const Tuple t = trial.apply(rec.tuple(), tol);
                    const auto p = first_sigma_pair(t, tol, 3);
                    if (!p) continue;
                    if (relative(sigma(t, p->first, p->second),
                                 sigma_scale(t, p->first, p->second)) > kRobustMargin) {
                        rec.shift(a, b, m);
                        found = true;
                    } else if (!fallback) {
                        fallback = trial.moves().front();
                    }
                }
            if (found) break;
        }
        if (!found && fallback) {
            rec.shift(fallback->j, fallback->k, fallback->exponent);
            found = true;
        }
        if (!found) {
            throw Error(ErrorKind::NumericalFailure, "no shift with |m| <= 8 made a sigma nonzero");
        }
        pair = first_sigma_pair(rec.tuple(), tol, n);
    }
    rec.bring_to_front({pair->first, pair->second});

    auto nu_ok = [&](const Tuple& t, std::size_t j, double margin) {
        const double s = t[j].norm();
        return relative(nu(t, j), s * s) > margin;
    };
    if (!nu_ok(rec.tuple(), 1, tol)) {
        if (nu_ok(rec.tuple(), 2, tol)) {
            rec.transpose(1, 2);
        } else {
            std::optional<int> chosen;
            std::optional<int> fallback;
            for (int m : shift_exponents()) {
                GeneratorChange trial;
                trial.push({GeneratorMove::Kind::Shift, 1, 2, m});
                const Tuple t = trial.apply(rec.tuple(), tol);
                if (!sigma_nonzero(t, 1, 2, tol)) continue;
                if (nu_ok(t, 1, kRobustMargin)) {
                    chosen = m;
                    break;
                }
                if (!fallback && nu_ok(t, 1, tol)) fallback = m;
            }
            if (!chosen) chosen = fallback;
            if (!chosen) {
                throw Error(ErrorKind::NumericalFailure, "no shift e1 -> e1 e2^m with |m| <= 8 made nu_1 nonzero");
            }
            rec.shift(1, 2, *chosen);
        }
    }
    return {rec.tuple(), rec.change()};
}

// ---------------------------------------------------------------- conjugator

std::optional<Mat2> conjugator(const Tuple& A, const Tuple& B, double tol) {
    if (A.size() != B.size()) return std::nullopt;
    const std::size_t n = A.size();
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(4 * n), 4);
    for (std::size_t j = 0; j < n; ++j) {
        const Mat2& a = A.entries()[j];
        const Mat2& b = B.entries()[j];
        const auto r = static_cast<Eigen::Index>(4 * j);
        // unknowns (x, y, z, w) of g = [[x, y], [z, w]] in g a - b g = 0
        M.row(r + 0) << a.a - b.a, a.c, -b.b, 0.0;
        M.row(r + 1) << a.b, a.d - b.a, 0.0, -b.b;
        M.row(r + 2) << -b.c, 0.0, a.a - b.d, a.c;
        M.row(r + 3) << 0.0, -b.c, a.b, a.d - b.d;
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const Eigen::MatrixXcd& V = svd.matrixV();
    const double threshold = std::sqrt(tol) * std::max(1.0, sv(0));

    std::vector<Eigen::Vector4cd> basis;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) <= threshold) basis.push_back(V.col(i));
    }
    if (basis.empty()) basis.push_back(V.col(3));

    auto as_mat = [](const Eigen::Vector4cd& v) { return Mat2{v(0), v(1), v(2), v(3)}; };
    auto quality = [](const Mat2& g) { return std::abs(g.det()) / std::max(1e-300, g.norm() * g.norm()); };

    Mat2 best = as_mat(basis.front());
    double best_q = quality(best);
    for (const auto& v : basis) {
        const Mat2 g = as_mat(v);
        if (quality(g) > best_q) {
            best = g;
            best_q = quality(g);
        }
    }
    if (basis.size() > 1) {
        RandomStream rs(0x5eed);
        for (int trial = 0; trial < 16; ++trial) {
            Eigen::Vector4cd v = Eigen::Vector4cd::Zero();
            for (const auto& b : basis) v += rs.normal() * b;
            const Mat2 g = as_mat(v);
            if (quality(g) > best_q) {
                best = g;
                best_q = quality(g);
            }
        }
    }
    if (best_q <= tol) return std::nullopt;

    best *= 1.0 / std::sqrt(best.det());
    const double scale = best.norm() * std::max(A.norm(), B.norm());
    for (std::size_t j = 0; j < n; ++j) {
        const Mat2 r = best * A.entries()[j] - B.entries()[j] * best;
        if (!near_zero(r.norm(), tol, scale)) return std::nullopt;
    }
    return best;
}

}  // namespace sl2orbit
