#include "sl2orbit/core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>

namespace sl2orbit {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidInput: return "InvalidInput";
        case ErrorKind::NotSL2: return "NotSL2";
        case ErrorKind::SingularConjugator: return "SingularConjugator";
        case ErrorKind::InvalidWord: return "InvalidWord";
        case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorKind::CoordinateUnavailable: return "CoordinateUnavailable";
        case ErrorKind::NumericalFailure: return "NumericalFailure";
        case ErrorKind::DegenerateEigenvalues: return "DegenerateEigenvalues";
        case ErrorKind::NotApplicable: return "NotApplicable";
        case ErrorKind::NotIrreducible: return "NotIrreducible";
        case ErrorKind::InvalidBase: return "InvalidBase";
    }
    return "Unknown";
}

// ---------------------------------------------------------------- Mat2

double Mat2::norm() const {
    return std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
}

bool Mat2::is_finite() const {
    auto ok = [](Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); };
    return ok(a) && ok(b) && ok(c) && ok(d);
}

bool Mat2::is_scalar(double tol) const {
    const double s = norm();
    return near_zero(b, tol, s) && near_zero(c, tol, s) && near_zero(a - d, tol, s);
}

Mat2& Mat2::operator+=(const Mat2& o) {
    a += o.a;
    b += o.b;
    c += o.c;
    d += o.d;
    return *this;
}

Mat2& Mat2::operator-=(const Mat2& o) {
    a -= o.a;
    b -= o.b;
    c -= o.c;
    d -= o.d;
    return *this;
}

Mat2& Mat2::operator*=(Complex s) {
    a *= s;
    b *= s;
    c *= s;
    d *= s;
    return *this;
}

Mat2 operator*(const Mat2& x, const Mat2& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
            x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

Mat2 operator*(Complex s, const Mat2& m) {
    Mat2 r = m;
    r *= s;
    return r;
}

Mat2 operator+(Mat2 x, const Mat2& y) { return x += y; }
Mat2 operator-(Mat2 x, const Mat2& y) { return x -= y; }
Mat2 operator-(const Mat2& m) { return {-m.a, -m.b, -m.c, -m.d}; }

double distance(const Mat2& x, const Mat2& y) { return (x - y).norm(); }

Mat2 sl2_inverse(const Mat2& m, double tol) {
    const double s = m.norm();
    if (!near_zero(m.det() - 1.0, tol, s * s)) {
        std::ostringstream os;
        os << "sl2_inverse: |det - 1| = " << std::abs(m.det() - 1.0) << " exceeds tolerance";
        throw Error(ErrorKind::NotSL2, os.str());
    }
    return m.adjugate();
}

Mat2 inverse(const Mat2& m, double tol) {
    const Complex det = m.det();
    const double s = m.norm();
    if (near_zero(det, tol * s * s, 0.0) || std::abs(det) == 0.0) {
        throw Error(ErrorKind::SingularConjugator, "inverse: matrix is numerically singular");
    }
    Mat2 r = m.adjugate();
    r *= 1.0 / det;
    return r;
}

Mat2 power(const Mat2& m, int exponent, double tol) {
    Mat2 base = exponent < 0 ? inverse(m, tol) : m;
    Mat2 result = Mat2::identity();
    for (unsigned k = static_cast<unsigned>(std::abs(exponent)); k > 0; k >>= 1) {
        if (k & 1u) result = result * base;
        base = base * base;
    }
    return result;
}

// ---------------------------------------------------------------- Tuple

TupleDiagnostic validate_tuple(std::span<const Mat2> entries, double tol) {
    TupleDiagnostic diag;
    diag.sl2 = true;
    for (std::size_t j = 0; j < entries.size(); ++j) {
        const Mat2& m = entries[j];
        if (!m.is_finite()) {
            throw Error(ErrorKind::InvalidInput,
                        "validate_tuple: component " + std::to_string(j + 1) + " is not finite");
        }
        const double r = std::abs(m.det() - 1.0);
        diag.det_residuals.push_back(r);
        diag.max_residual = std::max(diag.max_residual, r);
        if (r > tol) diag.sl2 = false;
    }
    return diag;
}

Tuple::Tuple(std::vector<Mat2> entries, double tol) : entries_(std::move(entries)) {
    if (entries_.empty()) throw Error(ErrorKind::InvalidInput, "tuple must have n >= 1 components");
    sl2_ = validate_tuple(entries_, tol).sl2;
}

Tuple Tuple::with_flag(std::vector<Mat2> entries, bool sl2) {
    Tuple t;
    t.entries_ = std::move(entries);
    t.sl2_ = sl2;
    return t;
}

const Mat2& Tuple::operator[](std::size_t j) const {
    if (j < 1 || j > entries_.size()) {
        throw Error(ErrorKind::IndexOutOfRange,
                    "component index " + std::to_string(j) + " outside 1.." +
                        std::to_string(entries_.size()));
    }
    return entries_[j - 1];
}

double Tuple::norm() const {
    double s = 0.0;
    for (const auto& m : entries_) s = std::max(s, m.norm());
    return s;
}

Tuple conjugate_tuple(const Mat2& g, const Tuple& tuple, double tol) {
    const Mat2 ginv = inverse(g, tol);
    std::vector<Mat2> out;
    out.reserve(tuple.size());
    for (const auto& m : tuple.entries()) out.push_back(g * m * ginv);
    return Tuple::with_flag(std::move(out), tuple.sl2());
}

// ---------------------------------------------------------------- Word

namespace {

std::vector<int> reduce(const std::vector<int>& letters) {
    std::vector<int> out;
    out.reserve(letters.size());
    for (int x : letters) {
        if (x == 0) throw Error(ErrorKind::InvalidWord, "word letter 0 is not a generator");
        if (!out.empty() && out.back() == -x) {
            out.pop_back();
        } else {
            out.push_back(x);
        }
    }
    return out;
}

}  // namespace

Word::Word(std::initializer_list<int> letters) : letters_(reduce(std::vector<int>(letters))) {}

Word::Word(std::vector<int> letters) : letters_(reduce(letters)) {}

Word Word::commutator(const Word& x, const Word& y) {
    return x * y * x.inverse() * y.inverse();
}

int Word::max_generator() const {
    int m = 0;
    for (int x : letters_) m = std::max(m, std::abs(x));
    return m;
}

Word Word::inverse() const {
    std::vector<int> r(letters_.rbegin(), letters_.rend());
    for (int& x : r) x = -x;
    return Word(std::move(r));
}

Word Word::pow(int m) const {
    const Word base = m < 0 ? inverse() : *this;
    Word r;
    for (int k = 0; k < std::abs(m); ++k) r = r * base;
    return r;
}

Word operator*(const Word& x, const Word& y) {
    std::vector<int> all(x.letters_);
    all.insert(all.end(), y.letters_.begin(), y.letters_.end());
    return Word(std::move(all));
}

std::string Word::to_string() const {
    if (letters_.empty()) return "1";
    std::ostringstream os;
    for (std::size_t i = 0; i < letters_.size(); ++i) {
        if (i) os << ' ';
        os << 'e' << std::abs(letters_[i]);
        if (letters_[i] < 0) os << "^-1";
    }
    return os.str();
}

Mat2 word_eval(const Word& w, const Tuple& tuple, double tol) {
    if (w.max_generator() > static_cast<int>(tuple.size())) {
        throw Error(ErrorKind::InvalidWord, "word " + w.to_string() + " uses a generator beyond n = " +
                                                std::to_string(tuple.size()));
    }
    Mat2 result = Mat2::identity();
    for (int x : w.letters()) {
        const Mat2& m = tuple[static_cast<std::size_t>(std::abs(x))];
        if (x > 0) {
            result = result * m;
        } else {
            result = result * (tuple.sl2() ? m.adjugate() : inverse(m, tol));
        }
    }
    return result;
}

Complex trace_word(const Word& w, const Tuple& tuple, double tol) {
    return word_eval(w, tuple, tol).trace();
}

// ---------------------------------------------------------------- random

double RandomStream::uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
}

int RandomStream::uniform_int(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(engine_);
}

Complex RandomStream::normal() {
    const double re = normal_(engine_);
    const double im = normal_(engine_);
    return {re, im};
}

Mat2 from_quaternion(Complex alpha, Complex beta, Complex gamma, Complex delta) {
    const Complex i{0.0, 1.0};
    return {alpha + i * beta, gamma + i * delta, -gamma + i * delta, alpha - i * beta};
}

Quaternion to_quaternion(const Mat2& m) {
    const Complex two_i{0.0, 2.0};
    return {(m.a + m.d) / 2.0, (m.a - m.d) / two_i, (m.b - m.c) / 2.0, (m.b + m.c) / two_i};
}

Mat2 RandomStream::sl2() {
    for (;;) {
        Quaternion q{normal(), normal(), normal(), normal()};
        const Complex n2 = q.norm();
        if (std::abs(n2) < 1e-6) continue;
        const Complex s = 1.0 / std::sqrt(n2);
        Mat2 m = from_quaternion(q.alpha * s, q.beta * s, q.gamma * s, q.delta * s);
        // det is 1 up to rounding in the rescale; divide that out once more.
        m *= 1.0 / std::sqrt(m.det());
        return m;
    }
}

Mat2 RandomStream::matrix() { return {normal(), normal(), normal(), normal()}; }

Mat2 RandomStream::conjugator() {
    for (;;) {
        Mat2 g = matrix();
        const Complex det = g.det();
        if (std::abs(det) < 0.2) continue;
        g *= 1.0 / std::sqrt(det);
        if (g.norm() * g.adjugate().norm() > 50.0) continue;
        return g;
    }
}

std::vector<Mat2> random_sl2(std::uint64_t seed, std::size_t count) {
    RandomStream rs(seed);
    std::vector<Mat2> out;
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k) out.push_back(rs.sl2());
    return out;
}

}  // namespace sl2orbit
