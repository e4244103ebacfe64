#pragma once

// Complex 2x2 matrices, n-tuples of them, free-group words and word traces.
//
// Generator indices are 1-based everywhere in the public API: A_1..A_n are
// the components of a tuple and the letter +j / -j stands for e_j / e_j^-1.

#include <array>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sl2orbit {

using Complex = std::complex<double>;

inline constexpr double kDefaultTol = 1e-9;

enum class ErrorKind {
    InvalidInput,
    NotSL2,
    SingularConjugator,
    InvalidWord,
    IndexOutOfRange,
    CoordinateUnavailable,
    NumericalFailure,
    DegenerateEigenvalues,
    NotApplicable,
    NotIrreducible,
    InvalidBase,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// |x| <= tol * max(1, scale). Every zero test in the library goes through
/// here so that tolerances grow with the magnitude of the operands.
inline bool near_zero(Complex x, double tol, double scale = 1.0) {
    return std::abs(x) <= tol * std::max(1.0, scale);
}

/// Row-major [[a, b], [c, d]].
struct Mat2 {
    Complex a{1.0}, b{0.0}, c{0.0}, d{1.0};

    static constexpr Mat2 identity() { return {}; }
    static constexpr Mat2 zero() { return {0.0, 0.0, 0.0, 0.0}; }
    static constexpr Mat2 diag(Complex x, Complex y) { return {x, 0.0, 0.0, y}; }

    Complex trace() const { return a + d; }
    Complex det() const { return a * d - b * c; }
    /// a - d, the quantity written e_j for the j-th component.
    Complex e() const { return a - d; }
    Mat2 transpose() const { return {a, c, b, d}; }
    Mat2 adjugate() const { return {d, -b, -c, a}; }
    /// Largest entry modulus.
    double norm() const;
    bool is_finite() const;
    bool is_scalar(double tol) const;

    Mat2& operator+=(const Mat2& o);
    Mat2& operator-=(const Mat2& o);
    Mat2& operator*=(Complex s);

    friend bool operator==(const Mat2&, const Mat2&) = default;
};

Mat2 operator*(const Mat2& x, const Mat2& y);
Mat2 operator*(Complex s, const Mat2& m);
Mat2 operator+(Mat2 x, const Mat2& y);
Mat2 operator-(Mat2 x, const Mat2& y);
Mat2 operator-(const Mat2& m);

/// Largest entrywise modulus of x - y.
double distance(const Mat2& x, const Mat2& y);

/// Inverse of a unimodular matrix via the adjugate; throws NotSL2 if
/// |det - 1| exceeds tol (scaled by the matrix magnitude).
Mat2 sl2_inverse(const Mat2& m, double tol = kDefaultTol);

/// General inverse; throws SingularConjugator if det is numerically zero.
Mat2 inverse(const Mat2& m, double tol = kDefaultTol);

/// Integer power, negative exponents go through inverse().
Mat2 power(const Mat2& m, int exponent, double tol = kDefaultTol);

/// An ordered n-tuple of 2x2 matrices, optionally flagged as lying in SL(2,C)^n.
class Tuple {
public:
    Tuple() = default;
    /// Flags the tuple as SL2 iff every |det - 1| <= tol. Throws InvalidInput
    /// on non-finite entries or an empty list.
    explicit Tuple(std::vector<Mat2> entries, double tol = kDefaultTol);
    Tuple(std::initializer_list<Mat2> entries) : Tuple(std::vector<Mat2>(entries)) {}

    /// Bypasses the determinant check; callers that produce matrices by
    /// construction (conjugation, sampling) keep an already known flag.
    static Tuple with_flag(std::vector<Mat2> entries, bool sl2);

    std::size_t size() const { return entries_.size(); }
    bool sl2() const { return sl2_; }

    /// 1-based component access.
    const Mat2& operator[](std::size_t j) const;
    const Mat2& at(std::size_t j) const { return (*this)[j]; }
    std::span<const Mat2> entries() const { return entries_; }

    /// Largest component norm.
    double norm() const;

private:
    std::vector<Mat2> entries_;
    bool sl2_ = false;
};

struct TupleDiagnostic {
    std::vector<double> det_residuals;  ///< |det(A_j) - 1| per component
    bool sl2 = false;
    double max_residual = 0.0;
};

/// Reports det residuals and whether the tuple lies in SL(2,C)^n.
/// Throws InvalidInput on non-finite entries.
TupleDiagnostic validate_tuple(std::span<const Mat2> entries, double tol = kDefaultTol);

/// g * A * g^-1 for every component. Throws SingularConjugator if det g ~ 0.
Tuple conjugate_tuple(const Mat2& g, const Tuple& tuple, double tol = kDefaultTol);

/// Reduced word in the free group. A letter is a signed generator index:
/// +j for e_j, -j for e_j^-1.
class Word {
public:
    Word() = default;
    /// Reduces on construction. Throws InvalidWord on a zero letter.
    Word(std::initializer_list<int> letters);
    explicit Word(std::vector<int> letters);

    static Word generator(int j) { return Word{j}; }
    /// x y x^-1 y^-1
    static Word commutator(const Word& x, const Word& y);

    std::span<const int> letters() const { return letters_; }
    std::size_t length() const { return letters_.size(); }
    bool empty() const { return letters_.empty(); }
    int max_generator() const;

    Word inverse() const;
    Word pow(int m) const;
    friend Word operator*(const Word& x, const Word& y);
    friend bool operator==(const Word&, const Word&) = default;

    /// e.g. "e1 e2^-1"; the empty word prints as "1".
    std::string to_string() const;

private:
    std::vector<int> letters_;
};

/// Ordered product of the A_j^{+-1}. Throws InvalidWord for out-of-range
/// generators; inverse letters use the adjugate on SL2 tuples and a general
/// inverse otherwise.
Mat2 word_eval(const Word& w, const Tuple& tuple, double tol = kDefaultTol);

Complex trace_word(const Word& w, const Tuple& tuple, double tol = kDefaultTol);

/// Seeded stream of random complex numbers and SL2 matrices. Not shared
/// across threads.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    double uniform(double lo, double hi);
    int uniform_int(int lo, int hi);
    /// Standard complex normal: re and im are independent N(0,1).
    Complex normal();
    /// Complexified unit quaternion rendered as an SL2 matrix.
    Mat2 sl2();
    /// A matrix with independent normal entries (not normalised).
    Mat2 matrix();
    /// An invertible matrix rescaled to det 1 with bounded condition.
    Mat2 conjugator();

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

/// `count` SL2 matrices, deterministic for a fixed seed.
std::vector<Mat2> random_sl2(std::uint64_t seed, std::size_t count);

/// Matrix of the quaternionic form [[al + i be, ga + i de], [-ga + i de, al - i be]].
Mat2 from_quaternion(Complex alpha, Complex beta, Complex gamma, Complex delta);

struct Quaternion {
    Complex alpha, beta, gamma, delta;
    Complex norm() const { return alpha * alpha + beta * beta + gamma * gamma + delta * delta; }
};

/// Inverse of from_quaternion (always defined, no normalisation implied).
Quaternion to_quaternion(const Mat2& m);

}  // namespace sl2orbit
