#pragma once

// Decision procedures on tuples: simultaneous triangularization, stability
// and irreducibility, transposition-invariant normal forms, generator
// changes that make sigma_12 and nu_1 nonzero, and a conjugator solver.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sl2orbit/core.hpp"

namespace sl2orbit {

/// A unit vector spanning a line of C^2, phase fixed so that its largest
/// coordinate is real and positive.
struct Line {
    Complex x, y;
};

/// Which invariant certified stability, on which indices (1-based; the
/// third index is 0 for a pair witness).
struct StabilityWitness {
    enum class Kind { Sigma, Delta };
    Kind kind = Kind::Sigma;
    std::array<std::size_t, 3> indices{};
    Complex value;

    std::string describe() const;
};

/// Scans sigma_jk over pairs j<k, then Delta_jkl over triples j<k<l, and
/// returns the first value that is nonzero at tolerance tol.
std::optional<StabilityWitness> find_stability_witness(const Tuple& A, double tol = kDefaultTol);

/// Brute-force search for a line fixed by every component: eigenvectors of
/// each non-scalar component are tried in order (coordinate axes when all
/// components are scalar). Independent of the sigma/Delta criterion.
std::optional<Line> invariant_line_oracle(const Tuple& A, double tol = kDefaultTol);

/// Largest over components of ||A_j v - lambda_j v|| / max(1, ||A_j||) with
/// lambda_j the Rayleigh quotient.
double line_residual(const Tuple& A, const Line& v);

struct TriangularizationResult {
    bool triangularizable = false;
    std::optional<Mat2> conjugator;  ///< det 1; g.A is upper triangular
    std::optional<StabilityWitness> witness;
};

/// Verdict from the sigma/Delta criterion. When triangularizable, a unitary
/// det-1 conjugator is built from an invariant line; throws NumericalFailure
/// if no candidate line has relative residual below 1e-6.
TriangularizationResult triangularize(const Tuple& A, double tol = kDefaultTol);

struct StabilityVerdict {
    bool stable = false;
    std::optional<StabilityWitness> witness;
};

StabilityVerdict is_stable(const Tuple& A, double tol = kDefaultTol);
/// Same verdict as is_stable, for representations into SL(2,C). Throws NotSL2.
StabilityVerdict is_irreducible(const Tuple& A, double tol = kDefaultTol);

struct CullerShalenEvidence {
    enum class Verdict { Irreducible, Inconclusive, Unknown };
    Verdict verdict = Verdict::Unknown;
    std::size_t samples = 0;
    double max_deviation = 0.0;  ///< max |tr(c) - 2| over sampled commutator words
    std::optional<Word> witness;
};

const char* to_string(CullerShalenEvidence::Verdict v);

/// Samples words of the commutator subgroup (products of at most four
/// commutators, length <= 16) and records the largest |tr - 2|. The first
/// sample is [e1, e2] when n >= 2. One-sided: a deviation above `certify`
/// proves irreducibility, small deviations prove nothing. Throws NotSL2.
CullerShalenEvidence culler_shalen_sample(const Tuple& A, std::size_t samples,
                                          std::uint64_t seed, double certify = 1e-6);

struct ConjugatedTuple {
    Tuple tuple;
    Mat2 conjugator;
};

/// For an upper triangular tuple with e_j != 0, conjugates by [[1, b_j/e_j], [0, 1]]
/// so that component j becomes diagonal and the rest stay upper triangular.
/// Throws NotApplicable if some c_k is nonzero and DegenerateEigenvalues if e_j ~ 0.
ConjugatedTuple diagonalize_component(const Tuple& A, std::size_t j, double tol = kDefaultTol);

struct NormalForm {
    /// DiagonalFirst: B1 diagonal, B2 symmetric. DiagonalSecond: roles of 1
    /// and 2 exchanged. Parabolic: nu_1 = nu_2 = 0, both in the lambda form.
    enum class Shape { DiagonalFirst, DiagonalSecond, Parabolic };

    Tuple tuple;  ///< g.A with B1, B2 symmetric
    Mat2 conjugator;
    Shape shape = Shape::DiagonalFirst;
    /// Off-diagonal parameter of the symmetric partner: delta with B_other
    /// off-diagonal entries i*delta, or lambda in the parabolic shape.
    Complex parameter;
};

const char* to_string(NormalForm::Shape s);

/// Conjugates so that the first two components are invariant under
/// transposition. Throws NotApplicable when sigma_12 ~ 0 or n < 2.
NormalForm transposition_normal_form(const Tuple& A, double tol = kDefaultTol);

/// Transposition of generators j and k, or the shift e_j -> e_j e_k^m.
struct GeneratorMove {
    enum class Kind { Transpose, Shift };
    Kind kind = Kind::Transpose;
    std::size_t j = 0, k = 0;
    int exponent = 0;

    std::string describe() const;
};

class GeneratorChange {
public:
    const std::vector<GeneratorMove>& moves() const { return moves_; }
    bool empty() const { return moves_.empty(); }
    void push(GeneratorMove m) { moves_.push_back(m); }

    /// Replays the moves on a tuple.
    Tuple apply(const Tuple& A, double tol = kDefaultTol) const;
    /// Replays the inverse moves in reverse order.
    Tuple undo(const Tuple& A, double tol = kDefaultTol) const;
    /// The new generators as words in the old ones.
    std::vector<Word> images(std::size_t n) const;

private:
    std::vector<GeneratorMove> moves_;
};

struct FixedGenerators {
    Tuple tuple;
    GeneratorChange change;
};

/// Changes generators (transpositions and shifts with |m| <= 8) until
/// sigma_12 != 0 and nu_1 != 0. Throws NotIrreducible for reducible input
/// and NumericalFailure if the shift search is exhausted.
FixedGenerators fix_generators(const Tuple& A, double tol = kDefaultTol);

/// Solves g A_j = B_j g for all j and returns a det-1 solution, or nothing
/// when no invertible intertwiner exists (or its residual exceeds tol).
std::optional<Mat2> conjugator(const Tuple& A, const Tuple& B, double tol = kDefaultTol);

}  // namespace sl2orbit
