#pragma once

// Exact rational scalars, dense matrices and Z-lattices in Q^n.
//
// A ZLattice is stored as (1/D) * rowspan_Z(H) with H an integer matrix in
// row Hermite normal form (positive pivots, entries above each pivot reduced
// into [0, pivot)) and D > 0 minimal, so equal lattices compare bit-equal.

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace voaforms {

using Integer = mpz_class;
using Rational = mpq_class;

using IntVector = std::vector<Integer>;
using QVector = std::vector<Rational>;
using IntRows = std::vector<IntVector>;

/// Thrown for shape or precondition violations in exact linear algebra.
class ExactError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

Rational parse_rational(std::string_view text);
std::string format_rational(const Rational& q);

Integer lcm_of_denominators(const QVector& v);
bool is_integral(const Rational& q);

class QMatrix {
public:
    QMatrix() = default;
    QMatrix(std::size_t rows, std::size_t cols);
    QMatrix(std::size_t rows, std::size_t cols, std::vector<Rational> entries);

    static QMatrix identity(std::size_t n);
    static QMatrix from_rows(const std::vector<QVector>& rows, std::size_t cols);
    static QMatrix from_int_rows(const IntRows& rows, std::size_t cols);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Rational& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
    const Rational& operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

    QVector row(std::size_t r) const;
    const std::vector<Rational>& entries() const { return entries_; }

    QMatrix transpose() const;
    Rational trace() const;
    bool is_zero() const;
    bool is_symmetric() const;

    friend QMatrix operator*(const QMatrix& a, const QMatrix& b);
    friend QMatrix operator+(const QMatrix& a, const QMatrix& b);
    friend QMatrix operator-(const QMatrix& a, const QMatrix& b);
    friend QMatrix operator*(const Rational& s, const QMatrix& m);
    friend bool operator==(const QMatrix& a, const QMatrix& b);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Rational> entries_;
};

QVector mat_vec(const QMatrix& m, const QVector& v);
QVector vec_mat(const QVector& v, const QMatrix& m);
Rational dot(const QVector& a, const QVector& b);

/// Rank over Q.
std::size_t rank(const QMatrix& m);
Rational determinant(const QMatrix& m);
/// Inverse of a square nonsingular matrix; throws ExactError when singular.
QMatrix inverse(const QMatrix& m);
/// Rows spanning {x | x * m = 0} (left kernel over Q), in reduced echelon form.
QMatrix left_kernel(const QMatrix& m);

/// Row Hermite normal form of an integer matrix; zero rows dropped.
IntRows hermite_rows(IntRows rows, std::size_t cols);

/// Basis of {c in Z^m | c * rows = 0} for an integer m x n matrix.
IntRows integer_left_kernel(const IntRows& rows, std::size_t cols);

/// Elementary divisors d_1 | d_2 | ... of an integer matrix (nonzero ones only).
std::vector<Integer> smith_invariants(IntRows rows, std::size_t cols);

/// Canonical echelon basis of the Z-span of the rows of m.
QMatrix hnf(const QMatrix& m);

class ZLattice {
public:
    ZLattice() = default;
    explicit ZLattice(std::size_t ambient_dim);

    static ZLattice from_generators(const QMatrix& gens);
    static ZLattice from_rows(const std::vector<QVector>& rows, std::size_t ambient_dim);
    static ZLattice standard(std::size_t n);

    std::size_t ambient_dim() const { return dim_; }
    std::size_t rank() const { return rows_.size(); }
    bool is_zero() const { return rows_.empty(); }

    const Integer& denominator() const { return den_; }
    const IntRows& integer_rows() const { return rows_; }
    QMatrix basis() const;
    QVector basis_row(std::size_t i) const;

    bool contains(const QVector& v) const;
    bool contains(const ZLattice& other) const;

    /// Adds v to the generating set; returns true iff the lattice grew.
    bool insert(const QVector& v);
    bool insert_scaled(const IntVector& numerators, const Integer& den);
    /// Adds every non-member of vs with a single renormalization.
    bool insert_many(const std::vector<QVector>& vs);

    /// Integer coordinates of v in this basis; nullopt when v is not a member.
    std::optional<IntVector> coordinates(const QVector& v) const;

    ZLattice scaled(const Rational& s) const;

    friend bool operator==(const ZLattice& a, const ZLattice& b) = default;

private:
    void normalize();
    bool reduce_in_place(IntVector& w) const;

    std::size_t dim_ = 0;
    Integer den_ = 1;
    IntRows rows_;
};

bool membership(const QVector& v, const ZLattice& a);
ZLattice lattice_sum(const ZLattice& a, const ZLattice& b);
ZLattice lattice_intersect(const ZLattice& a, const ZLattice& b);

struct QuotientInvariants {
    std::vector<Integer> divisors;  // elementary divisors, ascending by divisibility
    Integer exponent;
    Integer index;
};

/// Invariants of A/B for B a full-rank sublattice of A.
QuotientInvariants quotient_invariants(const ZLattice& a, const ZLattice& b);
Integer quotient_exponent(const ZLattice& a, const ZLattice& b);

/// {u in span(A) | u G a^T in Z for all a in A}.
ZLattice dual_lattice(const ZLattice& a, const QMatrix& gram);

/// Gram matrix B G B^T of the lattice basis.
QMatrix lattice_gram(const ZLattice& a, const QMatrix& gram);

}  // namespace voaforms
