#pragma once

// Finite-dimensional commutative algebras with a bilinear form, and the
// trace ("Killing") form computation for the dihedral 2A algebra.

#include "voaforms/exact.hpp"

#include <optional>
#include <string>
#include <vector>

namespace voaforms {

class FiniteAlgebra {
public:
    /// constants[i][j] = coordinates of x_i * x_j. Throws ExactError unless
    /// the product is commutative and the form symmetric.
    FiniteAlgebra(std::vector<std::string> labels, std::vector<std::vector<QVector>> constants, QMatrix gram);

    std::size_t dim() const { return labels_.size(); }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::vector<std::vector<QVector>>& constants() const { return constants_; }
    const QMatrix& gram() const { return gram_; }

    QVector product(const QVector& x, const QVector& y) const;
    QVector basis_vector(std::size_t i) const;

private:
    std::vector<std::string> labels_;
    std::vector<std::vector<QVector>> constants_;
    QMatrix gram_;
};

FiniteAlgebra dihedral_2a();

/// Left multiplication by x; column j is x * x_j.
QMatrix ad_matrix(const FiniteAlgebra& a, const QVector& x);
/// Gram matrix of (x, y) -> Tr(ad(x) ad(y)).
QMatrix killing_form(const FiniteAlgebra& a);

struct AssociativityWitness {
    std::size_t i, j, k;
    Rational lhs;  // G(x_i x_j, x_k)
    Rational rhs;  // G(x_i, x_j x_k)
};

struct AssociativityResult {
    bool associative = true;
    std::optional<AssociativityWitness> witness;  // first failing triple in (i, j, k) order
};

AssociativityResult is_associative_form(const FiniteAlgebra& a, const QMatrix& g);

/// r with g1 = r g2, if any. A zero g2 is proportional only to a zero g1 (r = 0).
std::optional<Rational> proportionality_check(const QMatrix& g1, const QMatrix& g2);

}  // namespace voaforms
