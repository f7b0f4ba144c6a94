#include "voaforms/dihedral.hpp"

namespace voaforms {

FiniteAlgebra::FiniteAlgebra(std::vector<std::string> labels, std::vector<std::vector<QVector>> constants, QMatrix gram)
    : labels_(std::move(labels)), constants_(std::move(constants)), gram_(std::move(gram)) {
    const std::size_t n = labels_.size();
    if (constants_.size() != n) throw ExactError("structure constants have the wrong shape");
    for (const auto& row : constants_) {
        if (row.size() != n) throw ExactError("structure constants have the wrong shape");
        for (const auto& v : row)
            if (v.size() != n) throw ExactError("structure constants have the wrong shape");
    }
    if (gram_.rows() != n || gram_.cols() != n) throw ExactError("gram matrix has the wrong shape");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (constants_[i][j] != constants_[j][i]) throw ExactError("product is not commutative");
    if (!gram_.is_symmetric()) throw ExactError("gram matrix is not symmetric");
}

QVector FiniteAlgebra::basis_vector(std::size_t i) const {
    QVector e(dim());
    e.at(i) = 1;
    return e;
}

QVector FiniteAlgebra::product(const QVector& x, const QVector& y) const {
    if (x.size() != dim() || y.size() != dim()) throw ExactError("vector has the wrong dimension");
    QVector out(dim());
    for (std::size_t i = 0; i < dim(); ++i) {
        if (sgn(x[i]) == 0) continue;
        for (std::size_t j = 0; j < dim(); ++j) {
            if (sgn(y[j]) == 0) continue;
            const Rational c = x[i] * y[j];
            for (std::size_t k = 0; k < dim(); ++k) out[k] += c * constants_[i][j][k];
        }
    }
    return out;
}

FiniteAlgebra dihedral_2a() {
    // p.p = p, p.q = (p + q - r)/8 for {p, q, r} = {a, b, c}; (p,p) = 1, (p,q) = 1/8
    const Rational e(1, 8);
    std::vector<std::vector<QVector>> c(3, std::vector<QVector>(3, QVector(3)));
    QMatrix g(3, 3);
    for (std::size_t p = 0; p < 3; ++p)
        for (std::size_t q = 0; q < 3; ++q) {
            if (p == q) {
                c[p][q][p] = 1;
                g(p, q) = 1;
                continue;
            }
            const std::size_t r = 3 - p - q;
            c[p][q][p] = e;
            c[p][q][q] = e;
            c[p][q][r] = -e;
            g(p, q) = e;
        }
    return FiniteAlgebra({"a", "b", "c"}, std::move(c), std::move(g));
}

QMatrix ad_matrix(const FiniteAlgebra& a, const QVector& x) {
    QMatrix m(a.dim(), a.dim());
    for (std::size_t j = 0; j < a.dim(); ++j) {
        const QVector col = a.product(x, a.basis_vector(j));
        for (std::size_t i = 0; i < a.dim(); ++i) m(i, j) = col[i];
    }
    return m;
}

QMatrix killing_form(const FiniteAlgebra& a) {
    std::vector<QMatrix> ads;
    for (std::size_t i = 0; i < a.dim(); ++i) ads.push_back(ad_matrix(a, a.basis_vector(i)));
    QMatrix k(a.dim(), a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j) k(i, j) = (ads[i] * ads[j]).trace();
    return k;
}

AssociativityResult is_associative_form(const FiniteAlgebra& a, const QMatrix& g) {
    if (g.rows() != a.dim() || g.cols() != a.dim()) throw ExactError("form has the wrong dimension");
    if (!g.is_symmetric()) throw ExactError("form is not symmetric");
    auto form = [&](const QVector& x, const QVector& y) { return dot(x, mat_vec(g, y)); };
    AssociativityResult out;
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j)
            for (std::size_t k = 0; k < a.dim(); ++k) {
                const QVector xi = a.basis_vector(i), xj = a.basis_vector(j), xk = a.basis_vector(k);
                const Rational lhs = form(a.product(xi, xj), xk);
                const Rational rhs = form(xi, a.product(xj, xk));
                if (lhs != rhs) {
                    out.associative = false;
                    out.witness = AssociativityWitness{i, j, k, lhs, rhs};
                    return out;
                }
            }
    return out;
}

std::optional<Rational> proportionality_check(const QMatrix& g1, const QMatrix& g2) {
    if (g1.rows() != g2.rows() || g1.cols() != g2.cols()) throw ExactError("forms have different dimensions");
    std::optional<Rational> ratio;
    for (std::size_t i = 0; i < g2.entries().size(); ++i) {
        const Rational& y = g2.entries()[i];
        if (sgn(y) == 0) continue;
        ratio = g1.entries()[i] / y;
        break;
    }
    if (!ratio) return g1.is_zero() ? std::optional<Rational>(Rational(0)) : std::nullopt;
    if (!(g1 == *ratio * g2)) return std::nullopt;
    return ratio;
}

}  // namespace voaforms
