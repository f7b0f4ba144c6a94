#include "voaforms/latgroup.hpp"

#include <algorithm>
#include <stdexcept>

namespace voaforms {

QMatrix to_qmatrix(const IntMatrix& m) {
    const std::size_t r = m.size();
    const std::size_t c = r == 0 ? 0 : m[0].size();
    QMatrix q(r, c);
    for (std::size_t i = 0; i < r; ++i) {
        if (m[i].size() != c) throw ExactError("ragged integer matrix");
        for (std::size_t j = 0; j < c; ++j) q(i, j) = static_cast<long>(m[i][j]);
    }
    return q;
}

QVector apply_matrix(const QMatrix& g, const QVector& v) { return mat_vec(g, v); }

ZLattice apply_to_lattice(const QMatrix& g, const ZLattice& l) {
    std::vector<QVector> rows;
    for (std::size_t i = 0; i < l.rank(); ++i) rows.push_back(mat_vec(g, l.basis_row(i)));
    return ZLattice::from_rows(rows, l.ambient_dim());
}

Character::Character(std::vector<int> signs) : signs_(std::move(signs)) {
    for (int s : signs_)
        if (s != 1 && s != -1) throw ExactError("character values must be +1 or -1");
}

Character Character::trivial(std::size_t r) { return Character(std::vector<int>(r, 1)); }

Character Character::from_mask(std::size_t r, std::uint64_t mask) {
    std::vector<int> s(r, 1);
    for (std::size_t i = 0; i < r; ++i)
        if ((mask >> i) & 1U) s[i] = -1;
    return Character(std::move(s));
}

int Character::value_on(std::uint64_t subset) const {
    int v = 1;
    for (std::size_t i = 0; i < signs_.size(); ++i)
        if ((subset >> i) & 1U) v *= signs_[i];
    return v;
}

SignedAction::SignedAction(std::size_t ambient_dim, std::vector<QMatrix> generators)
    : dim_(ambient_dim), gens_(std::move(generators)) {
    if (gens_.size() > 20) throw ExactError("SignedAction: too many generators");
    const QMatrix id = QMatrix::identity(dim_);
    for (const auto& g : gens_) {
        if (g.rows() != dim_ || g.cols() != dim_) throw ExactError("SignedAction: generator has wrong shape");
        if (!(g * g == id)) throw ExactError("SignedAction: generator is not an involution");
    }
    for (std::size_t i = 0; i < gens_.size(); ++i)
        for (std::size_t j = i + 1; j < gens_.size(); ++j)
            if (!(gens_[i] * gens_[j] == gens_[j] * gens_[i]))
                throw ExactError("SignedAction: generators do not commute");
    // An identity generator stands in for the trivial group (r = 0 written
    // with one generator); every other generator must be independent.
    std::uint64_t live = 0;
    for (std::size_t i = 0; i < gens_.size(); ++i)
        if (!(gens_[i] == id)) live |= std::uint64_t{1} << i;
    std::vector<QMatrix> elems;
    for (std::uint64_t s = 0; s < order(); ++s) {
        if ((s & ~live) != 0) continue;
        QMatrix e = element(s);
        if (std::find(elems.begin(), elems.end(), e) != elems.end())
            throw ExactError("SignedAction: generators are not independent (group order below 2^r)");
        elems.push_back(std::move(e));
    }
}

SignedAction SignedAction::from_int(std::size_t ambient_dim, const std::vector<IntMatrix>& generators) {
    std::vector<QMatrix> g;
    for (const auto& m : generators) g.push_back(to_qmatrix(m));
    return SignedAction(ambient_dim, std::move(g));
}

QMatrix SignedAction::element(std::uint64_t subset) const {
    QMatrix e = QMatrix::identity(dim_);
    for (std::size_t i = 0; i < gens_.size(); ++i)
        if ((subset >> i) & 1U) e = e * gens_[i];
    return e;
}

bool SignedAction::preserves(const ZLattice& l) const {
    for (const auto& g : gens_)
        for (std::size_t i = 0; i < l.rank(); ++i)
            if (!l.contains(mat_vec(g, l.basis_row(i)))) return false;
    return true;
}

namespace {

void require_preserved(const ZLattice& l, const SignedAction& action) {
    if (l.ambient_dim() != action.ambient_dim()) throw ExactError("action and lattice dimensions differ");
    if (!action.preserves(l)) throw ExactError("action does not preserve the lattice");
}

}  // namespace

ZLattice joint_eigenlattice(const ZLattice& l, const std::vector<QMatrix>& gs, const std::vector<int>& signs) {
    if (gs.size() != signs.size()) throw ExactError("one eigenvalue per matrix expected");
    const std::size_t n = l.ambient_dim();
    for (const auto& g : gs)
        if (g.rows() != n || g.cols() != n) throw ExactError("matrix and lattice dimensions differ");
    if (l.is_zero() || gs.empty()) return l;
    // c * B * (g_i - lambda_i)^T = 0 for all i, over integer c
    const IntRows& b = l.integer_rows();
    IntRows stacked(b.size());
    for (std::size_t gi = 0; gi < gs.size(); ++gi) {
        const QMatrix& g = gs[gi];
        for (std::size_t r = 0; r < b.size(); ++r) {
            for (std::size_t j = 0; j < n; ++j) {
                Rational acc = -Rational(signs[gi]) * Rational(b[r][j]);
                for (std::size_t k = 0; k < n; ++k)
                    if (sgn(b[r][k]) != 0 && sgn(g(j, k)) != 0) acc += g(j, k) * b[r][k];
                if (acc.get_den() != 1) throw ExactError("eigenlattice: matrix is not integral on the lattice");
                stacked[r].push_back(acc.get_num());
            }
        }
    }
    const auto kernel = integer_left_kernel(stacked, n * gs.size());
    std::vector<QVector> rows;
    for (const auto& c : kernel) {
        QVector x(n);
        for (std::size_t r = 0; r < b.size(); ++r) {
            if (sgn(c[r]) == 0) continue;
            for (std::size_t j = 0; j < n; ++j) x[j] += Rational(c[r] * b[r][j], l.denominator());
        }
        for (auto& e : x) e.canonicalize();
        rows.push_back(std::move(x));
    }
    return ZLattice::from_rows(rows, n);
}

ZLattice eigenlattice(const ZLattice& l, const SignedAction& action, const Character& lambda) {
    require_preserved(l, action);
    if (lambda.rank() != action.rank()) throw ExactError("character rank differs from action rank");
    return joint_eigenlattice(l, action.generators(), lambda.signs());
}

TotalEigenlattice total_eigenlattice_pieces(const ZLattice& l, const SignedAction& action) {
    require_preserved(l, action);
    TotalEigenlattice out{ZLattice(l.ambient_dim()), {}};
    std::size_t rank_sum = 0;
    for (std::uint64_t mask = 0; mask < action.order(); ++mask) {
        ZLattice piece = eigenlattice(l, action, Character::from_mask(action.rank(), mask));
        rank_sum += piece.rank();
        out.total = lattice_sum(out.total, piece);
        out.pieces.push_back(std::move(piece));
    }
    for (std::size_t i = 0; i < out.pieces.size(); ++i)
        for (std::size_t j = i + 1; j < out.pieces.size(); ++j)
            if (!lattice_intersect(out.pieces[i], out.pieces[j]).is_zero())
                throw std::logic_error("eigenlattices for distinct characters intersect");
    if (rank_sum != out.total.rank()) throw std::logic_error("eigenlattice sum is not direct");
    return out;
}

ZLattice total_eigenlattice(const ZLattice& l, const SignedAction& action) {
    return total_eigenlattice_pieces(l, action).total;
}

TelExponent tel_exponent_check(const ZLattice& l, const SignedAction& action) {
    const ZLattice tel = total_eigenlattice(l, action);
    const Rational scale(Integer(1) << static_cast<unsigned long>(action.rank()));
    TelExponent out;
    out.bound_holds = tel.contains(l.scaled(scale));
    if (!out.bound_holds) throw std::logic_error("2^r L is not contained in Tel(L)");
    out.exponent = quotient_exponent(l, tel);
    return out;
}

QVector idempotent_project(const QVector& v, const SignedAction& action, const Character& lambda) {
    if (v.size() != action.ambient_dim()) throw ExactError("idempotent_project: dimension mismatch");
    if (lambda.rank() != action.rank()) throw ExactError("character rank differs from action rank");
    QVector acc(v.size());
    for (std::uint64_t s = 0; s < action.order(); ++s) {
        const QVector gv = mat_vec(action.element(s), v);
        const int sign = lambda.value_on(s);
        for (std::size_t i = 0; i < v.size(); ++i) acc[i] += sign * gv[i];
    }
    const Rational inv(1, static_cast<unsigned long>(action.order()));
    for (auto& e : acc) e *= inv;
    return acc;
}

std::vector<QMatrix> generate_matrix_group(const std::vector<QMatrix>& gens, std::size_t max_order) {
    std::size_t n = gens.empty() ? 0 : gens.front().rows();
    for (const auto& g : gens) {
        if (g.rows() != n || g.cols() != n) throw ExactError("group generators must be square of equal size");
        if (sgn(determinant(g)) == 0) throw ExactError("singular matrix among group generators");
    }
    std::vector<QMatrix> elems{QMatrix::identity(n)};
    for (std::size_t head = 0; head < elems.size(); ++head) {
        for (const auto& g : gens) {
            QMatrix p = elems[head] * g;
            if (std::find(elems.begin(), elems.end(), p) == elems.end()) {
                if (elems.size() >= max_order) throw ExactError("group-closure bound exceeded");
                elems.push_back(std::move(p));
            }
        }
    }
    return elems;
}

InvariantIntersection invariant_intersection(const ZLattice& l, const std::vector<QMatrix>& gs,
                                             std::size_t max_order) {
    for (const auto& g : gs)
        if (g.rows() != l.ambient_dim() || g.cols() != l.ambient_dim())
            throw ExactError("invariant_intersection: matrix has wrong shape");
    std::vector<QMatrix> group = generate_matrix_group(gs, max_order);
    if (gs.empty()) group = {QMatrix::identity(l.ambient_dim())};
    ZLattice acc = l;
    for (const auto& g : group) acc = lattice_intersect(acc, apply_to_lattice(g, l));
    for (const auto& g : gs)
        if (!(apply_to_lattice(g, acc) == acc)) throw std::logic_error("intersection is not invariant");
    return {acc, quotient_exponent(l, acc)};
}

}  // namespace voaforms
