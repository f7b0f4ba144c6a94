#include "voaforms/exact.hpp"

#include <algorithm>
#include <cctype>
#include <utility>

namespace voaforms {

namespace {

void check_same_dim(std::size_t a, std::size_t b, const char* what) {
    if (a != b) {
        throw ExactError(std::string(what) + ": dimension mismatch (" + std::to_string(a) + " vs " +
                         std::to_string(b) + ")");
    }
}

// Reduced row echelon form in place, pivoting only in columns [0, cols);
// row operations act on the full rows. Returns pivot columns.
std::vector<std::size_t> rref(std::vector<QVector>& a, std::size_t cols) {
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < a.size(); ++c) {
        std::size_t p = r;
        while (p < a.size() && sgn(a[p][c]) == 0) ++p;
        if (p == a.size()) continue;
        std::swap(a[r], a[p]);
        const Rational inv = 1 / a[r][c];
        const std::size_t width = a[r].size();
        for (std::size_t k = c; k < width; ++k) a[r][k] *= inv;
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (i == r || sgn(a[i][c]) == 0) continue;
            const Rational f = a[i][c];
            for (std::size_t k = c; k < width; ++k) a[i][k] -= f * a[r][k];
        }
        pivots.push_back(c);
        ++r;
    }
    a.resize(r);
    return pivots;
}

// Row HNF restricted to pivot columns [0, pivot_cols); row operations act on
// every column. Returns the number of pivot rows; later rows vanish on the
// pivot columns.
std::size_t hermite_partial(IntRows& a, std::size_t pivot_cols) {
    const std::size_t m = a.size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < pivot_cols && r < m; ++c) {
        for (std::size_t i = r + 1; i < m; ++i) {
            if (sgn(a[i][c]) == 0) continue;
            if (sgn(a[r][c]) == 0) {
                std::swap(a[r], a[i]);
                continue;
            }
            const std::size_t width = a[r].size();
            if (mpz_divisible_p(a[i][c].get_mpz_t(), a[r][c].get_mpz_t())) {
                const Integer q = a[i][c] / a[r][c];
                for (std::size_t k = c; k < width; ++k) a[i][k] -= q * a[r][k];
                continue;
            }
            Integer g, s, t;
            mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a[r][c].get_mpz_t(), a[i][c].get_mpz_t());
            const Integer u = a[r][c] / g;
            const Integer v = a[i][c] / g;
            for (std::size_t k = c; k < width; ++k) {
                const Integer x = a[r][k];
                const Integer y = a[i][k];
                a[r][k] = s * x + t * y;
                a[i][k] = u * y - v * x;
            }
        }
        if (sgn(a[r][c]) == 0) continue;
        if (sgn(a[r][c]) < 0) {
            for (auto& e : a[r]) e = -e;
        }
        for (std::size_t i = 0; i < r; ++i) {
            if (sgn(a[i][c]) == 0) continue;
            Integer q;
            mpz_fdiv_q(q.get_mpz_t(), a[i][c].get_mpz_t(), a[r][c].get_mpz_t());
            if (sgn(q) == 0) continue;
            for (std::size_t k = c; k < a[i].size(); ++k) a[i][k] -= q * a[r][k];
        }
        ++r;
    }
    return r;
}

Integer gcd_of(const Integer& start, const IntRows& rows) {
    Integer g = start;
    for (const auto& row : rows) {
        for (const auto& e : row) {
            if (sgn(e) != 0) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), e.get_mpz_t());
            if (g == 1) return g;
        }
    }
    return g;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    std::size_t b = 0;
    std::size_t e = text.size();
    while (b < e && std::isspace(static_cast<unsigned char>(text[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1]))) --e;
    const std::string s(text.substr(b, e - b));
    if (s.empty()) throw ExactError("empty rational literal");
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    bool digits = false;
    bool slash = false;
    bool den_digits = false;
    for (; i < s.size(); ++i) {
        const char ch = s[i];
        if (std::isdigit(static_cast<unsigned char>(ch))) {
            (slash ? den_digits : digits) = true;
        } else if (ch == '/' && !slash && digits) {
            slash = true;
        } else {
            throw ExactError("malformed rational literal '" + s + "'");
        }
    }
    if (!digits || (slash && !den_digits)) throw ExactError("malformed rational literal '" + s + "'");
    const std::string body = s[0] == '+' ? s.substr(1) : s;
    Rational q;
    if (q.set_str(body, 10) != 0) throw ExactError("malformed rational literal '" + s + "'");
    if (sgn(q.get_den()) == 0) throw ExactError("zero denominator in '" + s + "'");
    q.canonicalize();
    return q;
}

std::string format_rational(const Rational& q) { return q.get_str(); }

Integer lcm_of_denominators(const QVector& v) {
    Integer l = 1;
    for (const auto& q : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
    return l;
}

bool is_integral(const Rational& q) { return q.get_den() == 1; }

// ---------------------------------------------------------------------------
// QMatrix

QMatrix::QMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), entries_(rows * cols) {}

QMatrix::QMatrix(std::size_t rows, std::size_t cols, std::vector<Rational> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (entries_.size() != rows * cols) {
        throw ExactError("matrix entry count " + std::to_string(entries_.size()) + " != " + std::to_string(rows) +
                         "x" + std::to_string(cols));
    }
}

QMatrix QMatrix::identity(std::size_t n) {
    QMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

QMatrix QMatrix::from_rows(const std::vector<QVector>& rows, std::size_t cols) {
    QMatrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        check_same_dim(rows[i].size(), cols, "QMatrix::from_rows");
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    }
    return m;
}

QMatrix QMatrix::from_int_rows(const IntRows& rows, std::size_t cols) {
    QMatrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        check_same_dim(rows[i].size(), cols, "QMatrix::from_int_rows");
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    }
    return m;
}

QVector QMatrix::row(std::size_t r) const {
    return QVector(entries_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                   entries_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
}

QMatrix QMatrix::transpose() const {
    QMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

Rational QMatrix::trace() const {
    Rational t = 0;
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
    return t;
}

bool QMatrix::is_zero() const {
    return std::all_of(entries_.begin(), entries_.end(), [](const Rational& q) { return sgn(q) == 0; });
}

bool QMatrix::is_symmetric() const {
    if (rows_ != cols_) return false;
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = i + 1; j < cols_; ++j)
            if ((*this)(i, j) != (*this)(j, i)) return false;
    return true;
}

QMatrix operator*(const QMatrix& a, const QMatrix& b) {
    check_same_dim(a.cols_, b.rows_, "matrix product");
    QMatrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
        for (std::size_t k = 0; k < a.cols_; ++k) {
            const Rational& x = a(i, k);
            if (sgn(x) == 0) continue;
            for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += x * b(k, j);
        }
    return c;
}

QMatrix operator+(const QMatrix& a, const QMatrix& b) {
    check_same_dim(a.rows_, b.rows_, "matrix sum");
    check_same_dim(a.cols_, b.cols_, "matrix sum");
    QMatrix c = a;
    for (std::size_t i = 0; i < c.entries_.size(); ++i) c.entries_[i] += b.entries_[i];
    return c;
}

QMatrix operator-(const QMatrix& a, const QMatrix& b) {
    check_same_dim(a.rows_, b.rows_, "matrix difference");
    check_same_dim(a.cols_, b.cols_, "matrix difference");
    QMatrix c = a;
    for (std::size_t i = 0; i < c.entries_.size(); ++i) c.entries_[i] -= b.entries_[i];
    return c;
}

QMatrix operator*(const Rational& s, const QMatrix& m) {
    QMatrix c = m;
    for (auto& e : c.entries_) e *= s;
    return c;
}

bool operator==(const QMatrix& a, const QMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.entries_ == b.entries_;
}

QVector mat_vec(const QMatrix& m, const QVector& v) {
    check_same_dim(m.cols(), v.size(), "mat_vec");
    QVector out(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (sgn(v[j]) != 0) out[i] += m(i, j) * v[j];
    return out;
}

QVector vec_mat(const QVector& v, const QMatrix& m) {
    check_same_dim(m.rows(), v.size(), "vec_mat");
    QVector out(m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        if (sgn(v[i]) == 0) continue;
        for (std::size_t j = 0; j < m.cols(); ++j) out[j] += v[i] * m(i, j);
    }
    return out;
}

Rational dot(const QVector& a, const QVector& b) {
    check_same_dim(a.size(), b.size(), "dot");
    Rational s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

std::size_t rank(const QMatrix& m) {
    std::vector<QVector> rows;
    for (std::size_t i = 0; i < m.rows(); ++i) rows.push_back(m.row(i));
    return rref(rows, m.cols()).size();
}

Rational determinant(const QMatrix& m) {
    if (m.rows() != m.cols()) throw ExactError("determinant of non-square matrix");
    const std::size_t n = m.rows();
    std::vector<QVector> a;
    for (std::size_t i = 0; i < n; ++i) a.push_back(m.row(i));
    Rational det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && sgn(a[p][c]) == 0) ++p;
        if (p == n) return 0;
        if (p != c) {
            std::swap(a[p], a[c]);
            det = -det;
        }
        det *= a[c][c];
        for (std::size_t i = c + 1; i < n; ++i) {
            if (sgn(a[i][c]) == 0) continue;
            const Rational f = a[i][c] / a[c][c];
            for (std::size_t k = c; k < n; ++k) a[i][k] -= f * a[c][k];
        }
    }
    return det;
}

QMatrix inverse(const QMatrix& m) {
    if (m.rows() != m.cols()) throw ExactError("inverse of non-square matrix");
    const std::size_t n = m.rows();
    std::vector<QVector> a(n, QVector(2 * n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) a[i][j] = m(i, j);
        a[i][n + i] = 1;
    }
    const auto pivots = rref(a, n);
    if (pivots.size() != n) throw ExactError("matrix is singular");
    QMatrix inv(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inv(i, j) = a[i][n + j];
    return inv;
}

QMatrix left_kernel(const QMatrix& m) {
    // x m = 0  <=>  m^T x^T = 0
    const QMatrix t = m.transpose();
    std::vector<QVector> a;
    for (std::size_t i = 0; i < t.rows(); ++i) a.push_back(t.row(i));
    const std::size_t n = t.cols();
    const auto pivots = rref(a, n);
    std::vector<bool> is_pivot(n, false);
    for (auto p : pivots) is_pivot[p] = true;
    std::vector<QVector> basis;
    for (std::size_t f = 0; f < n; ++f) {
        if (is_pivot[f]) continue;
        QVector x(n);
        x[f] = 1;
        for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = -a[r][f];
        basis.push_back(std::move(x));
    }
    auto k = QMatrix::from_rows(basis, n);
    std::vector<QVector> rows;
    for (std::size_t i = 0; i < k.rows(); ++i) rows.push_back(k.row(i));
    rref(rows, n);
    return QMatrix::from_rows(rows, n);
}

IntRows hermite_rows(IntRows rows, std::size_t cols) {
    for (const auto& r : rows) check_same_dim(r.size(), cols, "hermite_rows");
    const std::size_t r = hermite_partial(rows, cols);
    rows.resize(r);
    return rows;
}

IntRows integer_left_kernel(const IntRows& rows, std::size_t cols) {
    const std::size_t m = rows.size();
    IntRows aug(m, IntVector(cols + m));
    for (std::size_t i = 0; i < m; ++i) {
        check_same_dim(rows[i].size(), cols, "integer_left_kernel");
        for (std::size_t j = 0; j < cols; ++j) aug[i][j] = rows[i][j];
        aug[i][cols + i] = 1;
    }
    const std::size_t r = hermite_partial(aug, cols);
    IntRows tails;
    for (std::size_t i = r; i < m; ++i) tails.emplace_back(aug[i].begin() + static_cast<std::ptrdiff_t>(cols), aug[i].end());
    return hermite_rows(std::move(tails), m);
}

std::vector<Integer> smith_invariants(IntRows a, std::size_t cols) {
    for (const auto& r : a) check_same_dim(r.size(), cols, "smith_invariants");
    const std::size_t m = a.size();
    std::vector<Integer> diag;
    for (std::size_t t = 0; t < std::min(m, cols); ++t) {
        for (;;) {
            // smallest nonzero |entry| in the trailing block
            std::size_t pi = m, pj = cols;
            for (std::size_t i = t; i < m; ++i)
                for (std::size_t j = t; j < cols; ++j)
                    if (sgn(a[i][j]) != 0 && (pi == m || abs(a[i][j]) < abs(a[pi][pj]))) {
                        pi = i;
                        pj = j;
                    }
            if (pi == m) return diag;
            std::swap(a[t], a[pi]);
            for (auto& row : a) std::swap(row[t], row[pj]);

            bool clean = true;
            for (std::size_t i = t + 1; i < m; ++i) {
                if (sgn(a[i][t]) == 0) continue;
                Integer q;
                mpz_fdiv_q(q.get_mpz_t(), a[i][t].get_mpz_t(), a[t][t].get_mpz_t());
                for (std::size_t j = t; j < cols; ++j) a[i][j] -= q * a[t][j];
                if (sgn(a[i][t]) != 0) clean = false;
            }
            for (std::size_t j = t + 1; j < cols; ++j) {
                if (sgn(a[t][j]) == 0) continue;
                Integer q;
                mpz_fdiv_q(q.get_mpz_t(), a[t][j].get_mpz_t(), a[t][t].get_mpz_t());
                for (std::size_t i = t; i < m; ++i) a[i][j] -= q * a[i][t];
                if (sgn(a[t][j]) != 0) clean = false;
            }
            if (!clean) continue;
            // divisibility of the trailing block by the pivot
            std::size_t bad = m;
            for (std::size_t i = t + 1; i < m && bad == m; ++i)
                for (std::size_t j = t + 1; j < cols; ++j)
                    if (!mpz_divisible_p(a[i][j].get_mpz_t(), a[t][t].get_mpz_t())) {
                        bad = i;
                        break;
                    }
            if (bad == m) break;
            for (std::size_t j = t; j < cols; ++j) a[t][j] += a[bad][j];
        }
        diag.push_back(abs(a[t][t]));
    }
    return diag;
}

QMatrix hnf(const QMatrix& m) { return ZLattice::from_generators(m).basis(); }

// ---------------------------------------------------------------------------
// ZLattice

ZLattice::ZLattice(std::size_t ambient_dim) : dim_(ambient_dim) {}

ZLattice ZLattice::from_generators(const QMatrix& gens) {
    ZLattice l(gens.cols());
    Integer d = 1;
    for (const auto& q : gens.entries()) mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), q.get_den_mpz_t());
    l.den_ = d;
    for (std::size_t i = 0; i < gens.rows(); ++i) {
        IntVector row(gens.cols());
        for (std::size_t j = 0; j < gens.cols(); ++j) {
            const Rational& q = gens(i, j);
            row[j] = q.get_num() * (d / q.get_den());
        }
        l.rows_.push_back(std::move(row));
    }
    l.normalize();
    return l;
}

ZLattice ZLattice::from_rows(const std::vector<QVector>& rows, std::size_t ambient_dim) {
    return from_generators(QMatrix::from_rows(rows, ambient_dim));
}

ZLattice ZLattice::standard(std::size_t n) { return from_generators(QMatrix::identity(n)); }

void ZLattice::normalize() {
    rows_ = hermite_rows(std::move(rows_), dim_);
    if (rows_.empty()) {
        den_ = 1;
        return;
    }
    const Integer g = gcd_of(den_, rows_);
    if (g != 1) {
        den_ /= g;
        for (auto& row : rows_)
            for (auto& e : row) mpz_divexact(e.get_mpz_t(), e.get_mpz_t(), g.get_mpz_t());
    }
}

QMatrix ZLattice::basis() const {
    QMatrix m(rows_.size(), dim_);
    for (std::size_t i = 0; i < rows_.size(); ++i)
        for (std::size_t j = 0; j < dim_; ++j) {
            Rational q(rows_[i][j], den_);
            q.canonicalize();
            m(i, j) = std::move(q);
        }
    return m;
}

QVector ZLattice::basis_row(std::size_t i) const {
    QVector v(dim_);
    for (std::size_t j = 0; j < dim_; ++j) {
        v[j] = Rational(rows_[i][j], den_);
        v[j].canonicalize();
    }
    return v;
}

bool ZLattice::reduce_in_place(IntVector& w) const {
    std::size_t col = 0;
    for (const auto& row : rows_) {
        std::size_t p = col;
        while (sgn(row[p]) == 0) ++p;
        for (std::size_t c = col; c < p; ++c)
            if (sgn(w[c]) != 0) return false;
        if (sgn(w[p]) != 0) {
            if (!mpz_divisible_p(w[p].get_mpz_t(), row[p].get_mpz_t())) return false;
            const Integer q = w[p] / row[p];
            for (std::size_t c = p; c < dim_; ++c)
                if (sgn(row[c]) != 0) w[c] -= q * row[c];
        }
        col = p + 1;
    }
    for (std::size_t c = col; c < dim_; ++c)
        if (sgn(w[c]) != 0) return false;
    return true;
}

bool ZLattice::contains(const QVector& v) const {
    check_same_dim(v.size(), dim_, "membership");
    IntVector w(dim_);
    for (std::size_t j = 0; j < dim_; ++j) {
        const Rational x = v[j] * den_;
        if (x.get_den() != 1) return false;
        w[j] = x.get_num();
    }
    return reduce_in_place(w);
}

bool ZLattice::contains(const ZLattice& other) const {
    check_same_dim(other.dim_, dim_, "lattice containment");
    for (std::size_t i = 0; i < other.rank(); ++i)
        if (!contains(other.basis_row(i))) return false;
    return true;
}

std::optional<IntVector> ZLattice::coordinates(const QVector& v) const {
    check_same_dim(v.size(), dim_, "coordinates");
    IntVector w(dim_);
    for (std::size_t j = 0; j < dim_; ++j) {
        const Rational x = v[j] * den_;
        if (x.get_den() != 1) return std::nullopt;
        w[j] = x.get_num();
    }
    IntVector coords;
    std::size_t col = 0;
    for (const auto& row : rows_) {
        std::size_t p = col;
        while (sgn(row[p]) == 0) ++p;
        for (std::size_t c = col; c < p; ++c)
            if (sgn(w[c]) != 0) return std::nullopt;
        Integer q = 0;
        if (sgn(w[p]) != 0) {
            if (!mpz_divisible_p(w[p].get_mpz_t(), row[p].get_mpz_t())) return std::nullopt;
            q = w[p] / row[p];
            for (std::size_t c = p; c < dim_; ++c) w[c] -= q * row[c];
        }
        coords.push_back(q);
        col = p + 1;
    }
    for (std::size_t c = col; c < dim_; ++c)
        if (sgn(w[c]) != 0) return std::nullopt;
    return coords;
}

bool ZLattice::insert(const QVector& v) {
    check_same_dim(v.size(), dim_, "insert");
    if (contains(v)) return false;
    const Integer l = lcm_of_denominators(v);
    IntVector num(dim_);
    for (std::size_t j = 0; j < dim_; ++j) num[j] = v[j].get_num() * (l / v[j].get_den());
    return insert_scaled(num, l);
}

bool ZLattice::insert_scaled(const IntVector& numerators, const Integer& den) {
    check_same_dim(numerators.size(), dim_, "insert");
    Integer nd;
    mpz_lcm(nd.get_mpz_t(), den_.get_mpz_t(), den.get_mpz_t());
    if (nd == den_) {
        IntVector w = numerators;
        if (den != den_) {
            const Integer f = den_ / den;
            for (auto& e : w) e *= f;
        }
        if (reduce_in_place(w)) return false;
        IntVector row = numerators;
        if (den != den_) {
            const Integer f = den_ / den;
            for (auto& e : row) e *= f;
        }
        rows_.push_back(std::move(row));
    } else {
        const Integer fo = nd / den_;
        for (auto& row : rows_)
            for (auto& e : row) e *= fo;
        const Integer fn = nd / den;
        IntVector row = numerators;
        for (auto& e : row) e *= fn;
        rows_.push_back(std::move(row));
        den_ = nd;
    }
    normalize();
    return true;
}

bool ZLattice::insert_many(const std::vector<QVector>& vs) {
    std::vector<const QVector*> fresh;
    for (const auto& v : vs) {
        check_same_dim(v.size(), dim_, "insert");
        if (!contains(v)) fresh.push_back(&v);
    }
    if (fresh.empty()) return false;
    Integer nd = den_;
    for (const auto* v : fresh)
        for (const auto& q : *v) mpz_lcm(nd.get_mpz_t(), nd.get_mpz_t(), q.get_den_mpz_t());
    const Integer fo = nd / den_;
    if (fo != 1)
        for (auto& row : rows_)
            for (auto& e : row) e *= fo;
    for (const auto* v : fresh) {
        IntVector row(dim_);
        for (std::size_t j = 0; j < dim_; ++j) row[j] = (*v)[j].get_num() * (nd / (*v)[j].get_den());
        rows_.push_back(std::move(row));
    }
    den_ = nd;
    normalize();
    return true;
}

ZLattice ZLattice::scaled(const Rational& s) const {
    if (sgn(s) == 0 || rows_.empty()) return ZLattice(dim_);
    ZLattice out(dim_);
    out.den_ = den_ * s.get_den();
    for (const auto& row : rows_) {
        IntVector r = row;
        for (auto& e : r) e *= s.get_num();
        out.rows_.push_back(std::move(r));
    }
    out.normalize();
    return out;
}

bool membership(const QVector& v, const ZLattice& a) { return a.contains(v); }

ZLattice lattice_sum(const ZLattice& a, const ZLattice& b) {
    check_same_dim(a.ambient_dim(), b.ambient_dim(), "lattice_sum");
    std::vector<QVector> rows;
    for (std::size_t i = 0; i < a.rank(); ++i) rows.push_back(a.basis_row(i));
    for (std::size_t i = 0; i < b.rank(); ++i) rows.push_back(b.basis_row(i));
    return ZLattice::from_rows(rows, a.ambient_dim());
}

ZLattice lattice_intersect(const ZLattice& a, const ZLattice& b) {
    check_same_dim(a.ambient_dim(), b.ambient_dim(), "lattice_intersect");
    const std::size_t n = a.ambient_dim();
    if (a.is_zero() || b.is_zero()) return ZLattice(n);
    Integer d;
    mpz_lcm(d.get_mpz_t(), a.denominator().get_mpz_t(), b.denominator().get_mpz_t());
    const Integer fa = d / a.denominator();
    const Integer fb = d / b.denominator();
    IntRows stacked;
    for (const auto& row : a.integer_rows()) {
        IntVector r = row;
        for (auto& e : r) e *= fa;
        stacked.push_back(std::move(r));
    }
    for (const auto& row : b.integer_rows()) {
        IntVector r = row;
        for (auto& e : r) e *= fb;
        stacked.push_back(std::move(r));
    }
    const auto kernel = integer_left_kernel(stacked, n);
    std::vector<QVector> rows;
    for (const auto& k : kernel) {
        QVector x(n);
        for (std::size_t i = 0; i < a.rank(); ++i) {
            if (sgn(k[i]) == 0) continue;
            for (std::size_t j = 0; j < n; ++j) x[j] += Rational(k[i] * stacked[i][j], d);
        }
        rows.push_back(std::move(x));
    }
    return ZLattice::from_rows(rows, n);
}

QuotientInvariants quotient_invariants(const ZLattice& a, const ZLattice& b) {
    check_same_dim(a.ambient_dim(), b.ambient_dim(), "quotient_exponent");
    if (!a.contains(b)) throw ExactError("quotient_exponent: B is not contained in A");
    if (a.rank() != b.rank()) throw ExactError("quotient_exponent: unequal rational spans (quotient is infinite)");
    IntRows change;
    for (std::size_t i = 0; i < b.rank(); ++i) change.push_back(*a.coordinates(b.basis_row(i)));
    QuotientInvariants out;
    out.divisors = smith_invariants(change, a.rank());
    out.exponent = 1;
    out.index = 1;
    for (const auto& d : out.divisors) {
        mpz_lcm(out.exponent.get_mpz_t(), out.exponent.get_mpz_t(), d.get_mpz_t());
        out.index *= d;
    }
    return out;
}

Integer quotient_exponent(const ZLattice& a, const ZLattice& b) { return quotient_invariants(a, b).exponent; }

QMatrix lattice_gram(const ZLattice& a, const QMatrix& gram) {
    check_same_dim(gram.rows(), a.ambient_dim(), "lattice_gram");
    const QMatrix basis = a.basis();
    return basis * gram * basis.transpose();
}

ZLattice dual_lattice(const ZLattice& a, const QMatrix& gram) {
    check_same_dim(gram.rows(), a.ambient_dim(), "dual_lattice");
    check_same_dim(gram.cols(), a.ambient_dim(), "dual_lattice");
    if (a.is_zero()) return a;
    const QMatrix basis = a.basis();
    const QMatrix g = basis * gram * basis.transpose();
    if (sgn(determinant(g)) == 0) throw ExactError("dual_lattice: form is degenerate on the span");
    return ZLattice::from_generators(inverse(g) * basis);
}

}  // namespace voaforms
