#include "voaforms/voa.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace voaforms {

namespace {

using Poly = std::map<Modes, Rational>;
using ZPoly = std::map<int, Poly>;

Integer binomial(long n, long k) {
    if (k < 0 || n < 0 || k > n) return 0;
    Integer r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return r;
}

void accumulate(Poly& p, const Modes& m, const Rational& c) {
    if (sgn(c) == 0) return;
    auto [it, inserted] = p.try_emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (sgn(it->second) == 0) p.erase(it);
    }
}

Modes merge_modes(const Modes& a, const Modes& b) {
    Modes out;
    out.reserve(a.size() + b.size());
    std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

Modes remove_one(const Modes& m, const Mode& x) {
    Modes out = m;
    out.erase(std::find(out.begin(), out.end(), x));
    return out;
}

LatticeVector add(const LatticeVector& a, const LatticeVector& b) {
    LatticeVector c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
    return c;
}

bool is_zero_vector(const LatticeVector& a) {
    return std::all_of(a.begin(), a.end(), [](std::int64_t x) { return x == 0; });
}

}  // namespace

// ---------------------------------------------------------------------------
// EvenLattice, Cocycle

EvenLattice::EvenLattice(std::vector<std::vector<std::int64_t>> gram) : gram_(std::move(gram)) {
    const std::size_t d = gram_.size();
    if (d == 0) throw VoaError("lattice rank must be positive");
    for (const auto& row : gram_)
        if (row.size() != d) throw VoaError("gram matrix is not square");
    for (std::size_t i = 0; i < d; ++i) {
        if (gram_[i][i] % 2 != 0) throw VoaError("lattice not even");
        for (std::size_t j = 0; j < d; ++j)
            if (gram_[i][j] != gram_[j][i]) throw VoaError("gram matrix is not symmetric");
    }
    const QMatrix g = gram_matrix();
    for (std::size_t k = 1; k <= d; ++k) {
        QMatrix minor(k, k);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) minor(i, j) = g(i, j);
        if (sgn(determinant(minor)) <= 0) throw VoaError("lattice not positive definite");
    }
    gram_inv_ = inverse(g);
}

QMatrix EvenLattice::gram_matrix() const {
    QMatrix g(rank(), rank());
    for (std::size_t i = 0; i < rank(); ++i)
        for (std::size_t j = 0; j < rank(); ++j) g(i, j) = static_cast<long>(gram_[i][j]);
    return g;
}

std::int64_t EvenLattice::inner(const LatticeVector& a, const LatticeVector& b) const {
    std::int64_t s = 0;
    for (std::size_t i = 0; i < rank(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < rank(); ++j) s += a[i] * gram_[i][j] * b[j];
    }
    return s;
}

std::int64_t EvenLattice::inner_basis(std::size_t i, const LatticeVector& b) const {
    std::int64_t s = 0;
    for (std::size_t j = 0; j < rank(); ++j) s += gram_[i][j] * b[j];
    return s;
}

std::vector<LatticeVector> EvenLattice::vectors_up_to_weight(int max_weight) const {
    // |a_i|^2 <= <a,a> (G^-1)_ii
    const std::size_t d = rank();
    std::vector<std::int64_t> bound(d);
    for (std::size_t i = 0; i < d; ++i) {
        const double gi = gram_inv_(i, i).get_d();
        bound[i] = static_cast<std::int64_t>(std::floor(std::sqrt(2.0 * max_weight * gi) + 1e-9)) + 1;
    }
    std::vector<LatticeVector> out;
    LatticeVector cur(d, 0);
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == d) {
            if (norm(cur) <= 2 * static_cast<std::int64_t>(max_weight)) out.push_back(cur);
            return;
        }
        for (std::int64_t x = -bound[i]; x <= bound[i]; ++x) {
            cur[i] = x;
            rec(i + 1);
        }
        cur[i] = 0;
    };
    rec(0);
    return out;
}

Cocycle::Cocycle(const EvenLattice& lattice) : table_(lattice.rank(), std::vector<int>(lattice.rank(), 1)) {
    for (std::size_t i = 0; i < lattice.rank(); ++i)
        for (std::size_t j = 0; j < i; ++j) table_[i][j] = (lattice.gram()[i][j] % 2 == 0) ? 1 : -1;
}

int Cocycle::operator()(const LatticeVector& a, const LatticeVector& b) const {
    std::int64_t parity = 0;
    for (std::size_t i = 0; i < table_.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < table_.size(); ++j)
            if (table_[i][j] < 0) parity += a[i] * b[j];
    }
    return (parity % 2 == 0) ? 1 : -1;
}

int FockMonomial::mode_weight() const {
    int w = 0;
    for (const auto& m : modes) w += m.n;
    return w;
}

// ---------------------------------------------------------------------------
// GradedVector

GradedVector::GradedVector(int cutoff, Terms terms) : cutoff_(cutoff), terms_(std::move(terms)) {
    for (auto it = terms_.begin(); it != terms_.end();) {
        if (sgn(it->second) == 0)
            it = terms_.erase(it);
        else
            ++it;
    }
}

Rational GradedVector::coefficient(const FockMonomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Rational(0) : it->second;
}

void GradedVector::add_term(const FockMonomial& m, const Rational& c) {
    if (sgn(c) == 0) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (sgn(it->second) == 0) terms_.erase(it);
    }
}

GradedVector& GradedVector::operator+=(const GradedVector& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    cutoff_ = std::max(cutoff_, o.cutoff_);
    return *this;
}

GradedVector& GradedVector::operator-=(const GradedVector& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    cutoff_ = std::max(cutoff_, o.cutoff_);
    return *this;
}

GradedVector& GradedVector::operator*=(const Rational& s) {
    if (sgn(s) == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [m, c] : terms_) c *= s;
    return *this;
}

// ---------------------------------------------------------------------------
// TruncatedVOA: bases

TruncatedVOA::TruncatedVOA(EvenLattice lattice, int cutoff)
    : lattice_(std::move(lattice)), cocycle_(lattice_), cutoff_(cutoff) {
    if (cutoff_ < 0) throw VoaError("cutoff must be nonnegative");
    const std::size_t d = lattice_.rank();
    bases_.assign(static_cast<std::size_t>(cutoff_) + 1, {});
    const auto tails = lattice_.vectors_up_to_weight(cutoff_);
    for (const auto& alpha : tails) {
        const int w = static_cast<int>(lattice_.norm(alpha) / 2);
        // colored partitions of the remaining weight, parts as sorted (n, i)
        Modes cur;
        for (int total = 0; w + total <= cutoff_; ++total) {
            std::function<void(int, Mode)> parts = [&](int remaining, Mode lo) {
                if (remaining == 0) {
                    bases_[static_cast<std::size_t>(w + total)].push_back(FockMonomial{cur, alpha});
                    return;
                }
                for (int n = lo.n; n <= remaining; ++n) {
                    const int first_index = (n == lo.n) ? lo.index : 0;
                    for (int i = first_index; i < static_cast<int>(d); ++i) {
                        cur.push_back(Mode{n, i});
                        parts(remaining - n, Mode{n, i});
                        cur.pop_back();
                    }
                }
            };
            parts(total, Mode{1, 0});
        }
    }
    for (auto& basis : bases_) std::sort(basis.begin(), basis.end());
    if (bases_[0].size() != 1) throw VoaError("dim V_0 != 1");
    for (std::size_t deg = 0; deg < bases_.size(); ++deg)
        for (std::uint32_t p = 0; p < bases_[deg].size(); ++p)
            index_.emplace(bases_[deg][p], std::make_pair(static_cast<int>(deg), p));

    omega_ = GradedVector(cutoff_);
    if (cutoff_ >= 2) {
        const QMatrix& ginv = lattice_.gram_inverse();
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = i; j < d; ++j) {
                const Rational c = (i == j) ? Rational(ginv(i, i) / 2) : Rational(ginv(i, j));
                omega_.add_term(FockMonomial{{Mode{1, static_cast<int>(i)}, Mode{1, static_cast<int>(j)}},
                                             LatticeVector(d, 0)},
                                c);
            }
    }
}

void TruncatedVOA::check_degree(int d) const {
    if (d < 0 || d > cutoff_)
        throw TruncationError("degree " + std::to_string(d) + " outside 0.." + std::to_string(cutoff_));
}

const std::vector<FockMonomial>& TruncatedVOA::graded_basis(int d) const {
    check_degree(d);
    return bases_[static_cast<std::size_t>(d)];
}

int TruncatedVOA::degree(const FockMonomial& m) const {
    return m.mode_weight() + static_cast<int>(lattice_.norm(m.tail) / 2);
}

std::uint32_t TruncatedVOA::position(const FockMonomial& m) const {
    auto it = index_.find(m);
    if (it == index_.end()) throw TruncationError("monomial above cutoff or malformed");
    return it->second.second;
}

GradedVector TruncatedVOA::vacuum() const { return monomial(FockMonomial::vacuum(rank())); }

GradedVector TruncatedVOA::monomial(const FockMonomial& m, const Rational& c) const {
    if (m.tail.size() != rank()) throw VoaError("monomial tail has wrong rank");
    check_degree(degree(m));
    GradedVector v(cutoff_);
    v.add_term(m, c);
    return v;
}

GradedVector TruncatedVOA::exponential(const LatticeVector& alpha) const { return monomial(FockMonomial{{}, alpha}); }

GradedVector TruncatedVOA::virasoro_element() const {
    check_degree(2);
    return omega_;
}

std::map<int, GradedVector> TruncatedVOA::components(const GradedVector& v) const {
    std::map<int, GradedVector> out;
    for (const auto& [m, c] : v.terms()) {
        auto [it, _] = out.try_emplace(degree(m), cutoff_);
        it->second.add_term(m, c);
    }
    return out;
}

int TruncatedVOA::homogeneous_degree(const GradedVector& v) const {
    int d = -1;
    for (const auto& [m, c] : v.terms()) {
        const int dm = degree(m);
        if (d >= 0 && dm != d) throw VoaError("vector is not homogeneous");
        d = dm;
    }
    return d;
}

QVector TruncatedVOA::coordinates(const GradedVector& v, int d) const {
    QVector out(dimension(d));
    for (const auto& [m, c] : v.terms()) {
        if (degree(m) != d) throw VoaError("coordinates: vector has a component outside degree " + std::to_string(d));
        out[position(m)] = c;
    }
    return out;
}

GradedVector TruncatedVOA::from_coordinates(int d, const QVector& c) const {
    const auto& basis = graded_basis(d);
    if (c.size() != basis.size()) throw VoaError("from_coordinates: wrong length");
    GradedVector v(cutoff_);
    for (std::size_t i = 0; i < c.size(); ++i) v.add_term(basis[i], c[i]);
    return v;
}

// ---------------------------------------------------------------------------
// Vertex operators
//
// For a = g_{i1}(-n1)...g_{ik}(-nk) e^alpha,
//   Y(a,z) = : d^{(n1-1)} g_{i1}(z) ... d^{(nk-1)} g_{ik}(z) Y(e^alpha, z) :
//   Y(e^alpha,z) = E^-(-alpha,z) E^+(-alpha,z) e^alpha z^{alpha(0)},
// with every h(m), m >= 0, placed right of e^alpha. Each field factor either
// contributes its creation half (left) or its annihilation half (right).

const TruncatedVOA::Poly& TruncatedVOA::schur(const LatticeVector& alpha, int d) const {
    const auto key = std::make_pair(alpha, d);
    {
        std::shared_lock lock(schur_mutex_);
        auto it = schur_cache_.find(key);
        if (it != schur_cache_.end()) return it->second;
    }
    // d S_d = sum_{n=1}^{d} alpha(-n) S_{d-n}
    Poly value;
    if (d == 0) {
        value.emplace(Modes{}, Rational(1));
    } else {
        for (int n = 1; n <= d; ++n) {
            const Poly& prev = schur(alpha, d - n);
            for (std::size_t i = 0; i < alpha.size(); ++i) {
                if (alpha[i] == 0) continue;
                const Mode x{n, static_cast<int>(i)};
                for (const auto& [m, c] : prev) accumulate(value, merge_modes(m, Modes{x}), c * static_cast<long>(alpha[i]));
            }
        }
        const Rational inv(1, static_cast<unsigned long>(d));
        for (auto& [m, c] : value) c *= inv;
    }
    std::unique_lock lock(schur_mutex_);
    return schur_cache_.try_emplace(key, std::move(value)).first->second;
}

TruncatedVOA::Poly TruncatedVOA::creation_part(const std::vector<Mode>& fields, const LatticeVector& alpha,
                                               int d) const {
    // degree-d part of prod_t sum_{m>=1} C(m-1, n_t-1) g_{i_t}(-m) z^{m-n_t}  times  E^-(-alpha,z)
    Poly result;
    Modes acc;
    std::function<void(std::size_t, int, const Rational&)> rec = [&](std::size_t t, int budget, const Rational& coef) {
        if (t == fields.size()) {
            for (const auto& [m, c] : schur(alpha, budget)) accumulate(result, merge_modes(acc, m), coef * c);
            return;
        }
        const Mode& f = fields[t];
        for (int m = f.n; m <= budget; ++m) {
            const Integer b = binomial(m - 1, f.n - 1);
            const Mode x{m, f.index};
            const auto pos = std::lower_bound(acc.begin(), acc.end(), x);
            acc.insert(pos, x);
            rec(t + 1, budget - m, coef * Rational(b));
            acc.erase(std::find(acc.begin(), acc.end(), x));
        }
    };
    rec(0, d, Rational(1));
    return result;
}

SparseRow TruncatedVOA::compute_monomial_product(const FockMonomial& a, int k, const FockMonomial& b) const {
    const int out_degree = degree(a) + degree(b) - k - 1;
    SparseRow row;
    row.degree = out_degree;
    if (out_degree < 0) return row;
    if (out_degree > cutoff_) throw TruncationError("product degree " + std::to_string(out_degree) + " exceeds cutoff");

    const LatticeVector& alpha = a.tail;
    const LatticeVector& beta = b.tail;
    if (lattice_.norm(add(alpha, beta)) > 2 * static_cast<std::int64_t>(out_degree)) return row;
    const std::int64_t ab = lattice_.inner(alpha, beta);
    const int eps = cocycle_(alpha, beta);
    const int target = -k - 1;
    const std::size_t nf = a.modes.size();
    const auto& g = lattice_.gram();

    Poly total;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << nf); ++mask) {
        std::vector<Mode> creation;
        int sum_n = 0;
        for (std::size_t t = 0; t < nf; ++t)
            if ((mask >> t) & 1U) {
                creation.push_back(a.modes[t]);
                sum_n += a.modes[t].n;
            }

        ZPoly right;
        right[0].emplace(b.modes, Rational(1));
        for (std::size_t t = 0; t < nf; ++t) {
            if ((mask >> t) & 1U) continue;
            // sum_{m>=0} C(-m-1, n-1) g_i(m) z^{-m-n}
            const int n = a.modes[t].n;
            const int i = a.modes[t].index;
            const int sign = ((n - 1) % 2 == 0) ? 1 : -1;
            const std::int64_t h0 = lattice_.inner_basis(static_cast<std::size_t>(i), beta);
            ZPoly next;
            for (const auto& [zp, poly] : right) {
                for (const auto& [mono, c] : poly) {
                    if (h0 != 0) accumulate(next[zp - n], mono, c * static_cast<long>(sign * h0));
                    for (std::size_t p = 0; p < mono.size(); ++p) {
                        if (p > 0 && mono[p] == mono[p - 1]) continue;
                        const Mode x = mono[p];
                        const std::int64_t gij = g[static_cast<std::size_t>(i)][static_cast<std::size_t>(x.index)];
                        if (gij == 0) continue;
                        const long mult = static_cast<long>(std::count(mono.begin(), mono.end(), x));
                        const Integer coef = binomial(x.n + n - 1, n - 1) * sign * x.n * gij * mult;
                        accumulate(next[zp - x.n - n], remove_one(mono, x), c * Rational(coef));
                    }
                }
            }
            right = std::move(next);
        }

        // E^+(-alpha,z): x_{j,m} -> x_{j,m} - <alpha,g_j> z^{-m}
        if (!is_zero_vector(alpha)) {
            ZPoly shifted;
            for (const auto& [zp, poly] : right) {
                for (const auto& [mono, c] : poly) {
                    std::function<void(std::size_t, int, Modes&, const Rational&)> expand =
                        [&](std::size_t p, int z, Modes& kept, const Rational& coef) {
                            if (p == mono.size()) {
                                accumulate(shifted[z], kept, coef);
                                return;
                            }
                            std::size_t q = p;
                            while (q < mono.size() && mono[q] == mono[p]) ++q;
                            const long e = static_cast<long>(q - p);
                            const Mode x = mono[p];
                            const std::int64_t cj = lattice_.inner_basis(static_cast<std::size_t>(x.index), alpha);
                            Rational power = 1;
                            for (long r = 0; r <= e; ++r) {
                                if (r > 0) power *= -cj;
                                if (r > 0 && cj == 0) break;
                                const std::size_t before = kept.size();
                                for (long s = 0; s < e - r; ++s) kept.push_back(x);
                                expand(q, z - x.n * static_cast<int>(r), kept,
                                       coef * Rational(binomial(e, r)) * power);
                                kept.resize(before);
                            }
                        };
                    Modes kept;
                    expand(0, zp, kept, c);
                }
            }
            right = std::move(shifted);
        }

        for (const auto& [zp, poly] : right) {
            const std::int64_t d = static_cast<std::int64_t>(target) - zp - ab + sum_n;
            if (d < sum_n) continue;
            const Poly left = creation_part(creation, alpha, static_cast<int>(d));
            if (left.empty()) continue;
            for (const auto& [lm, lc] : left)
                for (const auto& [rm, rc] : poly) accumulate(total, merge_modes(lm, rm), lc * rc * eps);
        }
    }

    const LatticeVector tail = add(alpha, beta);
    for (const auto& [modes, c] : total) {
        const FockMonomial m{modes, tail};
        row.entries.emplace_back(position(m), c);
    }
    std::sort(row.entries.begin(), row.entries.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    return row;
}

const SparseRow& TruncatedVOA::monomial_product(std::uint32_t a_deg, std::uint32_t a_pos, int k,
                                                std::uint32_t b_deg, std::uint32_t b_pos) const {
    const std::uint64_t key = (std::uint64_t{a_deg} << 56) | (std::uint64_t{a_pos} << 36) |
                              (std::uint64_t(static_cast<std::uint32_t>(k + 512) & 0x3FFu) << 26) |
                              (std::uint64_t{b_deg} << 20) | std::uint64_t{b_pos};
    {
        std::shared_lock lock(product_mutex_);
        auto it = product_cache_.find(key);
        if (it != product_cache_.end()) return *it->second;
    }
    auto row = std::make_unique<SparseRow>(compute_monomial_product(graded_basis(static_cast<int>(a_deg))[a_pos], k,
                                                                    graded_basis(static_cast<int>(b_deg))[b_pos]));
    std::unique_lock lock(product_mutex_);
    auto [it, _] = product_cache_.try_emplace(key, std::move(row));
    return *it->second;
}

GradedVector TruncatedVOA::vertex_product(const GradedVector& a, int k, const GradedVector& b,
                                          TruncationMode mode) const {
    GradedVector out(cutoff_);
    for (const auto& [ma, ca] : a.terms()) {
        const int da = degree(ma);
        check_degree(da);
        const std::uint32_t pa = position(ma);
        for (const auto& [mb, cb] : b.terms()) {
            const int db = degree(mb);
            check_degree(db);
            const int r = da + db - k - 1;
            if (r < 0) continue;
            if (r > cutoff_) {
                if (mode == TruncationMode::Drop) continue;
                throw TruncationError("a_" + std::to_string(k) + " b has degree " + std::to_string(r) +
                                      " above cutoff " + std::to_string(cutoff_));
            }
            const SparseRow& row = monomial_product(static_cast<std::uint32_t>(da), pa, k,
                                                    static_cast<std::uint32_t>(db), position(mb));
            const Rational c = ca * cb;
            const auto& basis = graded_basis(r);
            for (const auto& [pos, val] : row.entries) out.add_term(basis[pos], c * val);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Invariant bilinear form
//
// <p e^alpha, q e^beta> = [alpha + beta = 0] (-1)^{<alpha,alpha>/2} eps(alpha,-alpha) B(p, q)
// with B(1,1) = 1 and g_i(-n)^dagger = -g_i(n).

Rational TruncatedVOA::fock_form(const Modes& p, const Modes& q) const {
    if (p.empty()) return q.empty() ? Rational(1) : Rational(0);
    if (p.size() != q.size()) return 0;
    const Mode x = p.front();
    const Modes rest = Modes(p.begin() + 1, p.end());
    Rational acc = 0;
    for (std::size_t s = 0; s < q.size(); ++s) {
        if (q[s].n != x.n) continue;
        if (s > 0 && q[s] == q[s - 1]) continue;
        const std::int64_t gij = lattice_.gram()[static_cast<std::size_t>(x.index)][static_cast<std::size_t>(q[s].index)];
        if (gij == 0) continue;
        const long mult = static_cast<long>(std::count(q.begin(), q.end(), q[s]));
        const Rational sub = fock_form(rest, remove_one(q, q[s]));
        if (sgn(sub) == 0) continue;
        acc -= sub * static_cast<long>(x.n * gij * mult);
    }
    return acc;
}

Rational TruncatedVOA::monomial_form(const FockMonomial& a, const FockMonomial& b) const {
    if (!is_zero_vector(add(a.tail, b.tail))) return 0;
    if (a.mode_weight() != b.mode_weight()) return 0;
    const Rational f = fock_form(a.modes, b.modes);
    if (sgn(f) == 0) return 0;
    int sign = cocycle_(a.tail, b.tail);  // b.tail = -a.tail
    if ((lattice_.norm(a.tail) / 2) % 2 != 0) sign = -sign;
    return f * sign;
}

const QMatrix& TruncatedVOA::form_matrix(int d) const {
    check_degree(d);
    std::call_once(form_once_, [this] {
        std::vector<QMatrix> mats;
        for (int deg = 0; deg <= cutoff_; ++deg) {
            const auto& basis = bases_[static_cast<std::size_t>(deg)];
            QMatrix m(basis.size(), basis.size());
            for (std::size_t i = 0; i < basis.size(); ++i)
                for (std::size_t j = i; j < basis.size(); ++j) {
                    m(i, j) = monomial_form(basis[i], basis[j]);
                    m(j, i) = m(i, j);
                }
            mats.push_back(std::move(m));
        }
        form_matrices_ = std::move(mats);
    });
    return form_matrices_[static_cast<std::size_t>(d)];
}

Rational TruncatedVOA::bilinear_form(const GradedVector& u, const GradedVector& v) const {
    Rational acc = 0;
    for (const auto& [mu, cu] : u.terms())
        for (const auto& [mv, cv] : v.terms()) {
            if (degree(mu) != degree(mv)) continue;
            const Rational f = monomial_form(mu, mv);
            if (sgn(f) != 0) acc += cu * cv * f;
        }
    return acc;
}

// ---------------------------------------------------------------------------
// Virasoro operators

GradedVector TruncatedVOA::L_apply(int n, const GradedVector& v, TruncationMode mode) const {
    if (cutoff_ < 2) throw TruncationError("cutoff below 2: omega is not representable");
    return vertex_product(omega_, n + 1, v, mode);
}

GradedVector TruncatedVOA::divided_translate(const GradedVector& v, int n) const {
    if (n < 0) throw VoaError("divided_translate: n must be nonnegative");
    return vertex_product(v, -n - 1, vacuum());
}

bool TruncatedVOA::is_quasi_primary(const GradedVector& v) const {
    for (const auto& [m, c] : v.terms())
        if (degree(m) == 0) return L_apply(1, v, TruncationMode::Drop).is_zero();
    return L_apply(1, v).is_zero();
}

TruncatedVOA::InvarianceSides TruncatedVOA::invariance_sides(const GradedVector& a, const GradedVector& u,
                                                             const GradedVector& v) const {
    InvarianceSides sides;
    const auto ac = components(a);
    const auto uc = components(u);
    const auto vc = components(v);
    auto bump = [](std::map<int, Rational>& m, int p, const Rational& x) {
        if (sgn(x) == 0) return;
        auto& e = m[p];
        e += x;
        if (sgn(e) == 0) m.erase(p);
    };
    for (const auto& [w, aw] : ac) {
        // left: <a_k u, v> z^{-k-1}
        for (const auto& [s, us] : uc) {
            for (int k = w + s - 1 - cutoff_; k <= w + s - 1; ++k) {
                const GradedVector prod = vertex_product(aw, k, us);
                bump(sides.lhs, -k - 1, bilinear_form(prod, v));
            }
        }
        // right: sum_j (-1)^w z^{-2w+j} <u, (L(1)^j/j! a)_m v> z^{m+1}
        GradedVector bj = aw;
        Integer fact = 1;
        const int sign = (w % 2 == 0) ? 1 : -1;
        for (int j = 0; j <= w && !bj.is_zero(); ++j) {
            if (j > 0) {
                bj = L_apply(1, bj, w - j + 1 == 0 ? TruncationMode::Drop : TruncationMode::Error);
                fact *= j;
                if (bj.is_zero()) break;
            }
            const GradedVector bdiv = Rational(Integer(1), fact) * bj;
            const int wb = w - j;
            for (const auto& [t, vt] : vc) {
                for (int m = wb + t - 1 - cutoff_; m <= wb + t - 1; ++m) {
                    const GradedVector prod = vertex_product(bdiv, m, vt);
                    bump(sides.rhs, -2 * w + j + m + 1, sign * bilinear_form(u, prod));
                }
            }
        }
    }
    return sides;
}

bool TruncatedVOA::invariance_identity_check(const GradedVector& a, const GradedVector& u,
                                             const GradedVector& v) const {
    const auto sides = invariance_sides(a, u, v);
    return sides.lhs == sides.rhs;
}

// ---------------------------------------------------------------------------
// Vacuum identities

VacuumIdentityReport vacuum_identity_check(const TruncatedVOA& v) {
    VacuumIdentityReport out;
    const int n = v.cutoff();
    const GradedVector vac = v.vacuum();
    const GradedVector zero(n);
    for (int d = 0; d <= n; ++d) {
        const auto& basis = v.graded_basis(d);
        for (std::uint32_t pos = 0; pos < basis.size(); ++pos) {
            const GradedVector a = v.monomial(basis[pos]);
            // L(-1)^j a / j!, built independently of a_k vac
            std::vector<GradedVector> translates{a};
            for (int j = 1; d + j <= n; ++j)
                translates.push_back(Rational(1, j) * v.L_apply(-1, translates.back()));
            for (int k = d - 1 - n; k <= d + 1; ++k) {
                const GradedVector left = v.vertex_product(vac, k, a);
                const GradedVector right = v.vertex_product(a, k, vac);
                out.checked += 2;
                const GradedVector& want_left = k == -1 ? a : zero;
                const GradedVector& want_right = k >= 0 ? zero : translates.at(static_cast<std::size_t>(-k - 1));
                if (!(left == want_left)) out.witness = VacuumIdentityReport::Witness{d, pos, k, true};
                else if (!(right == want_right)) out.witness = VacuumIdentityReport::Witness{d, pos, k, false};
                if (out.witness) {
                    out.pass = false;
                    return out;
                }
            }
        }
    }
    return out;
}

}  // namespace voaforms
