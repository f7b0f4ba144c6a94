#pragma once

// Truncated lattice vertex operator algebras over Q.
//
// V_L = S(h^-) (x) Q[L] with h = Q (x) L. A basis vector is a Fock monomial
//   gamma_{i1}(-n1) ... gamma_{ik}(-nk) e^alpha
// of degree n1 + ... + nk + <alpha,alpha>/2. Only degrees <= N are
// represented; products landing above N are either an error or dropped.

#include "voaforms/exact.hpp"

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace voaforms {

class VoaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A product or operator landed above the cutoff in error mode.
class TruncationError : public VoaError {
public:
    using VoaError::VoaError;
};

using LatticeVector = std::vector<std::int64_t>;

class EvenLattice {
public:
    /// Throws VoaError unless gram is symmetric, positive definite and even.
    explicit EvenLattice(std::vector<std::vector<std::int64_t>> gram);

    std::size_t rank() const { return gram_.size(); }
    const std::vector<std::vector<std::int64_t>>& gram() const { return gram_; }
    std::int64_t inner(const LatticeVector& a, const LatticeVector& b) const;
    std::int64_t inner_basis(std::size_t i, const LatticeVector& b) const;
    std::int64_t norm(const LatticeVector& a) const { return inner(a, a); }
    const QMatrix& gram_inverse() const { return gram_inv_; }
    QMatrix gram_matrix() const;

    /// Lattice vectors with <a,a>/2 <= max_weight, lexicographic order.
    std::vector<LatticeVector> vectors_up_to_weight(int max_weight) const;

private:
    std::vector<std::vector<std::int64_t>> gram_;
    QMatrix gram_inv_;
};

/// Bimultiplicative sign cocycle with eps(g_i, g_j) = 1 for i <= j and
/// (-1)^<g_i,g_j> for i > j.
class Cocycle {
public:
    explicit Cocycle(const EvenLattice& lattice);
    int operator()(const LatticeVector& a, const LatticeVector& b) const;
    int on_basis(std::size_t i, std::size_t j) const { return table_[i][j]; }

private:
    std::vector<std::vector<int>> table_;
};

/// A creation mode gamma_index(-n); n >= 1, index is 0-based.
struct Mode {
    int n;
    int index;
    auto operator<=>(const Mode&) const = default;
};

using Modes = std::vector<Mode>;  // sorted ascending

struct FockMonomial {
    Modes modes;
    LatticeVector tail;

    static FockMonomial vacuum(std::size_t rank) { return {{}, LatticeVector(rank, 0)}; }
    int mode_weight() const;
    // Tail first, so monomials sharing a tail form contiguous blocks.
    std::strong_ordering operator<=>(const FockMonomial& o) const {
        if (auto c = tail <=> o.tail; c != 0) return c;
        return modes <=> o.modes;
    }
    bool operator==(const FockMonomial&) const = default;
};

class GradedVector {
public:
    using Terms = std::map<FockMonomial, Rational>;

    GradedVector() = default;
    explicit GradedVector(int cutoff) : cutoff_(cutoff) {}
    GradedVector(int cutoff, Terms terms);

    int cutoff() const { return cutoff_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    Rational coefficient(const FockMonomial& m) const;
    void add_term(const FockMonomial& m, const Rational& c);

    GradedVector& operator+=(const GradedVector& o);
    GradedVector& operator-=(const GradedVector& o);
    GradedVector& operator*=(const Rational& s);
    friend GradedVector operator+(GradedVector a, const GradedVector& b) { return a += b; }
    friend GradedVector operator-(GradedVector a, const GradedVector& b) { return a -= b; }
    friend GradedVector operator*(const Rational& s, GradedVector a) { return a *= s; }
    friend bool operator==(const GradedVector& a, const GradedVector& b) { return a.terms_ == b.terms_; }

private:
    int cutoff_ = 0;
    Terms terms_;
};

enum class TruncationMode { Error, Drop };

/// Sparse homogeneous vector in graded_basis(degree) coordinates.
struct SparseRow {
    int degree = 0;
    std::vector<std::pair<std::uint32_t, Rational>> entries;
};

class TruncatedVOA {
public:
    TruncatedVOA(EvenLattice lattice, int cutoff);

    const EvenLattice& lattice() const { return lattice_; }
    const Cocycle& cocycle() const { return cocycle_; }
    int cutoff() const { return cutoff_; }
    std::size_t rank() const { return lattice_.rank(); }

    const std::vector<FockMonomial>& graded_basis(int d) const;
    std::size_t dimension(int d) const { return graded_basis(d).size(); }
    int degree(const FockMonomial& m) const;
    /// Position of m inside graded_basis(degree(m)); throws when above cutoff.
    std::uint32_t position(const FockMonomial& m) const;

    GradedVector vacuum() const;
    GradedVector monomial(const FockMonomial& m, const Rational& c = 1) const;
    GradedVector exponential(const LatticeVector& alpha) const;  // e^alpha
    GradedVector virasoro_element() const;

    /// Homogeneous components keyed by degree.
    std::map<int, GradedVector> components(const GradedVector& v) const;
    int homogeneous_degree(const GradedVector& v) const;  // -1 for zero vector

    QVector coordinates(const GradedVector& v, int d) const;
    GradedVector from_coordinates(int d, const QVector& c) const;

    /// a_k b.
    GradedVector vertex_product(const GradedVector& a, int k, const GradedVector& b,
                                TruncationMode mode = TruncationMode::Error) const;
    /// Product of basis monomials (memoized); no entries when the product vanishes.
    const SparseRow& monomial_product(std::uint32_t a_deg, std::uint32_t a_pos, int k, std::uint32_t b_deg,
                                      std::uint32_t b_pos) const;
    /// Uncached evaluation of the same product (reference path).
    SparseRow compute_monomial_product(const FockMonomial& a, int k, const FockMonomial& b) const;

    Rational bilinear_form(const GradedVector& u, const GradedVector& v) const;
    Rational monomial_form(const FockMonomial& a, const FockMonomial& b) const;
    /// Gram matrix of the form on graded_basis(d).
    const QMatrix& form_matrix(int d) const;

    /// L(n) v = omega_{n+1} v.
    GradedVector L_apply(int n, const GradedVector& v, TruncationMode mode = TruncationMode::Error) const;
    /// v_{-n-1} vac, i.e. L(-1)^n v / n!.
    GradedVector divided_translate(const GradedVector& v, int n) const;
    bool is_quasi_primary(const GradedVector& v) const;

    /// Both sides of <Y(a,z)u, v> = <u, Y(e^{zL(1)}(-z^{-2})^{L(0)}a, z^{-1})v>
    /// as Laurent coefficient maps (power of z -> value).
    struct InvarianceSides {
        std::map<int, Rational> lhs;
        std::map<int, Rational> rhs;
    };
    InvarianceSides invariance_sides(const GradedVector& a, const GradedVector& u, const GradedVector& v) const;
    bool invariance_identity_check(const GradedVector& a, const GradedVector& u, const GradedVector& v) const;

    std::string to_literal(const GradedVector& v) const;
    /// Terms above the cutoff raise TruncationError, or are skipped in Drop mode.
    GradedVector parse_literal(std::string_view text, TruncationMode mode = TruncationMode::Error) const;

private:
    using Poly = std::map<Modes, Rational>;

    void check_degree(int d) const;
    const Poly& schur(const LatticeVector& alpha, int d) const;
    Poly creation_part(const std::vector<Mode>& fields, const LatticeVector& alpha, int d) const;
    Rational fock_form(const Modes& p, const Modes& q) const;

    EvenLattice lattice_;
    Cocycle cocycle_;
    int cutoff_;
    std::vector<std::vector<FockMonomial>> bases_;
    std::map<FockMonomial, std::pair<int, std::uint32_t>> index_;
    GradedVector omega_;

    mutable std::shared_mutex schur_mutex_;
    mutable std::map<std::pair<LatticeVector, int>, Poly> schur_cache_;
    mutable std::shared_mutex product_mutex_;
    mutable std::unordered_map<std::uint64_t, std::unique_ptr<SparseRow>> product_cache_;
    mutable std::once_flag form_once_;
    mutable std::vector<QMatrix> form_matrices_;
};

/// vac_k a = delta_{k,-1} a, and a_k vac = 0 (k >= 0), a (k = -1),
/// L(-1)^{-k-1} a / (-k-1)! (k <= -2), over every graded basis monomial a and
/// every k whose result degree is at most the cutoff, plus two k above that range.
struct VacuumIdentityReport {
    bool pass = true;
    std::size_t checked = 0;
    struct Witness {
        int degree;
        std::uint32_t position;
        int k;
        bool vacuum_left;  // true for vac_k a, false for a_k vac
    };
    std::optional<Witness> witness;
};

VacuumIdentityReport vacuum_identity_check(const TruncatedVOA& v);

}  // namespace voaforms
