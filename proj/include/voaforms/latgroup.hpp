#pragma once

// Elementary abelian 2-groups of commuting integral involutions acting on
// lattices: eigenlattices, total eigenlattices and the 2^r exponent bound.
//
// Matrices act on column coordinate vectors; lattice rows x are mapped to
// (g x^T)^T.

#include "voaforms/exact.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace voaforms {

using IntMatrix = std::vector<std::vector<std::int64_t>>;

QMatrix to_qmatrix(const IntMatrix& m);
QVector apply_matrix(const QMatrix& g, const QVector& v);
ZLattice apply_to_lattice(const QMatrix& g, const ZLattice& l);

class Character {
public:
    Character() = default;
    explicit Character(std::vector<int> signs);

    static Character trivial(std::size_t r);
    /// Character whose sign on generator i is -1 iff bit i of mask is set.
    static Character from_mask(std::size_t r, std::uint64_t mask);

    const std::vector<int>& signs() const { return signs_; }
    std::size_t rank() const { return signs_.size(); }
    /// Value on the product of the generators selected by subset.
    int value_on(std::uint64_t subset) const;

private:
    std::vector<int> signs_;
};

class SignedAction {
public:
    SignedAction(std::size_t ambient_dim, std::vector<QMatrix> generators);
    static SignedAction from_int(std::size_t ambient_dim, const std::vector<IntMatrix>& generators);

    std::size_t ambient_dim() const { return dim_; }
    std::size_t rank() const { return gens_.size(); }
    const std::vector<QMatrix>& generators() const { return gens_; }

    /// Product of the generators selected by the bits of subset.
    QMatrix element(std::uint64_t subset) const;
    std::size_t order() const { return std::size_t{1} << gens_.size(); }

    bool preserves(const ZLattice& l) const;

private:
    std::size_t dim_;
    std::vector<QMatrix> gens_;
};

ZLattice eigenlattice(const ZLattice& l, const SignedAction& action, const Character& lambda);

/// {x in L | g_i x = signs_i x for all i}; the g_i need not form a group.
ZLattice joint_eigenlattice(const ZLattice& l, const std::vector<QMatrix>& gs, const std::vector<int>& signs);

struct TotalEigenlattice {
    ZLattice total;
    std::vector<ZLattice> pieces;  // indexed by character mask
};

TotalEigenlattice total_eigenlattice_pieces(const ZLattice& l, const SignedAction& action);
ZLattice total_eigenlattice(const ZLattice& l, const SignedAction& action);

struct TelExponent {
    bool bound_holds;  // 2^r L <= Tel(L)
    Integer exponent;  // exponent of L / Tel(L)
};

TelExponent tel_exponent_check(const ZLattice& l, const SignedAction& action);

QVector idempotent_project(const QVector& v, const SignedAction& action, const Character& lambda);

/// Closes a set of invertible matrices under multiplication; throws when the
/// group has more than max_order elements.
std::vector<QMatrix> generate_matrix_group(const std::vector<QMatrix>& gens, std::size_t max_order = 4096);

struct InvariantIntersection {
    ZLattice lattice;
    Integer exponent;
};

/// Intersection of g L over the group generated by gs.
InvariantIntersection invariant_intersection(const ZLattice& l, const std::vector<QMatrix>& gs,
                                             std::size_t max_order = 4096);

}  // namespace voaforms
