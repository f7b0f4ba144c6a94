#pragma once

// Hot loops of saturation and Gram assembly. Each kernel has an OpenMP path
// and a plain serial reference; both must return bit-identical results.

#include "voaforms/exact.hpp"
#include "voaforms/voa.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace voaforms {

enum class Exec { Serial, Parallel };

using SparseVec = std::vector<std::pair<std::uint32_t, Rational>>;

SparseVec to_sparse(const QVector& v);
std::vector<SparseVec> sparse_basis(const ZLattice& l);

/// u_k v for all u in a (degree p) and v in b (degree q), row-major in (u, v),
/// as dense coordinate vectors on graded_basis(p + q - k - 1).
std::vector<QVector> product_block(const TruncatedVOA& v, int p, const std::vector<SparseVec>& a, int k, int q,
                                   const std::vector<SparseVec>& b, Exec exec = Exec::Parallel);

/// Same products through GradedVector::vertex_product (reference path).
std::vector<QVector> product_block_reference(const TruncatedVOA& v, int p, const std::vector<SparseVec>& a, int k,
                                             int q, const std::vector<SparseVec>& b);

/// rows * form * rows^T.
QMatrix gram_block(const QMatrix& form, const std::vector<SparseVec>& rows, Exec exec = Exec::Parallel);
QMatrix gram_block_reference(const QMatrix& form, const std::vector<SparseVec>& rows);

/// Caps the OpenMP team size; 0 leaves the runtime default.
void set_thread_limit(int threads);

}  // namespace voaforms
