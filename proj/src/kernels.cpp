#include "voaforms/kernels.hpp"

#include <omp.h>

namespace voaforms {

SparseVec to_sparse(const QVector& v) {
    SparseVec out;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (sgn(v[i]) != 0) out.emplace_back(static_cast<std::uint32_t>(i), v[i]);
    return out;
}

std::vector<SparseVec> sparse_basis(const ZLattice& l) {
    std::vector<SparseVec> out;
    out.reserve(l.rank());
    for (std::size_t i = 0; i < l.rank(); ++i) out.push_back(to_sparse(l.basis_row(i)));
    return out;
}

namespace {

QVector product_pair(const TruncatedVOA& v, int p, const SparseVec& u, int k, int q, const SparseVec& w,
                     std::size_t dim) {
    QVector out(dim);
    Rational c;
    for (const auto& [i, ui] : u) {
        for (const auto& [j, wj] : w) {
            const SparseRow& row = v.monomial_product(static_cast<std::uint32_t>(p), i, k,
                                                      static_cast<std::uint32_t>(q), j);
            if (row.entries.empty()) continue;
            c = ui * wj;
            for (const auto& [pos, val] : row.entries) out[pos] += c * val;
        }
    }
    return out;
}

}  // namespace

std::vector<QVector> product_block(const TruncatedVOA& v, int p, const std::vector<SparseVec>& a, int k, int q,
                                   const std::vector<SparseVec>& b, Exec exec) {
    const int r = p + q - k - 1;
    const std::size_t dim = v.dimension(r);
    const std::size_t nb = b.size();
    const std::int64_t total = static_cast<std::int64_t>(a.size() * nb);
    std::vector<QVector> out(static_cast<std::size_t>(total));
#pragma omp parallel for schedule(dynamic, 4) if (exec == Exec::Parallel)
    for (std::int64_t t = 0; t < total; ++t) {
        const auto x = static_cast<std::size_t>(t) / nb;
        const auto y = static_cast<std::size_t>(t) % nb;
        out[static_cast<std::size_t>(t)] = product_pair(v, p, a[x], k, q, b[y], dim);
    }
    return out;
}

std::vector<QVector> product_block_reference(const TruncatedVOA& v, int p, const std::vector<SparseVec>& a, int k,
                                             int q, const std::vector<SparseVec>& b) {
    const int r = p + q - k - 1;
    std::vector<QVector> out;
    for (const auto& u : a) {
        QVector du(v.dimension(p));
        for (const auto& [i, x] : u) du[i] = x;
        const GradedVector gu = v.from_coordinates(p, du);
        for (const auto& w : b) {
            QVector dw(v.dimension(q));
            for (const auto& [j, x] : w) dw[j] = x;
            const GradedVector prod = v.vertex_product(gu, k, v.from_coordinates(q, dw));
            out.push_back(v.coordinates(prod, r));
        }
    }
    return out;
}

QMatrix gram_block(const QMatrix& form, const std::vector<SparseVec>& rows, Exec exec) {
    const std::size_t n = rows.size();
    const std::size_t dim = form.cols();
    // sparse rows of the form
    std::vector<SparseVec> f(form.rows());
    for (std::size_t i = 0; i < form.rows(); ++i) f[i] = to_sparse(form.row(i));
    QMatrix g(n, n);
#pragma omp parallel for schedule(dynamic, 1) if (exec == Exec::Parallel)
    for (std::int64_t ai = 0; ai < static_cast<std::int64_t>(n); ++ai) {
        const auto a = static_cast<std::size_t>(ai);
        QVector fa(dim);
        for (const auto& [i, x] : rows[a])
            for (const auto& [j, y] : f[i]) fa[j] += x * y;
        for (std::size_t b = a; b < n; ++b) {
            Rational acc = 0;
            for (const auto& [j, y] : rows[b])
                if (sgn(fa[j]) != 0) acc += fa[j] * y;
            g(a, b) = acc;
        }
    }
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < a; ++b) g(a, b) = g(b, a);
    return g;
}

QMatrix gram_block_reference(const QMatrix& form, const std::vector<SparseVec>& rows) {
    const std::size_t n = rows.size();
    QMatrix dense(n, form.rows());
    for (std::size_t a = 0; a < n; ++a)
        for (const auto& [i, x] : rows[a]) dense(a, i) = x;
    return dense * form * dense.transpose();
}

void set_thread_limit(int threads) {
    if (threads > 0) omp_set_num_threads(threads);
}

}  // namespace voaforms
