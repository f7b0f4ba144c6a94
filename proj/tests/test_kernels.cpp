#include "voaforms/kernels.hpp"

#include <doctest.h>

#include <random>

using namespace voaforms;

namespace {

using Gram = std::vector<std::vector<std::int64_t>>;

// random integer combinations of basis vectors, a few with rational entries
std::vector<SparseVec> random_rows(std::mt19937_64& rng, std::size_t dim, std::size_t count) {
    std::vector<SparseVec> out;
    for (std::size_t r = 0; r < count; ++r) {
        QVector x(dim);
        for (auto& c : x)
            if (rng() % 3 == 0) c = Rational(static_cast<long>(rng() % 7) - 3, 1 + static_cast<unsigned long>(rng() % 3));
        for (auto& c : x) c.canonicalize();
        out.push_back(to_sparse(x));
    }
    return out;
}

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("sparse conversion") {
    const SparseVec s = to_sparse(QVector{0, Rational(1, 2), 0, 3});
    REQUIRE(s.size() == 2);
    CHECK(s[0].first == 1);
    CHECK(s[0].second == Rational(1, 2));
    CHECK(s[1].first == 3);
    CHECK(to_sparse(QVector(4)).empty());
    const auto rows = sparse_basis(ZLattice::standard(3));
    CHECK(rows.size() == 3);
}

TEST_CASE("product blocks: parallel, serial and reference agree") {
    const TruncatedVOA v(EvenLattice(Gram{{2, 1}, {1, 2}}), 4);
    std::mt19937_64 rng(101);
    for (int t = 0; t < 40; ++t) {
        const int p = static_cast<int>(rng() % 4);
        const int q = static_cast<int>(rng() % 4);
        const int r = static_cast<int>(rng() % 5);
        const int k = p + q - 1 - r;
        const auto a = random_rows(rng, v.dimension(p), 1 + rng() % 4);
        const auto b = random_rows(rng, v.dimension(q), 1 + rng() % 4);
        const auto par = product_block(v, p, a, k, q, b, Exec::Parallel);
        const auto ser = product_block(v, p, a, k, q, b, Exec::Serial);
        const auto ref = product_block_reference(v, p, a, k, q, b);
        REQUIRE(par.size() == a.size() * b.size());
        CHECK(par == ser);
        CHECK(par == ref);
        for (const auto& x : par) CHECK(x.size() == v.dimension(r));
    }
}

TEST_CASE("gram blocks: parallel, serial and reference agree") {
    const TruncatedVOA v(EvenLattice(Gram{{2}}), 5);
    std::mt19937_64 rng(202);
    for (int s = 0; s <= 5; ++s) {
        const QMatrix& form = v.form_matrix(s);
        const auto rows = random_rows(rng, v.dimension(s), 1 + rng() % 6);
        const QMatrix par = gram_block(form, rows, Exec::Parallel);
        CHECK(par == gram_block(form, rows, Exec::Serial));
        CHECK(par == gram_block_reference(form, rows));
        CHECK(par.is_symmetric());
    }
}

TEST_CASE("thread limit does not change results") {
    const TruncatedVOA v(EvenLattice(Gram{{2, 0}, {0, 2}}), 3);
    std::mt19937_64 rng(303);
    const auto a = random_rows(rng, v.dimension(2), 5);
    const auto b = random_rows(rng, v.dimension(1), 5);
    const auto wide = product_block(v, 2, a, 0, 1, b);
    set_thread_limit(1);
    const auto narrow = product_block(v, 2, a, 0, 1, b);
    set_thread_limit(0);
    CHECK(wide == narrow);
}

}  // TEST_SUITE
