#include "oracles.hpp"

#include "voaforms/dihedral.hpp"
#include "voaforms/io.hpp"

#include <doctest.h>

#include <random>

using namespace voaforms;

namespace {

QMatrix m3(std::initializer_list<Rational> e) { return QMatrix(3, 3, std::vector<Rational>(e)); }

Rational r(long p, long q) { return oracle::frac(p, q); }

// Tr(ad x_i ad x_j) = sum_{k,l} c_{ik}^l c_{jl}^k, straight from the constants
QMatrix trace_oracle(const std::vector<std::vector<QVector>>& c) {
    const std::size_t n = c.size();
    QMatrix out(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Rational t = 0;
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t l = 0; l < n; ++l) t += c[i][k][l] * c[j][l][k];
            out(i, j) = t;
        }
    return out;
}

FiniteAlgebra random_algebra(std::mt19937_64& rng, std::size_t n) {
    std::vector<std::vector<QVector>> c(n, std::vector<QVector>(n, QVector(n)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                c[i][j][k] = r(static_cast<long>(rng() % 7) - 3, 1 + static_cast<long>(rng() % 4));
                c[j][i][k] = c[i][j][k];
            }
    QMatrix g(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) g(i, j) = g(j, i) = Rational(static_cast<long>(rng() % 5) - 2);
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i) labels.push_back("x" + std::to_string(i));
    return FiniteAlgebra(labels, c, g);
}

}  // namespace

TEST_SUITE("dihedral") {

TEST_CASE("2A structure constants") {
    const FiniteAlgebra a = dihedral_2a();
    REQUIRE(a.dim() == 3);
    CHECK(a.labels() == std::vector<std::string>{"a", "b", "c"});
    for (std::size_t p = 0; p < 3; ++p) {
        CHECK(a.product(a.basis_vector(p), a.basis_vector(p)) == a.basis_vector(p));
        for (std::size_t q = 0; q < 3; ++q) {
            if (q == p) continue;
            const std::size_t s = 3 - p - q;
            QVector want(3);
            want[p] = r(1, 8);
            want[q] = r(1, 8);
            want[s] = r(-1, 8);
            CHECK(a.product(a.basis_vector(p), a.basis_vector(q)) == want);
        }
    }
    CHECK(a.gram() == m3({1, r(1, 8), r(1, 8), r(1, 8), 1, r(1, 8), r(1, 8), r(1, 8), 1}));
}

TEST_CASE("2A adjoint matrices and products") {
    const FiniteAlgebra alg = dihedral_2a();
    const QMatrix A = ad_matrix(alg, alg.basis_vector(0));
    const QMatrix B = ad_matrix(alg, alg.basis_vector(1));
    const QMatrix C = ad_matrix(alg, alg.basis_vector(2));
    CHECK(A == m3({1, r(1, 8), r(1, 8), 0, r(1, 8), r(-1, 8), 0, r(-1, 8), r(1, 8)}));
    CHECK(B == m3({r(1, 8), 0, r(-1, 8), r(1, 8), 1, r(1, 8), r(-1, 8), 0, r(1, 8)}));
    CHECK(C == m3({r(1, 8), r(-1, 8), 0, r(-1, 8), r(1, 8), 0, r(1, 8), r(1, 8), 1}));
    CHECK(A * A == m3({1, r(1, 8), r(1, 8), 0, r(1, 32), r(-1, 32), 0, r(-1, 32), r(1, 32)}));
    CHECK(A * B == m3({r(1, 8), r(1, 8), r(-3, 32), r(1, 32), r(1, 8), 0, r(-1, 32), r(-1, 8), 0}));
    // (1,3) entry: row (1, 1/8, 1/8) of A against column (0, 0, 1) of C gives 1/8, not 0
    CHECK(A * C == m3({r(1, 8), r(-3, 32), r(1, 8), r(-1, 32), 0, r(-1, 8), r(1, 32), 0, r(1, 8)}));
}

TEST_CASE("2A trace form") {
    const FiniteAlgebra a = dihedral_2a();
    const QMatrix k = killing_form(a);
    CHECK(k == m3({r(17, 16), r(1, 4), r(1, 4), r(1, 4), r(17, 16), r(1, 4), r(1, 4), r(1, 4), r(17, 16)}));
    CHECK(k == trace_oracle(a.constants()));
    // S3 permutes a, b, c; the trace form is invariant
    const std::vector<std::vector<std::size_t>> perms{{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    for (const auto& p : perms)
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) CHECK(k(p[i], p[j]) == k(i, j));

    CHECK_FALSE(proportionality_check(k, a.gram()).has_value());
    const auto kappa = is_associative_form(a, k);
    CHECK_FALSE(kappa.associative);
    REQUIRE(kappa.witness);
    CHECK(kappa.witness->lhs != kappa.witness->rhs);
    CHECK(is_associative_form(a, a.gram()).associative);
}

TEST_CASE("associativity witness is the first failing triple") {
    const FiniteAlgebra a = dihedral_2a();
    const QMatrix k = killing_form(a);
    const auto res = is_associative_form(a, k);
    REQUIRE(res.witness);
    const auto& w = *res.witness;
    auto value = [&](std::size_t i, std::size_t j, std::size_t l) {
        const QVector ij = a.product(a.basis_vector(i), a.basis_vector(j));
        const QVector jl = a.product(a.basis_vector(j), a.basis_vector(l));
        Rational lhs = 0, rhs = 0;
        for (std::size_t x = 0; x < 3; ++x) {
            lhs += ij[x] * k(x, l);
            rhs += k(i, x) * jl[x];
        }
        return std::make_pair(lhs, rhs);
    };
    bool found = false;
    for (std::size_t i = 0; i < 3 && !found; ++i)
        for (std::size_t j = 0; j < 3 && !found; ++j)
            for (std::size_t l = 0; l < 3 && !found; ++l) {
                const auto [lhs, rhs] = value(i, j, l);
                if (lhs == rhs) continue;
                found = true;
                CHECK(w.i == i);
                CHECK(w.j == j);
                CHECK(w.k == l);
                CHECK(w.lhs == lhs);
                CHECK(w.rhs == rhs);
            }
    CHECK(found);
}

TEST_CASE("small and degenerate algebras") {
    const FiniteAlgebra one({"e"}, {{QVector{1}}}, QMatrix(1, 1, {1}));
    CHECK(ad_matrix(one, one.basis_vector(0)) == QMatrix(1, 1, {1}));
    CHECK(killing_form(one) == QMatrix(1, 1, {1}));
    CHECK(is_associative_form(one, one.gram()).associative);
    CHECK(proportionality_check(killing_form(one), one.gram()) == Rational(1));

    const FiniteAlgebra a = dihedral_2a();
    CHECK(is_associative_form(a, QMatrix(3, 3)).associative);
    CHECK(proportionality_check(Rational(2) * a.gram(), a.gram()) == Rational(2));
    CHECK(proportionality_check(QMatrix(3, 3), a.gram()) == Rational(0));
    CHECK_FALSE(proportionality_check(a.gram(), QMatrix(3, 3)).has_value());
    CHECK(proportionality_check(QMatrix(3, 3), QMatrix(3, 3)) == Rational(0));
}

TEST_CASE("invalid algebras") {
    std::vector<std::vector<QVector>> c{{QVector{1, 0}, QVector{1, 0}}, {QVector{0, 1}, QVector{0, 1}}};
    CHECK_THROWS_AS(FiniteAlgebra({"x", "y"}, c, QMatrix::identity(2)), ExactError);
    c[1][0] = c[0][1];
    CHECK_NOTHROW(FiniteAlgebra({"x", "y"}, c, QMatrix::identity(2)));
    CHECK_THROWS_AS(FiniteAlgebra({"x", "y"}, c, QMatrix(2, 2, {1, 1, 0, 1})), ExactError);
    CHECK_THROWS_AS(FiniteAlgebra({"x"}, c, QMatrix::identity(2)), ExactError);
}

TEST_CASE("property: trace form against the constant-sum oracle") {
    std::mt19937_64 rng(8);
    for (int t = 0; t < 60; ++t) {
        const std::size_t n = 1 + rng() % 4;
        const FiniteAlgebra a = random_algebra(rng, n);
        const QMatrix k = killing_form(a);
        CHECK(k == trace_oracle(a.constants()));
        CHECK(k.is_symmetric());
        // ad is linear in x
        QVector x(n), y(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = Rational(static_cast<long>(rng() % 5) - 2);
            y[i] = Rational(static_cast<long>(rng() % 5) - 2);
        }
        QVector sum(n);
        for (std::size_t i = 0; i < n; ++i) sum[i] = x[i] + y[i];
        CHECK(ad_matrix(a, sum) == ad_matrix(a, x) + ad_matrix(a, y));
        CHECK(proportionality_check(Rational(3) * k, k) == (k == QMatrix(n, n) ? Rational(0) : Rational(3)));
    }
}

TEST_CASE("algebra JSON round-trip") {
    const FiniteAlgebra a = dihedral_2a();
    const FiniteAlgebra b = algebra_from_json(algebra_to_json(a));
    CHECK(b.labels() == a.labels());
    CHECK(b.constants() == a.constants());
    CHECK(b.gram() == a.gram());
    Json bad = algebra_to_json(a);
    bad["gram"][0][1] = "1/0";
    CHECK_THROWS_AS(algebra_from_json(bad), InputError);
    Json asym = algebra_to_json(a);
    asym["gram"][0][1] = "1/2";
    CHECK_THROWS_AS(algebra_from_json(asym), InputError);
    CHECK_THROWS_AS(algebra_from_json(Json{{"dim", 0}}), InputError);
}

}  // TEST_SUITE
