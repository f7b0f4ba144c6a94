#include "lattice_suite.hpp"

#include "voaforms/exact.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace voaforms;

namespace {

Rational q(const char* s) { return parse_rational(s); }

ZLattice lat(const std::vector<QVector>& rows, std::size_t dim) { return ZLattice::from_rows(rows, dim); }

QVector v2(long a, long b) { return {Rational(a), Rational(b)}; }

}  // namespace

TEST_SUITE("exact") {

TEST_CASE("rationals parse to canonical form and print back") {
    CHECK(format_rational(q("6/4")) == "3/2");
    CHECK(format_rational(q("-0/5")) == "0");
    CHECK(format_rational(q("-10/4")) == "-5/2");
    CHECK_THROWS_AS(parse_rational("10/-4"), ExactError);
    CHECK(format_rational(q("7")) == "7");
    CHECK(q("3/9").get_den() == 3);
    CHECK_THROWS_AS(parse_rational("1/0"), ExactError);
    CHECK_THROWS_AS(parse_rational("x"), ExactError);
    CHECK_THROWS_AS(parse_rational(""), ExactError);
}

TEST_CASE("matrix inverse, determinant and rank") {
    QMatrix g(2, 2, {2, 1, 1, 2});
    CHECK(determinant(g) == 3);
    const QMatrix inv = inverse(g);
    CHECK(inv * g == QMatrix::identity(2));
    CHECK(inv(0, 0) == q("2/3"));
    CHECK(rank(QMatrix(2, 2, {1, 2, 2, 4})) == 1);
    CHECK_THROWS_AS(inverse(QMatrix(2, 2, {1, 2, 2, 4})), ExactError);
}

TEST_CASE("hnf examples") {
    CHECK(hnf(QMatrix::identity(3)) == QMatrix::identity(3));
    const QMatrix h = hnf(QMatrix(3, 2, {2, 0, 0, 2, 1, 1}));
    CHECK(h.rows() == 2);
    const ZLattice l = ZLattice::from_generators(h);
    CHECK(l.contains(v2(1, 1)));
    CHECK(l.contains(v2(2, 0)));
    CHECK_FALSE(l.contains(v2(1, 0)));
    // rank-1 group spanned by (1/2, 1/3) is generated by itself
    const QMatrix r = hnf(QMatrix(1, 2, {q("1/2"), q("1/3")}));
    CHECK(r.rows() == 1);
    CHECK(r.row(0) == QVector{q("1/2"), q("1/3")});
}

TEST_CASE("hnf does not depend on generator order") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<QVector> rows;
        for (int i = 0; i < 4; ++i) {
            QVector r;
            for (int j = 0; j < 3; ++j) r.push_back(oracle::frac(static_cast<long>(rng() % 9) - 4, 1 + static_cast<long>(rng() % 2)));
            rows.push_back(r);
        }
        const ZLattice a = lat(rows, 3);
        std::reverse(rows.begin(), rows.end());
        std::swap(rows[0], rows[2]);
        const ZLattice b = lat(rows, 3);
        CHECK(a == b);
        CHECK(a.basis() == b.basis());
        CHECK(ZLattice::from_generators(a.basis()) == a);
    }
}

TEST_CASE("lattice sum and intersection examples") {
    const ZLattice a = lat({v2(2, 0), v2(0, 2)}, 2);
    CHECK(lattice_sum(a, a) == a);
    const ZLattice s = lattice_sum(a, lat({v2(1, 1)}, 2));
    CHECK(quotient_exponent(ZLattice::standard(2), s) == 2);
    CHECK(lattice_sum(lat({v2(1, 0)}, 2), lat({v2(0, 1)}, 2)) == ZLattice::standard(2));

    const ZLattice x = lat({v2(2, 0), v2(0, 1)}, 2);
    const ZLattice y = lat({v2(1, 0), v2(0, 3)}, 2);
    CHECK(lattice_intersect(x, y) == lat({v2(2, 0), v2(0, 3)}, 2));
    CHECK(lattice_intersect(x, x) == x);
    CHECK(lattice_intersect(ZLattice::standard(2), ZLattice::standard(2).scaled(2)) == ZLattice::standard(2).scaled(2));
    CHECK_THROWS_AS(lattice_sum(ZLattice::standard(2), ZLattice::standard(3)), ExactError);
}

TEST_CASE("quotient exponent examples") {
    const ZLattice z2 = ZLattice::standard(2);
    CHECK(quotient_exponent(z2, z2) == 1);
    const auto inv = quotient_invariants(z2, lat({v2(2, 0), v2(0, 6)}, 2));
    CHECK(inv.exponent == 6);
    CHECK(inv.index == 12);
    CHECK(inv.divisors == std::vector<Integer>{2, 6});
    CHECK(quotient_exponent(z2, lat({v2(1, 1), v2(1, -1)}, 2)) == 2);
    CHECK_THROWS_AS(quotient_exponent(lat({v2(2, 0), v2(0, 2)}, 2), z2), ExactError);
    CHECK_THROWS_AS(quotient_exponent(z2, lat({v2(1, 0)}, 2)), ExactError);
}

TEST_CASE("dual lattice examples") {
    const ZLattice d1 = dual_lattice(ZLattice::standard(1), QMatrix(1, 1, {2}));
    CHECK(d1 == ZLattice::standard(1).scaled(Rational(1, 2)));
    CHECK(dual_lattice(ZLattice::standard(3), QMatrix::identity(3)) == ZLattice::standard(3));
    const QMatrix a2(2, 2, {2, 1, 1, 2});
    const ZLattice d2 = dual_lattice(ZLattice::standard(2), a2);
    CHECK(quotient_invariants(d2, ZLattice::standard(2)).index == 3);
    CHECK(dual_lattice(d2, a2) == ZLattice::standard(2));
    CHECK(dual_lattice(ZLattice(2), a2).is_zero());
}

TEST_CASE("membership examples") {
    CHECK(membership(v2(1, 1), lat({v2(2, 0), v2(0, 2), v2(1, 1)}, 2)));
    CHECK_FALSE(membership(v2(1, 0), ZLattice::standard(2).scaled(2)));
    CHECK(membership(v2(3, 3), lat({v2(1, 1), v2(1, -1)}, 2)));
    const ZLattice l = lat({v2(1, 1), v2(1, -1)}, 2);
    CHECK(l.coordinates(v2(3, 3)) == IntVector{3, 0});
    CHECK_FALSE(l.coordinates(v2(1, 0)).has_value());
}

TEST_CASE("smith invariants and integer kernels") {
    CHECK(smith_invariants({{2, 4}, {6, 8}}, 2) == std::vector<Integer>{2, 4});
    const IntRows k = integer_left_kernel({{1, 2}, {2, 4}, {0, 1}}, 2);
    REQUIRE(k.size() == 1);
    CHECK((k[0][0] * 1 + k[0][1] * 2 == 0));
    CHECK((k[0][0] * 2 + k[0][1] * 4 + k[0][2] == 0));
}

TEST_CASE("sum, intersection and exponent agree with the torus oracle") {
    const auto r = run_lattice_oracle_suite(20240917, 600);
    CHECK(r.cases >= 500);
    CHECK(r.mismatches == 0);
}

}  // TEST_SUITE
