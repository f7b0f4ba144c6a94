#include "oracles.hpp"
#include "voa_suites.hpp"

#include "voaforms/voa.hpp"

#include <doctest.h>

#include <random>

using namespace voaforms;

namespace {

using Gram = std::vector<std::vector<std::int64_t>>;

TruncatedVOA a1(int n) { return TruncatedVOA(EvenLattice(Gram{{2}}), n); }
TruncatedVOA a2(int n) { return TruncatedVOA(EvenLattice(Gram{{2, 1}, {1, 2}}), n); }

FockMonomial mono(Modes modes, LatticeVector tail) { return {std::move(modes), std::move(tail)}; }

}  // namespace

TEST_SUITE("voa") {

TEST_CASE("even lattice validation") {
    CHECK_THROWS_WITH_AS(EvenLattice(Gram{{3}}), "lattice not even", VoaError);
    CHECK_THROWS_AS(EvenLattice(Gram{{2, 1}, {0, 2}}), VoaError);
    CHECK_THROWS_AS(EvenLattice(Gram{{2, 3}, {3, 2}}), VoaError);
    CHECK_THROWS_AS(EvenLattice(Gram{{0}}), VoaError);
    CHECK_NOTHROW(EvenLattice(Gram{{2, -1}, {-1, 4}}));
}

TEST_CASE("graded dimensions match the theta-times-partition oracle") {
    const std::vector<std::pair<Gram, int>> cases{
        {{{2}}, 7}, {{{4}}, 6}, {{{2, 1}, {1, 2}}, 4}, {{{2, 0}, {0, 2}}, 4}, {{{2, -1}, {-1, 4}}, 4}, {{{4, 1}, {1, 2}}, 3}};
    for (const auto& [g, n] : cases) {
        const TruncatedVOA v(EvenLattice(g), n);
        const auto want = oracle::graded_dimensions(g, n, 2 * n + 2);
        for (int d = 0; d <= n; ++d) CHECK(static_cast<std::int64_t>(v.dimension(d)) == want[static_cast<std::size_t>(d)]);
    }
    const auto v = a1(6);
    std::vector<std::size_t> dims;
    for (int d = 0; d <= 6; ++d) dims.push_back(v.dimension(d));
    CHECK(dims == std::vector<std::size_t>{1, 3, 4, 7, 13, 19, 29});
    CHECK_THROWS_AS(v.graded_basis(7), VoaError);
}

TEST_CASE("low-degree bases of A1") {
    const auto v = a1(2);
    REQUIRE(v.graded_basis(0).size() == 1);
    CHECK(v.graded_basis(0)[0] == FockMonomial::vacuum(1));
    const auto& b1 = v.graded_basis(1);
    CHECK(b1.size() == 3);
    CHECK(std::count(b1.begin(), b1.end(), mono({{1, 0}}, {0})) == 1);
    CHECK(std::count(b1.begin(), b1.end(), mono({}, {1})) == 1);
    CHECK(std::count(b1.begin(), b1.end(), mono({}, {-1})) == 1);
    // degree 2: gamma(-2), gamma(-1)^2, gamma(-1) e^{+-gamma}
    const auto& b2 = v.graded_basis(2);
    CHECK(b2.size() == 4);
    CHECK(std::count(b2.begin(), b2.end(), mono({{1, 0}}, {1})) == 1);
}

TEST_CASE("cocycle is bimultiplicative with the commutator sign") {
    const EvenLattice l(Gram{{2, 1, 0}, {1, 2, 1}, {0, 1, 4}});
    const Cocycle eps(l);
    std::mt19937_64 rng(3);
    auto rv = [&] {
        LatticeVector a(3);
        for (auto& x : a) x = static_cast<std::int64_t>(rng() % 7) - 3;
        return a;
    };
    for (int t = 0; t < 200; ++t) {
        const auto a = rv(), b = rv(), c = rv();
        LatticeVector ab(3);
        for (int i = 0; i < 3; ++i) ab[i] = a[i] + b[i];
        CHECK(eps(ab, c) == eps(a, c) * eps(b, c));
        CHECK(eps(c, ab) == eps(c, a) * eps(c, b));
        CHECK(eps(a, b) * eps(b, a) == (l.inner(a, b) % 2 == 0 ? 1 : -1));
    }
}

TEST_CASE("exponential products on A1") {
    const auto v = a1(3);
    const auto ep = v.exponential({1}), em = v.exponential({-1});
    const int s = v.cocycle()({1}, {-1});
    CHECK(v.vertex_product(ep, 1, em) == Rational(s) * v.vacuum());
    CHECK(v.vertex_product(ep, 0, em) == v.monomial(mono({{1, 0}}, {0}), s));
    CHECK(v.vertex_product(ep, 2, em).is_zero());
    // gamma(-1)_0 acts on e^{gamma} by <gamma, gamma>
    const auto h = v.monomial(mono({{1, 0}}, {0}));
    CHECK(v.vertex_product(h, 0, ep) == Rational(2) * ep);
    CHECK(v.vertex_product(h, -1, v.vacuum()) == h);
}

TEST_CASE("truncation modes") {
    const auto v = a1(2);
    const auto h = v.monomial(mono({{1, 0}}, {0}));
    CHECK_THROWS_AS(v.vertex_product(h, -2, h), TruncationError);
    CHECK(v.vertex_product(h, -2, h, TruncationMode::Drop).is_zero());
}

TEST_CASE("bilinear form values") {
    const auto v = a1(4);
    CHECK(v.bilinear_form(v.vacuum(), v.vacuum()) == 1);
    const auto h = v.monomial(mono({{1, 0}}, {0}));
    // invariance with (-z^-2)^{L(0)} forces the minus sign (see the README)
    CHECK(v.bilinear_form(h, h) == -2);
    const Rational pm = v.bilinear_form(v.exponential({1}), v.exponential({-1}));
    CHECK((pm == 1 || pm == -1));
    CHECK(v.bilinear_form(v.exponential({1}), v.exponential({1})) == 0);
    CHECK(v.bilinear_form(h, v.vacuum()) == 0);
    for (int d = 0; d <= 4; ++d) CHECK(v.form_matrix(d).is_symmetric());
    const auto w = v.virasoro_element();
    CHECK(v.bilinear_form(w, w) == Rational(1, 2));
    const auto u = a2(3);
    const auto w2 = u.virasoro_element();
    CHECK(u.bilinear_form(w2, w2) == 1);
}

TEST_CASE("virasoro element and L(n)") {
    const auto v = a1(4);
    CHECK(v.virasoro_element() == v.monomial(mono({{1, 0}, {1, 0}}, {0}), Rational(1, 4)));
    for (int d = 0; d <= 4; ++d)
        for (const auto& m : v.graded_basis(d)) CHECK(v.L_apply(0, v.monomial(m)) == Rational(d) * v.monomial(m));
    const auto u = a2(3);
    for (int d = 0; d <= 3; ++d)
        for (const auto& m : u.graded_basis(d)) CHECK(u.L_apply(0, u.monomial(m)) == Rational(d) * u.monomial(m));
    CHECK(v.L_apply(1, v.exponential({1})).is_zero());
    CHECK(v.L_apply(-1, v.vacuum()).is_zero());
    const auto w = v.virasoro_element();
    CHECK(v.L_apply(2, w) == Rational(1, 2) * v.vacuum());
    CHECK(v.L_apply(0, w) == Rational(2) * w);
}

TEST_CASE("quasi-primary vectors") {
    const auto v = a1(3);
    CHECK(v.is_quasi_primary(v.vacuum()));
    CHECK(v.is_quasi_primary(v.exponential({1})));
    CHECK(v.is_quasi_primary(v.exponential({-1})));
    const auto h2 = v.monomial(mono({{2, 0}}, {0}));
    CHECK_FALSE(v.is_quasi_primary(h2));
    CHECK(v.L_apply(1, h2) == v.monomial(mono({{1, 0}}, {0}), 2));
}

TEST_CASE("divided translates agree with L(-1)^n / n!") {
    const auto v = a1(5);
    const auto h = v.monomial(mono({{1, 0}}, {0}));
    CHECK(v.divided_translate(h, 0) == h);
    CHECK(v.divided_translate(h, 1) == v.monomial(mono({{2, 0}}, {0})));
    CHECK(v.divided_translate(v.vacuum(), 2).is_zero());
    for (int d = 0; d <= 3; ++d)
        for (const auto& m : v.graded_basis(d)) {
            GradedVector t = v.monomial(m);
            for (int n = 1; d + n <= 5; ++n) {
                t = Rational(1, n) * v.L_apply(-1, t);
                CHECK(v.divided_translate(v.monomial(m), n) == t);
            }
        }
}

TEST_CASE("vacuum identities on A1 and A2") {
    const auto r1 = vacuum_identity_check(a1(6));
    CHECK(r1.pass);
    CHECK(r1.checked > 0);
    const auto r2 = vacuum_identity_check(a2(4));
    CHECK(r2.pass);
}

TEST_CASE("invariance identity on low-degree triples") {
    const auto v = a1(4);
    const auto sweep = invariance_sweep(v, 4);
    CHECK(sweep.checked > 100);
    CHECK(sweep.failures == 0);
    const auto u = a2(3);
    std::mt19937_64 rng(5);
    for (int t = 0; t < 60; ++t) {
        auto pick = [&](int maxd) {
            const int d = static_cast<int>(rng() % static_cast<unsigned>(maxd + 1));
            const auto& b = u.graded_basis(d);
            return u.monomial(b[rng() % b.size()]);
        };
        const auto a = pick(2), x = pick(2), y = pick(3);
        CHECK(u.invariance_identity_check(a, x, y));
    }
}

TEST_CASE("literals round-trip") {
    const auto v = a2(3);
    for (int d = 0; d <= 3; ++d)
        for (const auto& m : v.graded_basis(d)) {
            const auto x = v.monomial(m, Rational(-3, 7));
            CHECK(v.parse_literal(v.to_literal(x)) == x);
        }
    const auto mix = v.parse_literal("1/2 * h(1,-1)^2 * e(0,0) + -3 * h(2,-2) * e(0,0) + e(1,-1)");
    CHECK(mix.size() == 3);
    CHECK(v.parse_literal(v.to_literal(mix)) == mix);
    CHECK(v.to_literal(GradedVector(3)) == "0");
    CHECK(v.parse_literal("0").is_zero());
    CHECK(v.parse_literal("1 * h(1,-1) * e(0,0)") == v.monomial(mono({{1, 0}}, {0, 0})));
}

TEST_CASE("malformed literals") {
    const auto v = a1(2);
    CHECK_THROWS_AS(v.parse_literal(""), VoaError);
    CHECK_THROWS_AS(v.parse_literal("h(2,-1)"), VoaError);
    CHECK_THROWS_AS(v.parse_literal("h(1,1)"), VoaError);
    CHECK_THROWS_AS(v.parse_literal("e(1,1)"), VoaError);
    CHECK_THROWS_AS(v.parse_literal("x * e(1)"), VoaError);
    CHECK_THROWS_AS(v.parse_literal("e(1) + "), VoaError);
    CHECK_THROWS_AS(v.parse_literal("e(2)"), TruncationError);
    CHECK(v.parse_literal("e(2) + e(1)", TruncationMode::Drop) == v.exponential({1}));
}

}  // TEST_SUITE
