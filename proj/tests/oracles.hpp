#pragma once

// Independent oracles. None of these call into the library's lattice or VOA
// code paths; they recompute answers by enumeration or closed formulas.

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <iterator>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <vector>

namespace oracle {

/// p/q in lowest terms (the two-argument mpq constructor does not reduce).
inline mpq_class frac(long p, long q) {
    mpq_class r(p, q);
    r.canonicalize();
    return r;
}

// -- graded dimensions -------------------------------------------------------

/// Coefficients of prod_{k>=1} (1 - q^k)^{-colors} up to q^n.
inline std::vector<std::int64_t> colored_partitions(int colors, int n) {
    std::vector<std::int64_t> p(static_cast<std::size_t>(n) + 1, 0);
    p[0] = 1;
    for (int c = 0; c < colors; ++c)
        for (int k = 1; k <= n; ++k)
            for (int m = k; m <= n; ++m) p[static_cast<std::size_t>(m)] += p[static_cast<std::size_t>(m - k)];
    return p;
}

/// dim V_d for d <= n: theta series of the lattice times the Fock character.
/// Lattice vectors are enumerated in a coordinate box of radius `box`.
inline std::vector<std::int64_t> graded_dimensions(const std::vector<std::vector<std::int64_t>>& gram, int n,
                                                   int box) {
    const std::size_t r = gram.size();
    std::vector<std::int64_t> theta(static_cast<std::size_t>(n) + 1, 0);
    std::vector<std::int64_t> x(r, -box);
    while (true) {
        std::int64_t norm = 0;
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < r; ++j) norm += x[i] * gram[i][j] * x[j];
        if (norm / 2 <= n) ++theta[static_cast<std::size_t>(norm / 2)];
        std::size_t i = 0;
        while (i < r && x[i] == box) x[i++] = -box;
        if (i == r) break;
        ++x[i];
    }
    const auto fock = colored_partitions(static_cast<int>(r), n);
    std::vector<std::int64_t> dims(static_cast<std::size_t>(n) + 1, 0);
    for (int a = 0; a <= n; ++a)
        for (int b = 0; a + b <= n; ++b)
            dims[static_cast<std::size_t>(a + b)] += theta[static_cast<std::size_t>(a)] * fock[static_cast<std::size_t>(b)];
    return dims;
}

// -- finite torus model of lattices ------------------------------------------
//
// A lattice L with M Z^d <= L <= Z^d is the same thing as a subgroup of
// (Z/M)^d. Subgroups are closed by breadth-first search over generators,
// so sums, intersections and quotient exponents become set computations.

using Point = std::vector<int>;

struct Torus {
    int modulus;
    std::size_t dim;

    Point reduce(const std::vector<std::int64_t>& v) const {
        Point p;
        for (auto x : v) p.push_back(static_cast<int>(((x % modulus) + modulus) % modulus));
        return p;
    }
    Point add(const Point& a, const Point& b) const {
        Point c(dim);
        for (std::size_t i = 0; i < dim; ++i) c[i] = (a[i] + b[i]) % modulus;
        return c;
    }
    Point scale(const Point& a, int k) const {
        Point c(dim);
        for (std::size_t i = 0; i < dim; ++i) c[i] = static_cast<int>((static_cast<long>(a[i]) * k) % modulus);
        return c;
    }
    std::set<Point> span(const std::vector<Point>& gens) const {
        std::set<Point> seen{Point(dim, 0)};
        std::vector<Point> frontier{Point(dim, 0)};
        while (!frontier.empty()) {
            std::vector<Point> next;
            for (const auto& p : frontier)
                for (const auto& g : gens) {
                    Point q = add(p, g);
                    if (seen.insert(q).second) next.push_back(q);
                }
            frontier = std::move(next);
        }
        return seen;
    }
};

inline std::set<Point> set_intersection(const std::set<Point>& a, const std::set<Point>& b) {
    std::set<Point> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.begin()));
    return out;
}

/// Least e > 0 with e x in b for every x in a (b <= a assumed).
inline int quotient_exponent(const Torus& t, const std::set<Point>& a, const std::set<Point>& b) {
    int e = 1;
    for (const auto& x : a) {
        int k = 1;
        while (!b.count(t.scale(x, k))) ++k;
        e = std::lcm(e, k);
    }
    return e;
}

// -- dual exponent via the inverse Gram --------------------------------------

/// Exponent of J*/J for an LI full-rank J with Gram g (in J coordinates J* = g^{-1} Z^k):
/// the lcm of the denominators of g^{-1}. Plain Gauss-Jordan over mpq.
inline mpz_class dual_exponent(std::vector<std::vector<mpq_class>> g) {
    const std::size_t n = g.size();
    std::vector<std::vector<mpq_class>> inv(n, std::vector<mpq_class>(n, 0));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (g[p][c] == 0) ++p;
        std::swap(g[p], g[c]);
        std::swap(inv[p], inv[c]);
        const mpq_class piv = g[c][c];
        for (std::size_t j = 0; j < n; ++j) {
            g[c][j] /= piv;
            inv[c][j] /= piv;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c || g[r][c] == 0) continue;
            const mpq_class f = g[r][c];
            for (std::size_t j = 0; j < n; ++j) {
                g[r][j] -= f * g[c][j];
                inv[r][j] -= f * inv[c][j];
            }
        }
    }
    mpz_class e = 1;
    for (const auto& row : inv)
        for (const auto& x : row) {
            mpz_class d = x.get_den();
            mpz_lcm(e.get_mpz_t(), e.get_mpz_t(), d.get_mpz_t());
        }
    return e;
}

}  // namespace oracle
