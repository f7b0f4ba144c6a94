#pragma once

// Exhaustive sweeps over graded basis triples, shared by unit tests and the
// acceptance binary.

#include "voaforms/voa.hpp"

struct TripleSweep {
    std::size_t checked = 0;
    std::size_t failures = 0;
};

/// invariance_identity_check on every basis triple (a, u, v) with
/// deg a + deg u + deg v <= total.
inline TripleSweep invariance_sweep(const voaforms::TruncatedVOA& v, int total) {
    using namespace voaforms;
    TripleSweep out;
    const int n = v.cutoff();
    for (int da = 0; da <= std::min(n, total); ++da)
        for (int du = 0; da + du <= total && du <= n; ++du)
            for (int dv = 0; da + du + dv <= total && dv <= n; ++dv)
                for (const auto& ma : v.graded_basis(da))
                    for (const auto& mu : v.graded_basis(du))
                        for (const auto& mv : v.graded_basis(dv)) {
                            ++out.checked;
                            if (!v.invariance_identity_check(v.monomial(ma), v.monomial(mu), v.monomial(mv)))
                                ++out.failures;
                        }
    return out;
}
