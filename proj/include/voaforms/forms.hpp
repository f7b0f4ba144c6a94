#pragma once

// Integral forms of a truncated lattice VOA: one ZLattice per degree, in the
// coordinates of graded_basis(s). Every certificate produced here is only
// claimed for degrees <= cutoff.

#include "voaforms/kernels.hpp"
#include "voaforms/latgroup.hpp"
#include "voaforms/voa.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace voaforms {

using VoaPtr = std::shared_ptr<const TruncatedVOA>;

class FormError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One saturation pass: ranks and common denominators per degree after the pass.
struct SaturationPass {
    int pass = 0;
    std::vector<std::size_t> ranks;
    std::vector<Integer> denominators;
    std::size_t products = 0;  // vertex products evaluated in the pass
    bool changed = false;
};

struct SaturationTrace {
    std::vector<SaturationPass> passes;
    bool converged = false;
};

class SaturationError : public FormError {
public:
    SaturationError(const std::string& what, SaturationTrace trace) : FormError(what), trace_(std::move(trace)) {}
    const SaturationTrace& trace() const { return trace_; }

private:
    SaturationTrace trace_;
};

struct SaturationOptions {
    int iteration_bound = 50;
    Exec exec = Exec::Parallel;
};

class TruncatedForm {
public:
    TruncatedForm() = default;
    TruncatedForm(VoaPtr host, std::vector<ZLattice> pieces);

    const TruncatedVOA& host() const { return *host_; }
    const VoaPtr& host_ptr() const { return host_; }
    int cutoff() const { return host_->cutoff(); }

    const ZLattice& piece(int s) const { return pieces_.at(static_cast<std::size_t>(s)); }
    const std::vector<ZLattice>& pieces() const { return pieces_; }
    void set_piece(int s, ZLattice l);

    const std::vector<GradedVector>& generators() const { return generators_; }
    int gen_degree() const { return gen_degree_; }
    void set_generators(std::vector<GradedVector> gens, int gen_degree);

    const SaturationTrace& trace() const { return trace_; }
    void set_trace(SaturationTrace t) { trace_ = std::move(t); }

    bool contains(const GradedVector& v) const;
    TruncatedForm scaled(const Rational& m) const;

    friend bool operator==(const TruncatedForm& a, const TruncatedForm& b) { return a.pieces_ == b.pieces_; }

private:
    VoaPtr host_;
    std::vector<ZLattice> pieces_;
    std::vector<GradedVector> generators_;
    int gen_degree_ = 0;
    SaturationTrace trace_;
};

/// Per-degree lattices spanned by the homogeneous generators (vacuum not added).
std::vector<ZLattice> seed_pieces(const TruncatedVOA& v, const std::vector<GradedVector>& gens);

/// Least family containing the seeds and Z vac, closed under every a_k b
/// landing at degree <= N. Throws SaturationError after iteration_bound passes.
TruncatedForm saturate(VoaPtr v, std::vector<ZLattice> seeds, const SaturationOptions& opts = {});
TruncatedForm generate_form(VoaPtr v, const std::vector<GradedVector>& gens, const SaturationOptions& opts = {});

// -- lattice integrality -----------------------------------------------------

struct LiWitness {
    int degree;
    std::size_t i, j;
    Rational value;
};

struct LiCertificate {
    bool pass = true;
    int cutoff = 0;
    std::vector<QMatrix> grams;  // Gram matrix of each piece on its basis
    std::optional<LiWitness> witness;
};

QMatrix piece_gram(const TruncatedForm& j, int s, Exec exec = Exec::Parallel);
LiCertificate check_li(const TruncatedForm& j, Exec exec = Exec::Parallel);
Integer minimal_li_scale(const TruncatedForm& j);

// -- duals -------------------------------------------------------------------

struct DualForm {
    std::vector<ZLattice> pieces;
    std::vector<bool> full_rank;  // false where the dual was taken inside a proper span
};

DualForm dual_form(const TruncatedForm& j);

struct DualStability {
    bool pass = true;
    int n = 0;
    std::optional<std::pair<int, std::size_t>> witness;  // (degree, dual basis row)
};

/// L(1)^n/n! maps each dual piece into the dual piece n degrees lower.
DualStability dual_stability_check(const TruncatedForm& j, int n);
DualStability dual_stability_check(const TruncatedForm& j, const DualForm& dual, int n);

// -- rescaling constructions -------------------------------------------------

struct ClosureSample {
    bool pass = true;
    std::size_t checked = 0;
    std::uint64_t seed = 0;
    struct Witness {
        int p;
        std::size_t a;
        int k;
        int q;
        std::size_t b;
    };
    std::optional<Witness> witness;
};

/// Checks a_k b in J for `samples` seeded random basis pairs and modes.
ClosureSample closure_sample(const TruncatedForm& j, std::size_t samples, std::uint64_t seed);

/// m J + Z vac. Throws FormError when m J is not LI.
TruncatedForm lemma1_construct(const TruncatedForm& j, const Integer& m);

struct RescaleResult {
    Integer m1;
    Integer m2;
    Integer m;
    TruncatedForm jm;
    LiCertificate li;
};

RescaleResult dongl1_rescale(const TruncatedForm& j, int t, const SaturationOptions& opts = {});

struct QuasiPrimaryCertificate {
    std::vector<bool> quasi_primary;
    bool all_quasi_primary = true;
    TruncatedForm form;
    LiCertificate li;
    bool pass = false;
};

QuasiPrimaryCertificate quasiprimary_li_check(VoaPtr v, const std::vector<GradedVector>& gens,
                                              const SaturationOptions& opts = {});

/// The n > 0 with J_0 = n Z vac.
Integer vac_intersection(const TruncatedForm& j);

// -- automorphisms -----------------------------------------------------------

/// Lift of a lattice isometry M (M^T G M = G) to V_L:
///   g_i(-n) -> sum_j M_ji g_j(-n),  e^a -> eta(a) e^{M a}
/// with eta a sign making the lift compatible with the cocycle.
class VOAAutomorphism {
public:
    VOAAutomorphism(VoaPtr host, IntMatrix isometry);

    const IntMatrix& isometry() const { return m_; }
    int eta(const LatticeVector& a) const;
    GradedVector apply(const GradedVector& v) const;
    /// Matrix on graded_basis(s); column p is the image of basis vector p.
    const QMatrix& degree_matrix(int s) const;

private:
    VoaPtr host_;
    IntMatrix m_;
    std::vector<std::vector<int>> b_;  // parity of the cocycle defect on basis pairs
    std::vector<QMatrix> mats_;
};

std::vector<QMatrix> degree_matrices(const std::vector<VOAAutomorphism>& auts, int s);

TruncatedForm fixed_subform(const TruncatedForm& j, const std::vector<VOAAutomorphism>& auts);

struct EigenformReport {
    std::vector<ZLattice> pieces;                 // J_lambda per degree
    std::vector<ZLattice> tel;                    // Tel(J_s)
    std::vector<Integer> exponents;               // exponent of J_s / Tel(J_s)
    bool bound_holds = true;                      // every exponent divides 2^r
};

/// auts must be commuting involutions generating a group of order 2^r.
EigenformReport char_eigenform(const TruncatedForm& j, const std::vector<VOAAutomorphism>& auts,
                               const Character& lambda);

struct InvariantFormResult {
    TruncatedForm form;
    std::vector<Integer> exponents;
};

InvariantFormResult invariant_form_intersect(const TruncatedForm& j, const std::vector<VOAAutomorphism>& auts,
                                             std::size_t max_order = 4096);

struct NliTransfer {
    Integer j_into_k;  // least m with m J <= K
    Integer k_into_j;
};

NliTransfer nli_transfer_report(const TruncatedForm& j, const TruncatedForm& k);

}  // namespace voaforms
