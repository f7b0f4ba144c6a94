#include "voaforms/forms.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <stdexcept>

namespace voaforms {

namespace {

Integer lcm(const Integer& a, const Integer& b) {
    Integer r;
    mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

std::string deg_str(int s) { return "degree " + std::to_string(s); }

ZLattice vacuum_line() { return ZLattice::standard(1); }

GradedVector row_vector(const TruncatedVOA& v, int s, const ZLattice& l, std::size_t i) {
    return v.from_coordinates(s, l.basis_row(i));
}

}  // namespace

// ---------------------------------------------------------------------------
// TruncatedForm

TruncatedForm::TruncatedForm(VoaPtr host, std::vector<ZLattice> pieces) : host_(std::move(host)), pieces_(std::move(pieces)) {
    if (!host_) throw FormError("form without host VOA");
    const auto n = static_cast<std::size_t>(host_->cutoff()) + 1;
    if (pieces_.size() > n) throw FormError("more pieces than degrees up to the cutoff");
    while (pieces_.size() < n) pieces_.emplace_back(host_->dimension(static_cast<int>(pieces_.size())));
    for (std::size_t s = 0; s < n; ++s)
        if (pieces_[s].ambient_dim() != host_->dimension(static_cast<int>(s)))
            throw FormError("piece at " + deg_str(static_cast<int>(s)) + " has the wrong ambient dimension");
}

void TruncatedForm::set_piece(int s, ZLattice l) {
    if (l.ambient_dim() != host_->dimension(s)) throw FormError("piece at " + deg_str(s) + " has the wrong ambient dimension");
    pieces_.at(static_cast<std::size_t>(s)) = std::move(l);
}

void TruncatedForm::set_generators(std::vector<GradedVector> gens, int gen_degree) {
    generators_ = std::move(gens);
    gen_degree_ = gen_degree;
}

bool TruncatedForm::contains(const GradedVector& v) const {
    for (const auto& [s, comp] : host_->components(v)) {
        if (s > cutoff()) return false;
        if (!piece(s).contains(host_->coordinates(comp, s))) return false;
    }
    return true;
}

TruncatedForm TruncatedForm::scaled(const Rational& m) const {
    std::vector<ZLattice> ps;
    for (const auto& p : pieces_) ps.push_back(p.scaled(m));
    TruncatedForm out(host_, std::move(ps));
    std::vector<GradedVector> gens;
    for (const auto& g : generators_) gens.push_back(m * g);
    out.set_generators(std::move(gens), gen_degree_);
    return out;
}

// ---------------------------------------------------------------------------
// Saturation

std::vector<ZLattice> seed_pieces(const TruncatedVOA& v, const std::vector<GradedVector>& gens) {
    std::vector<std::vector<QVector>> rows(static_cast<std::size_t>(v.cutoff()) + 1);
    for (const auto& g : gens) {
        if (g.is_zero()) continue;
        const int s = v.homogeneous_degree(g);
        if (s > v.cutoff()) throw TruncationError("generator above cutoff");
        rows[static_cast<std::size_t>(s)].push_back(v.coordinates(g, s));
    }
    std::vector<ZLattice> out;
    for (int s = 0; s <= v.cutoff(); ++s) out.push_back(ZLattice::from_rows(rows[static_cast<std::size_t>(s)], v.dimension(s)));
    return out;
}

TruncatedForm saturate(VoaPtr v, std::vector<ZLattice> seeds, const SaturationOptions& opts) {
    if (opts.iteration_bound < 1) throw FormError("iteration bound must be at least 1");
    const int n = v->cutoff();
    TruncatedForm form(v, std::move(seeds));
    std::vector<ZLattice> pieces = form.pieces();
    pieces[0] = lattice_sum(pieces[0], vacuum_line());

    std::vector<std::uint64_t> version(pieces.size(), 1);
    std::vector<std::uint64_t> basis_version(pieces.size(), 0);
    std::vector<std::vector<SparseVec>> bases(pieces.size());
    auto basis_of = [&](int s) -> const std::vector<SparseVec>& {
        const auto u = static_cast<std::size_t>(s);
        if (basis_version[u] != version[u]) {
            bases[u] = sparse_basis(pieces[u]);
            basis_version[u] = version[u];
        }
        return bases[u];
    };
    // (r, p, q) -> versions of J_p, J_q when the triple was last evaluated
    std::map<std::tuple<int, int, int>, std::pair<std::uint64_t, std::uint64_t>> done;
    constexpr std::size_t chunk = 16;

    SaturationTrace trace;
    for (int pass = 1; pass <= opts.iteration_bound; ++pass) {
        SaturationPass rec;
        rec.pass = pass;
        for (int r = 0; r <= n; ++r) {
            for (int p = 0; p <= n; ++p) {
                for (int q = 0; q <= n; ++q) {
                    const int k = p + q - 1 - r;
                    if (pieces[static_cast<std::size_t>(p)].is_zero() || pieces[static_cast<std::size_t>(q)].is_zero())
                        continue;
                    const auto key = std::make_tuple(r, p, q);
                    const auto vers = std::make_pair(version[static_cast<std::size_t>(p)], version[static_cast<std::size_t>(q)]);
                    auto it = done.find(key);
                    if (it != done.end() && it->second == vers) continue;
                    const std::vector<SparseVec> a = basis_of(p);
                    const std::vector<SparseVec> b = basis_of(q);
                    for (std::size_t lo = 0; lo < a.size(); lo += chunk) {
                        const std::vector<SparseVec> part(a.begin() + static_cast<std::ptrdiff_t>(lo),
                                                          a.begin() + static_cast<std::ptrdiff_t>(std::min(a.size(), lo + chunk)));
                        const auto prods = product_block(*v, p, part, k, q, b, opts.exec);
                        rec.products += prods.size();
                        if (pieces[static_cast<std::size_t>(r)].insert_many(prods)) {
                            ++version[static_cast<std::size_t>(r)];
                            rec.changed = true;
                        }
                    }
                    done[key] = vers;
                }
            }
        }
        for (const auto& l : pieces) {
            rec.ranks.push_back(l.rank());
            rec.denominators.push_back(l.denominator());
        }
        trace.passes.push_back(rec);
        if (!rec.changed) {
            trace.converged = true;
            break;
        }
    }
    if (!trace.converged)
        throw SaturationError("saturation did not stabilize within " + std::to_string(opts.iteration_bound) + " passes",
                              trace);
    TruncatedForm out(v, std::move(pieces));
    out.set_trace(std::move(trace));
    return out;
}

TruncatedForm generate_form(VoaPtr v, const std::vector<GradedVector>& gens, const SaturationOptions& opts) {
    int t = 0;
    for (const auto& g : gens) {
        if (g.is_zero()) continue;
        int s = -1;
        try {
            s = v->homogeneous_degree(g);
        } catch (const VoaError&) {
            throw FormError("generator is not homogeneous: " + v->to_literal(g));
        }
        t = std::max(t, s);
    }
    TruncatedForm out = saturate(v, seed_pieces(*v, gens), opts);
    out.set_generators(gens, t);
    return out;
}

// ---------------------------------------------------------------------------
// Lattice integrality

QMatrix piece_gram(const TruncatedForm& j, int s, Exec exec) {
    return gram_block(j.host().form_matrix(s), sparse_basis(j.piece(s)), exec);
}

LiCertificate check_li(const TruncatedForm& j, Exec exec) {
    LiCertificate cert;
    cert.cutoff = j.cutoff();
    for (int s = 0; s <= j.cutoff(); ++s) {
        QMatrix g = piece_gram(j, s, exec);
        for (std::size_t a = 0; a < g.rows() && !cert.witness; ++a)
            for (std::size_t b = a; b < g.cols(); ++b)
                if (!is_integral(g(a, b))) {
                    cert.pass = false;
                    cert.witness = LiWitness{s, a, b, g(a, b)};
                    break;
                }
        cert.grams.push_back(std::move(g));
    }
    return cert;
}

Integer minimal_li_scale(const TruncatedForm& j) {
    Integer l = 1;
    for (int s = 0; s <= j.cutoff(); ++s) {
        const QMatrix g = piece_gram(j, s);
        for (const auto& e : g.entries()) l = lcm(l, e.get_den());
    }
    // m^2 g is integral for every entry g iff l divides m^2
    for (Integer m = 1;; ++m)
        if (mpz_divisible_p(Integer(m * m).get_mpz_t(), l.get_mpz_t())) return m;
}

// ---------------------------------------------------------------------------
// Duals

DualForm dual_form(const TruncatedForm& j) {
    DualForm out;
    for (int s = 0; s <= j.cutoff(); ++s) {
        const ZLattice& p = j.piece(s);
        try {
            out.pieces.push_back(dual_lattice(p, j.host().form_matrix(s)));
        } catch (const ExactError& e) {
            throw FormError(deg_str(s) + ": " + e.what());
        }
        out.full_rank.push_back(p.rank() == p.ambient_dim());
    }
    return out;
}

DualStability dual_stability_check(const TruncatedForm& j, int n) { return dual_stability_check(j, dual_form(j), n); }

DualStability dual_stability_check(const TruncatedForm& j, const DualForm& dual, int n) {
    if (n < 0) throw FormError("dual_stability_check: n must be nonnegative");
    DualStability out;
    out.n = n;
    if (n == 0) return out;
    const TruncatedVOA& v = j.host();
    Integer fact = 1;
    for (int i = 2; i <= n; ++i) fact *= i;
    const Rational inv(Integer(1), fact);
    for (int s = n; s <= j.cutoff(); ++s) {
        const ZLattice& src = dual.pieces.at(static_cast<std::size_t>(s));
        const ZLattice& dst = dual.pieces.at(static_cast<std::size_t>(s - n));
        for (std::size_t i = 0; i < src.rank(); ++i) {
            GradedVector w = row_vector(v, s, src, i);
            for (int t = 0; t < n; ++t) w = v.L_apply(1, w);
            w *= inv;
            if (!dst.contains(v.coordinates(w, s - n))) {
                out.pass = false;
                out.witness = std::make_pair(s, i);
                return out;
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Rescaling constructions

ClosureSample closure_sample(const TruncatedForm& j, std::size_t samples, std::uint64_t seed) {
    ClosureSample out;
    out.seed = seed;
    const TruncatedVOA& v = j.host();
    const int n = j.cutoff();
    std::vector<int> live;
    for (int s = 0; s <= n; ++s)
        if (!j.piece(s).is_zero()) live.push_back(s);
    if (live.empty()) return out;
    std::mt19937_64 rng(seed);
    auto pick = [&rng](std::size_t m) { return static_cast<std::size_t>(rng() % m); };
    for (std::size_t t = 0; t < samples; ++t) {
        const int p = live[pick(live.size())];
        const int q = live[pick(live.size())];
        // result degree r in [0, n] means k in [p+q-1-n, p+q-1]
        const int r = static_cast<int>(pick(static_cast<std::size_t>(n) + 1));
        const int k = p + q - 1 - r;
        const std::size_t a = pick(j.piece(p).rank());
        const std::size_t b = pick(j.piece(q).rank());
        const GradedVector prod = v.vertex_product(row_vector(v, p, j.piece(p), a), k, row_vector(v, q, j.piece(q), b));
        ++out.checked;
        if (!j.piece(r).contains(v.coordinates(prod, r))) {
            out.pass = false;
            out.witness = ClosureSample::Witness{p, a, k, q, b};
            return out;
        }
    }
    return out;
}

TruncatedForm lemma1_construct(const TruncatedForm& j, const Integer& m) {
    if (m <= 0) throw FormError("lemma1_construct: m must be positive");
    TruncatedForm k = j.scaled(Rational(m));
    const LiCertificate pre = check_li(k);
    if (!pre.pass)
        throw FormError("m J is not lattice integral at " + deg_str(pre.witness->degree) + " (value " +
                        format_rational(pre.witness->value) + ")");
    k.set_piece(0, lattice_sum(k.piece(0), vacuum_line()));
    if (!check_li(k).pass) throw std::logic_error("m J + Z vac is not lattice integral");
    return k;
}

RescaleResult dongl1_rescale(const TruncatedForm& j, int t, const SaturationOptions& opts) {
    if (t < 0 || t > j.cutoff()) throw FormError("generator degree bound outside 0..cutoff");
    if (!j.piece(0).contains(QVector{Rational(1)})) throw FormError("dongl1_rescale: vacuum is not in J");
    RescaleResult out;
    out.m1 = 1;
    out.m2 = 1;
    for (int s = 1; s <= t; ++s) {
        const ZLattice& js = j.piece(s);
        if (js.is_zero()) continue;
        ZLattice dual;
        try {
            dual = dual_lattice(js, j.host().form_matrix(s));
        } catch (const ExactError& e) {
            throw FormError(deg_str(s) + ": " + e.what());
        }
        const ZLattice meet = lattice_intersect(js, dual);
        if (meet.rank() != js.rank()) throw FormError(deg_str(s) + ": J_s and its dual have unequal spans");
        out.m1 = lcm(out.m1, quotient_exponent(js, meet));
        out.m2 = lcm(out.m2, quotient_exponent(dual, meet));
    }
    out.m = out.m1 * out.m2;
    std::vector<ZLattice> seeds;
    for (int s = 0; s <= j.cutoff(); ++s)
        seeds.push_back(s >= 1 && s <= t ? j.piece(s).scaled(Rational(out.m)) : ZLattice(j.host().dimension(s)));
    out.jm = saturate(j.host_ptr(), std::move(seeds), opts);
    out.jm.set_generators({}, t);
    out.li = check_li(out.jm, opts.exec);
    return out;
}

QuasiPrimaryCertificate quasiprimary_li_check(VoaPtr v, const std::vector<GradedVector>& gens,
                                              const SaturationOptions& opts) {
    QuasiPrimaryCertificate out;
    for (const auto& g : gens) {
        const bool qp = v->is_quasi_primary(g);
        out.quasi_primary.push_back(qp);
        out.all_quasi_primary = out.all_quasi_primary && qp;
    }
    out.form = generate_form(v, gens, opts);
    out.li = check_li(out.form, opts.exec);
    out.pass = out.all_quasi_primary && out.li.pass;
    return out;
}

Integer vac_intersection(const TruncatedForm& j) {
    const ZLattice& j0 = j.piece(0);
    if (j0.is_zero()) throw FormError("J_0 is zero");
    const Rational r = j0.basis_row(0)[0];
    if (r.get_den() != 1) {
        // (r vac)_{-1} (r vac) = r^2 vac must lie in J_0 = r Z vac, forcing r in Z
        const Rational sq = r * r;
        if (!j0.contains(QVector{sq}))
            throw FormError("J_0 = " + format_rational(r) + " Z vac is not closed: (r vac)_{-1}(r vac) = " +
                            format_rational(sq) + " vac lies outside it");
        throw std::logic_error("J_0 closed with a non-integral generator");
    }
    return abs(r.get_num());
}

// ---------------------------------------------------------------------------
// Automorphisms

VOAAutomorphism::VOAAutomorphism(VoaPtr host, IntMatrix isometry) : host_(std::move(host)), m_(std::move(isometry)) {
    const EvenLattice& lat = host_->lattice();
    const std::size_t d = lat.rank();
    if (m_.size() != d) throw FormError("isometry has the wrong size");
    for (const auto& row : m_)
        if (row.size() != d) throw FormError("isometry has the wrong size");
    const QMatrix mq = to_qmatrix(m_);
    const QMatrix g = lat.gram_matrix();
    if (!(mq.transpose() * g * mq == g)) throw FormError("matrix is not an isometry of the lattice");

    auto image = [&](std::size_t i) {
        LatticeVector v(d);
        for (std::size_t j = 0; j < d; ++j) v[j] = m_[j][i];
        return v;
    };
    const Cocycle& eps = host_->cocycle();
    b_.assign(d, std::vector<int>(d, 0));
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            LatticeVector ei(d, 0), ej(d, 0);
            ei[i] = 1;
            ej[j] = 1;
            b_[i][j] = (eps(image(i), image(j)) * eps(ei, ej) < 0) ? 1 : 0;
        }
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j)
            if (b_[i][j] != b_[j][i]) throw std::logic_error("cocycle defect is not symmetric");
    }

    for (int s = 0; s <= host_->cutoff(); ++s) {
        const auto& basis = host_->graded_basis(s);
        QMatrix mat(basis.size(), basis.size());
        for (std::size_t p = 0; p < basis.size(); ++p) {
            const GradedVector img = apply(host_->monomial(basis[p]));
            for (const auto& [mono, c] : img.terms()) mat(host_->position(mono), p) = c;
        }
        mats_.push_back(std::move(mat));
    }
}

int VOAAutomorphism::eta(const LatticeVector& a) const {
    // eta(a + b) = eta(a) eta(b) (-1)^{B(a, b)}; the diagonal of B need not vanish,
    // so it enters through a_i (a_i - 1) / 2
    std::int64_t parity = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (b_[i][i]) parity += a[i] * (a[i] - 1) / 2;
        for (std::size_t j = i + 1; j < a.size(); ++j)
            if (b_[i][j]) parity += a[i] * a[j];
    }
    return (parity % 2 == 0) ? 1 : -1;
}

GradedVector VOAAutomorphism::apply(const GradedVector& v) const {
    const std::size_t d = m_.size();
    GradedVector out(v.cutoff());
    for (const auto& [mono, c] : v.terms()) {
        LatticeVector tail(d, 0);
        for (std::size_t j = 0; j < d; ++j)
            for (std::size_t i = 0; i < d; ++i) tail[j] += m_[j][i] * mono.tail[i];
        std::map<Modes, Rational> poly{{Modes{}, c * eta(mono.tail)}};
        for (const Mode& x : mono.modes) {
            std::map<Modes, Rational> next;
            for (const auto& [ms, coef] : poly)
                for (std::size_t j = 0; j < d; ++j) {
                    const std::int64_t mji = m_[j][static_cast<std::size_t>(x.index)];
                    if (mji == 0) continue;
                    Modes grown = ms;
                    grown.insert(std::upper_bound(grown.begin(), grown.end(), Mode{x.n, static_cast<int>(j)}),
                                 Mode{x.n, static_cast<int>(j)});
                    auto& e = next[grown];
                    e += coef * static_cast<long>(mji);
                }
            poly = std::move(next);
        }
        for (const auto& [ms, coef] : poly) out.add_term(FockMonomial{ms, tail}, coef);
    }
    return out;
}

const QMatrix& VOAAutomorphism::degree_matrix(int s) const { return mats_.at(static_cast<std::size_t>(s)); }

std::vector<QMatrix> degree_matrices(const std::vector<VOAAutomorphism>& auts, int s) {
    std::vector<QMatrix> out;
    for (const auto& g : auts) out.push_back(g.degree_matrix(s));
    return out;
}

namespace {

void require_invariant(const TruncatedForm& j, const std::vector<VOAAutomorphism>& auts) {
    for (int s = 0; s <= j.cutoff(); ++s)
        for (const auto& g : auts)
            if (!j.piece(s).contains(apply_to_lattice(g.degree_matrix(s), j.piece(s))))
                throw FormError("form is not invariant under an automorphism at " + deg_str(s));
}

}  // namespace

TruncatedForm fixed_subform(const TruncatedForm& j, const std::vector<VOAAutomorphism>& auts) {
    require_invariant(j, auts);
    std::vector<ZLattice> pieces;
    for (int s = 0; s <= j.cutoff(); ++s)
        pieces.push_back(joint_eigenlattice(j.piece(s), degree_matrices(auts, s), std::vector<int>(auts.size(), 1)));
    return TruncatedForm(j.host_ptr(), std::move(pieces));
}

EigenformReport char_eigenform(const TruncatedForm& j, const std::vector<VOAAutomorphism>& auts,
                               const Character& lambda) {
    if (lambda.rank() != auts.size()) throw FormError("character rank differs from the number of automorphisms");
    std::vector<IntMatrix> iso;
    for (const auto& g : auts) iso.push_back(g.isometry());
    // validates involutions, commuting, and order 2^r on the lattice
    const SignedAction on_lattice = SignedAction::from_int(j.host().rank(), iso);
    require_invariant(j, auts);
    const std::size_t r = auts.size();
    const Integer two_r = Integer(1) << static_cast<unsigned long>(r);
    EigenformReport out;
    for (int s = 0; s <= j.cutoff(); ++s) {
        const auto mats = degree_matrices(auts, s);
        const ZLattice& js = j.piece(s);
        std::vector<ZLattice> parts;
        ZLattice tel(js.ambient_dim());
        std::size_t rank_sum = 0;
        for (std::uint64_t mask = 0; mask < on_lattice.order(); ++mask) {
            parts.push_back(joint_eigenlattice(js, mats, Character::from_mask(r, mask).signs()));
            rank_sum += parts.back().rank();
            tel = lattice_sum(tel, parts.back());
        }
        if (rank_sum != tel.rank()) throw std::logic_error("eigenlattice sum is not direct at " + deg_str(s));
        if (!tel.contains(js.scaled(Rational(two_r)))) throw std::logic_error("2^r J_s is not inside Tel(J_s)");
        out.pieces.push_back(joint_eigenlattice(js, mats, lambda.signs()));
        const Integer e = js.is_zero() ? Integer(1) : quotient_exponent(js, tel);
        out.bound_holds = out.bound_holds && mpz_divisible_p(two_r.get_mpz_t(), e.get_mpz_t());
        out.exponents.push_back(e);
        out.tel.push_back(std::move(tel));
    }
    return out;
}

InvariantFormResult invariant_form_intersect(const TruncatedForm& j, const std::vector<VOAAutomorphism>& auts,
                                             std::size_t max_order) {
    std::vector<QMatrix> iso;
    for (const auto& g : auts) iso.push_back(to_qmatrix(g.isometry()));
    try {
        generate_matrix_group(iso, max_order);
    } catch (const ExactError& e) {
        throw FormError(e.what());
    }
    InvariantFormResult out;
    std::vector<ZLattice> pieces;
    for (int s = 0; s <= j.cutoff(); ++s) {
        if (j.piece(s).is_zero()) {
            pieces.push_back(j.piece(s));
            out.exponents.push_back(1);
            continue;
        }
        auto res = invariant_intersection(j.piece(s), degree_matrices(auts, s), max_order);
        pieces.push_back(std::move(res.lattice));
        out.exponents.push_back(res.exponent);
    }
    out.form = TruncatedForm(j.host_ptr(), std::move(pieces));
    return out;
}

NliTransfer nli_transfer_report(const TruncatedForm& j, const TruncatedForm& k) {
    if (j.host_ptr() != k.host_ptr() &&
        (j.cutoff() != k.cutoff() || j.host().lattice().gram() != k.host().lattice().gram()))
        throw FormError("forms live in different VOAs");
    NliTransfer out{1, 1};
    for (int s = 0; s <= j.cutoff(); ++s) {
        const ZLattice& a = j.piece(s);
        const ZLattice& b = k.piece(s);
        if (a.is_zero() && b.is_zero()) continue;
        const ZLattice meet = lattice_intersect(a, b);
        if (a.rank() != b.rank() || meet.rank() != a.rank())
            throw FormError("rank mismatch at " + deg_str(s) + " (" + std::to_string(a.rank()) + " vs " +
                            std::to_string(b.rank()) + ")");
        out.j_into_k = lcm(out.j_into_k, quotient_exponent(a, meet));
        out.k_into_j = lcm(out.k_into_j, quotient_exponent(b, meet));
    }
    return out;
}

}  // namespace voaforms
