#include "voaforms/io.hpp"

#include <fstream>
#include <memory>

namespace voaforms {

namespace {

[[noreturn]] void bad(const std::string& field, const std::string& why) {
    throw InputError("field '" + field + "': " + why);
}

const Json& need(const Json& j, const std::string& key, const std::string& path) {
    if (!j.is_object()) bad(path, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) bad(path.empty() ? key : path + "." + key, "missing");
    return *it;
}

std::int64_t as_int(const Json& j, const std::string& field) {
    if (!j.is_number_integer()) bad(field, "expected an integer");
    return j.get<std::int64_t>();
}

Rational as_rational(const Json& j, const std::string& field) {
    try {
        if (j.is_number_integer()) return Rational(std::to_string(j.get<std::int64_t>()));
        if (j.is_string()) return parse_rational(j.get<std::string>());
    } catch (const ExactError& e) {
        bad(field, e.what());
    }
    bad(field, "expected an integer or a \"p/q\" string");
}

std::vector<std::vector<Rational>> rational_grid(const Json& j, std::size_t rows, std::size_t cols,
                                                 const std::string& field) {
    if (!j.is_array() || j.size() != rows) bad(field, "expected " + std::to_string(rows) + " rows");
    std::vector<std::vector<Rational>> out(rows);
    for (std::size_t r = 0; r < rows; ++r) {
        const Json& row = j[r];
        const std::string rf = field + "[" + std::to_string(r) + "]";
        if (!row.is_array() || row.size() != cols) bad(rf, "expected " + std::to_string(cols) + " entries");
        for (std::size_t c = 0; c < cols; ++c) out[r].push_back(as_rational(row[c], rf + "[" + std::to_string(c) + "]"));
    }
    return out;
}

QMatrix grid_to_matrix(const std::vector<std::vector<Rational>>& g, std::size_t cols) {
    return QMatrix::from_rows(g, cols);
}

Json matrix_grid(const QMatrix& m) {
    Json out = Json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(format_rational(m(r, c)));
        out.push_back(row);
    }
    return out;
}

}  // namespace

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw InputError("'" + path + "' is not valid JSON: " + e.what());
    }
}

EvenLattice lattice_from_json(const Json& j) {
    const Json& gram = need(j, "gram", "lattice");
    if (!gram.is_array() || gram.empty()) bad("lattice.gram", "expected a non-empty square array");
    const std::size_t d = gram.size();
    if (j.contains("rank") && as_int(j["rank"], "lattice.rank") != static_cast<std::int64_t>(d))
        bad("lattice.rank", "does not match the size of lattice.gram");
    std::vector<std::vector<std::int64_t>> g(d);
    for (std::size_t r = 0; r < d; ++r) {
        const std::string rf = "lattice.gram[" + std::to_string(r) + "]";
        if (!gram[r].is_array() || gram[r].size() != d) bad(rf, "expected " + std::to_string(d) + " entries");
        for (std::size_t c = 0; c < d; ++c) g[r].push_back(as_int(gram[r][c], rf + "[" + std::to_string(c) + "]"));
    }
    try {
        return EvenLattice(std::move(g));
    } catch (const VoaError& e) {
        bad("lattice.gram", e.what());
    }
}

Json lattice_to_json(const EvenLattice& l) {
    return Json{{"rank", l.rank()}, {"gram", l.gram()}};
}

QMatrix matrix_from_json(const Json& j, const std::string& field) {
    const std::int64_t rows = as_int(need(j, "rows", field), field + ".rows");
    const std::int64_t cols = as_int(need(j, "cols", field), field + ".cols");
    if (rows < 0 || cols < 0) bad(field, "negative shape");
    const Json& e = need(j, "entries", field);
    if (!e.is_array() || e.size() != static_cast<std::size_t>(rows * cols))
        bad(field + ".entries", "expected rows*cols entries");
    std::vector<Rational> entries;
    for (std::size_t i = 0; i < e.size(); ++i)
        entries.push_back(as_rational(e[i], field + ".entries[" + std::to_string(i) + "]"));
    return QMatrix(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols), std::move(entries));
}

Json matrix_to_json(const QMatrix& m) {
    Json e = Json::array();
    for (const auto& x : m.entries()) e.push_back(format_rational(x));
    return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", e}};
}

Json rational_list(const std::vector<Rational>& v) {
    Json out = Json::array();
    for (const auto& x : v) out.push_back(format_rational(x));
    return out;
}

Json integer_list(const std::vector<Integer>& v) {
    Json out = Json::array();
    for (const auto& x : v) out.push_back(x.get_str());
    return out;
}

std::vector<IntMatrix> action_from_json(const Json& j) {
    const std::int64_t n = as_int(need(j, "dim", "action"), "action.dim");
    if (n <= 0) bad("action.dim", "must be positive");
    const Json& gens = need(j, "generators", "action");
    if (!gens.is_array()) bad("action.generators", "expected an array");
    std::vector<IntMatrix> out;
    for (std::size_t g = 0; g < gens.size(); ++g) {
        const std::string gf = "action.generators[" + std::to_string(g) + "]";
        if (!gens[g].is_array() || gens[g].size() != static_cast<std::size_t>(n * n))
            bad(gf, "expected dim*dim row-major integers");
        IntMatrix m(static_cast<std::size_t>(n), std::vector<std::int64_t>(static_cast<std::size_t>(n)));
        for (std::size_t i = 0; i < gens[g].size(); ++i)
            m[i / n][i % n] = as_int(gens[g][i], gf + "[" + std::to_string(i) + "]");
        out.push_back(std::move(m));
    }
    return out;
}

FiniteAlgebra algebra_from_json(const Json& j) {
    const std::int64_t n = as_int(need(j, "dim", "algebra"), "algebra.dim");
    if (n <= 0) bad("algebra.dim", "must be positive");
    const auto d = static_cast<std::size_t>(n);
    std::vector<std::string> labels;
    if (j.contains("labels")) {
        const Json& l = j["labels"];
        if (!l.is_array() || l.size() != d) bad("algebra.labels", "expected dim strings");
        for (const auto& s : l) {
            if (!s.is_string()) bad("algebra.labels", "expected strings");
            labels.push_back(s.get<std::string>());
        }
    } else {
        for (std::size_t i = 0; i < d; ++i) labels.push_back("x" + std::to_string(i + 1));
    }
    const Json& c = need(j, "constants", "algebra");
    if (!c.is_array() || c.size() != d) bad("algebra.constants", "expected dim x dim x dim");
    std::vector<std::vector<QVector>> consts(d);
    for (std::size_t i = 0; i < d; ++i) {
        const auto g = rational_grid(c[i], d, d, "algebra.constants[" + std::to_string(i) + "]");
        consts[i] = g;
    }
    const auto gram = rational_grid(need(j, "gram", "algebra"), d, d, "algebra.gram");
    try {
        return FiniteAlgebra(std::move(labels), std::move(consts), grid_to_matrix(gram, d));
    } catch (const ExactError& e) {
        bad("algebra", e.what());
    }
}

Json algebra_to_json(const FiniteAlgebra& a) {
    Json c = Json::array();
    for (const auto& row : a.constants()) {
        Json r = Json::array();
        for (const auto& v : row) r.push_back(rational_list(v));
        c.push_back(r);
    }
    return Json{{"dim", a.dim()}, {"labels", a.labels()}, {"constants", c}, {"gram", matrix_grid(a.gram())}};
}

std::vector<std::string> generator_literals_from_json(const Json& j) {
    const Json& arr = j.is_object() ? need(j, "generators", "") : j;
    if (!arr.is_array()) bad("generators", "expected an array of element literals");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        if (!arr[i].is_string()) bad("generators[" + std::to_string(i) + "]", "expected a string literal");
        out.push_back(arr[i].get<std::string>());
    }
    return out;
}

Json trace_to_json(const SaturationTrace& t) {
    Json passes = Json::array();
    for (const auto& p : t.passes) {
        passes.push_back(Json{{"pass", p.pass},
                              {"ranks", p.ranks},
                              {"denominators", integer_list(p.denominators)},
                              {"products", p.products},
                              {"changed", p.changed}});
    }
    return Json{{"converged", t.converged}, {"passes", passes}};
}

Json li_certificate_to_json(const LiCertificate& c) {
    Json out{{"pass", c.pass}, {"scope", "degrees<=" + std::to_string(c.cutoff)}};
    if (c.witness) {
        out["witness"] = Json{{"degree", c.witness->degree},
                              {"i", c.witness->i},
                              {"j", c.witness->j},
                              {"value", format_rational(c.witness->value)}};
    }
    return out;
}

Json form_manifest(const TruncatedForm& j, const std::vector<std::string>& generator_literals) {
    const auto cert = check_li(j);
    Json degrees = Json::object();
    for (int s = 0; s <= j.cutoff(); ++s) {
        const auto& gram = cert.grams.at(static_cast<std::size_t>(s));
        bool li = true;
        for (const auto& x : gram.entries()) li = li && is_integral(x);
        degrees[std::to_string(s)] = Json{{"basis_rank", j.piece(s).rank()},
                                          {"dimension", j.host().dimension(s)},
                                          {"basis", matrix_to_json(j.piece(s).basis())},
                                          {"gram", matrix_grid(gram)},
                                          {"li", li}};
    }
    return Json{{"lattice", lattice_to_json(j.host().lattice())},
                {"cutoff", j.cutoff()},
                {"gen_degree", j.gen_degree()},
                {"generators", generator_literals},
                {"degrees", degrees},
                {"saturation", trace_to_json(j.trace())},
                {"scope", "degrees<=" + std::to_string(j.cutoff())}};
}

LoadedManifest manifest_from_json(const Json& j) {
    LoadedManifest out;
    EvenLattice lattice = lattice_from_json(need(j, "lattice", ""));
    const std::int64_t n = as_int(need(j, "cutoff", ""), "cutoff");
    if (n < 0) bad("cutoff", "must be non-negative");
    auto host = std::make_shared<const TruncatedVOA>(std::move(lattice), static_cast<int>(n));
    out.host = host;
    out.generator_literals = generator_literals_from_json(need(j, "generators", ""));
    std::vector<GradedVector> gens;
    for (std::size_t i = 0; i < out.generator_literals.size(); ++i) {
        try {
            gens.push_back(host->parse_literal(out.generator_literals[i]));
        } catch (const VoaError& e) {
            bad("generators[" + std::to_string(i) + "]", e.what());
        }
    }
    const Json& degrees = need(j, "degrees", "");
    std::vector<ZLattice> pieces;
    for (int s = 0; s <= n; ++s) {
        const std::string key = std::to_string(s);
        const std::string f = "degrees." + key;
        const Json& d = need(degrees, key, "degrees");
        const std::size_t dim = host->dimension(s);
        QMatrix basis = matrix_from_json(need(d, "basis", f), f + ".basis");
        if (basis.cols() != dim) bad(f + ".basis", "expected " + std::to_string(dim) + " columns");
        ZLattice piece = ZLattice::from_generators(basis);
        if (piece.rank() != basis.rows()) bad(f + ".basis", "rows are not linearly independent");
        const std::int64_t rank = as_int(need(d, "basis_rank", f), f + ".basis_rank");
        if (rank != static_cast<std::int64_t>(basis.rows())) bad(f + ".basis_rank", "does not match the basis");
        const auto gram = rational_grid(need(d, "gram", f), basis.rows(), basis.rows(), f + ".gram");
        out.stored_grams.push_back(grid_to_matrix(gram, basis.rows()));
        out.stored_bases.push_back(basis);
        const Json& li = need(d, "li", f);
        if (!li.is_boolean()) bad(f + ".li", "expected a boolean");
        out.stored_li.push_back(li.get<bool>());
        pieces.push_back(std::move(piece));
    }
    out.form = TruncatedForm(host, std::move(pieces));
    int t = 0;
    if (j.contains("gen_degree")) t = static_cast<int>(as_int(j["gen_degree"], "gen_degree"));
    if (t < 0 || t > n) bad("gen_degree", "must lie in [0, cutoff]");
    out.form.set_generators(std::move(gens), t);
    return out;
}

}  // namespace voaforms
