#pragma once

// JSON encodings shared by the CLI and tests. Malformed input raises
// InputError whose message names the offending field.

#include "voaforms/dihedral.hpp"
#include "voaforms/forms.hpp"

#include <json.hpp>

#include <stdexcept>
#include <string>
#include <vector>

namespace voaforms {

using Json = nlohmann::json;

class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

Json read_json_file(const std::string& path);

/// {"rank": d, "gram": [[...]]}
EvenLattice lattice_from_json(const Json& j);
Json lattice_to_json(const EvenLattice& l);

/// {"rows": r, "cols": c, "entries": ["p/q", ...]} row-major.
QMatrix matrix_from_json(const Json& j, const std::string& field = "matrix");
Json matrix_to_json(const QMatrix& m);
Json rational_list(const std::vector<Rational>& v);
Json integer_list(const std::vector<Integer>& v);

/// {"dim": n, "generators": [[row-major ints], ...]}
std::vector<IntMatrix> action_from_json(const Json& j);

/// {"dim": n, "labels": [...], "constants": [[[...]]], "gram": [[...]]}
FiniteAlgebra algebra_from_json(const Json& j);
Json algebra_to_json(const FiniteAlgebra& a);

/// Either a bare array of literals or {"generators": [...]}.
std::vector<std::string> generator_literals_from_json(const Json& j);

/// Manifest of a generated form; grams are recomputed from the stored bases.
Json form_manifest(const TruncatedForm& j, const std::vector<std::string>& generator_literals);

struct LoadedManifest {
    VoaPtr host;
    TruncatedForm form;
    std::vector<std::string> generator_literals;
    std::vector<QMatrix> stored_bases;  // as written in the file
    std::vector<QMatrix> stored_grams;
    std::vector<bool> stored_li;
};

LoadedManifest manifest_from_json(const Json& j);

Json trace_to_json(const SaturationTrace& t);
Json li_certificate_to_json(const LiCertificate& c);

}  // namespace voaforms
