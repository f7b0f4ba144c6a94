#include "cli.hpp"

#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

namespace fs = std::filesystem;
using voaforms::cli::run_cli;
using Json = nlohmann::json;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

class TempDir {
public:
    TempDir() {
        static int counter = 0;
        path_ = fs::temp_directory_path() / ("voaforms_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    std::string write(const std::string& name, const std::string& body) const {
        const fs::path p = path_ / name;
        std::ofstream(p) << body;
        return p.string();
    }
    std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
    fs::path path_;
};

std::string slurp(const std::string& path) {
    std::ifstream f(path);
    std::stringstream s;
    s << f.rdbuf();
    return s.str();
}

const char* kA1 = R"({"rank": 1, "gram": [[2]]})";
const char* kExp = R"j(["e(1)", "e(-1)"])j";

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("build writes a manifest and a summary") {
    TempDir d;
    const auto lat = d.write("a1.json", kA1);
    const auto gens = d.write("gens.json", kExp);
    const Run text = run({"build", "--lattice", lat, "--generators", gens, "--max-degree", "3"});
    CHECK(text.code == 0);
    CHECK(text.out.find("degree") != std::string::npos);

    const auto path = d.file("m.json");
    const Run js = run({"build", "--lattice", lat, "--generators", gens, "--max-degree", "3", "-o", path});
    REQUIRE(js.code == 0);
    const Json m = Json::parse(slurp(path));
    CHECK(m["scope"] == "degrees<=3");
    CHECK(m["cutoff"] == 3);
    CHECK(m["degrees"]["1"]["basis_rank"] == 3);
    CHECK(m["degrees"]["1"]["li"] == true);

    // same inputs, same bytes
    const auto again = d.file("m2.json");
    run({"build", "--lattice", lat, "--generators", gens, "--max-degree", "3", "-o", again});
    CHECK(slurp(path) == slurp(again));
}

TEST_CASE("empty generator set gives the vacuum line") {
    TempDir d;
    const auto path = d.file("m.json");
    const Run r = run({"build", "--lattice", d.write("a1.json", kA1), "--generators", d.write("g.json", "[]"),
                       "--max-degree", "2", "-o", path});
    REQUIRE(r.code == 0);
    const Json m = Json::parse(slurp(path));
    CHECK(m["degrees"]["0"]["basis_rank"] == 1);
    CHECK(m["degrees"]["1"]["basis_rank"] == 0);
    CHECK(m["degrees"]["2"]["basis_rank"] == 0);
}

TEST_CASE("input errors exit with 1") {
    TempDir d;
    const auto gens = d.write("gens.json", kExp);
    const Run odd = run({"build", "--lattice", d.write("odd.json", R"({"rank": 1, "gram": [[3]]})"), "--generators", gens,
                         "--max-degree", "2"});
    CHECK(odd.code == 1);
    CHECK(odd.err.find("lattice not even") != std::string::npos);
    CHECK(run({"verify", "--manifest", d.file("missing.json")}).code == 1);
    CHECK(run({"build", "--lattice", d.write("a1.json", kA1), "--generators", gens}).code == 1);
    CHECK(run({"build", "--lattice", d.file("a1.json"), "--generators", d.write("bad.json", R"j(["e(1) +"])j"),
               "--max-degree", "2"})
              .code == 1);
    CHECK(run({"frobnicate"}).code == 1);
    CHECK(run({"build", "--no-such-flag"}).code == 1);
}

TEST_CASE("saturation past the pass limit exits with 2") {
    TempDir d;
    const Run r = run({"build", "--lattice", d.write("a1.json", kA1), "--generators", d.write("g.json", kExp),
                       "--max-degree", "3", "--iter-bound", "1"});
    CHECK(r.code == 2);
    CHECK(r.err.find("pass") != std::string::npos);
}

TEST_CASE("verify passes on a built manifest and fails on a corrupted one") {
    TempDir d;
    const auto path = d.file("m.json");
    REQUIRE(run({"build", "--lattice", d.write("a1.json", kA1), "--generators", d.write("g.json", kExp),
                 "--max-degree", "3", "-o", path})
                .code == 0);
    const Run ok = run({"verify", "--manifest", path, "--format", "json", "--samples", "50"});
    CHECK(ok.code == 0);
    const Json rep = Json::parse(ok.out);
    CHECK(rep["pass"] == true);
    CHECK(rep["scope"] == "degrees<=3");
    CHECK(rep["checks"].size() >= 5);

    Json m = Json::parse(slurp(path));
    m["degrees"]["1"]["gram"][0][0] = "7";
    const auto bad = d.write("bad.json", m.dump());
    const Run fail = run({"verify", "--manifest", bad, "--suite", "manifest-consistency"});
    CHECK(fail.code == 3);
    CHECK(fail.out.find("FAIL") != std::string::npos);

    // a non-integral stored Gram entry fails the integrality check with a witness
    m = Json::parse(slurp(path));
    m["degrees"]["1"]["gram"][0][0] = "1/2";
    const Run li = run({"verify", "--manifest", d.write("half.json", m.dump()), "--format", "json", "--samples", "20"});
    CHECK(li.code == 3);
    const Json lrep = Json::parse(li.out);
    bool saw = false;
    for (const auto& c : lrep["checks"])
        if (c["id"] == "lattice-integral") {
            saw = true;
            CHECK(c["status"] == "FAIL");
            CHECK(c["detail"].contains("witness"));
        }
    CHECK(saw);
}

TEST_CASE("dihedral report") {
    const Run r = run({"dihedral2a"});
    CHECK(r.code == 0);
    CHECK(r.out.find("17/16") != std::string::npos);
    const Run js = run({"dihedral2a", "--format", "json"});
    CHECK(js.code == 0);
    CHECK(Json::parse(js.out).is_object());
    CHECK(run({"verify", "--suite", "dihedral2a"}).code == 0);
}

TEST_CASE("rescale, dual and nli-transfer") {
    TempDir d;
    const auto path = d.file("m.json");
    REQUIRE(run({"build", "--lattice", d.write("a1.json", kA1), "--generators", d.write("g.json", kExp),
                 "--max-degree", "3", "-o", path})
                .code == 0);
    const Run rs = run({"rescale", "--manifest", path, "--scale-degree", "1", "--scale", "1/2", "--format", "json"});
    REQUIRE(rs.code == 0);
    const Json r = Json::parse(rs.out);
    CHECK(r["m1"] == "4");
    CHECK(r["m2"] == "1");
    CHECK(run({"rescale", "--manifest", path, "--scale-degree", "1", "--scale", "-1"}).code == 1);

    CHECK(run({"dual", "--manifest", path}).code == 0);
    // default action is the lift of -1
    const Run tel = run({"tel", "--manifest", path, "--format", "json"});
    CHECK(tel.code == 0);
    CHECK(Json::parse(tel.out).is_object());
    const Run nli = run({"nli-transfer", "--manifest", path, "--manifest2", path, "--format", "json"});
    CHECK(nli.code == 0);
    CHECK(Json::parse(nli.out)["j_into_k"] == "1");
}

}  // TEST_SUITE
