#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace voaforms::cli {

enum ExitCode : int { kPass = 0, kInputError = 1, kNonConvergence = 2, kVerificationFailure = 3 };

struct RunConfig {
    std::string subcommand;
    std::string lattice, generators, manifest;
    std::string manifest2, generators2;
    std::string action, basis, form, algebra;
    std::string output;
    int max_degree = -1;
    int gen_degree = -1;
    int iter_bound = 50;
    std::uint64_t seed = 1;
    std::size_t samples = 200;
    std::string format = "text";
    std::string truncate = "error";
    std::string suite = "all";
    int scale_degree = -1;
    std::string scale = "1";

    /// Throws InputError on N < t, t < 0 or iter_bound < 1.
    void validate() const;
};

/// args excludes the program name. Returns one of ExitCode.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace voaforms::cli
