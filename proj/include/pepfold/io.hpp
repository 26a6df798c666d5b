// Copyright 2026 The pepfold Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <json.hpp>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "pepfold/analysis.hpp"
#include "pepfold/binary_polynomial.hpp"
#include "pepfold/hamiltonian.hpp"
#include "pepfold/solvers.hpp"

namespace pepfold {

inline constexpr std::string_view kToolVersion = "0.1.0";

/// Environment variable naming the default contact-table file.
inline constexpr const char* kMjPathEnv = "PEPFOLD_MJ_TABLE";

/// Uppercases, drops whitespace, and validates one-letter residue codes.
/// Throws DataError naming the first bad code and its position.
std::string parse_sequence(std::string_view text);

/// Reads a CSV contact table: one header row and one header column of
/// one-letter codes, with either a full 20x20 body or a lower triangle.
MJTable parse_mj_table(std::istream& in);
MJTable load_mj_table(const std::filesystem::path& path);

struct PdbChain {
    CartesianStructure structure;
    /// One-letter codes of the extracted residues ('X' if unknown).
    std::string sequence;
    char chain = ' ';
    std::vector<int> residue_numbers;
};

struct PdbOptions {
    std::optional<char> chain;
    /// MODEL serial number; the first model when absent.
    std::optional<int> model;
};

/// Extracts C-alpha ATOM records ordered by residue number. Alternate
/// locations other than blank/'A' are skipped; a gap in residue numbering is
/// rejected. Throws DataError.
PdbChain parse_pdb_ca(std::istream& in, const PdbOptions& options = {});
PdbChain load_pdb_ca(const std::filesystem::path& path, const PdbOptions& options = {});

/// Sample file: "# key: value" header lines, then "bitstring count energy".
struct SampleFile {
    std::map<std::string, std::string> header;
    SampleSet samples;
};

void write_samples(std::ostream& out, const SampleFile& file);
/// Throws DataError on malformed lines or non-uniform bitstring lengths.
SampleFile read_samples(std::istream& in);

/// Shortest decimal form that parses back to the same double.
std::string format_double(double value);

nlohmann::json polynomial_to_json(const BinaryPolynomial& poly);
BinaryPolynomial polynomial_from_json(const nlohmann::json& j);

/// Reproducibility envelope for one run.
struct RunManifest {
    std::string sequence;
    std::string mj_digest;
    std::string sign_convention = "negated";
    std::string continuity = "literal";
    std::uint64_t axis_seed = 0;
    std::optional<std::uint64_t> sa_seed;
    std::optional<std::uint64_t> vqe_seed;
    PenaltyFactors penalties;
    std::size_t num_qubits = 0;
    std::string tool_version = std::string(kToolVersion);

    nlohmann::json to_json() const;
    static RunManifest from_json(const nlohmann::json& j);
    /// SHA-256 of the canonical JSON dump.
    std::string digest() const;
};

std::string sha256_hex(std::string_view data);
std::string file_sha256(const std::filesystem::path& path);

/// Writes to a temporary sibling and renames over `path`.
void atomic_write(const std::filesystem::path& path, std::string_view content);

}  // namespace pepfold
