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

#include "pepfold/io.hpp"

#include <openssl/evp.h>
#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <vector>

#include "pepfold/error.hpp"

namespace pepfold {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

bool parse_number(const std::string& text, double& out) {
    if (text.empty()) return false;
    const char* first = text.data() + (text[0] == '+' ? 1 : 0);
    const auto res = std::from_chars(first, text.data() + text.size(), out);
    return res.ec == std::errc{} && res.ptr == text.data() + text.size();
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

char one_letter(const std::string& res) {
    static const std::map<std::string, char> table = {
        {"ALA", 'A'}, {"ARG", 'R'}, {"ASN", 'N'}, {"ASP", 'D'}, {"CYS", 'C'},
        {"GLN", 'Q'}, {"GLU", 'E'}, {"GLY", 'G'}, {"HIS", 'H'}, {"ILE", 'I'},
        {"LEU", 'L'}, {"LYS", 'K'}, {"MET", 'M'}, {"PHE", 'F'}, {"PRO", 'P'},
        {"SER", 'S'}, {"THR", 'T'}, {"TRP", 'W'}, {"TYR", 'Y'}, {"VAL", 'V'},
    };
    const auto it = table.find(res);
    return it == table.end() ? 'X' : it->second;
}

}  // namespace

std::string parse_sequence(std::string_view text) {
    std::string out;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const unsigned char c = static_cast<unsigned char>(text[i]);
        if (std::isspace(c)) continue;
        const char up = static_cast<char>(std::toupper(c));
        if (kStandardResidues.find(up) == std::string_view::npos) {
            throw DataError("unknown residue code '" + std::string(1, text[i]) + "' at position " +
                            std::to_string(i + 1));
        }
        out.push_back(up);
    }
    if (out.empty()) throw DataError("empty sequence");
    return out;
}

MJTable parse_mj_table(std::istream& in) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> line_numbers;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        rows.push_back(split_csv(t));
        line_numbers.push_back(lineno);
    }
    if (rows.empty()) throw DataError("contact table is empty");

    // Header: optional corner cell, then residue codes.
    std::vector<char> columns;
    for (std::size_t c = 0; c < rows[0].size(); ++c) {
        const auto& cell = rows[0][c];
        if (c == 0 && (cell.empty() || cell.size() > 1)) continue;
        if (cell.size() != 1) {
            throw DataError("contact table header cell '" + cell + "' is not a one-letter code");
        }
        columns.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(cell[0]))));
    }
    for (const char r : kStandardResidues) {
        if (std::count(columns.begin(), columns.end(), r) != 1) {
            throw DataError(std::string("contact table header is missing residue '") + r +
                            "' or lists it twice");
        }
    }
    if (columns.size() != 20) {
        throw DataError("contact table header has " + std::to_string(columns.size()) +
                        " codes; expected the 20 standard residues");
    }

    std::array<std::array<std::optional<double>, 20>, 20> cells{};
    std::vector<char> row_labels;
    bool triangular = true, full = true;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.empty() || row[0].size() != 1) {
            throw DataError("line " + std::to_string(line_numbers[r]) +
                            ": row must start with a one-letter residue code");
        }
        const char label = static_cast<char>(std::toupper(static_cast<unsigned char>(row[0][0])));
        MJTable::index_of(label);
        row_labels.push_back(label);
        const std::size_t values = row.size() - 1;
        const std::size_t pos = row_labels.size() - 1;
        full = full && values == 20;
        triangular = triangular && pos < 20 && values == pos + 1 && columns[pos] == label;
        for (std::size_t c = 0; c < values && c < 20; ++c) {
            double v = 0.0;
            if (!parse_number(row[c + 1], v)) {
                throw DataError("line " + std::to_string(line_numbers[r]) + ": non-numeric cell '" +
                                row[c + 1] + "' in column " + std::string(1, columns[c]));
            }
            cells[MJTable::index_of(label)][MJTable::index_of(columns[c])] = v;
        }
    }
    for (const char res : kStandardResidues) {
        if (std::find(row_labels.begin(), row_labels.end(), res) == row_labels.end()) {
            throw DataError(std::string("contact table has no row for residue '") + res + "'");
        }
    }
    if (row_labels.size() != 20 || (!full && !triangular)) {
        throw DataError(
            "contact table body must be a full 20x20 matrix or a lower triangle in "
            "header order");
    }

    MJTable table;
    for (std::size_t i = 0; i < 20; ++i) {
        for (std::size_t j = 0; j < 20; ++j) {
            const auto& a = cells[i][j];
            const auto& b = cells[j][i];
            const char ri = kStandardResidues[i], rj = kStandardResidues[j];
            if (a && b) {
                if (std::abs(*a - *b) > 1e-9) {
                    throw DataError(std::string("contact table is not symmetric at (") + ri + ", " +
                                    rj + ")");
                }
                table.set(ri, rj, *a);
            } else if (a) {
                table.set(ri, rj, *a);
            } else if (b) {
                table.set(ri, rj, *b);
            } else {
                throw DataError(std::string("contact table has no value for (") + ri + ", " + rj +
                                ")");
            }
        }
    }
    return table;
}

MJTable load_mj_table(const std::filesystem::path& path) {
    std::istringstream in(read_file(path));
    return parse_mj_table(in);
}

PdbChain parse_pdb_ca(std::istream& in, const PdbOptions& options) {
    struct Atom {
        int resseq;
        char icode;
        std::string resname;
        Eigen::Vector3d xyz;
    };
    std::vector<Atom> atoms;
    std::optional<char> chain = options.chain;
    std::string line;
    std::size_t lineno = 0;
    bool in_model = false, seen_model = false, done = false;

    auto coord = [&](std::size_t col, const char* axis) {
        double v = 0.0;
        if (line.size() < col + 8 || !parse_number(trim(line.substr(col, 8)), v)) {
            throw DataError("line " + std::to_string(lineno) + ": malformed " + axis +
                            " coordinate");
        }
        return v;
    };

    while (!done && std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::string record = line.substr(0, 6);
        if (record.rfind("MODEL", 0) == 0) {
            int serial = 0;
            const auto field = trim(line.size() > 10 ? line.substr(10) : std::string{});
            std::from_chars(field.data(), field.data() + field.size(), serial);
            in_model = !options.model ? !seen_model : serial == *options.model;
            seen_model = true;
            continue;
        }
        if (record.rfind("ENDMDL", 0) == 0) {
            if (in_model) done = true;
            in_model = false;
            continue;
        }
        if (seen_model && !in_model) continue;
        if (record != "ATOM  ") continue;
        if (line.size() < 54) {
            throw DataError("line " + std::to_string(lineno) + ": ATOM record too short");
        }
        if (trim(line.substr(12, 4)) != "CA") continue;
        const char altloc = line[16];
        if (altloc != ' ' && altloc != 'A') continue;
        const char ch = line[21];
        if (!chain) chain = ch;
        if (ch != *chain) continue;
        int resseq = 0;
        const auto rs = trim(line.substr(22, 4));
        const auto res = std::from_chars(rs.data(), rs.data() + rs.size(), resseq);
        if (res.ec != std::errc{}) {
            throw DataError("line " + std::to_string(lineno) + ": malformed residue number");
        }
        Atom a{resseq, line[26], trim(line.substr(17, 3)),
               Eigen::Vector3d(coord(30, "x"), coord(38, "y"), coord(46, "z"))};
        const bool duplicate = std::any_of(atoms.begin(), atoms.end(), [&](const Atom& b) {
            return b.resseq == a.resseq && b.icode == a.icode;
        });
        if (!duplicate) atoms.push_back(std::move(a));
    }
    if (options.model && !seen_model) {
        throw DataError("PDB has no MODEL " + std::to_string(*options.model));
    }
    if (atoms.empty()) throw DataError("no CA atoms found in PDB input");

    std::stable_sort(atoms.begin(), atoms.end(),
                     [](const Atom& a, const Atom& b) { return a.resseq < b.resseq; });
    PdbChain out;
    out.chain = *chain;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        if (i > 0 && atoms[i].icode == ' ' && atoms[i].resseq > atoms[i - 1].resseq + 1) {
            throw DataError("gap in residue numbering between " +
                            std::to_string(atoms[i - 1].resseq) + " and " +
                            std::to_string(atoms[i].resseq));
        }
        out.structure.coords.push_back(atoms[i].xyz);
        out.sequence.push_back(one_letter(atoms[i].resname));
        out.residue_numbers.push_back(atoms[i].resseq);
    }
    return out;
}

PdbChain load_pdb_ca(const std::filesystem::path& path, const PdbOptions& options) {
    std::istringstream in(read_file(path));
    return parse_pdb_ca(in, options);
}

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

void write_samples(std::ostream& out, const SampleFile& file) {
    for (const auto& [key, value] : file.header) out << "# " << key << ": " << value << '\n';
    for (const auto& r : file.samples.records()) {
        out << to_string(r.bits) << ' ' << r.count << ' ' << format_double(r.energy) << '\n';
    }
}

SampleFile read_samples(std::istream& in) {
    SampleFile file;
    std::string line;
    std::size_t lineno = 0;
    std::optional<std::size_t> width;
    std::vector<Sample> rows;
    while (std::getline(in, line)) {
        ++lineno;
        const auto t = trim(line);
        if (t.empty()) continue;
        if (t[0] == '#') {
            const auto colon = t.find(':');
            if (colon != std::string::npos) {
                file.header[trim(std::string_view(t).substr(1, colon - 1))] =
                    trim(std::string_view(t).substr(colon + 1));
            }
            continue;
        }
        std::istringstream ls(t);
        std::string bits_text, count_text, energy_text;
        if (!(ls >> bits_text >> count_text >> energy_text)) {
            throw DataError("line " + std::to_string(lineno) +
                            ": expected 'bitstring count energy'");
        }
        Bits bits = parse_bits(bits_text);
        if (bits.size() != bits_text.size() || bits.empty()) {
            throw DataError("line " + std::to_string(lineno) + ": malformed bitstring");
        }
        if (width && *width != bits.size()) {
            throw DataError("line " + std::to_string(lineno) + ": bitstring length " +
                            std::to_string(bits.size()) + " differs from " +
                            std::to_string(*width));
        }
        width = bits.size();
        std::size_t count = 0;
        const auto cr =
            std::from_chars(count_text.data(), count_text.data() + count_text.size(), count);
        double energy = 0.0;
        if (cr.ec != std::errc{} || cr.ptr != count_text.data() + count_text.size() || count == 0) {
            throw DataError("line " + std::to_string(lineno) + ": bad count '" + count_text + "'");
        }
        if (!parse_number(energy_text, energy)) {
            throw DataError("line " + std::to_string(lineno) + ": bad energy '" + energy_text +
                            "'");
        }
        rows.push_back({std::move(bits), energy, count, {}});
    }
    const auto src = file.header.find("source");
    const std::string source = src == file.header.end() ? "" : src->second;
    for (const auto& r : rows) file.samples.add(r.bits, r.energy, r.count, source);
    file.samples.sort();
    return file;
}

nlohmann::json polynomial_to_json(const BinaryPolynomial& poly) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [vars, c] : poly.terms()) terms.push_back({vars, c});
    return {{"num_vars", poly.num_vars()}, {"terms", terms}};
}

BinaryPolynomial polynomial_from_json(const nlohmann::json& j) {
    try {
        BinaryPolynomial poly(j.at("num_vars").get<std::size_t>());
        for (const auto& t : j.at("terms")) {
            poly.add_term(t.at(0).get<Monomial>(), t.at(1).get<double>());
        }
        return poly;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("malformed polynomial JSON: ") + e.what());
    }
}

nlohmann::json RunManifest::to_json() const {
    nlohmann::json j = {
        {"sequence", sequence},
        {"mj_digest", mj_digest},
        {"sign_convention", sign_convention},
        {"continuity", continuity},
        {"axis_seed", axis_seed},
        {"lambda0", penalties.lambda0},
        {"lambda1", penalties.lambda1},
        {"lambda2", penalties.lambda2},
        {"lambda3", penalties.lambda3},
        {"c_obj", penalties.c_obj},
        {"c_continuity", penalties.c_continuity},
        {"c_overlap", penalties.c_overlap},
        {"num_qubits", num_qubits},
        {"tool_version", tool_version},
    };
    j["sa_seed"] = sa_seed ? nlohmann::json(*sa_seed) : nlohmann::json(nullptr);
    j["vqe_seed"] = vqe_seed ? nlohmann::json(*vqe_seed) : nlohmann::json(nullptr);
    return j;
}

RunManifest RunManifest::from_json(const nlohmann::json& j) {
    try {
        RunManifest m;
        m.sequence = j.at("sequence").get<std::string>();
        m.mj_digest = j.at("mj_digest").get<std::string>();
        m.sign_convention = j.at("sign_convention").get<std::string>();
        m.continuity = j.value("continuity", std::string("literal"));
        m.axis_seed = j.at("axis_seed").get<std::uint64_t>();
        m.penalties.lambda0 = j.at("lambda0").get<double>();
        m.penalties.lambda1 = j.at("lambda1").get<double>();
        m.penalties.lambda2 = j.at("lambda2").get<double>();
        m.penalties.lambda3 = j.at("lambda3").get<double>();
        m.penalties.c_obj = j.value("c_obj", 0.0);
        m.penalties.c_continuity = j.value("c_continuity", 0.0);
        m.penalties.c_overlap = j.value("c_overlap", 0.0);
        m.num_qubits = j.at("num_qubits").get<std::size_t>();
        m.tool_version = j.value("tool_version", std::string(kToolVersion));
        if (j.contains("sa_seed") && !j["sa_seed"].is_null())
            m.sa_seed = j["sa_seed"].get<std::uint64_t>();
        if (j.contains("vqe_seed") && !j["vqe_seed"].is_null())
            m.vqe_seed = j["vqe_seed"].get<std::uint64_t>();
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("malformed manifest: ") + e.what());
    }
}

std::string RunManifest::digest() const { return sha256_hex(to_json().dump()); }

std::string sha256_hex(std::string_view data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("SHA-256 failed");
    }
    std::ostringstream ss;
    for (unsigned int i = 0; i < len; ++i) {
        ss << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
    }
    return ss.str();
}

std::string file_sha256(const std::filesystem::path& path) { return sha256_hex(read_file(path)); }

void atomic_write(const std::filesystem::path& path, std::string_view content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw DataError("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace pepfold
