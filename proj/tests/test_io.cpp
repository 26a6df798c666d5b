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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "gtest/gtest.h"
#include "pepfold/error.hpp"
#include "pepfold/io.hpp"

using namespace pepfold;

namespace {

std::string atom(int serial, const char* name, char altloc, const char* res, char chain, int seq,
                 double x, double y, double z) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "ATOM  %5d %-4s%c%3s %c%4d    %8.3f%8.3f%8.3f  1.00  0.00\n",
                  serial, name, altloc, res, chain, seq, x, y, z);
    return buf;
}

std::string full_table_csv(double asym = 0.0) {
    const std::string codes(kStandardResidues);
    std::ostringstream out;
    out << ",";
    for (std::size_t i = 0; i < codes.size(); ++i)
        out << codes[i] << (i + 1 < codes.size() ? "," : "\n");
    for (std::size_t i = 0; i < codes.size(); ++i) {
        out << codes[i];
        for (std::size_t j = 0; j < codes.size(); ++j) {
            double v = -1.0 - 0.01 * (i + j);
            if (i == 0 && j == 1) v += asym;
            out << "," << v;
        }
        out << "\n";
    }
    return out.str();
}

}  // namespace

TEST(sequence, parse) {
    EXPECT_EQ(parse_sequence(" ggy ml\tg\n"), "GGYMLG");
    try {
        parse_sequence("GGBX");
        FAIL();
    } catch (const DataError& e) {
        EXPECT_NE(std::string(e.what()).find("position 3"), std::string::npos) << e.what();
    }
    EXPECT_THROW(parse_sequence("  "), DataError);
}

TEST(mj_table, full_and_triangular) {
    std::istringstream full(full_table_csv());
    const auto t = parse_mj_table(full);
    EXPECT_DOUBLE_EQ(t('A', 'C'), -1.01);
    EXPECT_DOUBLE_EQ(t('C', 'A'), -1.01);
    const auto s = load_mj_table(PEPFOLD_TEST_DATA "/mj_synthetic.csv");
    EXPECT_DOUBLE_EQ(s('A', 'A'), -1.0);
    EXPECT_DOUBLE_EQ(s('A', 'C'), s('C', 'A'));
}

TEST(mj_table, errors) {
    std::istringstream asym(full_table_csv(0.5));
    EXPECT_THROW(parse_mj_table(asym), DataError);

    auto text = full_table_csv();
    text.replace(text.find("-1.05"), 5, "abc");
    std::istringstream bad(text);
    try {
        parse_mj_table(bad);
        FAIL();
    } catch (const DataError& e) {
        EXPECT_NE(std::string(e.what()).find("abc"), std::string::npos);
    }

    auto missing = full_table_csv();
    missing = missing.substr(0, missing.rfind("Y,"));
    std::istringstream short_table(missing);
    try {
        parse_mj_table(short_table);
        FAIL();
    } catch (const DataError& e) {
        EXPECT_NE(std::string(e.what()).find("'Y'"), std::string::npos) << e.what();
    }
    EXPECT_THROW(load_mj_table("/nonexistent/table.csv"), DataError);
    MJTable t;
    EXPECT_THROW(t('B', 'A'), DataError);
}

TEST(pdb, extracts_ca_in_order) {
    std::string pdb = "HEADER    TEST\n";
    pdb += atom(1, " N  ", ' ', "GLY", 'A', 1, 9, 9, 9);
    pdb += atom(2, " CA ", ' ', "GLY", 'A', 1, 0, 0, 0);
    pdb += atom(3, " CA ", 'A', "TYR", 'A', 2, 3.8, 0, 0);
    pdb += atom(4, " CA ", 'B', "TYR", 'A', 2, 50, 50, 50);
    pdb += atom(5, " CA ", ' ', "MET", 'A', 3, 3.8, 3.8, 0);
    pdb += atom(6, " CA ", ' ', "LEU", 'B', 1, 7, 7, 7);
    std::istringstream in(pdb);
    const auto c = parse_pdb_ca(in);
    EXPECT_EQ(c.sequence, "GYM");
    EXPECT_EQ(c.chain, 'A');
    ASSERT_EQ(c.structure.size(), 3u);
    EXPECT_DOUBLE_EQ(c.structure.coords[1].x(), 3.8);
    EXPECT_EQ(c.residue_numbers, (std::vector<int>{1, 2, 3}));

    std::istringstream in_b(pdb);
    PdbOptions o;
    o.chain = 'B';
    EXPECT_EQ(parse_pdb_ca(in_b, o).sequence, "L");
}

TEST(pdb, models) {
    std::string pdb = "MODEL        1\n" + atom(1, " CA ", ' ', "GLY", 'A', 1, 0, 0, 0) +
                      "ENDMDL\nMODEL        2\n" + atom(1, " CA ", ' ', "GLY", 'A', 1, 5, 0, 0) +
                      "ENDMDL\n";
    std::istringstream first(pdb);
    EXPECT_DOUBLE_EQ(parse_pdb_ca(first).structure.coords[0].x(), 0.0);
    std::istringstream second(pdb);
    PdbOptions o;
    o.model = 2;
    EXPECT_DOUBLE_EQ(parse_pdb_ca(second, o).structure.coords[0].x(), 5.0);
}

TEST(pdb, errors) {
    std::istringstream none("HEADER\nEND\n");
    try {
        parse_pdb_ca(none);
        FAIL();
    } catch (const DataError& e) {
        EXPECT_NE(std::string(e.what()).find("no CA"), std::string::npos);
    }
    std::istringstream gap(atom(1, " CA ", ' ', "GLY", 'A', 1, 0, 0, 0) +
                           atom(2, " CA ", ' ', "GLY", 'A', 3, 0, 0, 0));
    EXPECT_THROW(parse_pdb_ca(gap), DataError);
    auto bad = atom(1, " CA ", ' ', "GLY", 'A', 1, 0, 0, 0);
    bad.replace(32, 4, "x.yz");
    std::istringstream malformed(bad);
    EXPECT_THROW(parse_pdb_ca(malformed), DataError);
}

TEST(samples, round_trip) {
    SampleFile f;
    f.header["source"] = "sa";
    f.samples.add(parse_bits("01101"), -1.25, 3, "sa");
    f.samples.add(parse_bits("00001"), 0.1 + 0.2, 1, "sa");
    std::stringstream ss;
    write_samples(ss, f);
    const auto g = read_samples(ss);
    EXPECT_EQ(g.header.at("source"), "sa");
    ASSERT_EQ(g.samples.size(), 2u);
    EXPECT_EQ(g.samples.records()[0].energy, -1.25);
    EXPECT_EQ(g.samples.records()[1].energy, 0.1 + 0.2);
    EXPECT_EQ(g.samples.records()[0].count, 3u);
}

TEST(samples, malformed) {
    std::istringstream mixed("01101 1 0\n011 1 0\n");
    EXPECT_THROW(read_samples(mixed), DataError);
    std::istringstream junk("01101 one 0\n");
    EXPECT_THROW(read_samples(junk), DataError);
}

TEST(polynomial_json, round_trip) {
    BinaryPolynomial p(6, {{{}, 0.1}, {{0, 3}, -2.5}, {{1, 2, 5}, 1e-17}});
    const auto j = polynomial_to_json(p);
    EXPECT_EQ(polynomial_from_json(nlohmann::json::parse(j.dump())), p);
}

TEST(manifest, round_trip_and_digest) {
    RunManifest m;
    m.sequence = "GGYMLG";
    m.mj_digest = "abc";
    m.axis_seed = 7;
    m.sa_seed = 9;
    m.penalties.lambda1 = 2.5;
    m.num_qubits = 25;
    const auto back = RunManifest::from_json(m.to_json());
    EXPECT_EQ(back.digest(), m.digest());
    EXPECT_EQ(back.sa_seed, std::optional<std::uint64_t>(9));
    EXPECT_FALSE(back.vqe_seed.has_value());
    RunManifest other = m;
    other.axis_seed = 8;
    EXPECT_NE(other.digest(), m.digest());
}

TEST(hashing, sha256_known_vector) {
    EXPECT_EQ(sha256_hex("abc"),
              "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(files, atomic_write) {
    const auto dir = std::filesystem::temp_directory_path() / "pepfold_io_test";
    std::filesystem::create_directories(dir);
    atomic_write(dir / "x.txt", "one");
    atomic_write(dir / "x.txt", "two");
    std::ifstream in(dir / "x.txt");
    std::string s;
    in >> s;
    EXPECT_EQ(s, "two");
    EXPECT_EQ(file_sha256(dir / "x.txt"), sha256_hex("two"));
    std::filesystem::remove_all(dir);
}

TEST(format, shortest_round_trip) {
    EXPECT_EQ(format_double(0.5), "0.5");
    EXPECT_EQ(std::stod(format_double(0.1 + 0.2)), 0.1 + 0.2);
}
