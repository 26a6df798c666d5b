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

#include "pepfold/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <optional>
#include <ostream>
#include <sstream>

#include "pepfold/error.hpp"
#include "pepfold/hamiltonian.hpp"
#include "pepfold/io.hpp"
#include "pepfold/lattice.hpp"
#include "pepfold/quantum.hpp"
#include "pepfold/solvers.hpp"

namespace pepfold {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

class UsageError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

struct CommonOptions {
    std::string sequence;
    std::string mj;
    std::string mj_sign = "negated";
    std::uint64_t seed = 0;
    std::optional<double> lambda1, lambda2, lambda3;
    bool strict_continuity = false;
    std::string out = ".";
    bool json = false;
};

struct SolveOptions {
    std::string method = "sa";
    std::string poly;
    std::size_t restarts = 20;
    std::size_t sweeps = 2000;
    std::optional<double> t_start, t_end;
    std::optional<std::uint64_t> sa_seed, vqe_seed;
    bool quadratic = false;
    std::size_t cap = kDefaultBruteForceCap;
    std::size_t layers = 2;
    std::string entanglement = "linear";
    std::size_t shots = 4000;
    double cvar_alpha = 0.1;
    std::size_t max_iter = 500;
    std::string resume_from;
    unsigned threads = 0;
};

struct AnalyzeOptions {
    std::string samples;
    std::string reference;
    std::string chain;
    std::optional<int> model;
    std::size_t bins = 30;
    bool write_pauli = false;
};

void add_common(CLI::App* app, CommonOptions& o, bool need_sequence) {
    auto* seq = app->add_option("--sequence", o.sequence, "One-letter residue sequence");
    if (need_sequence) seq->required();
    app->add_option("--mj", o.mj, std::string("Contact table CSV (default: $") + kMjPathEnv + ")");
    app->add_option("--mj-sign", o.mj_sign, "Objective weight sign: negated or literal")
        ->check(CLI::IsMember({"negated", "literal"}));
    app->add_option("--seed", o.seed, "Base seed (axis selectors; solver default)");
    app->add_option("--lambda1", o.lambda1, "Continuity penalty override");
    app->add_option("--lambda2", o.lambda2, "Overlap penalty override");
    app->add_option("--lambda3", o.lambda3, "Crossing penalty override");
    app->add_flag("--strict-continuity", o.strict_continuity,
                  "Penalize only zero-displacement turns");
    app->add_option("--out", o.out, "Output directory");
    app->add_flag("--json", o.json, "Machine-readable summary on stdout");
}

void add_solver(CLI::App* app, SolveOptions& s) {
    app->add_option("--restarts", s.restarts, "Annealing restarts")->check(CLI::PositiveNumber);
    app->add_option("--sweeps", s.sweeps, "Sweeps per restart")->check(CLI::PositiveNumber);
    app->add_option("--t-start", s.t_start, "Initial temperature");
    app->add_option("--t-end", s.t_end, "Final temperature");
    app->add_option("--sa-seed", s.sa_seed, "Annealing seed (default: --seed)");
    app->add_option("--vqe-seed", s.vqe_seed, "VQE seed (default: --seed)");
    app->add_flag("--quadratic", s.quadratic, "Anneal the quadratic truncation");
    app->add_option("--cap", s.cap, "Brute-force variable cap");
    app->add_option("--layers", s.layers, "Ansatz entangling layers");
    app->add_option("--entanglement", s.entanglement, "linear or circular")
        ->check(CLI::IsMember({"linear", "circular"}));
    app->add_option("--shots", s.shots, "Shots per VQE evaluation")->check(CLI::PositiveNumber);
    app->add_option("--cvar-alpha", s.cvar_alpha, "CVaR fraction in (0, 1]");
    app->add_option("--max-iter", s.max_iter, "VQE objective evaluations");
    app->add_option("--resume-from-params", s.resume_from, "VQE parameter JSON to start from");
    app->add_option("--threads", s.threads, "Worker threads for annealing restarts");
}

void add_analysis(CLI::App* app, AnalyzeOptions& a) {
    app->add_option("--reference", a.reference, "Experimental PDB for RMSD");
    app->add_option("--chain", a.chain, "PDB chain (default: first)");
    app->add_option("--model", a.model, "PDB MODEL serial (default: first)");
    app->add_option("--bins", a.bins, "Free-energy bins per axis")->check(CLI::PositiveNumber);
}

std::string resolve_mj_path(const CommonOptions& o) {
    if (!o.mj.empty()) return o.mj;
    if (const char* env = std::getenv(kMjPathEnv); env && *env) return env;
    throw UsageError(std::string("no contact table: pass --mj or set ") + kMjPathEnv);
}

struct Problem {
    std::string sequence;
    MJTable mj;
    Hamiltonian hamiltonian;
    RunManifest manifest;
};

Problem load_problem(const CommonOptions& o) {
    Problem p;
    p.sequence = parse_sequence(o.sequence);
    const auto path = resolve_mj_path(o);
    p.mj = load_mj_table(path);
    HamiltonianConfig cfg;
    cfg.sign = o.mj_sign == "literal" ? SignConvention::Literal : SignConvention::Negated;
    cfg.continuity = o.strict_continuity ? ContinuityMode::Strict : ContinuityMode::Literal;
    cfg.axis_seed = o.seed;
    cfg.lambda1 = o.lambda1;
    cfg.lambda2 = o.lambda2;
    cfg.lambda3 = o.lambda3;
    p.hamiltonian = build_hamiltonian(p.sequence, p.mj, cfg);

    p.manifest.sequence = p.sequence;
    p.manifest.mj_digest = file_sha256(path);
    p.manifest.sign_convention = o.mj_sign;
    p.manifest.continuity = o.strict_continuity ? "strict" : "literal";
    p.manifest.axis_seed = o.seed;
    p.manifest.penalties = p.hamiltonian.penalties;
    p.manifest.num_qubits = qubit_count(p.sequence.size());
    return p;
}

std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

json penalties_json(const PenaltyFactors& p) {
    return {{"lambda0", p.lambda0},    {"lambda1", p.lambda1}, {"lambda2", p.lambda2},
            {"lambda3", p.lambda3},    {"c_obj", p.c_obj},     {"c_continuity", p.c_continuity},
            {"c_overlap", p.c_overlap}};
}

json build_outputs(const Problem& p, const fs::path& out_dir, bool with_pauli, std::ostream& err) {
    const auto& h = p.hamiltonian;
    if (h.objective.empty()) {
        err << "warning: objective is empty (no non-adjacent bead pairs for N=" << h.beads << ")\n";
    }
    json poly_file = {{"manifest", p.manifest.to_json()},
                      {"polynomial", polynomial_to_json(h.assembled)}};
    atomic_write(out_dir / "polynomial.json", poly_file.dump() + "\n");
    atomic_write(out_dir / "manifest.json", dump_json(p.manifest.to_json()));

    json summary = {
        {"sequence", p.sequence},
        {"beads", h.beads},
        {"num_qubits", h.assembled.num_vars()},
        {"terms",
         {{"objective", h.objective.size()},
          {"continuity", h.continuity.size()},
          {"overlap", h.overlap.size()},
          {"crossing", h.crossing.size()},
          {"assembled", h.assembled.size()}}},
        {"degree", h.assembled.degree()},
        {"penalties", penalties_json(h.penalties)},
        {"axis_seed", h.selectors.seed},
        {"manifest_digest", p.manifest.digest()},
    };
    if (with_pauli) {
        const auto pauli = to_pauli(h.assembled);
        std::ostringstream text;
        write_pauli_text(text, pauli);
        atomic_write(out_dir / "hamiltonian.pauli", text.str());
        json sidecar = {{"num_qubits", pauli.num_qubits},
                        {"num_terms", pauli.terms.size()},
                        {"sequence", p.sequence},
                        {"axis_seed", h.selectors.seed},
                        {"penalties", penalties_json(h.penalties)},
                        {"manifest_digest", p.manifest.digest()}};
        atomic_write(out_dir / "hamiltonian.pauli.json", dump_json(sidecar));
        summary["pauli_terms"] = pauli.terms.size();
    }
    return summary;
}

struct SolveOutput {
    SampleSet samples;
    json summary;
};

SolveOutput run_solver(const BinaryPolynomial& poly, const SolveOptions& s, std::uint64_t seed,
                       RunManifest& manifest, const fs::path& out_dir) {
    SolveOutput r;
    if (s.method == "sa") {
        const BinaryPolynomial search = s.quadratic ? truncate_to_quadratic(poly) : poly;
        auto sched = AnnealSchedule::defaults_for(search);
        sched.sweeps = s.sweeps;
        sched.restarts = s.restarts;
        sched.seed = s.sa_seed.value_or(seed);
        sched.threads = s.threads;
        if (s.t_start) sched.t_start = *s.t_start;
        if (s.t_end) sched.t_end = *s.t_end;
        manifest.sa_seed = sched.seed;
        r.samples = simulated_annealing(search, sched);
        r.samples.rescore(poly);
        r.summary = {{"method", s.quadratic ? "sa-quadratic" : "sa"},
                     {"restarts", sched.restarts},
                     {"sweeps", sched.sweeps},
                     {"t_start", sched.t_start},
                     {"t_end", sched.t_end},
                     {"seed", sched.seed}};
    } else if (s.method == "brute") {
        const auto best = brute_force(poly, s.cap);
        r.samples.add(best.bits, best.energy, 1, "brute");
        r.summary = {{"method", "brute"}, {"cap", s.cap}};
    } else if (s.method == "vqe") {
        if (poly.num_vars() > kDenseQubitCap) {
            throw CapabilityError("VQE needs " + std::to_string(poly.num_vars()) +
                                  " qubits; the statevector cap is " +
                                  std::to_string(kDenseQubitCap));
        }
        const auto h = to_pauli(poly);
        AnsatzConfig ansatz;
        ansatz.num_qubits = h.num_qubits;
        ansatz.layers = s.layers;
        ansatz.entanglement =
            s.entanglement == "circular" ? Entanglement::Circular : Entanglement::Linear;
        VqeConfig cfg;
        cfg.shots = s.shots;
        cfg.cvar_alpha = s.cvar_alpha;
        cfg.max_iterations = s.max_iter;
        cfg.seed = s.vqe_seed.value_or(seed);
        if (!s.resume_from.empty()) {
            std::ifstream in(s.resume_from);
            if (!in) throw DataError("cannot open " + s.resume_from);
            try {
                cfg.initial_theta = json::parse(in).at("theta").get<std::vector<double>>();
            } catch (const json::exception& e) {
                throw DataError(std::string("malformed parameter file: ") + e.what());
            }
        }
        manifest.vqe_seed = cfg.seed;
        auto res = vqe_minimize(h, ansatz, cfg);
        r.samples = std::move(res.samples);
        r.samples.rescore(poly);
        json params = {{"theta", res.theta},
                       {"energy", res.energy},
                       {"layers", ansatz.layers},
                       {"entanglement", s.entanglement},
                       {"num_qubits", ansatz.num_qubits}};
        atomic_write(out_dir / "vqe_params.json", dump_json(params));
        std::ostringstream trace;
        trace << "evaluation,cvar_energy\n";
        for (std::size_t i = 0; i < res.trace.size(); ++i) {
            trace << i << ',' << format_double(res.trace[i]) << '\n';
        }
        atomic_write(out_dir / "vqe_trace.csv", trace.str());
        r.summary = {
            {"method", "vqe"},    {"evaluations", res.evaluations}, {"cvar_energy", res.energy},
            {"shots", cfg.shots}, {"cvar_alpha", cfg.cvar_alpha},   {"seed", cfg.seed}};
    } else {
        throw UsageError("unknown solver '" + s.method + "' (expected sa, brute or vqe)");
    }
    r.summary["best_bitstring"] = to_string(r.samples.best().bits);
    r.summary["best_energy"] = r.samples.best().energy;
    r.summary["distinct_bitstrings"] = r.samples.size();
    return r;
}

void write_sample_file(const fs::path& path, const SampleSet& samples, const RunManifest& m,
                       const std::string& source) {
    SampleFile f;
    f.header["manifest-digest"] = m.digest();
    f.header["sequence"] = m.sequence;
    f.header["source"] = source;
    f.header["num-vars"] = std::to_string(m.num_qubits);
    f.samples = samples;
    std::ostringstream text;
    write_samples(text, f);
    atomic_write(path, text.str());
}

SampleFile load_sample_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    return read_samples(in);
}

std::size_t beads_for(const Bits& bits) {
    if (bits.size() % kBitsPerTurn != 0 || bits.empty()) {
        throw DataError("bitstring length " + std::to_string(bits.size()) +
                        " is not a positive multiple of " + std::to_string(kBitsPerTurn));
    }
    return bits.size() / kBitsPerTurn + 1;
}

json sites_json(const LatticeConformation& c) {
    json a = json::array();
    for (const auto& s : c.positions) a.push_back({s.dx, s.dy, s.dz});
    return a;
}

json coords_json(const CartesianStructure& s) {
    json a = json::array();
    for (const auto& r : s.coords) a.push_back({r.x(), r.y(), r.z()});
    return a;
}

json violations_json(const ViolationReport& v) {
    return {{"overlaps", v.overlaps},
            {"crossings", v.crossings},
            {"degenerate_turns", v.degenerate_turns}};
}

bool fully_extended(const LatticeConformation& c) {
    for (std::size_t t = 1; t + 1 < c.size(); ++t) {
        if (!(c.turn(t) == c.turn(0))) return false;
    }
    return c.size() > 2;
}

struct AnalysisOutput {
    json report;
    std::optional<CartesianStructure> best_structure;
    std::string fes_text;
};

AnalysisOutput analyze_samples(const std::string& sequence, const MJTable& mj, SampleSet samples,
                               const AnalyzeOptions& a, std::ostream& err) {
    samples.sort();
    AnalysisOutput out;
    std::optional<PdbChain> reference;
    if (!a.reference.empty()) {
        PdbOptions po;
        if (!a.chain.empty()) po.chain = a.chain[0];
        po.model = a.model;
        reference = load_pdb_ca(a.reference, po);
        if (reference->structure.size() != sequence.size()) {
            throw DataError("reference has " + std::to_string(reference->structure.size()) +
                            " CA atoms but the sequence has " + std::to_string(sequence.size()) +
                            " residues");
        }
        if (reference->sequence != sequence) {
            err << "warning: reference sequence " << reference->sequence << " differs from input "
                << sequence << "\n";
        }
    }

    json structures = json::array();
    std::vector<FesSample> fes_samples;
    std::vector<double> rmsd_by_ref;
    std::vector<CartesianStructure> accepted;
    std::vector<std::size_t> accepted_record;
    std::size_t rejected = 0, repaired = 0;

    const auto& records = samples.records();
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& rec = records[i];
        const std::size_t beads = beads_for(rec.bits);
        if (beads != sequence.size()) {
            throw DataError("bitstring encodes " + std::to_string(beads) +
                            " beads but the sequence has " + std::to_string(sequence.size()));
        }
        const auto conf = decode_conformation(rec.bits, beads);
        const auto report = detect_violations(conf);
        const auto fixed = repair(conf, report, sequence, mj);
        json entry = {{"bitstring", to_string(rec.bits)},
                      {"count", rec.count},
                      {"energy", rec.energy},
                      {"violations", violations_json(report)}};
        if (!fixed.accepted()) {
            ++rejected;
            entry["status"] = "rejected";
            entry["reason"] = fixed.reason;
            structures.push_back(std::move(entry));
            continue;
        }
        if (fixed.moved_bead) {
            ++repaired;
            entry["status"] = "repaired";
            entry["moved_bead"] = *fixed.moved_bead;
        } else {
            entry["status"] = "valid";
        }
        const auto s = to_angstrom(*fixed.conformation);
        const double rg = radius_of_gyration(s);
        const double ec = contact_energy(s, sequence, mj);
        entry["rg"] = rg;
        entry["e_contact"] = ec;
        double rmsd = 0.0;
        if (reference) {
            rmsd = kabsch_rmsd(s, reference->structure);
            entry["rmsd"] = rmsd;
        }
        const std::size_t ref = accepted.size();
        fes_samples.push_back({ec, rg, ref, rec.count});
        rmsd_by_ref.push_back(rmsd);
        accepted.push_back(s);
        accepted_record.push_back(i);
        structures.push_back(std::move(entry));
    }

    json report = {{"sequence", sequence},
                   {"distinct_bitstrings", records.size()},
                   {"accepted", accepted.size()},
                   {"repaired", repaired},
                   {"rejected", rejected}};
    if (reference) {
        report["reference"] = {{"path", a.reference},
                               {"chain", std::string(1, reference->chain)},
                               {"sequence", reference->sequence}};
    }
    if (!accepted.empty()) {
        // Records are sorted by energy, so the first accepted one is the minimizer.
        const std::size_t rec_index = accepted_record.front();
        const auto& best_rec = records[rec_index];
        const auto conf = decode_conformation(best_rec.bits, sequence.size());
        json best = structures[rec_index];
        best["coords"] = coords_json(accepted.front());
        report["best"] = best;
        out.best_structure = accepted.front();
        if (fully_extended(conf)) {
            err << "warning: the lowest-energy sampled structure is a fully extended chain\n";
            report["warnings"].push_back("minimum attained at a fully extended chain");
        }

        const auto grid = build_fes(fes_samples, a.bins, a.bins);
        const auto reps = select_representatives(
            grid, reference ? std::span<const double>(rmsd_by_ref) : std::span<const double>{});
        json members = json::array();
        for (const auto m : reps.members)
            members.push_back(to_string(records[accepted_record[m]].bits));
        json rep_json = {{"bin_e", reps.bin_e},
                         {"bin_rg", reps.bin_rg},
                         {"e_contact_center", grid.e_center(reps.bin_e)},
                         {"rg_center", grid.rg_center(reps.bin_rg)},
                         {"members", members}};
        if (reps.min_rmsd) {
            rep_json["min_rmsd"] = *reps.min_rmsd;
            rep_json["mean_rmsd"] = *reps.mean_rmsd;
            rep_json["min_rmsd_bitstring"] =
                to_string(records[accepted_record[*reps.min_rmsd_member]].bits);
        }
        report["representatives"] = rep_json;
        report["fes"] = {{"bins", a.bins},
                         {"e_range", {grid.e_lo, grid.e_hi}},
                         {"rg_range", {grid.rg_lo, grid.rg_hi}}};

        std::ostringstream fes;
        fes << "# e_contact rg free_energy count\n";
        for (std::size_t ie = 0; ie < grid.bins_e; ++ie) {
            for (std::size_t ir = 0; ir < grid.bins_rg; ++ir) {
                const auto idx = grid.index(ie, ir);
                fes << format_double(grid.e_center(ie)) << ' ' << format_double(grid.rg_center(ir))
                    << ' '
                    << (std::isinf(grid.free_energy[idx]) ? std::string("inf")
                                                          : format_double(grid.free_energy[idx]))
                    << ' ' << grid.counts[idx] << '\n';
            }
            fes << '\n';
        }
        out.fes_text = fes.str();
    } else {
        err << "warning: every sampled structure was rejected\n";
    }
    report["structures"] = std::move(structures);
    out.report = std::move(report);
    return out;
}

void write_analysis(const AnalysisOutput& a, const std::string& sequence, const fs::path& dir) {
    atomic_write(dir / "report.json", dump_json(a.report));
    if (!a.fes_text.empty()) atomic_write(dir / "fes.dat", a.fes_text);
    if (a.best_structure)
        atomic_write(dir / "best.pdb", format_ca_pdb(*a.best_structure, sequence));
}

void print_analysis_summary(const json& report, std::ostream& out) {
    out << "accepted " << report["accepted"] << " of " << report["distinct_bitstrings"]
        << " distinct bitstrings (" << report["repaired"] << " repaired)\n";
    if (report.contains("best")) {
        const auto& b = report["best"];
        out << "best " << b["bitstring"].get<std::string>() << " energy "
            << b["energy"].get<double>() << " Rg " << b["rg"].get<double>() << " E_contact "
            << b["e_contact"].get<double>();
        if (b.contains("rmsd")) out << " RMSD " << b["rmsd"].get<double>();
        out << '\n';
    }
    if (report.contains("representatives") && report["representatives"].contains("min_rmsd")) {
        const auto& r = report["representatives"];
        out << "min-F bin: min RMSD " << r["min_rmsd"].get<double>() << " mean RMSD "
            << r["mean_rmsd"].get<double>() << '\n';
    }
}

BinaryPolynomial load_polynomial(const std::string& path, std::optional<RunManifest>& manifest) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw DataError(std::string("malformed polynomial file: ") + e.what());
    }
    if (j.contains("manifest")) manifest = RunManifest::from_json(j["manifest"]);
    return polynomial_from_json(j.contains("polynomial") ? j["polynomial"] : j);
}

}  // namespace

std::string format_ca_pdb(const CartesianStructure& s, const std::string& sequence) {
    static const std::map<char, const char*> three = {
        {'A', "ALA"}, {'R', "ARG"}, {'N', "ASN"}, {'D', "ASP"}, {'C', "CYS"},
        {'Q', "GLN"}, {'E', "GLU"}, {'G', "GLY"}, {'H', "HIS"}, {'I', "ILE"},
        {'L', "LEU"}, {'K', "LYS"}, {'M', "MET"}, {'F', "PHE"}, {'P', "PRO"},
        {'S', "SER"}, {'T', "THR"}, {'W', "TRP"}, {'Y', "TYR"}, {'V', "VAL"}};
    std::string text;
    char line[96];
    for (std::size_t i = 0; i < s.size(); ++i) {
        const auto it = i < sequence.size() ? three.find(sequence[i]) : three.end();
        const char* res = it == three.end() ? "UNK" : it->second;
        std::snprintf(line, sizeof(line),
                      "ATOM  %5zu  CA  %3s A%4zu    %8.3f%8.3f%8.3f  1.00  0.00           C\n",
                      i + 1, res, i + 1, s.coords[i].x(), s.coords[i].y(), s.coords[i].z());
        text += line;
    }
    text += "END\n";
    return text;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Lattice peptide folding: build, solve, decode and analyze"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kToolVersion));

    CommonOptions common;
    SolveOptions solve;
    AnalyzeOptions analyze;
    std::string samples_path;

    auto* build_cmd = app.add_subcommand("build", "Emit the folding polynomial and manifest");
    add_common(build_cmd, common, true);
    build_cmd->add_flag("--pauli", analyze.write_pauli, "Also export the Pauli-Z Hamiltonian");

    auto* solve_cmd = app.add_subcommand("solve", "Minimize the polynomial");
    solve_cmd->add_option("method", solve.method, "sa, brute or vqe")
        ->required()
        ->check(CLI::IsMember({"sa", "brute", "vqe"}));
    add_common(solve_cmd, common, false);
    add_solver(solve_cmd, solve);
    solve_cmd->add_option("--poly", solve.poly, "polynomial.json from build");

    auto* decode_cmd =
        app.add_subcommand("decode", "Bitstrings to lattice and Angstrom structures");
    decode_cmd->add_option("--samples", samples_path, "Sample file")->required();
    decode_cmd->add_option("--sequence", common.sequence, "Residue sequence (optional)");
    decode_cmd->add_option("--out", common.out, "Output directory");
    decode_cmd->add_flag("--json", common.json, "Machine-readable summary on stdout");

    auto* analyze_cmd =
        app.add_subcommand("analyze", "Metrics, free-energy surface, representatives");
    analyze_cmd->add_option("--samples", samples_path, "Sample file")->required();
    add_common(analyze_cmd, common, true);
    add_analysis(analyze_cmd, analyze);

    auto* pipeline_cmd = app.add_subcommand("pipeline", "build, solve, decode and analyze");
    add_common(pipeline_cmd, common, true);
    add_solver(pipeline_cmd, solve);
    add_analysis(pipeline_cmd, analyze);
    pipeline_cmd->add_option("--solver", solve.method, "sa, brute or vqe")
        ->check(CLI::IsMember({"sa", "brute", "vqe"}));

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        const fs::path out_dir = common.out;
        if (build_cmd->parsed()) {
            const auto problem = load_problem(common);
            const auto summary = build_outputs(problem, out_dir, analyze.write_pauli, err);
            if (common.json) {
                out << dump_json(summary);
            } else {
                out << "sequence " << problem.sequence << ": " << summary["beads"] << " beads, "
                    << summary["num_qubits"] << " qubits, " << summary["terms"]["assembled"]
                    << " terms (degree " << summary["degree"] << ")\n";
                out << "lambda = (" << problem.hamiltonian.penalties.lambda0 << ", "
                    << problem.hamiltonian.penalties.lambda1 << ", "
                    << problem.hamiltonian.penalties.lambda2 << ", "
                    << problem.hamiltonian.penalties.lambda3 << ")\n";
                if (summary.contains("pauli_terms")) {
                    out << summary["pauli_terms"] << " Pauli terms\n";
                }
            }
            return kExitOk;
        }

        if (solve_cmd->parsed()) {
            BinaryPolynomial poly;
            RunManifest manifest;
            if (!solve.poly.empty()) {
                std::optional<RunManifest> m;
                poly = load_polynomial(solve.poly, m);
                if (m) {
                    manifest = *m;
                } else {
                    manifest.num_qubits = poly.num_vars();
                }
            } else {
                if (common.sequence.empty()) {
                    throw UsageError("solve needs --poly or --sequence");
                }
                auto problem = load_problem(common);
                poly = problem.hamiltonian.assembled;
                manifest = problem.manifest;
                build_outputs(problem, out_dir, false, err);
            }
            auto result = run_solver(poly, solve, common.seed, manifest, out_dir);
            write_sample_file(out_dir / "samples.txt", result.samples, manifest,
                              result.summary["method"].get<std::string>());
            atomic_write(out_dir / "manifest.json", dump_json(manifest.to_json()));
            if (common.json) {
                out << dump_json(result.summary);
            } else {
                out << result.summary["method"].get<std::string>() << ": best "
                    << result.summary["best_bitstring"].get<std::string>() << " energy "
                    << format_double(result.summary["best_energy"].get<double>()) << " ("
                    << result.samples.size() << " distinct bitstrings)\n";
            }
            return kExitOk;
        }

        if (decode_cmd->parsed()) {
            const auto file = load_sample_file(samples_path);
            std::string sequence;
            if (!common.sequence.empty()) sequence = parse_sequence(common.sequence);
            json decoded = json::array();
            for (const auto& rec : file.samples.records()) {
                const std::size_t beads = beads_for(rec.bits);
                if (!sequence.empty() && sequence.size() != beads) {
                    throw DataError("bitstring encodes " + std::to_string(beads) +
                                    " beads but the sequence has " +
                                    std::to_string(sequence.size()));
                }
                const auto conf = decode_conformation(rec.bits, beads);
                const auto v = detect_violations(conf);
                json e = {{"bitstring", to_string(rec.bits)},
                          {"count", rec.count},
                          {"energy", rec.energy},
                          {"lattice", sites_json(conf)},
                          {"violations", violations_json(v)}};
                if (v.degenerate_turns.empty()) e["angstrom"] = coords_json(to_angstrom(conf));
                decoded.push_back(std::move(e));
            }
            atomic_write(out_dir / "decoded.json", dump_json(decoded));
            if (common.json) {
                out << dump_json(decoded);
            } else {
                std::size_t clean = 0;
                for (const auto& e : decoded) {
                    const auto& v = e["violations"];
                    if (v["overlaps"].empty() && v["crossings"].empty() &&
                        v["degenerate_turns"].empty()) {
                        ++clean;
                    }
                }
                out << "decoded " << decoded.size() << " bitstrings, " << clean
                    << " violation-free\n";
            }
            return kExitOk;
        }

        if (analyze_cmd->parsed()) {
            const auto sequence = parse_sequence(common.sequence);
            const auto mj = load_mj_table(resolve_mj_path(common));
            const auto file = load_sample_file(samples_path);
            const auto result = analyze_samples(sequence, mj, file.samples, analyze, err);
            write_analysis(result, sequence, out_dir);
            if (common.json) {
                out << dump_json(result.report);
            } else {
                print_analysis_summary(result.report, out);
            }
            return kExitOk;
        }

        if (pipeline_cmd->parsed()) {
            auto problem = load_problem(common);
            build_outputs(problem, out_dir, analyze.write_pauli, err);
            auto result = run_solver(problem.hamiltonian.assembled, solve, common.seed,
                                     problem.manifest, out_dir);
            write_sample_file(out_dir / "samples.txt", result.samples, problem.manifest,
                              result.summary["method"].get<std::string>());
            atomic_write(out_dir / "manifest.json", dump_json(problem.manifest.to_json()));
            const auto analysis =
                analyze_samples(problem.sequence, problem.mj, result.samples, analyze, err);
            write_analysis(analysis, problem.sequence, out_dir);
            json summary = {{"solve", result.summary}, {"analysis", analysis.report}};
            summary["analysis"].erase("structures");
            if (common.json) {
                out << dump_json(summary);
            } else {
                out << result.summary["method"].get<std::string>() << ": best energy "
                    << format_double(result.summary["best_energy"].get<double>()) << "\n";
                print_analysis_summary(analysis.report, out);
            }
            return kExitOk;
        }
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const CapabilityError& e) {
        err << "capability error: " << e.what() << '\n';
        return kExitCapability;
    } catch (const DataError& e) {
        err << "data error: " << e.what() << '\n';
        return kExitData;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitInternal;
    }
    return kExitUsage;
}

}  // namespace pepfold
