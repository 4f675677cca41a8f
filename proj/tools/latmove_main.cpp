#include <CLI11.hpp>

#include "latmove/error.hpp"
#include "latmove/io.hpp"
#include "latmove/metrics.hpp"
#include "latmove/moves.hpp"
#include "latmove/rng.hpp"
#include "latmove/search.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

using namespace latmove;

namespace {

std::string fmt_g(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

ContactPotential potential_or_hp(const std::string& path) {
    return path.empty() ? hp_potential() : load_potential_file(path);
}

HPMapping mapping_or_default(const std::string& path) {
    return path.empty() ? HPMapping::default_mapping() : load_hp_mapping_file(path);
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error("cannot create output directory '" + dir + "': " + ec.message());
}

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path);
    if (!os) throw Error("cannot write '" + path + "'");
    return os;
}

double structure_energy(const Sequence& seq, const AnyStructure& s, const ContactPotential& pot,
                        bool exclude_adjacent) {
    if (const auto* bb = std::get_if<BackboneStructure>(&s)) {
        return energy_backbone(seq, *bb, pot, exclude_adjacent);
    }
    return energy_sidechain(seq, std::get<SideChainStructure>(s), pot);
}

void append_coords(std::string& line, const BackboneStructure& nb) {
    for (Coord c : nb.coords) {
        line += ' ';
        line += std::to_string(c.x);
        line += ' ';
        line += std::to_string(c.y);
        line += ' ';
        line += std::to_string(c.z);
    }
}

void append_coords(std::string& line, const SideChainStructure& nb) {
    for (int i = 0; i < nb.size(); ++i) {
        for (Coord c : {nb.backbone[i], nb.sidechain[i]}) {
            line += ' ';
            line += std::to_string(c.x);
            line += ' ';
            line += std::to_string(c.y);
            line += ' ';
            line += std::to_string(c.z);
        }
    }
}

// --------------------------------------------------------------------------
// neighbors

struct NeighborsOpts {
    std::string in;
    int k = 3;
    std::string potential;
    bool count_only = false;
    bool exclude_adjacent = false;
};

template <class S>
void list_neighbors(const S& c, const Sequence& seq, const NeighborsOpts& o, const ContactPotential& pot) {
    std::string line;
    enumerate_neighbors(c, o.k, NeighborVisitor<S>([&](const MoveSolution& m, const S& nb) {
                            const double e = structure_energy(seq, AnyStructure{nb}, pot, o.exclude_adjacent);
                            line.clear();
                            line += "k'=";
                            line += std::to_string(m.interval.len);
                            line += " s=";
                            line += std::to_string(m.interval.start);
                            line += " E=";
                            line += fmt_g(e);
                            append_coords(line, nb);
                            line += '\n';
                            std::fwrite(line.data(), 1, line.size(), stdout);
                            return true;
                        }));
}

int run_neighbors(const NeighborsOpts& o) {
    if (o.k < 1) throw Error("k must be at least 1");
    const auto loaded = read_structure_file(o.in);
    if (o.count_only) {
        long long n = 0;
        std::visit([&](const auto& c) { n = count_neighbors(c, o.k, true); }, loaded.structure);
        std::cout << n << "\n";
        return 0;
    }
    const auto pot = potential_or_hp(o.potential);
    std::visit([&](const auto& c) { list_neighbors(c, loaded.sequence, o, pot); }, loaded.structure);
    return 0;
}

// --------------------------------------------------------------------------
// energy

struct EnergyOpts {
    std::string in;
    std::string potential;
    bool exclude_adjacent = false;
};

int run_energy(const EnergyOpts& o) {
    const auto loaded = read_structure_file(o.in);
    const auto pot = potential_or_hp(o.potential);
    std::cout << fmt_g(structure_energy(loaded.sequence, loaded.structure, pot, o.exclude_adjacent)) << "\n";
    return 0;
}

// --------------------------------------------------------------------------
// compare

struct CompareOpts {
    std::string a;
    std::string b;
    std::string pdb_chain_a; // when set, read that side as a PDB file
    std::string pdb_chain_b;
};

PointSets load_points(const std::string& path, const std::string& pdb_chain) {
    if (!pdb_chain.empty()) {
        if (pdb_chain.size() != 1) throw Error("pdb chain id must be a single character");
        return to_points(read_pdb_points_file(path, pdb_chain[0]));
    }
    const auto loaded = read_structure_file(path);
    PointSets pts;
    std::visit([&](const auto& s) { pts = to_points(s); }, loaded.structure);
    return pts;
}

int run_compare(const CompareOpts& o) {
    const auto pa = load_points(o.a, o.pdb_chain_a);
    const auto pb = load_points(o.b, o.pdb_chain_b);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "dRMSD %.4f A\n", drmsd(pa, pb));
    std::cout << buf;
    std::snprintf(buf, sizeof(buf), "cRMSD %.4f A\n", crmsd(pa, pb));
    std::cout << buf;
    return 0;
}

// --------------------------------------------------------------------------
// walk

struct WalkOpts {
    std::string in;
    int k = 3;
    std::string potential;
    std::string out_dir = ".";
    bool serial = false;
};

int run_walk(const WalkOpts& o) {
    if (o.k < 1) throw Error("k must be at least 1");
    const auto loaded = read_structure_file(o.in);
    const auto pot = potential_or_hp(o.potential);
    ensure_dir(o.out_dir);

    FoldTrace trace;
    AnyStructure result = loaded.structure;
    std::visit(
        [&](const auto& c) {
            auto w = gradient_walk(c, o.k, loaded.sequence, pot, !o.serial);
            trace = std::move(w.trace);
            result = std::move(w.structure);
        },
        loaded.structure);

    write_structure_file(o.out_dir + "/walk.struct", loaded.sequence, result);
    auto tf = open_out(o.out_dir + "/walk.trace");
    write_trace(tf, trace);

    std::cout << "stage best_energy steps\n";
    std::cout << "walk " << fmt_g(trace.best_energy) << " " << trace.entries.size() << "\n";
    return 0;
}

// --------------------------------------------------------------------------
// randstruct

struct RandOpts {
    std::string seq;
    std::string lattice = "FCC";
    std::string model = "sidechain";
    std::uint64_t seed = 1;
    std::string out; // empty = stdout
};

int run_randstruct(const RandOpts& o) {
    if (o.seq.empty()) throw Error("--seq must be non-empty");
    const auto lat = make_lattice(o.lattice);
    const int n = static_cast<int>(o.seq.size());
    AnyStructure s;
    if (model_kind_from_name(o.model) == ModelKind::backbone) {
        s = random_valid_backbone(n, lat, o.seed);
    } else {
        s = random_valid_sidechain(n, lat, o.seed);
    }
    if (o.out.empty()) {
        write_structure(std::cout, o.seq, s);
    } else {
        write_structure_file(o.out, o.seq, s);
    }
    return 0;
}

// --------------------------------------------------------------------------
// fold

struct FoldOpts {
    std::string seq;
    std::string lattice = "FCC";
    std::string model = "sidechain";
    int k = 3;
    std::string potential;
    std::string hpmap;
    std::uint64_t seed = 1;
    std::string out_dir = ".";
    int restarts = 1;
    AnnealSchedule sched;
    AnnealSchedule refine;
    bool refine_set = false;
};

template <class S>
int fold_with(const FoldOpts& o) {
    const auto lat = make_lattice(o.lattice);
    const auto pot = potential_or_hp(o.potential);
    const auto map = mapping_or_default(o.hpmap);
    const AnnealSchedule& refine = o.refine_set ? o.refine : o.sched;
    o.sched.validate();
    refine.validate();

    std::vector<TwoStageResult<S>> results(o.restarts);
    std::vector<std::string> failures(o.restarts);
#pragma omp parallel for schedule(dynamic)
    for (int r = 0; r < o.restarts; ++r) {
        try {
            results[r] = two_stage_fold<S>(o.seq, lat, map, pot, o.sched, refine, o.k, o.seed + r);
        } catch (const std::exception& e) {
            failures[r] = e.what();
        }
    }
    for (const std::string& f : failures) {
        if (!f.empty()) throw Error(f);
    }

    int winner = 0;
    double best = 0.0;
    for (int r = 0; r < o.restarts; ++r) {
        const double e = structure_energy(o.seq, AnyStructure{results[r].refined}, pot, false);
        if (r == 0 || e < best) {
            best = e;
            winner = r;
        }
    }
    const TwoStageResult<S>& w = results[winner];

    ensure_dir(o.out_dir);
    write_structure_file(o.out_dir + "/chp.struct", o.seq, AnyStructure{w.collapsed});
    write_structure_file(o.out_dir + "/g.struct", o.seq, AnyStructure{w.descended});
    write_structure_file(o.out_dir + "/r.struct", o.seq, AnyStructure{w.refined});
    {
        auto t = open_out(o.out_dir + "/hp.trace");
        write_trace(t, w.hp_trace);
    }
    {
        auto t = open_out(o.out_dir + "/g.trace");
        write_trace(t, w.descent_trace);
    }
    {
        auto t = open_out(o.out_dir + "/r_anneal.trace");
        write_trace(t, w.refine_anneal_trace);
    }
    {
        auto t = open_out(o.out_dir + "/r_walk.trace");
        write_trace(t, w.refine_walk_trace);
    }

    const double e_g = structure_energy(o.seq, AnyStructure{w.descended}, pot, false);
    const double e_r = structure_energy(o.seq, AnyStructure{w.refined}, pot, false);
    std::cout << "stage best_energy steps\n";
    std::cout << "hp " << fmt_g(w.hp_trace.best_energy) << " " << w.hp_trace.proposal_count() << "\n";
    std::cout << "g " << fmt_g(e_g) << " " << w.descent_trace.entries.size() << "\n";
    std::cout << "r " << fmt_g(e_r) << " "
              << w.refine_anneal_trace.proposal_count() +
                     static_cast<long long>(w.refine_walk_trace.entries.size())
              << "\n";
    return 0;
}

int run_fold(const FoldOpts& o) {
    if (o.k < 1) throw Error("k must be at least 1");
    if (o.restarts < 1) throw Error("--restarts must be at least 1");
    if (model_kind_from_name(o.model) == ModelKind::backbone) return fold_with<BackboneStructure>(o);
    return fold_with<SideChainStructure>(o);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"strict k-local moves, energies and folding for lattice proteins"};
    app.set_config("--config", "", "read options from a key = value file");
    app.require_subcommand(1);

    NeighborsOpts no;
    auto* nb = app.add_subcommand("neighbors", "enumerate the strict k-local neighborhood of a structure");
    nb->add_option("--in", no.in, "structure file")->required();
    nb->add_option("--k", no.k, "maximal move interval length")->capture_default_str();
    nb->add_option("--potential", no.potential, "contact potential file (default: built-in H/P)");
    nb->add_flag("--count-only", no.count_only, "print only the neighbor count");
    nb->add_flag("--exclude-chain-adjacent", no.exclude_adjacent,
                 "skip chain-adjacent pairs in backbone energies");

    EnergyOpts eo;
    auto* en = app.add_subcommand("energy", "contact energy of a structure");
    en->add_option("--in", eo.in, "structure file")->required();
    en->add_option("--potential", eo.potential, "contact potential file (default: built-in H/P)");
    en->add_flag("--exclude-chain-adjacent", eo.exclude_adjacent,
                 "skip chain-adjacent pairs in backbone energies");

    CompareOpts co;
    auto* cp = app.add_subcommand("compare", "dRMSD and cRMSD between two structures");
    cp->add_option("a", co.a, "first structure file")->required();
    cp->add_option("b", co.b, "second structure file")->required();
    cp->add_option("--pdb-chain-a", co.pdb_chain_a, "read the first file as PDB, using this chain");
    cp->add_option("--pdb-chain-b", co.pdb_chain_b, "read the second file as PDB, using this chain");

    WalkOpts wo;
    auto* wk = app.add_subcommand("walk", "gradient walk to a local energy minimum");
    wk->add_option("--in", wo.in, "structure file")->required();
    wk->add_option("--k", wo.k, "maximal move interval length")->capture_default_str();
    wk->add_option("--potential", wo.potential, "contact potential file (default: built-in H/P)");
    wk->add_option("--out-dir", wo.out_dir, "output directory")->capture_default_str();
    wk->add_flag("--serial", wo.serial, "disable the parallel neighborhood scan");

    RandOpts ro;
    auto* rs = app.add_subcommand("randstruct", "grow a random valid structure");
    rs->add_option("--seq", ro.seq, "sequence to embed (its length sets the chain length)")->required();
    rs->add_option("--lattice", ro.lattice, "SQ, CUB or FCC")->capture_default_str();
    rs->add_option("--model", ro.model, "backbone or sidechain")->capture_default_str();
    rs->add_option("--seed", ro.seed, "random seed")->capture_default_str();
    rs->add_option("--out", ro.out, "output file (default: stdout)");

    FoldOpts fo;
    auto* fd = app.add_subcommand("fold", "two-stage folding: H/P collapse, then full-potential refinement");
    fd->add_option("--seq", fo.seq, "sequence over the potential's alphabet")->required();
    fd->add_option("--lattice", fo.lattice, "SQ, CUB or FCC")->capture_default_str();
    fd->add_option("--model", fo.model, "backbone or sidechain")->capture_default_str();
    fd->add_option("--k", fo.k, "maximal move interval length")->capture_default_str();
    fd->add_option("--potential", fo.potential, "stage-2 contact potential file (default: built-in H/P)");
    fd->add_option("--hpmap", fo.hpmap, "H/P mapping overrides file");
    fd->add_option("--seed", fo.seed, "random seed; restart r uses seed + r")->capture_default_str();
    fd->add_option("--out-dir", fo.out_dir, "output directory")->capture_default_str();
    fd->add_option("--restarts", fo.restarts, "independent seeded runs, best result kept")
        ->capture_default_str();
    fd->add_option("--t-start", fo.sched.t_start, "start temperature")->capture_default_str();
    fd->add_option("--t-end", fo.sched.t_end, "floor temperature")->capture_default_str();
    fd->add_option("--cooling", fo.sched.cooling, "per-sweep geometric cooling factor")->capture_default_str();
    fd->add_option("--steps-per-sweep", fo.sched.steps_per_sweep, "proposals per sweep (0 = 10n)")
        ->capture_default_str();
    fd->add_option("--sweeps", fo.sched.sweeps, "sweep count (0 = cool to the floor)")->capture_default_str();
    fd->add_option("--refine-t-start", fo.refine.t_start, "stage-2 start temperature");
    fd->add_option("--refine-t-end", fo.refine.t_end, "stage-2 floor temperature");
    fd->add_option("--refine-cooling", fo.refine.cooling, "stage-2 cooling factor");
    fd->add_option("--refine-steps-per-sweep", fo.refine.steps_per_sweep, "stage-2 proposals per sweep");
    fd->add_option("--refine-sweeps", fo.refine.sweeps, "stage-2 sweep count");

    int rc = 0;
    nb->callback([&] { rc = run_neighbors(no); });
    en->callback([&] { rc = run_energy(eo); });
    cp->callback([&] { rc = run_compare(co); });
    wk->callback([&] { rc = run_walk(wo); });
    rs->callback([&] { rc = run_randstruct(ro); });
    fd->callback([&] {
        fo.refine_set = fd->count("--refine-t-start") || fd->count("--refine-t-end") ||
                        fd->count("--refine-cooling") || fd->count("--refine-steps-per-sweep") ||
                        fd->count("--refine-sweeps");
        if (fo.refine_set) {
            // unspecified stage-2 values inherit the stage-1 schedule
            if (!fd->count("--refine-t-start")) fo.refine.t_start = fo.sched.t_start;
            if (!fd->count("--refine-t-end")) fo.refine.t_end = fo.sched.t_end;
            if (!fd->count("--refine-cooling")) fo.refine.cooling = fo.sched.cooling;
            if (!fd->count("--refine-steps-per-sweep")) fo.refine.steps_per_sweep = fo.sched.steps_per_sweep;
            if (!fd->count("--refine-sweeps")) fo.refine.sweeps = fo.sched.sweeps;
        }
        rc = run_fold(fo);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
    return rc;
}
