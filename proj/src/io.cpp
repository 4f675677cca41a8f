#include "latmove/io.hpp"

#include "latmove/error.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

namespace latmove {

namespace {

std::string strip(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

// next non-comment, non-blank line; false at end of stream
bool next_content_line(std::istream& in, std::string& line, int& lineno) {
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = strip(line);
        if (!line.empty()) return true;
    }
    return false;
}

[[noreturn]] void parse_fail(int lineno, const std::string& what) {
    throw Error("structure file line " + std::to_string(lineno) + ": " + what);
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");
    return in;
}

} // namespace

LoadedStructure read_structure(std::istream& in) {
    int lineno = 0;
    std::string line;

    auto expect_keyword = [&](const char* key) -> std::string {
        if (!next_content_line(in, line, lineno)) parse_fail(lineno, std::string("expected '") + key + "' line");
        std::istringstream ls(line);
        std::string word, value, extra;
        ls >> word >> value;
        if (word != key || value.empty() || (ls >> extra)) {
            parse_fail(lineno, std::string("expected '") + key + " <value>'");
        }
        return value;
    };

    const LatticePtr lattice = make_lattice(expect_keyword("lattice"));
    const ModelKind kind = model_kind_from_name(expect_keyword("model"));
    const Sequence seq = expect_keyword("sequence");
    const int n = static_cast<int>(seq.size());

    std::vector<Coord> backbone(n);
    std::vector<Coord> side(kind == ModelKind::sidechain ? n : 0);
    for (int i = 0; i < n; ++i) {
        if (!next_content_line(in, line, lineno)) {
            parse_fail(lineno, "unexpected end of file, expected " + std::to_string(n) + " coordinate rows");
        }
        std::istringstream ls(line);
        int idx = 0;
        if (!(ls >> idx) || idx != i + 1) parse_fail(lineno, "expected row index " + std::to_string(i + 1));
        if (!(ls >> backbone[i].x >> backbone[i].y >> backbone[i].z)) {
            parse_fail(lineno, "expected backbone coordinates");
        }
        if (kind == ModelKind::sidechain) {
            if (!(ls >> side[i].x >> side[i].y >> side[i].z)) {
                parse_fail(lineno, "expected side-chain coordinates");
            }
        }
        std::string extra;
        if (ls >> extra) parse_fail(lineno, "trailing data '" + extra + "'");
    }

    LoadedStructure out;
    out.sequence = seq;
    if (kind == ModelKind::backbone) {
        BackboneStructure s{lattice, std::move(backbone)};
        if (auto issue = validate_backbone(s)) throw Error("invalid structure: " + issue->message());
        out.structure = std::move(s);
    } else {
        SideChainStructure s{lattice, std::move(backbone), std::move(side)};
        if (auto issue = validate_sidechain(s)) throw Error("invalid structure: " + issue->message());
        out.structure = std::move(s);
    }
    return out;
}

LoadedStructure read_structure_file(const std::string& path) {
    auto in = open_input(path);
    return read_structure(in);
}

void write_structure(std::ostream& os, const Sequence& seq, const AnyStructure& s) {
    if (static_cast<int>(seq.size()) != length_of(s)) {
        throw Error("write_structure: sequence length does not match structure");
    }
    os << "lattice " << lattice_of(s)->name << "\n";
    os << "model " << to_string(kind_of(s)) << "\n";
    os << "sequence " << seq << "\n";
    if (const auto* bb = std::get_if<BackboneStructure>(&s)) {
        for (int i = 0; i < bb->size(); ++i) {
            const Coord c = bb->coords[i];
            os << i + 1 << " " << c.x << " " << c.y << " " << c.z << "\n";
        }
    } else {
        const auto& sc = std::get<SideChainStructure>(s);
        for (int i = 0; i < sc.size(); ++i) {
            const Coord b = sc.backbone[i];
            const Coord d = sc.sidechain[i];
            os << i + 1 << " " << b.x << " " << b.y << " " << b.z << " " << d.x << " " << d.y << " " << d.z
               << "\n";
        }
    }
}

void write_structure_file(const std::string& path, const Sequence& seq, const AnyStructure& s) {
    std::ofstream os(path);
    if (!os) throw Error("cannot write '" + path + "'");
    write_structure(os, seq, s);
}

HPMapping load_hp_mapping(std::istream& in) {
    HPMapping m = HPMapping::default_mapping();
    int lineno = 0;
    std::string line;
    while (next_content_line(in, line, lineno)) {
        std::istringstream ls(line);
        std::string code, eq, cls, extra;
        ls >> code >> eq >> cls;
        if (code.size() != 1 || eq != "=" || cls.size() != 1 || (ls >> extra)) {
            throw Error("hp mapping line " + std::to_string(lineno) + ": expected '<code> = H|P'");
        }
        m.set(code[0], cls[0]);
    }
    return m;
}

HPMapping load_hp_mapping_file(const std::string& path) {
    auto in = open_input(path);
    return load_hp_mapping(in);
}

ContactPotential load_potential_file(const std::string& path) {
    auto in = open_input(path);
    return load_potential(in);
}

// ---------------------------------------------------------------------------
// PDB

namespace {

char three_to_one(const std::string& name) {
    static const std::map<std::string, char> table = {
        {"ALA", 'A'}, {"ARG", 'R'}, {"ASN", 'N'}, {"ASP", 'D'}, {"CYS", 'C'}, {"GLN", 'Q'}, {"GLU", 'E'},
        {"GLY", 'G'}, {"HIS", 'H'}, {"ILE", 'I'}, {"LEU", 'L'}, {"LYS", 'K'}, {"MET", 'M'}, {"PHE", 'F'},
        {"PRO", 'P'}, {"SER", 'S'}, {"THR", 'T'}, {"TRP", 'W'}, {"TYR", 'Y'}, {"VAL", 'V'}, {"MSE", 'M'}};
    const auto it = table.find(name);
    return it == table.end() ? 'X' : it->second;
}

// heavy side-chain atom counts of the standard residues
int expected_side_atoms(char code) {
    switch (code) {
    case 'A': return 1;
    case 'R': return 7;
    case 'N': return 4;
    case 'D': return 4;
    case 'C': return 2;
    case 'Q': return 5;
    case 'E': return 5;
    case 'G': return 0;
    case 'H': return 6;
    case 'I': return 4;
    case 'L': return 4;
    case 'K': return 5;
    case 'M': return 4;
    case 'F': return 7;
    case 'P': return 3;
    case 'S': return 2;
    case 'T': return 3;
    case 'W': return 10;
    case 'Y': return 8;
    case 'V': return 3;
    default: return -1;
    }
}

struct ResidueAccum {
    std::string name;
    bool has_ca = false;
    Vec3 ca{0, 0, 0};
    Vec3 side_sum{0, 0, 0};
    int side_count = 0;
};

bool is_hydrogen(const std::string& atom_name, const std::string& element) {
    if (!element.empty()) return element == "H" || element == "D";
    // fall back to the name: first alphabetic character
    for (char c : atom_name) {
        if (std::isalpha(static_cast<unsigned char>(c))) return c == 'H' || c == 'D';
    }
    return false;
}

} // namespace

PdbChain read_pdb_points(std::istream& in, char chain_id) {
    std::string line;
    bool saw_atoms = false;
    bool in_later_model = false;
    int model_count = 0;

    std::vector<int> order;                 // residue sequence numbers in first-seen order
    std::map<int, ResidueAccum> residues;

    while (std::getline(in, line)) {
        if (line.rfind("MODEL", 0) == 0) {
            ++model_count;
            in_later_model = model_count > 1;
            continue;
        }
        if (line.rfind("ENDMDL", 0) == 0) {
            if (model_count >= 1) in_later_model = true; // everything after model 1 is ignored
            continue;
        }
        if (line.rfind("ATOM", 0) != 0 || line.size() < 54) continue;
        saw_atoms = true;
        if (in_later_model) continue;

        const char alt = line[16];
        if (alt != ' ' && alt != 'A') continue;
        if (line[21] != chain_id) continue;
        if (line[26] != ' ') continue; // insertion-coded residues are skipped

        const std::string atom_name = strip(line.substr(12, 4));
        const std::string res_name = strip(line.substr(17, 3));
        const int res_seq = std::stoi(line.substr(22, 4));
        const Vec3 xyz{std::stod(line.substr(30, 8)), std::stod(line.substr(38, 8)),
                       std::stod(line.substr(46, 8))};
        const std::string element = line.size() >= 78 ? strip(line.substr(76, 2)) : "";
        if (is_hydrogen(atom_name, element)) continue;

        auto [it, inserted] = residues.try_emplace(res_seq);
        if (inserted) {
            order.push_back(res_seq);
            it->second.name = res_name;
        }
        ResidueAccum& acc = it->second;
        if (atom_name == "CA") {
            if (!acc.has_ca) {
                acc.has_ca = true;
                acc.ca = xyz;
            }
        } else if (atom_name != "N" && atom_name != "C" && atom_name != "O" && atom_name != "OXT") {
            for (int d = 0; d < 3; ++d) acc.side_sum[d] += xyz[d];
            ++acc.side_count;
        }
    }

    if (!saw_atoms) throw Error("pdb: no ATOM records found");

    PdbChain out;
    for (int seq : order) {
        const ResidueAccum& acc = residues.at(seq);
        if (!acc.has_ca) {
            ++out.skipped_missing_ca;
            continue;
        }
        PdbResiduePoints r;
        r.code = three_to_one(acc.name);
        if (r.code == 'X') ++out.unknown_residues;
        r.ca = acc.ca;
        if (r.code == 'G' || acc.side_count == 0) {
            r.centroid = acc.ca;
            if (r.code != 'G' && expected_side_atoms(r.code) > 0) ++out.partial_sidechains;
        } else {
            for (int d = 0; d < 3; ++d) r.centroid[d] = acc.side_sum[d] / acc.side_count;
            const int expected = expected_side_atoms(r.code);
            if (expected > 0 && acc.side_count < expected) ++out.partial_sidechains;
        }
        out.residues.push_back(r);
    }
    if (out.residues.empty() && out.skipped_missing_ca == 0) {
        throw Error(std::string("pdb: chain '") + chain_id + "' not found");
    }
    return out;
}

PdbChain read_pdb_points_file(const std::string& path, char chain_id) {
    auto in = open_input(path);
    return read_pdb_points(in, chain_id);
}

PointSets to_points(const PdbChain& chain) {
    PointSets out;
    out.backbone.reserve(chain.residues.size());
    out.side.reserve(chain.residues.size());
    for (const PdbResiduePoints& r : chain.residues) {
        out.backbone.push_back(r.ca);
        out.side.push_back(r.centroid);
    }
    return out;
}

} // namespace latmove
