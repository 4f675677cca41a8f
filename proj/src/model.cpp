#include "latmove/model.hpp"

#include "latmove/error.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <sstream>

namespace latmove {

const char* to_string(ModelKind k) {
    return k == ModelKind::backbone ? "backbone" : "sidechain";
}

ModelKind model_kind_from_name(const std::string& name) {
    if (name == "backbone") return ModelKind::backbone;
    if (name == "sidechain") return ModelKind::sidechain;
    throw Error("unknown model kind '" + name + "' (expected backbone or sidechain)");
}

bool same_coords(const BackboneStructure& a, const BackboneStructure& b) {
    return a.coords == b.coords;
}

bool same_coords(const SideChainStructure& a, const SideChainStructure& b) {
    return a.backbone == b.backbone && a.sidechain == b.sidechain;
}

ModelKind kind_of(const AnyStructure& s) {
    return std::holds_alternative<BackboneStructure>(s) ? ModelKind::backbone : ModelKind::sidechain;
}

int length_of(const AnyStructure& s) {
    return std::visit([](const auto& x) { return x.size(); }, s);
}

const LatticePtr& lattice_of(const AnyStructure& s) {
    return std::visit([](const auto& x) -> const LatticePtr& { return x.lattice; }, s);
}

// ---------------------------------------------------------------------------
// Validation

namespace {

const char* monomer_name(ValidationIssue::Monomer m) {
    return m == ValidationIssue::Monomer::backbone ? "backbone" : "side chain";
}

} // namespace

std::string ValidationIssue::message() const {
    std::ostringstream os;
    switch (kind) {
    case Kind::broken_chain:
        os << "broken chain: positions " << i << " and " << i + 1 << " are not lattice neighbors";
        break;
    case Kind::clash:
        os << "clash: " << monomer_name(mi) << " " << i << " and " << monomer_name(mj) << " " << j
           << " occupy the same node";
        break;
    case Kind::detached_sidechain:
        os << "detached side chain: side chain " << i << " is not a lattice neighbor of backbone " << i;
        break;
    case Kind::length_mismatch:
        os << "length mismatch: backbone has " << i << " positions, side chain has " << j;
        break;
    }
    return os.str();
}

ValidationResult validate_backbone(const BackboneStructure& s) {
    const auto& L = *s.lattice;
    const int n = s.size();
    for (int i = 0; i + 1 < n; ++i) {
        if (!L.are_neighbors(s.coords[i], s.coords[i + 1])) {
            return ValidationIssue{ValidationIssue::Kind::broken_chain, i + 1, i + 2};
        }
    }
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (s.coords[i] == s.coords[j]) {
                return ValidationIssue{ValidationIssue::Kind::clash, i + 1, j + 1};
            }
        }
    }
    return std::nullopt;
}

ValidationResult validate_sidechain(const SideChainStructure& s) {
    using K = ValidationIssue::Kind;
    using M = ValidationIssue::Monomer;
    if (s.backbone.size() != s.sidechain.size()) {
        return ValidationIssue{K::length_mismatch, static_cast<int>(s.backbone.size()),
                               static_cast<int>(s.sidechain.size())};
    }
    const auto& L = *s.lattice;
    const int n = s.size();
    for (int i = 0; i + 1 < n; ++i) {
        if (!L.are_neighbors(s.backbone[i], s.backbone[i + 1])) {
            return ValidationIssue{K::broken_chain, i + 1, i + 2};
        }
    }
    for (int i = 0; i < n; ++i) {
        if (!L.are_neighbors(s.backbone[i], s.sidechain[i])) {
            return ValidationIssue{K::detached_sidechain, i + 1, i + 1};
        }
    }
    // clash scan over all 2n monomers, residue-major, backbone before side chain
    auto point = [&](int m) { return m % 2 == 0 ? s.backbone[m / 2] : s.sidechain[m / 2]; };
    auto label = [&](int m) { return m % 2 == 0 ? M::backbone : M::sidechain; };
    for (int a = 0; a < 2 * n; ++a) {
        for (int b = a + 1; b < 2 * n; ++b) {
            if (point(a) == point(b)) {
                ValidationIssue iss{K::clash, a / 2 + 1, b / 2 + 1};
                iss.mi = label(a);
                iss.mj = label(b);
                return iss;
            }
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Contact potentials

ContactPotential::ContactPotential(std::string alphabet, std::vector<double> table)
    : alphabet_(std::move(alphabet)), table_(std::move(table)) {
    const std::size_t k = alphabet_.size();
    if (k == 0) throw Error("contact potential: empty alphabet");
    if (table_.size() != k * k) throw Error("contact potential: table size does not match alphabet");
    index_.fill(-1);
    for (std::size_t i = 0; i < k; ++i) {
        unsigned char c = static_cast<unsigned char>(alphabet_[i]);
        if (index_[c] >= 0) throw Error(std::string("contact potential: duplicate symbol '") + alphabet_[i] + "'");
        index_[c] = static_cast<int>(i);
    }
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
            if (table_[i * k + j] != table_[j * k + i]) {
                throw Error(std::string("contact potential: asymmetric entry for '") + alphabet_[i] + "','" +
                            alphabet_[j] + "'");
            }
        }
    }
}

double ContactPotential::at(char a, char b) const {
    const int ia = index_[static_cast<unsigned char>(a)];
    const int ib = index_[static_cast<unsigned char>(b)];
    if (ia < 0) throw Error(std::string("symbol '") + a + "' not in potential alphabet");
    if (ib < 0) throw Error(std::string("symbol '") + b + "' not in potential alphabet");
    return table_[static_cast<std::size_t>(ia) * alphabet_.size() + static_cast<std::size_t>(ib)];
}

ContactPotential hp_potential() {
    return ContactPotential("HP", {-1.0, 0.0, 0.0, 0.0});
}

namespace {

// strips comments, returns false at end of stream
bool next_content_line(std::istream& in, std::string& line, int& lineno) {
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r\n") != std::string::npos) return true;
    }
    return false;
}

} // namespace

ContactPotential load_potential(std::istream& in) {
    int lineno = 0;
    std::string line;
    if (!next_content_line(in, line, lineno)) throw Error("potential file: empty input");

    std::string alphabet;
    {
        std::istringstream ls(line);
        std::string tok;
        while (ls >> tok) {
            if (tok.size() != 1) {
                throw Error("potential file line " + std::to_string(lineno) + ": symbol '" + tok +
                            "' is not a single character");
            }
            if (alphabet.find(tok[0]) != std::string::npos) {
                throw Error("potential file line " + std::to_string(lineno) + ": duplicate symbol '" + tok + "'");
            }
            alphabet.push_back(tok[0]);
        }
    }
    const std::size_t k = alphabet.size();
    if (k == 0) throw Error("potential file line " + std::to_string(lineno) + ": no alphabet symbols");

    std::vector<double> table(k * k, 0.0);
    for (std::size_t r = 0; r < k; ++r) {
        if (!next_content_line(in, line, lineno)) {
            throw Error("potential file: unexpected end of input, expected " + std::to_string(k) + " matrix rows");
        }
        std::istringstream ls(line);
        for (std::size_t c = 0; c < k; ++c) {
            if (!(ls >> table[r * k + c])) {
                throw Error("potential file line " + std::to_string(lineno) + ": expected " + std::to_string(k) +
                            " numeric entries");
            }
        }
        std::string extra;
        if (ls >> extra) {
            throw Error("potential file line " + std::to_string(lineno) + ": trailing data '" + extra + "'");
        }
    }

    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
            if (std::abs(table[i * k + j] - table[j * k + i]) > 1e-9) {
                throw Error(std::string("potential file: asymmetric entries for '") + alphabet[i] + "' and '" +
                            alphabet[j] + "'");
            }
            // symmetrize exactly; within tolerance the difference is noise
            const double v = 0.5 * (table[i * k + j] + table[j * k + i]);
            table[i * k + j] = table[j * k + i] = v;
        }
    }
    return ContactPotential(std::move(alphabet), std::move(table));
}

// ---------------------------------------------------------------------------
// Energies

double energy_backbone(const Sequence& s, const BackboneStructure& c, const ContactPotential& e,
                       bool exclude_chain_adjacent) {
    const int n = c.size();
    if (static_cast<int>(s.size()) != n) {
        throw Error("energy: sequence length " + std::to_string(s.size()) + " does not match structure length " +
                    std::to_string(n));
    }
    const auto& L = *c.lattice;
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (exclude_chain_adjacent && j == i + 1) continue;
            if (L.are_neighbors(c.coords[i], c.coords[j])) total += e.at(s[i], s[j]);
        }
    }
    return total;
}

double energy_sidechain(const Sequence& s, const SideChainStructure& c, const ContactPotential& e) {
    const int n = c.size();
    if (static_cast<int>(s.size()) != n) {
        throw Error("energy: sequence length " + std::to_string(s.size()) + " does not match structure length " +
                    std::to_string(n));
    }
    const auto& L = *c.lattice;
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (L.are_neighbors(c.sidechain[i], c.sidechain[j])) total += e.at(s[i], s[j]);
        }
    }
    return total;
}

// ---------------------------------------------------------------------------
// Hydrophobic/polar translation

HPMapping HPMapping::default_mapping() {
    HPMapping m;
    const std::string hydrophobic = "ACFILMVWY";
    const std::string polar = "RNDEQGHKPST";
    for (char c : hydrophobic) m.set(c, 'H');
    for (char c : polar) m.set(c, 'P');
    return m;
}

char HPMapping::at(char code) const {
    const char v = map_[static_cast<unsigned char>(code)];
    if (v == 0) throw Error(std::string("residue '") + code + "' has no H/P assignment");
    return v;
}

void HPMapping::set(char code, char hp) {
    if (hp != 'H' && hp != 'P') throw Error(std::string("H/P class must be H or P, got '") + hp + "'");
    map_[static_cast<unsigned char>(code)] = hp;
}

Sequence translate_to_hp(const Sequence& s, const HPMapping& m) {
    if (s.empty()) throw Error("cannot translate an empty sequence");
    Sequence out;
    out.reserve(s.size());
    for (char c : s) out.push_back(m.at(c));
    return out;
}

} // namespace latmove
