#pragma once

#include "latmove/lattice.hpp"

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace latmove {

// One residue letter per position; must be non-empty wherever it is consumed.
using Sequence = std::string;

enum class ModelKind { backbone, sidechain };

const char* to_string(ModelKind k);
ModelKind model_kind_from_name(const std::string& name); // "backbone" | "sidechain"

// ---------------------------------------------------------------------------
// Structures

struct BackboneStructure {
    LatticePtr lattice;
    std::vector<Coord> coords;

    int size() const { return static_cast<int>(coords.size()); }
};

struct SideChainStructure {
    LatticePtr lattice;
    std::vector<Coord> backbone;
    std::vector<Coord> sidechain;

    int size() const { return static_cast<int>(backbone.size()); }
};

bool same_coords(const BackboneStructure& a, const BackboneStructure& b);
bool same_coords(const SideChainStructure& a, const SideChainStructure& b);

using AnyStructure = std::variant<BackboneStructure, SideChainStructure>;

ModelKind kind_of(const AnyStructure& s);
int length_of(const AnyStructure& s);
const LatticePtr& lattice_of(const AnyStructure& s);

// ---------------------------------------------------------------------------
// Validation

struct ValidationIssue {
    enum class Kind { broken_chain, clash, detached_sidechain, length_mismatch };
    enum class Monomer { backbone, sidechain };

    Kind kind;
    int i = 0; // 1-based residue positions
    int j = 0;
    Monomer mi = Monomer::backbone;
    Monomer mj = Monomer::backbone;

    std::string message() const;
};

// nullopt means the structure is valid; otherwise the first violation in a
// fixed deterministic scan order.
using ValidationResult = std::optional<ValidationIssue>;

ValidationResult validate_backbone(const BackboneStructure& s);
ValidationResult validate_sidechain(const SideChainStructure& s);

// ---------------------------------------------------------------------------
// Contact potentials

class ContactPotential {
public:
    ContactPotential(std::string alphabet, std::vector<double> table);

    double at(char a, char b) const; // throws Error on symbols outside the alphabet
    bool has(char a) const { return index_[static_cast<unsigned char>(a)] >= 0; }
    const std::string& alphabet() const { return alphabet_; }

private:
    std::string alphabet_;
    std::array<int, 256> index_{};
    std::vector<double> table_; // row-major over the alphabet, symmetric
};

// e(H,H) = -1, everything else 0.
ContactPotential hp_potential();

// Matrix file: first content line lists the alphabet symbols, then one row of
// reals per symbol. '#' starts a comment. Asymmetric input (beyond 1e-9) is
// rejected; accepted matrices are symmetrized exactly.
ContactPotential load_potential(std::istream& in);

// ---------------------------------------------------------------------------
// Energies

// Sum of e(S_i, S_j) over pairs i < j whose coordinates are lattice neighbors.
// With exclude_chain_adjacent, pairs j = i + 1 are skipped.
double energy_backbone(const Sequence& s, const BackboneStructure& c, const ContactPotential& e,
                       bool exclude_chain_adjacent = false);

// Side-chain contacts only; backbone placements never contribute.
double energy_sidechain(const Sequence& s, const SideChainStructure& c, const ContactPotential& e);

// ---------------------------------------------------------------------------
// Hydrophobic/polar translation

class HPMapping {
public:
    // hydrophobic: A C F I L M V W Y; the remaining 11 codes are polar
    static HPMapping default_mapping();

    char at(char code) const; // 'H' or 'P'; throws Error for unmapped symbols
    void set(char code, char hp);

private:
    std::array<char, 256> map_{}; // 0 = unmapped
};

Sequence translate_to_hp(const Sequence& s, const HPMapping& m);

} // namespace latmove
