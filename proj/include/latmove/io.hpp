#pragma once

#include "latmove/metrics.hpp"
#include "latmove/model.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace latmove {

// Structure file, line oriented, '#' starts a comment:
//   lattice <NAME>
//   model backbone|sidechain
//   sequence <letters>
//   i bx by bz            (backbone)  or  i bx by bz sx sy sz  (sidechain)
// one coordinate row per residue, 1-based i in order.
struct LoadedStructure {
    Sequence sequence;
    AnyStructure structure;
};

LoadedStructure read_structure(std::istream& in);
LoadedStructure read_structure_file(const std::string& path);

void write_structure(std::ostream& os, const Sequence& seq, const AnyStructure& s);
void write_structure_file(const std::string& path, const Sequence& seq, const AnyStructure& s);

// 'X = H' / 'X = P' lines layered over the default assignment.
HPMapping load_hp_mapping(std::istream& in);
HPMapping load_hp_mapping_file(const std::string& path);

ContactPotential load_potential_file(const std::string& path);

// ---------------------------------------------------------------------------
// Minimal PDB ingestion for comparisons against real chains

struct PdbResiduePoints {
    char code = 'X'; // one-letter residue code, 'X' when unknown
    Vec3 ca{0, 0, 0};
    Vec3 centroid{0, 0, 0}; // unweighted mean of heavy side-chain atoms; CA for glycine
};

struct PdbChain {
    std::vector<PdbResiduePoints> residues;
    int skipped_missing_ca = 0;  // residues dropped for lack of a CA record
    int partial_sidechains = 0;  // centroids computed from fewer atoms than the residue type carries
    int unknown_residues = 0;    // non-standard residue names mapped to 'X'
};

// Reads MODEL 1 (or the whole file when unmodelled): ATOM records of the
// requested chain, first conformer only, insertion-coded and HETATM records
// skipped, hydrogens excluded.
PdbChain read_pdb_points(std::istream& in, char chain_id);
PdbChain read_pdb_points_file(const std::string& path, char chain_id);

PointSets to_points(const PdbChain& chain);

} // namespace latmove
