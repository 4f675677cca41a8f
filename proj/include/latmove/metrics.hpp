#pragma once

#include "latmove/model.hpp"

#include <array>
#include <vector>

namespace latmove {

// Proper rigid motion: rotation has determinant +1, reflections are never
// produced (mirror images of a chiral chain are distinct objects).
struct RigidMotion {
    std::array<std::array<double, 3>, 3> rotation{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
    Vec3 translation{0, 0, 0};

    Vec3 apply(const Vec3& p) const;
};

// Labelled point sets in Angstrom; side stays empty for backbone-only
// structures.
struct PointSets {
    std::vector<Vec3> backbone;
    std::vector<Vec3> side;

    bool has_side() const { return !side.empty(); }
    int size() const { return static_cast<int>(backbone.size()); }
};

PointSets to_points(const BackboneStructure& s);
PointSets to_points(const SideChainStructure& s);

// Least-squares rigid superposition of `from` onto `to` (Kabsch).
RigidMotion kabsch(const std::vector<Vec3>& from, const std::vector<Vec3>& to);

// Coordinate RMSD after optimal superposition of a onto b over all
// represented points; side-chain models average over all 2n points.
double crmsd(const PointSets& a, const PointSets& b);

// Distance RMSD over all intramolecular distances (pairwise backbone and
// side-chain terms plus the per-residue backbone/side-chain distance),
// normalized by n^2. Needs no superposition and ignores handedness.
double drmsd(const PointSets& a, const PointSets& b);

} // namespace latmove
