#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <memory>
#include <string>
#include <vector>

namespace latmove {

// A point of an integer lattice, in lattice units.
struct Coord {
    int x = 0;
    int y = 0;
    int z = 0;

    friend constexpr Coord operator+(Coord a, Coord b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend constexpr Coord operator-(Coord a, Coord b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    constexpr bool operator==(const Coord&) const = default;
    // lexicographic (x, then y, then z); used for all deterministic iteration
    constexpr auto operator<=>(const Coord&) const = default;
};

struct CoordHash {
    std::size_t operator()(Coord c) const {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (std::uint64_t v : {std::uint64_t(std::uint32_t(c.x)),
                                std::uint64_t(std::uint32_t(c.y)),
                                std::uint64_t(std::uint32_t(c.z))}) {
            h = (h ^ v) * 0x100000001b3ULL;
        }
        return static_cast<std::size_t>(h);
    }
};

using Vec3 = std::array<double, 3>;

// An integer lattice given by its neighbor vector set. The vector set never
// contains the zero vector, is closed under negation, and all vectors share
// one Euclidean length (unit_length). angstrom_per_unit scales coordinates
// so that lattice neighbors sit 3.8 Angstrom apart.
struct LatticeDescriptor {
    std::string name;
    std::vector<Coord> neighbor_vectors; // sorted lexicographically
    double unit_length = 1.0;
    double angstrom_per_unit = 3.8;

    bool are_neighbors(Coord p, Coord q) const;
    // {p + v : v in neighbor_vectors}, lexicographically ordered
    std::vector<Coord> neighbors_of(Coord p) const;
};

// Descriptors are immutable after construction; shared freely across threads.
using LatticePtr = std::shared_ptr<const LatticeDescriptor>;

// Supported names (case-insensitive): SQ, CUB, FCC.
LatticeDescriptor lattice_from_name(const std::string& name);
LatticePtr make_lattice(const std::string& name);

Vec3 to_angstrom(const LatticeDescriptor& L, Coord p);

} // namespace latmove
