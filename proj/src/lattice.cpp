#include "latmove/lattice.hpp"

#include "latmove/error.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace latmove {

bool LatticeDescriptor::are_neighbors(Coord p, Coord q) const {
    return std::binary_search(neighbor_vectors.begin(), neighbor_vectors.end(), p - q);
}

std::vector<Coord> LatticeDescriptor::neighbors_of(Coord p) const {
    std::vector<Coord> out;
    out.reserve(neighbor_vectors.size());
    // adding a constant preserves lexicographic order
    for (Coord v : neighbor_vectors) out.push_back(p + v);
    return out;
}

namespace {

std::vector<Coord> with_negations(std::vector<Coord> base) {
    std::vector<Coord> all;
    all.reserve(base.size() * 2);
    for (Coord v : base) {
        all.push_back(v);
        all.push_back(Coord{} - v);
    }
    std::sort(all.begin(), all.end());
    return all;
}

LatticeDescriptor make_descriptor(std::string name, std::vector<Coord> half_set) {
    LatticeDescriptor d;
    d.name = std::move(name);
    d.neighbor_vectors = with_negations(std::move(half_set));
    const Coord v0 = d.neighbor_vectors.front();
    d.unit_length = std::sqrt(double(v0.x) * v0.x + double(v0.y) * v0.y + double(v0.z) * v0.z);
    d.angstrom_per_unit = 3.8 / d.unit_length;
    return d;
}

} // namespace

LatticeDescriptor lattice_from_name(const std::string& name) {
    std::string up;
    for (char c : name) up.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    if (up == "SQ")
        return make_descriptor("SQ", {{1, 0, 0}, {0, 1, 0}});
    if (up == "CUB")
        return make_descriptor("CUB", {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
    if (up == "FCC")
        return make_descriptor("FCC", {{1, 1, 0}, {1, 0, 1}, {0, 1, 1}, {1, -1, 0}, {1, 0, -1}, {0, 1, -1}});
    throw Error("lattice '" + name + "' not supported (expected one of SQ, CUB, FCC)");
}

LatticePtr make_lattice(const std::string& name) {
    return std::make_shared<const LatticeDescriptor>(lattice_from_name(name));
}

Vec3 to_angstrom(const LatticeDescriptor& L, Coord p) {
    const double s = L.angstrom_per_unit;
    return {s * p.x, s * p.y, s * p.z};
}

} // namespace latmove
