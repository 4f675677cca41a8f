#pragma once

#include "latmove/csp.hpp"
#include "latmove/model.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

namespace latmove {

// Consecutive residue interval [start, start+len-1], 1-based.
struct MoveInterval {
    int start = 1;
    int len = 1;

    int end() const { return start + len - 1; }
    bool operator==(const MoveInterval&) const = default;
};

// Replacement coordinates for one strict move. sidechain stays empty in the
// backbone-only model.
struct MoveSolution {
    MoveInterval interval;
    std::vector<Coord> backbone;
    std::vector<Coord> sidechain;
};

// The interval listing enumerate_neighbors walks: interval length major
// (1..k), start position minor.
std::vector<MoveInterval> move_intervals(int n, int k);

// Finite stand-in for the unbounded per-variable domain: lattice points
// within interval-length + 1 steps of each existing anchor (intersected when
// both anchors exist), minus every coordinate fixed outside the interval.
// When the interval covers the whole chain there is no anchor; the ball is
// grown interval-length steps around the interval's original coordinates.
csp::Domain candidate_domain(const BackboneStructure& c, MoveInterval iv);
csp::Domain candidate_domain(const SideChainStructure& c, MoveInterval iv);

// Strict-move constraint problems. Variables are X_1..X_k over the interval
// (backbone), or X^b_1..X^b_k followed by X^s_1..X^s_k (side chain).
csp::Problem build_backbone_move_csp(const BackboneStructure& c, MoveInterval iv);
csp::Problem build_sidechain_move_csp(const SideChainStructure& c, MoveInterval iv);

// Replaces the interval coordinates and re-validates the result; a move that
// no longer fits the structure raises a stale-move Error.
BackboneStructure apply_move(const BackboneStructure& c, const MoveSolution& m);
SideChainStructure apply_move(const SideChainStructure& c, const MoveSolution& m);

template <class S>
using NeighborVisitor = std::function<bool(const MoveSolution&, const S&)>;

// Streams every structure of N_k(C) \ {C} exactly once, in deterministic
// order: interval length major, start minor, solver order within an interval.
// The visitor returns false to stop early.
void enumerate_neighbors(const BackboneStructure& c, int k, const NeighborVisitor<BackboneStructure>& visit);
void enumerate_neighbors(const SideChainStructure& c, int k, const NeighborVisitor<SideChainStructure>& visit);

// Same stream in the same order; intervals are solved in parallel and
// replayed in canonical order, so output is independent of thread count.
void enumerate_neighbors_parallel(const BackboneStructure& c, int k,
                                  const NeighborVisitor<BackboneStructure>& visit);
void enumerate_neighbors_parallel(const SideChainStructure& c, int k,
                                  const NeighborVisitor<SideChainStructure>& visit);

long long count_neighbors(const BackboneStructure& c, int k, bool parallel = true);
long long count_neighbors(const SideChainStructure& c, int k, bool parallel = true);

// Picks an interval uniformly at random, draws a random solution of its move
// problem, and falls back to the remaining intervals when it is
// unsatisfiable. nullopt iff the whole neighborhood is empty. Interval
// sampling is uniform; the induced distribution over neighbors is not.
std::optional<std::pair<MoveSolution, BackboneStructure>> random_neighbor(const BackboneStructure& c, int k,
                                                                          std::uint64_t seed);
std::optional<std::pair<MoveSolution, SideChainStructure>> random_neighbor(const SideChainStructure& c, int k,
                                                                           std::uint64_t seed);

} // namespace latmove
