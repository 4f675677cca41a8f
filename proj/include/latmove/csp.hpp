#pragma once

#include "latmove/lattice.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

namespace latmove::csp {

using VarId = int;

// Finite coordinate domain, kept sorted for deterministic value iteration.
class Domain {
public:
    Domain() = default;
    explicit Domain(std::vector<Coord> values); // sorts and dedups

    bool contains(Coord c) const;
    bool remove(Coord c); // true when the value was present
    bool empty() const { return values_.empty(); }
    int size() const { return static_cast<int>(values_.size()); }
    const std::vector<Coord>& values() const { return values_; }

private:
    std::vector<Coord> values_;
};

// Closed constraint set. Propagation strength per variant:
//   AllDifferent     pairwise disequality from singleton domains
//   Neigh            arc consistency in both directions
//   NeighAnchor      direct filtering against the fixed coordinate
//   NotEqualAnchor   value removal
//   OrNotEqualAnchors unit propagation over the disjuncts
struct AllDifferent {
    std::vector<VarId> vars;
};
struct Neigh {
    VarId a;
    VarId b;
};
struct NeighAnchor {
    VarId var;
    Coord anchor;
};
struct NotEqualAnchor {
    VarId var;
    Coord anchor;
};
struct OrNotEqualAnchors {
    std::vector<std::pair<VarId, Coord>> disjuncts;
};

using Constraint = std::variant<AllDifferent, Neigh, NeighAnchor, NotEqualAnchor, OrNotEqualAnchors>;

struct Problem {
    LatticePtr lattice;
    std::vector<Domain> domains; // indexed by VarId
    std::vector<Constraint> constraints;

    int var_count() const { return static_cast<int>(domains.size()); }
};

struct Assignment {
    std::vector<Coord> values; // indexed by VarId, total
};

// Fixpoint propagation in place. Returns false when some domain becomes
// empty; unsatisfiability is a result, not an error.
bool propagate(Problem& p);

// Receives the value tuple of each solution; return false to stop the search.
using SolutionVisitor = std::function<bool(const std::vector<Coord>&)>;

// Complete backtracking search interleaved with propagation. Deterministic:
// smallest-domain-first variable choice with VarId tie-break, values in
// lexicographic order.
void solve_all(const Problem& p, const SolutionVisitor& visit);
std::vector<Assignment> solve_all(const Problem& p);

// Same complete search with seeded random variable and value ordering.
// Returns nullopt iff the problem has no solution. The distribution over
// solutions is not uniform.
std::optional<Assignment> solve_random(const Problem& p, std::uint64_t seed);

// Naive full check of every constraint plus domain membership.
bool satisfies(const Problem& p, const std::vector<Coord>& values);

} // namespace latmove::csp
