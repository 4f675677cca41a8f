#pragma once

#include "latmove/model.hpp"
#include "latmove/moves.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace latmove {

struct AnnealSchedule {
    double t_start = 2.0;
    double t_end = 0.05;
    double cooling = 0.97;         // geometric factor applied once per sweep
    long long sweeps = 0;          // 0 = enough sweeps to cool t_start down to t_end
    long long steps_per_sweep = 0; // 0 = 10 * chain length

    long long resolved_sweeps() const;
    long long resolved_steps_per_sweep(int n) const;
    void validate() const; // throws Error on a nonsensical schedule
};

// One record per proposal: the proposed structure's energy and whether it was
// accepted. Entry 0 of an annealing trace is the start structure. Gradient
// walks record accepted steps only, so a structure that is already a local
// minimum yields an empty trace.
struct TraceEntry {
    long long step = 0;
    double energy = 0.0;
    bool accepted = false;
    double temperature = 0.0;
};

struct FoldTrace {
    std::vector<TraceEntry> entries;
    double best_energy = 0.0;
    bool frozen = false; // the neighborhood dried up before the schedule ended

    long long proposal_count() const;
};

// step energy accepted T table plus a trailing summary block
void write_trace(std::ostream& os, const FoldTrace& t);

// ---------------------------------------------------------------------------
// Move energetics

// Energy change of applying a move, computed from the touched contacts only.
// Matches a full recomputation up to floating-point rounding.
double delta_energy(const Sequence& s, const BackboneStructure& c, const MoveSolution& m,
                    const ContactPotential& e);
double delta_energy(const Sequence& s, const SideChainStructure& c, const MoveSolution& m,
                    const ContactPotential& e);

struct BestMove {
    bool found = false; // a strictly improving neighbor exists
    MoveSolution move;
    double delta = 0.0;
};

// Scans the whole strict-k neighborhood for the lowest-delta move; ties go to
// the first candidate in enumeration order. The parallel path splits the
// interval list across threads and reduces in canonical order, so serial and
// parallel scans return the identical move.
BestMove best_improving_move(const BackboneStructure& c, int k, const Sequence& s, const ContactPotential& e,
                             bool parallel = true);
BestMove best_improving_move(const SideChainStructure& c, int k, const Sequence& s, const ContactPotential& e,
                             bool parallel = true);

// ---------------------------------------------------------------------------
// Walks and annealing

template <class S>
struct WalkResult {
    S structure; // local minimum: no strict-k neighbor has lower energy
    FoldTrace trace;
};

// Steepest descent: always moves to the strictly lowest-energy neighbor,
// stops when none improves. Trace energies are strictly decreasing.
template <class S>
WalkResult<S> gradient_walk(const S& start, int k, const Sequence& s, const ContactPotential& e,
                            bool parallel = true);

template <class S>
struct AnnealResult {
    S best; // lowest-energy accepted structure (start included)
    FoldTrace trace;
};

// Metropolis annealing: accepts when the energy does not increase, otherwise
// with probability exp(-dE/T). T cools by `cooling` per sweep, floored at
// t_end. Fully deterministic for a fixed seed.
template <class S>
AnnealResult<S> metropolis_run(const S& start, int k, const Sequence& s, const ContactPotential& e,
                               const AnnealSchedule& sched, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Two-stage folding

template <class S>
struct TwoStageResult {
    Sequence hp_sequence;
    S start;     // random valid start structure
    S collapsed; // best structure of the H/P annealing stage
    S descended; // gradient walk from collapsed under the full potential
    S refined;   // annealing from collapsed plus a final walk, full potential
    FoldTrace hp_trace;
    FoldTrace descent_trace;
    FoldTrace refine_anneal_trace;
    FoldTrace refine_walk_trace;
};

// Stage 1 anneals the H/P translation of the sequence under the H/P contact
// potential (hydrophobic collapse); stage 2 takes the collapsed structure to
// a local minimum of the full potential, by direct descent and by
// anneal-then-descend refinement.
template <class S>
TwoStageResult<S> two_stage_fold(const Sequence& seq, const LatticePtr& lattice, const HPMapping& map,
                                 const ContactPotential& full, const AnnealSchedule& hp_sched,
                                 const AnnealSchedule& refine_sched, int k, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Start structures

// Seeded self-avoiding growth with backtracking; deterministic per seed.
BackboneStructure random_valid_backbone(int n, const LatticePtr& lattice, std::uint64_t seed);
SideChainStructure random_valid_sidechain(int n, const LatticePtr& lattice, std::uint64_t seed);

} // namespace latmove
