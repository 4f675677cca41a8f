#include "latmove/search.hpp"

#include "latmove/error.hpp"
#include "latmove/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>
#include <span>
#include <unordered_set>

namespace latmove {

// ---------------------------------------------------------------------------
// Schedules and traces

long long AnnealSchedule::resolved_sweeps() const {
    if (sweeps > 0) return sweeps;
    if (t_start <= t_end) return 1;
    // sweeps needed for t_start * cooling^m <= t_end, plus one at the floor
    const double m = std::ceil(std::log(t_end / t_start) / std::log(cooling));
    return static_cast<long long>(m) + 1;
}

long long AnnealSchedule::resolved_steps_per_sweep(int n) const {
    return steps_per_sweep > 0 ? steps_per_sweep : 10LL * n;
}

void AnnealSchedule::validate() const {
    if (!(t_start > 0.0) || !(t_end > 0.0)) throw Error("anneal schedule: temperatures must be positive");
    if (t_end > t_start) throw Error("anneal schedule: t_end must not exceed t_start");
    if (!(cooling > 0.0 && cooling < 1.0)) throw Error("anneal schedule: cooling factor must be in (0,1)");
    if (sweeps < 0 || steps_per_sweep < 0) throw Error("anneal schedule: negative step counts");
}

long long FoldTrace::proposal_count() const {
    long long n = 0;
    for (const TraceEntry& e : entries) {
        if (e.step != 0) ++n;
    }
    return n;
}

void write_trace(std::ostream& os, const FoldTrace& t) {
    char buf[128];
    os << "step energy accepted T\n";
    for (const TraceEntry& e : t.entries) {
        std::snprintf(buf, sizeof(buf), "%lld %.17g %d %.17g\n", e.step, e.energy, e.accepted ? 1 : 0,
                      e.temperature);
        os << buf;
    }
    std::snprintf(buf, sizeof(buf), "# best_energy %.17g\n", t.best_energy);
    os << buf;
    os << "# proposals " << t.proposal_count() << "\n";
    os << "# frozen " << (t.frozen ? 1 : 0) << "\n";
}

// ---------------------------------------------------------------------------
// Move energetics

namespace {

// Energy change from replacing the interval coordinates, summed over touched
// contacts only: pairs with exactly one end inside the interval, plus pairs
// inside it. For the backbone model chain-adjacent contacts cancel but are
// counted on both sides all the same.
double delta_backbone(const Sequence& s, const BackboneStructure& c, MoveInterval iv,
                      std::span<const Coord> newc, const ContactPotential& e) {
    const auto& L = *c.lattice;
    const int n = c.size();
    const int lo = iv.start - 1;
    const int hi = iv.end() - 1;
    double d = 0.0;
    for (int i = lo; i <= hi; ++i) {
        const Coord oldi = c.coords[i];
        const Coord newi = newc[i - lo];
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            if (j >= lo && j <= hi && j < i) continue; // inside pair already counted
            const Coord oldj = c.coords[j];
            const Coord newj = (j >= lo && j <= hi) ? newc[j - lo] : oldj;
            const int before = L.are_neighbors(oldi, oldj) ? 1 : 0;
            const int after = L.are_neighbors(newi, newj) ? 1 : 0;
            if (before != after) d += (after - before) * e.at(s[i], s[j]);
        }
    }
    return d;
}

// Side-chain energy sees side positions only, so only changed side
// coordinates contribute.
double delta_sidechain(const Sequence& s, const SideChainStructure& c, MoveInterval iv,
                       std::span<const Coord> news, const ContactPotential& e) {
    const auto& L = *c.lattice;
    const int n = c.size();
    const int lo = iv.start - 1;
    const int hi = iv.end() - 1;
    double d = 0.0;
    for (int i = lo; i <= hi; ++i) {
        const Coord oldi = c.sidechain[i];
        const Coord newi = news[i - lo];
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            if (j >= lo && j <= hi && j < i) continue;
            const Coord oldj = c.sidechain[j];
            const Coord newj = (j >= lo && j <= hi) ? news[j - lo] : oldj;
            const int before = L.are_neighbors(oldi, oldj) ? 1 : 0;
            const int after = L.are_neighbors(newi, newj) ? 1 : 0;
            if (before != after) d += (after - before) * e.at(s[i], s[j]);
        }
    }
    return d;
}

csp::Problem build_csp(const BackboneStructure& c, MoveInterval iv) { return build_backbone_move_csp(c, iv); }
csp::Problem build_csp(const SideChainStructure& c, MoveInterval iv) { return build_sidechain_move_csp(c, iv); }

MoveSolution values_to_move(const BackboneStructure&, MoveInterval iv, const std::vector<Coord>& vals) {
    MoveSolution m;
    m.interval = iv;
    m.backbone.assign(vals.begin(), vals.begin() + iv.len);
    return m;
}

MoveSolution values_to_move(const SideChainStructure&, MoveInterval iv, const std::vector<Coord>& vals) {
    MoveSolution m;
    m.interval = iv;
    m.backbone.assign(vals.begin(), vals.begin() + iv.len);
    m.sidechain.assign(vals.begin() + iv.len, vals.begin() + 2 * iv.len);
    return m;
}

double energy_of(const Sequence& s, const BackboneStructure& c, const ContactPotential& e) {
    return energy_backbone(s, c, e, false);
}
double energy_of(const Sequence& s, const SideChainStructure& c, const ContactPotential& e) {
    return energy_sidechain(s, c, e);
}

ValidationResult validate_structure(const BackboneStructure& c) { return validate_backbone(c); }
ValidationResult validate_structure(const SideChainStructure& c) { return validate_sidechain(c); }

// Per-interval scan state for the best-move search. The contact field of
// every fixed residue is scattered onto the candidate-domain points once, so
// scoring one solution costs a few array lookups instead of a pair scan.
struct IntervalScan {
    int len = 0;
    int val_offset = 0; // where the energy-bearing coords sit in the solver tuple
    std::vector<Coord> master;
    std::vector<double> field;  // len * master.size(), contact energy against fixed residues
    std::vector<double> inside; // len * len pair energies within the interval
    double before = 0.0;
    const LatticeDescriptor* lat = nullptr;

    double delta_of(const std::vector<Coord>& vals) const {
        const std::size_t m = master.size();
        double after = 0.0;
        for (int i = 0; i < len; ++i) {
            const Coord ci = vals[val_offset + i];
            const std::size_t idx =
                std::lower_bound(master.begin(), master.end(), ci) - master.begin();
            after += field[i * m + idx];
            for (int j = i + 1; j < len; ++j) {
                if (lat->are_neighbors(ci, vals[val_offset + j])) after += inside[i * len + j];
            }
        }
        return after - before;
    }
};

const std::vector<Coord>& energy_coords(const BackboneStructure& c) { return c.coords; }
const std::vector<Coord>& energy_coords(const SideChainStructure& c) { return c.sidechain; }
int energy_val_offset(const BackboneStructure&, int) { return 0; }
int energy_val_offset(const SideChainStructure&, int len) { return len; }

template <class S>
IntervalScan make_scan(const Sequence& s, const S& c, MoveInterval iv, const ContactPotential& e) {
    IntervalScan scan;
    scan.len = iv.len;
    scan.val_offset = energy_val_offset(c, iv.len);
    scan.master = candidate_domain(c, iv).values();
    scan.lat = c.lattice.get();
    const std::vector<Coord>& coords = energy_coords(c);
    const int n = c.size();
    const int lo = iv.start - 1;
    const int hi = iv.end() - 1;
    const std::size_t m = scan.master.size();

    scan.field.assign(static_cast<std::size_t>(iv.len) * m, 0.0);
    for (int j = 0; j < n; ++j) {
        if (j >= lo && j <= hi) continue;
        for (Coord vec : scan.lat->neighbor_vectors) {
            const Coord p = coords[j] + vec;
            const auto it = std::lower_bound(scan.master.begin(), scan.master.end(), p);
            if (it == scan.master.end() || *it != p) continue;
            const std::size_t idx = it - scan.master.begin();
            for (int i = 0; i < iv.len; ++i) scan.field[i * m + idx] += e.at(s[lo + i], s[j]);
        }
    }

    scan.inside.assign(static_cast<std::size_t>(iv.len) * iv.len, 0.0);
    for (int i = 0; i < iv.len; ++i) {
        for (int j = 0; j < iv.len; ++j) scan.inside[i * iv.len + j] = e.at(s[lo + i], s[lo + j]);
    }

    double before = 0.0;
    for (int i = lo; i <= hi; ++i) {
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            if (j >= lo && j <= hi && j < i) continue;
            if (scan.lat->are_neighbors(coords[i], coords[j])) before += e.at(s[i], s[j]);
        }
    }
    scan.before = before;
    return scan;
}

template <class S>
BestMove best_move_impl(const S& c, int k, const Sequence& s, const ContactPotential& e, bool parallel) {
    const std::vector<MoveInterval> ivs = move_intervals(c.size(), k);
    struct Local {
        bool found = false;
        double delta = 0.0;
        std::vector<Coord> vals;
    };
    std::vector<Local> locals(ivs.size());
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (int t = 0; t < static_cast<int>(ivs.size()); ++t) {
        Local& loc = locals[t];
        const IntervalScan scan = make_scan(s, c, ivs[t], e);
        csp::solve_all(build_csp(c, ivs[t]), [&](const std::vector<Coord>& vals) {
            const double d = scan.delta_of(vals);
            if (d < 0.0 && (!loc.found || d < loc.delta)) {
                loc.found = true;
                loc.delta = d;
                loc.vals = vals;
            }
            return true;
        });
    }
    BestMove best;
    for (std::size_t t = 0; t < locals.size(); ++t) {
        if (locals[t].found && (!best.found || locals[t].delta < best.delta)) {
            best.found = true;
            best.delta = locals[t].delta;
            best.move = values_to_move(c, ivs[t], locals[t].vals);
        }
    }
    return best;
}

} // namespace

double delta_energy(const Sequence& s, const BackboneStructure& c, const MoveSolution& m,
                    const ContactPotential& e) {
    return delta_backbone(s, c, m.interval, m.backbone, e);
}

double delta_energy(const Sequence& s, const SideChainStructure& c, const MoveSolution& m,
                    const ContactPotential& e) {
    return delta_sidechain(s, c, m.interval, m.sidechain, e);
}

BestMove best_improving_move(const BackboneStructure& c, int k, const Sequence& s, const ContactPotential& e,
                             bool parallel) {
    return best_move_impl(c, k, s, e, parallel);
}

BestMove best_improving_move(const SideChainStructure& c, int k, const Sequence& s, const ContactPotential& e,
                             bool parallel) {
    return best_move_impl(c, k, s, e, parallel);
}

// ---------------------------------------------------------------------------
// Gradient walk

template <class S>
WalkResult<S> gradient_walk(const S& start, int k, const Sequence& s, const ContactPotential& e, bool parallel) {
    if (auto issue = validate_structure(start)) throw Error("gradient walk start: " + issue->message());
    S cur = start;
    double e_cur = energy_of(s, cur, e);
    FoldTrace trace;
    long long step = 0;
    for (;;) {
        const BestMove bm = best_improving_move(cur, k, s, e, parallel);
        if (!bm.found) break;
        S next = apply_move(cur, bm.move);
        const double e_next = energy_of(s, next, e);
        // the scan found a negative delta; insist the recomputed energy agrees
        // so the walk cannot cycle on rounding noise
        if (!(e_next < e_cur)) break;
        cur = std::move(next);
        e_cur = e_next;
        trace.entries.push_back({++step, e_cur, true, 0.0});
    }
    trace.best_energy = e_cur;
    return {std::move(cur), std::move(trace)};
}

template WalkResult<BackboneStructure> gradient_walk(const BackboneStructure&, int, const Sequence&,
                                                     const ContactPotential&, bool);
template WalkResult<SideChainStructure> gradient_walk(const SideChainStructure&, int, const Sequence&,
                                                      const ContactPotential&, bool);

// ---------------------------------------------------------------------------
// Metropolis annealing

template <class S>
AnnealResult<S> metropolis_run(const S& start, int k, const Sequence& s, const ContactPotential& e,
                               const AnnealSchedule& sched, std::uint64_t seed) {
    sched.validate();
    if (auto issue = validate_structure(start)) throw Error("annealing start: " + issue->message());

    const long long sweeps = sched.resolved_sweeps();
    const long long per_sweep = sched.resolved_steps_per_sweep(start.size());
    Rng rng(seed);

    S cur = start;
    double e_cur = energy_of(s, cur, e);
    S best = cur;
    double e_best = e_cur;

    FoldTrace trace;
    double t = sched.t_start;
    trace.entries.push_back({0, e_cur, true, t});

    long long step = 0;
    for (long long sw = 0; sw < sweeps && !trace.frozen; ++sw) {
        for (long long i = 0; i < per_sweep; ++i) {
            ++step;
            auto nb = random_neighbor(cur, k, rng.next());
            if (!nb) {
                trace.frozen = true;
                break;
            }
            // full recomputation per proposal keeps the trace exactly replayable
            const double e_prop = energy_of(s, nb->second, e);
            const double d = e_prop - e_cur;
            bool accept = d <= 0.0;
            if (!accept) accept = rng.uniform() < std::exp(-d / t);
            trace.entries.push_back({step, e_prop, accept, t});
            if (accept) {
                cur = std::move(nb->second);
                e_cur = e_prop;
                if (e_cur < e_best) {
                    best = cur;
                    e_best = e_cur;
                }
            }
        }
        t = std::max(t * sched.cooling, sched.t_end);
    }
    trace.best_energy = e_best;
    return {std::move(best), std::move(trace)};
}

template AnnealResult<BackboneStructure> metropolis_run(const BackboneStructure&, int, const Sequence&,
                                                        const ContactPotential&, const AnnealSchedule&,
                                                        std::uint64_t);
template AnnealResult<SideChainStructure> metropolis_run(const SideChainStructure&, int, const Sequence&,
                                                         const ContactPotential&, const AnnealSchedule&,
                                                         std::uint64_t);

// ---------------------------------------------------------------------------
// Random start structures

namespace {

constexpr int kGrowAttempts = 64;

} // namespace

BackboneStructure random_valid_backbone(int n, const LatticePtr& lattice, std::uint64_t seed) {
    if (n < 1) throw Error("chain length must be at least 1");
    for (int attempt = 0; attempt < kGrowAttempts; ++attempt) {
        Rng rng(mix_seed(seed) + static_cast<std::uint64_t>(attempt));
        std::vector<Coord> coords{{0, 0, 0}};
        std::unordered_set<Coord, CoordHash> occupied{{0, 0, 0}};
        long long budget = 400LL * n + 2000;

        std::function<bool()> grow = [&]() -> bool {
            if (static_cast<int>(coords.size()) == n) return true;
            if (--budget < 0) return false;
            std::vector<Coord> options = lattice->neighbors_of(coords.back());
            rng.shuffle(options.begin(), options.end());
            for (Coord c : options) {
                if (occupied.contains(c)) continue;
                coords.push_back(c);
                occupied.insert(c);
                if (grow()) return true;
                coords.pop_back();
                occupied.erase(c);
            }
            return false;
        };
        if (grow()) return BackboneStructure{lattice, std::move(coords)};
    }
    throw Error("failed to grow a random backbone structure of length " + std::to_string(n));
}

SideChainStructure random_valid_sidechain(int n, const LatticePtr& lattice, std::uint64_t seed) {
    if (n < 1) throw Error("chain length must be at least 1");
    for (int attempt = 0; attempt < kGrowAttempts; ++attempt) {
        Rng rng(mix_seed(seed ^ 0x5c5c5c5c5c5c5c5cULL) + static_cast<std::uint64_t>(attempt));
        std::vector<Coord> backbone;
        std::vector<Coord> side;
        std::unordered_set<Coord, CoordHash> occupied;
        long long budget = 800LL * n + 2000;

        std::function<bool()> grow = [&]() -> bool {
            if (static_cast<int>(side.size()) == n) return true;
            if (--budget < 0) return false;
            const bool place_side = side.size() < backbone.size();
            std::vector<Coord> options;
            if (backbone.empty()) {
                options = {{0, 0, 0}};
            } else {
                options = lattice->neighbors_of(place_side ? backbone[side.size()] : backbone.back());
                rng.shuffle(options.begin(), options.end());
            }
            for (Coord c : options) {
                if (occupied.contains(c)) continue;
                occupied.insert(c);
                (place_side ? side : backbone).push_back(c);
                if (grow()) return true;
                (place_side ? side : backbone).pop_back();
                occupied.erase(c);
            }
            return false;
        };
        if (grow()) return SideChainStructure{lattice, std::move(backbone), std::move(side)};
    }
    throw Error("failed to grow a random side-chain structure of length " + std::to_string(n));
}

// ---------------------------------------------------------------------------
// Two-stage folding

namespace {

template <class S>
S make_random_structure(int n, const LatticePtr& lattice, std::uint64_t seed);

template <>
BackboneStructure make_random_structure(int n, const LatticePtr& lattice, std::uint64_t seed) {
    return random_valid_backbone(n, lattice, seed);
}

template <>
SideChainStructure make_random_structure(int n, const LatticePtr& lattice, std::uint64_t seed) {
    return random_valid_sidechain(n, lattice, seed);
}

} // namespace

template <class S>
TwoStageResult<S> two_stage_fold(const Sequence& seq, const LatticePtr& lattice, const HPMapping& map,
                                 const ContactPotential& full, const AnnealSchedule& hp_sched,
                                 const AnnealSchedule& refine_sched, int k, std::uint64_t seed) {
    if (seq.empty()) throw Error("cannot fold an empty sequence");
    TwoStageResult<S> out;
    out.hp_sequence = translate_to_hp(seq, map);
    out.start = make_random_structure<S>(static_cast<int>(seq.size()), lattice, mix_seed(seed ^ 0xf01dULL));

    const ContactPotential hp = hp_potential();
    auto stage1 = metropolis_run(out.start, k, out.hp_sequence, hp, hp_sched, mix_seed(seed ^ 0xc011ULL));
    out.collapsed = std::move(stage1.best);
    out.hp_trace = std::move(stage1.trace);

    auto descent = gradient_walk(out.collapsed, k, seq, full, true);
    out.descended = std::move(descent.structure);
    out.descent_trace = std::move(descent.trace);

    auto refine = metropolis_run(out.collapsed, k, seq, full, refine_sched, mix_seed(seed ^ 0x5ef1ULL));
    out.refine_anneal_trace = std::move(refine.trace);
    auto walk = gradient_walk(refine.best, k, seq, full, true);
    out.refined = std::move(walk.structure);
    out.refine_walk_trace = std::move(walk.trace);
    return out;
}

template TwoStageResult<BackboneStructure> two_stage_fold(const Sequence&, const LatticePtr&, const HPMapping&,
                                                          const ContactPotential&, const AnnealSchedule&,
                                                          const AnnealSchedule&, int, std::uint64_t);
template TwoStageResult<SideChainStructure> two_stage_fold(const Sequence&, const LatticePtr&, const HPMapping&,
                                                           const ContactPotential&, const AnnealSchedule&,
                                                           const AnnealSchedule&, int, std::uint64_t);

} // namespace latmove
