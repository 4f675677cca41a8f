#include "latmove/moves.hpp"

#include "latmove/error.hpp"
#include "latmove/rng.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_set>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace latmove {

namespace {

void check_interval(int n, MoveInterval iv) {
    if (iv.start < 1 || iv.len < 1 || iv.end() > n) {
        throw Error("move interval [" + std::to_string(iv.start) + "," + std::to_string(iv.end()) +
                    "] out of range for chain length " + std::to_string(n));
    }
}

// points within `radius` steps of any center
std::vector<Coord> step_ball(const LatticeDescriptor& L, const std::vector<Coord>& centers, int radius) {
    std::unordered_set<Coord, CoordHash> seen(centers.begin(), centers.end());
    std::vector<Coord> frontier(centers.begin(), centers.end());
    std::vector<Coord> next;
    for (int r = 0; r < radius; ++r) {
        next.clear();
        for (Coord p : frontier) {
            for (Coord v : L.neighbor_vectors) {
                const Coord q = p + v;
                if (seen.insert(q).second) next.push_back(q);
            }
        }
        frontier.swap(next);
    }
    std::vector<Coord> out(seen.begin(), seen.end());
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Coord> intersect_sorted(const std::vector<Coord>& a, const std::vector<Coord>& b) {
    std::vector<Coord> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

std::vector<Coord> subtract_sorted(std::vector<Coord> a, std::vector<Coord> b) {
    std::sort(b.begin(), b.end());
    std::vector<Coord> out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

std::vector<Coord> anchored_ball(const LatticeDescriptor& L, std::optional<Coord> left, std::optional<Coord> right,
                                 const std::vector<Coord>& interval_coords, int len) {
    if (left && right) {
        return intersect_sorted(step_ball(L, {*left}, len + 1), step_ball(L, {*right}, len + 1));
    }
    if (left) return step_ball(L, {*left}, len + 1);
    if (right) return step_ball(L, {*right}, len + 1);
    // whole chain: no anchors anywhere, bound the search around the old spot
    return step_ball(L, interval_coords, len);
}

} // namespace

std::vector<MoveInterval> move_intervals(int n, int k) {
    std::vector<MoveInterval> out;
    const int kmax = std::min(k, n);
    for (int len = 1; len <= kmax; ++len) {
        for (int s = 1; s + len - 1 <= n; ++s) out.push_back({s, len});
    }
    return out;
}

csp::Domain candidate_domain(const BackboneStructure& c, MoveInterval iv) {
    check_interval(c.size(), iv);
    const auto& L = *c.lattice;
    std::optional<Coord> left, right;
    if (iv.start > 1) left = c.coords[iv.start - 2];
    if (iv.end() < c.size()) right = c.coords[iv.end()];
    std::vector<Coord> interval(c.coords.begin() + (iv.start - 1), c.coords.begin() + iv.end());

    std::vector<Coord> fixed;
    for (int i = 0; i < c.size(); ++i) {
        if (i + 1 < iv.start || i + 1 > iv.end()) fixed.push_back(c.coords[i]);
    }
    return csp::Domain(subtract_sorted(anchored_ball(L, left, right, interval, iv.len), std::move(fixed)));
}

csp::Domain candidate_domain(const SideChainStructure& c, MoveInterval iv) {
    check_interval(c.size(), iv);
    const auto& L = *c.lattice;
    std::optional<Coord> left, right;
    if (iv.start > 1) left = c.backbone[iv.start - 2];
    if (iv.end() < c.size()) right = c.backbone[iv.end()];
    std::vector<Coord> interval;
    for (int i = iv.start - 1; i < iv.end(); ++i) {
        interval.push_back(c.backbone[i]);
        interval.push_back(c.sidechain[i]);
    }

    std::vector<Coord> fixed;
    for (int i = 0; i < c.size(); ++i) {
        if (i + 1 < iv.start || i + 1 > iv.end()) {
            fixed.push_back(c.backbone[i]);
            fixed.push_back(c.sidechain[i]);
        }
    }
    return csp::Domain(subtract_sorted(anchored_ball(L, left, right, interval, iv.len), std::move(fixed)));
}

csp::Problem build_backbone_move_csp(const BackboneStructure& c, MoveInterval iv) {
    check_interval(c.size(), iv);
    const int k = iv.len;
    const int n = c.size();

    csp::Problem p;
    p.lattice = c.lattice;
    p.domains.assign(k, candidate_domain(c, iv));

    std::vector<csp::VarId> all(k);
    std::iota(all.begin(), all.end(), 0);
    p.constraints.emplace_back(csp::AllDifferent{all});
    for (int i = 0; i + 1 < k; ++i) p.constraints.emplace_back(csp::Neigh{i, i + 1});
    if (iv.start > 1) p.constraints.emplace_back(csp::NeighAnchor{0, c.coords[iv.start - 2]});
    if (iv.end() < n) p.constraints.emplace_back(csp::NeighAnchor{k - 1, c.coords[iv.end()]});
    p.constraints.emplace_back(csp::NotEqualAnchor{0, c.coords[iv.start - 1]});
    p.constraints.emplace_back(csp::NotEqualAnchor{k - 1, c.coords[iv.end() - 1]});
    return p;
}

csp::Problem build_sidechain_move_csp(const SideChainStructure& c, MoveInterval iv) {
    check_interval(c.size(), iv);
    const int k = iv.len;
    const int n = c.size();
    // variable layout: X^b_1..X^b_k are 0..k-1, X^s_1..X^s_k are k..2k-1

    csp::Problem p;
    p.lattice = c.lattice;
    p.domains.assign(2 * k, candidate_domain(c, iv));

    std::vector<csp::VarId> all(2 * k);
    std::iota(all.begin(), all.end(), 0);
    p.constraints.emplace_back(csp::AllDifferent{all});
    for (int i = 0; i + 1 < k; ++i) p.constraints.emplace_back(csp::Neigh{i, i + 1});
    for (int i = 0; i < k; ++i) p.constraints.emplace_back(csp::Neigh{i, k + i});
    if (iv.start > 1) p.constraints.emplace_back(csp::NeighAnchor{0, c.backbone[iv.start - 2]});
    if (iv.end() < n) p.constraints.emplace_back(csp::NeighAnchor{k - 1, c.backbone[iv.end()]});
    p.constraints.emplace_back(
        csp::OrNotEqualAnchors{{{0, c.backbone[iv.start - 1]}, {k, c.sidechain[iv.start - 1]}}});
    p.constraints.emplace_back(
        csp::OrNotEqualAnchors{{{k - 1, c.backbone[iv.end() - 1]}, {2 * k - 1, c.sidechain[iv.end() - 1]}}});
    return p;
}

namespace {

MoveSolution to_move_backbone(MoveInterval iv, const std::vector<Coord>& vals) {
    MoveSolution m;
    m.interval = iv;
    m.backbone.assign(vals.begin(), vals.begin() + iv.len);
    return m;
}

MoveSolution to_move_sidechain(MoveInterval iv, const std::vector<Coord>& vals) {
    MoveSolution m;
    m.interval = iv;
    m.backbone.assign(vals.begin(), vals.begin() + iv.len);
    m.sidechain.assign(vals.begin() + iv.len, vals.begin() + 2 * iv.len);
    return m;
}

// replacement without the defensive re-validation; solver output is valid by
// construction
BackboneStructure replace_interval(const BackboneStructure& c, const MoveSolution& m) {
    BackboneStructure out = c;
    std::copy(m.backbone.begin(), m.backbone.end(), out.coords.begin() + (m.interval.start - 1));
    return out;
}

SideChainStructure replace_interval(const SideChainStructure& c, const MoveSolution& m) {
    SideChainStructure out = c;
    std::copy(m.backbone.begin(), m.backbone.end(), out.backbone.begin() + (m.interval.start - 1));
    std::copy(m.sidechain.begin(), m.sidechain.end(), out.sidechain.begin() + (m.interval.start - 1));
    return out;
}

csp::Problem build_csp(const BackboneStructure& c, MoveInterval iv) { return build_backbone_move_csp(c, iv); }
csp::Problem build_csp(const SideChainStructure& c, MoveInterval iv) { return build_sidechain_move_csp(c, iv); }

MoveSolution to_move(const BackboneStructure&, MoveInterval iv, const std::vector<Coord>& vals) {
    return to_move_backbone(iv, vals);
}
MoveSolution to_move(const SideChainStructure&, MoveInterval iv, const std::vector<Coord>& vals) {
    return to_move_sidechain(iv, vals);
}

template <class S>
void enumerate_serial_impl(const S& c, int k, const NeighborVisitor<S>& visit) {
    bool stop = false;
    for (MoveInterval iv : move_intervals(c.size(), k)) {
        if (stop) break;
        const csp::Problem p = build_csp(c, iv);
        csp::solve_all(p, [&](const std::vector<Coord>& vals) {
            const MoveSolution m = to_move(c, iv, vals);
            if (!visit(m, replace_interval(c, m))) {
                stop = true;
                return false;
            }
            return true;
        });
    }
}

template <class S>
void enumerate_parallel_impl(const S& c, int k, const NeighborVisitor<S>& visit) {
    const std::vector<MoveInterval> ivs = move_intervals(c.size(), k);
    std::vector<std::vector<MoveSolution>> buf(ivs.size());
#pragma omp parallel for schedule(dynamic)
    for (int t = 0; t < static_cast<int>(ivs.size()); ++t) {
        const csp::Problem p = build_csp(c, ivs[t]);
        csp::solve_all(p, [&](const std::vector<Coord>& vals) {
            buf[t].push_back(to_move(c, ivs[t], vals));
            return true;
        });
    }
    for (const auto& solutions : buf) {
        for (const MoveSolution& m : solutions) {
            if (!visit(m, replace_interval(c, m))) return;
        }
    }
}

template <class S>
long long count_impl(const S& c, int k, bool parallel) {
    const std::vector<MoveInterval> ivs = move_intervals(c.size(), k);
    long long total = 0;
#pragma omp parallel for schedule(dynamic) reduction(+ : total) if (parallel)
    for (int t = 0; t < static_cast<int>(ivs.size()); ++t) {
        long long local = 0;
        csp::solve_all(build_csp(c, ivs[t]), [&](const std::vector<Coord>&) {
            ++local;
            return true;
        });
        total += local;
    }
    return total;
}

template <class S>
std::optional<std::pair<MoveSolution, S>> random_neighbor_impl(const S& c, int k, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<MoveInterval> ivs = move_intervals(c.size(), k);
    rng.shuffle(ivs.begin(), ivs.end()); // uniform first pick, then the rest as fallbacks
    for (MoveInterval iv : ivs) {
        const csp::Problem p = build_csp(c, iv);
        if (auto sol = csp::solve_random(p, rng.next())) {
            const MoveSolution m = to_move(c, iv, sol->values);
            return std::make_pair(m, replace_interval(c, m));
        }
    }
    return std::nullopt;
}

} // namespace

BackboneStructure apply_move(const BackboneStructure& c, const MoveSolution& m) {
    check_interval(c.size(), m.interval);
    if (static_cast<int>(m.backbone.size()) != m.interval.len || !m.sidechain.empty()) {
        throw Error("move does not fit a backbone structure");
    }
    BackboneStructure out = replace_interval(c, m);
    if (auto issue = validate_backbone(out)) {
        throw Error("stale move: " + issue->message());
    }
    return out;
}

SideChainStructure apply_move(const SideChainStructure& c, const MoveSolution& m) {
    check_interval(c.size(), m.interval);
    if (static_cast<int>(m.backbone.size()) != m.interval.len ||
        static_cast<int>(m.sidechain.size()) != m.interval.len) {
        throw Error("move does not fit a side-chain structure");
    }
    SideChainStructure out = replace_interval(c, m);
    if (auto issue = validate_sidechain(out)) {
        throw Error("stale move: " + issue->message());
    }
    return out;
}

void enumerate_neighbors(const BackboneStructure& c, int k, const NeighborVisitor<BackboneStructure>& visit) {
    enumerate_serial_impl(c, k, visit);
}

void enumerate_neighbors(const SideChainStructure& c, int k, const NeighborVisitor<SideChainStructure>& visit) {
    enumerate_serial_impl(c, k, visit);
}

void enumerate_neighbors_parallel(const BackboneStructure& c, int k,
                                  const NeighborVisitor<BackboneStructure>& visit) {
    enumerate_parallel_impl(c, k, visit);
}

void enumerate_neighbors_parallel(const SideChainStructure& c, int k,
                                  const NeighborVisitor<SideChainStructure>& visit) {
    enumerate_parallel_impl(c, k, visit);
}

long long count_neighbors(const BackboneStructure& c, int k, bool parallel) { return count_impl(c, k, parallel); }
long long count_neighbors(const SideChainStructure& c, int k, bool parallel) { return count_impl(c, k, parallel); }

std::optional<std::pair<MoveSolution, BackboneStructure>> random_neighbor(const BackboneStructure& c, int k,
                                                                          std::uint64_t seed) {
    return random_neighbor_impl(c, k, seed);
}

std::optional<std::pair<MoveSolution, SideChainStructure>> random_neighbor(const SideChainStructure& c, int k,
                                                                           std::uint64_t seed) {
    return random_neighbor_impl(c, k, seed);
}

} // namespace latmove
