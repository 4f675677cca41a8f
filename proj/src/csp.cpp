#include "latmove/csp.hpp"

#include "latmove/rng.hpp"

#include <algorithm>
#include <bit>
#include <cassert>

namespace latmove::csp {

Domain::Domain(std::vector<Coord> values) : values_(std::move(values)) {
    std::sort(values_.begin(), values_.end());
    values_.erase(std::unique(values_.begin(), values_.end()), values_.end());
}

bool Domain::contains(Coord c) const {
    return std::binary_search(values_.begin(), values_.end(), c);
}

bool Domain::remove(Coord c) {
    auto it = std::lower_bound(values_.begin(), values_.end(), c);
    if (it == values_.end() || *it != c) return false;
    values_.erase(it);
    return true;
}

namespace {

// Search engine over a unified master value list (the sorted union of all
// domains). Domains are bitmasks over master indices and lattice adjacency is
// precomputed as a bit matrix, so propagation runs on words only. Removals
// are word-trailed and undone by rewinding, nothing allocates inside search.
class Engine {
public:
    explicit Engine(const Problem& p) : prob_(p) {
        build_master();
        build_domains();
        build_adjacency();
        build_constraints();
    }

    bool propagate_all() {
        if (wiped_at_setup_) return false;
        queue_.clear();
        for (int ci = 0; ci < static_cast<int>(cons_.size()); ++ci) enqueue(ci);
        return drain();
    }

    void search(const SolutionVisitor& visit) {
        if (!propagate_all()) return;
        bool stop = false;
        dfs(visit, stop);
    }

    void search_random(Rng& rng, const SolutionVisitor& visit) {
        if (!propagate_all()) return;
        bool stop = false;
        dfs_random(rng, visit, stop);
    }

    std::vector<Coord> active_values(int v) const {
        std::vector<Coord> out;
        out.reserve(live_[v]);
        const std::uint64_t* a = act(v);
        for (int w = 0; w < nwords_; ++w) {
            std::uint64_t bits = a[w];
            while (bits) {
                const int b = std::countr_zero(bits);
                bits &= bits - 1;
                out.push_back(master_[w * 64 + b]);
            }
        }
        return out;
    }

private:
    // --- setup -------------------------------------------------------------

    void build_master() {
        for (const Domain& d : prob_.domains) {
            master_.insert(master_.end(), d.values().begin(), d.values().end());
        }
        std::sort(master_.begin(), master_.end());
        master_.erase(std::unique(master_.begin(), master_.end()), master_.end());
        nvals_ = static_cast<int>(master_.size());
        nwords_ = (nvals_ + 63) / 64;
        if (nwords_ == 0) nwords_ = 1;
    }

    int index_of(Coord c) const {
        auto it = std::lower_bound(master_.begin(), master_.end(), c);
        if (it == master_.end() || *it != c) return -1;
        return static_cast<int>(it - master_.begin());
    }

    void build_domains() {
        const int n = prob_.var_count();
        act_.assign(static_cast<std::size_t>(n) * nwords_, 0);
        live_.assign(n, 0);
        for (int v = 0; v < n; ++v) {
            for (Coord c : prob_.domains[v].values()) {
                const int i = index_of(c);
                act(v)[i >> 6] |= std::uint64_t(1) << (i & 63);
            }
            live_[v] = prob_.domains[v].size();
            if (live_[v] == 0) wiped_at_setup_ = true;
        }
    }

    void build_adjacency() {
        adj_.assign(static_cast<std::size_t>(nvals_) * nwords_, 0);
        const auto& vecs = prob_.lattice->neighbor_vectors;
        for (int i = 0; i < nvals_; ++i) {
            for (Coord vec : vecs) {
                const int j = index_of(master_[i] + vec);
                if (j >= 0) adj_row(i)[j >> 6] |= std::uint64_t(1) << (j & 63);
            }
        }
    }

    void build_constraints() {
        cons_of_var_.assign(prob_.var_count(), {});
        for (const Constraint& c : prob_.constraints) {
            ICon ic;
            if (const auto* ad = std::get_if<AllDifferent>(&c)) {
                ic.type = ICon::alldiff;
                ic.vars = ad->vars;
            } else if (const auto* ng = std::get_if<Neigh>(&c)) {
                ic.type = ICon::neigh;
                ic.a = ng->a;
                ic.b = ng->b;
            } else if (const auto* na = std::get_if<NeighAnchor>(&c)) {
                ic.type = ICon::neigh_anchor;
                ic.a = na->var;
                ic.mask.assign(nwords_, 0);
                for (Coord vec : prob_.lattice->neighbor_vectors) {
                    const int j = index_of(na->anchor + vec);
                    if (j >= 0) ic.mask[j >> 6] |= std::uint64_t(1) << (j & 63);
                }
            } else if (const auto* ne = std::get_if<NotEqualAnchor>(&c)) {
                const int idx = index_of(ne->anchor);
                if (idx < 0) continue; // anchor outside every domain: trivially satisfied
                ic.type = ICon::noteq;
                ic.a = ne->var;
                ic.idx = idx;
            } else {
                const auto& orc = std::get<OrNotEqualAnchors>(c);
                ic.type = ICon::ornoteq;
                bool entailed = false;
                for (const auto& [v, val] : orc.disjuncts) {
                    const int idx = index_of(val);
                    if (idx < 0) {
                        entailed = true; // this disjunct can never be violated
                        break;
                    }
                    ic.disj.emplace_back(v, idx);
                }
                if (entailed) continue;
                if (ic.disj.empty()) {
                    wiped_at_setup_ = true; // empty disjunction is unsatisfiable
                    continue;
                }
            }
            const int ci = static_cast<int>(cons_.size());
            cons_.push_back(std::move(ic));
            for (int v : watched_vars(cons_.back())) cons_of_var_[v].push_back(ci);
        }
        in_queue_.assign(cons_.size(), 0);
    }

    struct ICon {
        enum Type { alldiff, neigh, neigh_anchor, noteq, ornoteq } type = alldiff;
        std::vector<int> vars;                  // alldiff
        int a = -1, b = -1;                     // neigh / anchored var
        std::vector<std::uint64_t> mask;        // neigh_anchor: allowed master indices
        int idx = -1;                           // noteq master index
        std::vector<std::pair<int, int>> disj;  // ornoteq: (var, master index)
    };

    static std::vector<int> watched_vars(const ICon& c) {
        switch (c.type) {
        case ICon::alldiff: return c.vars;
        case ICon::neigh: return {c.a, c.b};
        case ICon::neigh_anchor:
        case ICon::noteq: return {c.a};
        case ICon::ornoteq: {
            std::vector<int> out;
            for (const auto& [v, i] : c.disj) out.push_back(v);
            return out;
        }
        }
        return {};
    }

    // --- bit plumbing --------------------------------------------------------

    std::uint64_t* act(int v) { return act_.data() + static_cast<std::size_t>(v) * nwords_; }
    const std::uint64_t* act(int v) const { return act_.data() + static_cast<std::size_t>(v) * nwords_; }
    const std::uint64_t* adj_row(int i) const { return adj_.data() + static_cast<std::size_t>(i) * nwords_; }
    std::uint64_t* adj_row(int i) { return adj_.data() + static_cast<std::size_t>(i) * nwords_; }

    bool test(int v, int i) const { return (act(v)[i >> 6] >> (i & 63)) & 1; }

    struct TrailEntry {
        int var;
        int word;
        std::uint64_t old;
    };

    // clears master bit i of var v; false when the domain wipes out
    bool clear_bit(int v, int i) {
        std::uint64_t& w = act(v)[i >> 6];
        trail_.push_back({v, i >> 6, w});
        w &= ~(std::uint64_t(1) << (i & 63));
        --live_[v];
        for (int ci : cons_of_var_[v]) enqueue(ci);
        return live_[v] > 0;
    }

    // act(v) &= mask; false on wipe
    bool intersect(int v, const std::uint64_t* mask) {
        bool changed = false;
        int removed = 0;
        std::uint64_t* a = act(v);
        for (int w = 0; w < nwords_; ++w) {
            const std::uint64_t neww = a[w] & mask[w];
            if (neww != a[w]) {
                trail_.push_back({v, w, a[w]});
                removed += std::popcount(a[w] ^ neww);
                a[w] = neww;
                changed = true;
            }
        }
        if (changed) {
            live_[v] -= removed;
            for (int ci : cons_of_var_[v]) enqueue(ci);
        }
        return live_[v] > 0;
    }

    int first_active(int v) const {
        const std::uint64_t* a = act(v);
        for (int w = 0; w < nwords_; ++w) {
            if (a[w]) return w * 64 + std::countr_zero(a[w]);
        }
        assert(false && "no active value");
        return -1;
    }

    bool supported(int v, int i) const {
        const std::uint64_t* a = act(v);
        const std::uint64_t* row = adj_row(i);
        for (int w = 0; w < nwords_; ++w) {
            if (a[w] & row[w]) return true;
        }
        return false;
    }

    void undo_to(std::size_t mark) {
        while (trail_.size() > mark) {
            const TrailEntry e = trail_.back();
            trail_.pop_back();
            std::uint64_t& w = act(e.var)[e.word];
            live_[e.var] += std::popcount(e.old) - std::popcount(w);
            w = e.old;
        }
        for (int c : queue_) in_queue_[c] = 0;
        queue_.clear();
    }

    // --- propagation ---------------------------------------------------------

    void enqueue(int ci) {
        if (!in_queue_[ci]) {
            in_queue_[ci] = 1;
            queue_.push_back(ci);
        }
    }

    bool drain() {
        while (!queue_.empty()) {
            const int ci = queue_.back();
            queue_.pop_back();
            in_queue_[ci] = 0;
            if (!run_constraint(cons_[ci])) {
                for (int c : queue_) in_queue_[c] = 0;
                queue_.clear();
                return false;
            }
        }
        return true;
    }

    bool revise_neigh(int x, int y) {
        const std::uint64_t* a = act(x);
        for (int w = 0; w < nwords_; ++w) {
            std::uint64_t bits = a[w];
            while (bits) {
                const int i = w * 64 + std::countr_zero(bits);
                bits &= bits - 1;
                if (!supported(y, i)) {
                    if (!clear_bit(x, i)) return false;
                }
            }
        }
        return true;
    }

    bool run_constraint(const ICon& c) {
        switch (c.type) {
        case ICon::alldiff:
            for (int v : c.vars) {
                if (live_[v] != 1) continue;
                const int i = first_active(v);
                for (int w : c.vars) {
                    if (w == v || !test(w, i)) continue;
                    if (!clear_bit(w, i)) return false;
                }
            }
            return true;
        case ICon::neigh:
            return revise_neigh(c.a, c.b) && revise_neigh(c.b, c.a);
        case ICon::neigh_anchor:
            return intersect(c.a, c.mask.data());
        case ICon::noteq:
            if (test(c.a, c.idx)) {
                if (!clear_bit(c.a, c.idx)) return false;
            }
            return true;
        case ICon::ornoteq: {
            int open = -1;
            int falsified = 0;
            for (std::size_t d = 0; d < c.disj.size(); ++d) {
                const auto& [v, i] = c.disj[d];
                if (!test(v, i)) return true; // some disjunct already holds
                if (live_[v] == 1) {
                    ++falsified;
                } else {
                    open = static_cast<int>(d);
                }
            }
            if (falsified == static_cast<int>(c.disj.size())) {
                // every disjunct pinned to its anchor; removing one wipes its domain
                const auto& [v, i] = c.disj.front();
                return clear_bit(v, i);
            }
            if (falsified == static_cast<int>(c.disj.size()) - 1 && open >= 0) {
                const auto& [v, i] = c.disj[open];
                if (!clear_bit(v, i)) return false;
            }
            return true;
        }
        }
        return true;
    }

    // --- search ----------------------------------------------------------------

    int pick_var_smallest() const {
        int best = -1;
        for (int v = 0; v < static_cast<int>(live_.size()); ++v) {
            if (live_[v] <= 1) continue;
            if (best < 0 || live_[v] < live_[best]) best = v;
        }
        return best;
    }

    bool assign_and_propagate(int v, int i) {
        std::uint64_t* a = act(v);
        for (int w = 0; w < nwords_; ++w) {
            const std::uint64_t keep = (w == (i >> 6)) ? (std::uint64_t(1) << (i & 63)) : 0;
            const std::uint64_t neww = a[w] & keep;
            if (neww != a[w]) {
                trail_.push_back({v, w, a[w]});
                live_[v] -= std::popcount(a[w] ^ neww);
                a[w] = neww;
            }
        }
        for (int ci : cons_of_var_[v]) enqueue(ci);
        return drain();
    }

    void emit(const SolutionVisitor& visit, bool& stop) {
        snap_.resize(live_.size());
        for (int v = 0; v < static_cast<int>(live_.size()); ++v) snap_[v] = master_[first_active(v)];
        if (!visit(snap_)) stop = true;
    }

    void dfs(const SolutionVisitor& visit, bool& stop) {
        const int v = pick_var_smallest();
        if (v < 0) {
            emit(visit, stop);
            return;
        }
        const std::uint64_t* a = act(v);
        for (int w = 0; w < nwords_ && !stop; ++w) {
            std::uint64_t bits = a[w];
            while (bits && !stop) {
                const int i = w * 64 + std::countr_zero(bits);
                bits &= bits - 1;
                const std::size_t mark = trail_.size();
                if (assign_and_propagate(v, i)) dfs(visit, stop);
                undo_to(mark);
            }
        }
    }

    void dfs_random(Rng& rng, const SolutionVisitor& visit, bool& stop) {
        scratch_vars_.clear();
        for (int v = 0; v < static_cast<int>(live_.size()); ++v) {
            if (live_[v] > 1) scratch_vars_.push_back(v);
        }
        if (scratch_vars_.empty()) {
            emit(visit, stop);
            return;
        }
        const int v = scratch_vars_[rng.below(scratch_vars_.size())];
        std::vector<int> order;
        order.reserve(live_[v]);
        const std::uint64_t* a = act(v);
        for (int w = 0; w < nwords_; ++w) {
            std::uint64_t bits = a[w];
            while (bits) {
                order.push_back(w * 64 + std::countr_zero(bits));
                bits &= bits - 1;
            }
        }
        rng.shuffle(order.begin(), order.end());
        for (int i : order) {
            if (stop) return;
            const std::size_t mark = trail_.size();
            if (assign_and_propagate(v, i)) dfs_random(rng, visit, stop);
            undo_to(mark);
        }
    }

    const Problem& prob_;
    std::vector<Coord> master_;
    int nvals_ = 0;
    int nwords_ = 1;
    std::vector<std::uint64_t> act_;
    std::vector<int> live_;
    std::vector<std::uint64_t> adj_;
    std::vector<ICon> cons_;
    std::vector<std::vector<int>> cons_of_var_;
    std::vector<int> queue_;
    std::vector<std::uint8_t> in_queue_;
    std::vector<TrailEntry> trail_;
    std::vector<Coord> snap_;
    std::vector<int> scratch_vars_;
    bool wiped_at_setup_ = false;
};

} // namespace

bool propagate(Problem& p) {
    if (p.var_count() == 0) return true;
    Engine eng(p);
    const bool ok = eng.propagate_all();
    for (int v = 0; v < p.var_count(); ++v) p.domains[v] = Domain(eng.active_values(v));
    return ok;
}

void solve_all(const Problem& p, const SolutionVisitor& visit) {
    if (p.var_count() == 0) {
        visit({});
        return;
    }
    Engine eng(p);
    eng.search(visit);
}

std::vector<Assignment> solve_all(const Problem& p) {
    std::vector<Assignment> out;
    solve_all(p, [&](const std::vector<Coord>& vals) {
        out.push_back(Assignment{vals});
        return true;
    });
    return out;
}

std::optional<Assignment> solve_random(const Problem& p, std::uint64_t seed) {
    if (p.var_count() == 0) return Assignment{};
    Engine eng(p);
    Rng rng(seed);
    std::optional<Assignment> found;
    eng.search_random(rng, [&](const std::vector<Coord>& vals) {
        found = Assignment{vals};
        return false; // stop at the first solution
    });
    return found;
}

bool satisfies(const Problem& p, const std::vector<Coord>& values) {
    if (static_cast<int>(values.size()) != p.var_count()) return false;
    for (int v = 0; v < p.var_count(); ++v) {
        if (!p.domains[v].contains(values[v])) return false;
    }
    const auto& L = *p.lattice;
    for (const Constraint& c : p.constraints) {
        bool ok = std::visit(
            [&](const auto& cc) {
                using T = std::decay_t<decltype(cc)>;
                if constexpr (std::is_same_v<T, AllDifferent>) {
                    for (std::size_t i = 0; i < cc.vars.size(); ++i) {
                        for (std::size_t j = i + 1; j < cc.vars.size(); ++j) {
                            if (values[cc.vars[i]] == values[cc.vars[j]]) return false;
                        }
                    }
                    return true;
                } else if constexpr (std::is_same_v<T, Neigh>) {
                    return L.are_neighbors(values[cc.a], values[cc.b]);
                } else if constexpr (std::is_same_v<T, NeighAnchor>) {
                    return L.are_neighbors(values[cc.var], cc.anchor);
                } else if constexpr (std::is_same_v<T, NotEqualAnchor>) {
                    return values[cc.var] != cc.anchor;
                } else {
                    for (const auto& [v, val] : cc.disjuncts) {
                        if (values[v] != val) return true;
                    }
                    return false;
                }
            },
            c);
        if (!ok) return false;
    }
    return true;
}

} // namespace latmove::csp
