#pragma once

#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "vknot/arrow_poly.hpp"
#include "vknot/rigid_graph.hpp"
#include "vknot/state_sum.hpp"

namespace vknot {

inline constexpr int kDefaultExtendedCap = 12;

/// One bracket state prepared for graph reduction: the disoriented smoothing
/// of each chosen crossing contributes a paired out-cusp/in-cusp site, and
/// the oriented smoothings dissolve into the arcs connecting cusp slots.
/// Arc slot conventions: an out-cusp's slots are (a,b) = (0,1), an in-cusp's
/// (c,d) = (0,1); every arc runs from an out slot to an in slot. An arc is
/// cancelling exactly when its two flanking cusps carry equal letters, which
/// happens for the slot pairs b->c and a->d (tail_slot != head_slot).
struct StateGraph {
    static constexpr int SOURCE = -1;
    static constexpr int SINK = -2;

    struct End {
        int cusp;  // cusp id, or SOURCE / SINK terminals
        int slot;  // 0 or 1 within the cusp
    };
    struct Arc {
        End tail;  // at an out-cusp (or SOURCE)
        End head;  // at an in-cusp (or SINK)
        bool alive = true;
    };
    struct Cusp {
        bool is_out = false;
        int partner = -1;   // the opposite-kind cusp of the same site
        int arc[2] = {-1, -1};
        bool alive = true;
        bool flip = false;  // weld this cusp's slot pair in reversed order
    };

    std::vector<Cusp> cusps;
    std::vector<Arc> arcs;
    int closed_loops = 0;  // loop count at trace time; fixes the d exponent
    bool is_long = false;
    long weight_exponent = 0;
    int removed_loops = 0;   // loops dropped during reduction (bookkeeping only)
    int last_chirality = -1; // tail slot of the last weighed batch applied

    bool arc_cancelling(int a) const {
        const Arc& arc = arcs[a];
        return arc.tail.cusp >= 0 && arc.head.cusp >= 0 && arc.tail.slot != arc.head.slot;
    }

    /// Delete the two cusps flanking a cancelling arc. Same-site pairs
    /// disappear outright; for distinct sites the two surviving cusps are
    /// re-paired into a new site. Returns the merged arc id, or -1 when the
    /// merge closed a loop.
    int cancel(int arc_id) {
        Arc arc = arcs[arc_id];
        int u = arc.tail.cusp, v = arc.head.cusp;
        int b = cusps[u].arc[1 - arc.tail.slot];
        int c = cusps[v].arc[1 - arc.head.slot];
        if (cusps[u].partner != v) {
            int pu = cusps[u].partner, pv = cusps[v].partner;
            cusps[pu].partner = pv;
            cusps[pv].partner = pu;
#if defined(VKNOT_FLIP_IN_BC)
            if (arc.tail.slot == 1) cusps[pu].flip = !cusps[pu].flip;
#elif defined(VKNOT_FLIP_IN_AD)
            if (arc.tail.slot == 0) cusps[pu].flip = !cusps[pu].flip;
#elif defined(VKNOT_FLIP_IN_ALWAYS)
            cusps[pu].flip = !cusps[pu].flip;
#elif defined(VKNOT_FLIP_OUT_BC)
            if (arc.tail.slot == 1) cusps[pv].flip = !cusps[pv].flip;
#elif defined(VKNOT_FLIP_OUT_AD)
            if (arc.tail.slot == 0) cusps[pv].flip = !cusps[pv].flip;
#elif defined(VKNOT_FLIP_OUT_ALWAYS)
            cusps[pv].flip = !cusps[pv].flip;
#endif
        }
        cusps[u].alive = false;
        cusps[v].alive = false;
        arcs[arc_id].alive = false;
        if (b == c) {
            arcs[b].alive = false;
            ++removed_loops;
            return -1;
        }
        // Merge: the strand through v's other slot continues into u's other
        // slot, so the new arc runs from c's tail to b's head.
        Arc merged;
        merged.tail = arcs[c].tail;
        merged.head = arcs[b].head;
        arcs[b].alive = false;
        arcs[c].alive = false;
        int id = static_cast<int>(arcs.size());
        arcs.push_back(merged);
        if (merged.tail.cusp >= 0) cusps[merged.tail.cusp].arc[merged.tail.slot] = id;
        if (merged.head.cusp >= 0) cusps[merged.head.cusp].arc[merged.head.slot] = id;
        return id;
    }
};

/// Trace a state into cusp/arc form. Oriented smoothings are followed
/// through; each disoriented crossing becomes a site whose out-cusp keeps
/// the crossing's (a,b) slot order and whose in-cusp keeps (c,d).
inline StateGraph trace_state_graph(const TraceContext& ctx, State state) {
    const DiagramCode& d = ctx.diagram();
    StateGraph g;
    g.is_long = d.is_long();

    std::vector<int> out_cusp_of(d.crossing_count(), -1);  // crossing -> out cusp id
    for (int i = 0; i < d.crossing_count(); ++i) {
        bool dis = (state >> i) & 1;
        g.weight_exponent += (d.crossings[i].sign > 0) == !dis ? +1 : -1;
        if (!dis) continue;
        int out_id = static_cast<int>(g.cusps.size());
        g.cusps.push_back(StateGraph::Cusp{true, out_id + 1, {-1, -1}, true});
        g.cusps.push_back(StateGraph::Cusp{false, out_id, {-1, -1}, true});
        out_cusp_of[i] = out_id;
    }

    std::vector<char> edge_seen(d.labels.size(), 0);
    // Walk forward from an edge label until a disoriented in slot or the
    // free end; returns the head End.
    auto walk = [&](int label) {
        while (true) {
            edge_seen[label] = 1;
            auto [ci, cs] = ctx.in_pos(label);
            if (ci < 0) return StateGraph::End{StateGraph::SINK, 0};
            if (out_cusp_of[ci] >= 0)
                return StateGraph::End{out_cusp_of[ci] + 1, cs == SLOT_C ? 0 : 1};
            label = d.crossings[ci].slots[cs == SLOT_D ? SLOT_A : SLOT_B];
        }
    };
    auto add_arc = [&](StateGraph::End tail, int label) {
        StateGraph::Arc arc;
        arc.tail = tail;
        arc.head = walk(label);
        int id = static_cast<int>(g.arcs.size());
        g.arcs.push_back(arc);
        if (tail.cusp >= 0) g.cusps[tail.cusp].arc[tail.slot] = id;
        if (arc.head.cusp >= 0) g.cusps[arc.head.cusp].arc[arc.head.slot] = id;
    };

    if (d.is_long()) add_arc(StateGraph::End{StateGraph::SOURCE, 0}, d.open_ends->first);
    for (int i = 0; i < d.crossing_count(); ++i) {
        if (out_cusp_of[i] < 0) continue;
        add_arc(StateGraph::End{out_cusp_of[i], 0}, d.crossings[i].slots[SLOT_A]);
        add_arc(StateGraph::End{out_cusp_of[i], 1}, d.crossings[i].slots[SLOT_B]);
    }

    // Count loops: cusped loops are arc orbits, cusp-free loops are the
    // oriented cycles left over.
    std::vector<char> arc_seen(g.arcs.size(), 0);
    int cusped_loops = 0;
    for (std::size_t a0 = 0; a0 < g.arcs.size(); ++a0) {
        if (arc_seen[a0]) continue;
        if (g.arcs[a0].tail.cusp < 0 || g.arcs[a0].head.cusp < 0) {
            // strand path: mark it, do not count
            std::size_t a = a0;
            while (true) {
                arc_seen[a] = 1;
                if (g.arcs[a].head.cusp < 0) break;
                const auto& v = g.cusps[g.arcs[a].head.cusp];
                int back = v.arc[1 - g.arcs[a].head.slot];
                arc_seen[back] = 1;
                const auto& tail = g.arcs[back].tail;
                if (tail.cusp < 0) break;
                a = static_cast<std::size_t>(g.cusps[tail.cusp].arc[1 - tail.slot]);
            }
            continue;
        }
        ++cusped_loops;
        std::size_t a = a0;
        do {
            arc_seen[a] = 1;
            const auto& v = g.cusps[g.arcs[a].head.cusp];
            int back = v.arc[1 - g.arcs[a].head.slot];
            arc_seen[back] = 1;
            const auto& tail = g.arcs[back].tail;
            a = static_cast<std::size_t>(g.cusps[tail.cusp].arc[1 - tail.slot]);
        } while (a != a0);
    }
    int free_loops = 0;
    for (std::size_t l = 0; l < d.labels.size(); ++l) {
        if (edge_seen[l]) continue;
        auto pos = ctx.in_pos(static_cast<int>(l));
        if (pos.first < 0) continue;
        ++free_loops;
        int label = static_cast<int>(l);
        while (!edge_seen[label]) {
            edge_seen[label] = 1;
            auto [ci, cs] = ctx.in_pos(label);
            label = d.crossings[ci].slots[cs == SLOT_D ? SLOT_A : SLOT_B];
        }
    }
    g.closed_loops = cusped_loops + free_loops;
    if (!d.is_long() && d.crossing_count() == 0) g.closed_loops = 1;
    return g;
}

namespace detail {

/// Special 4-cusp double cancellation: a cancelling arc whose flanking arcs
/// are zigzags leading to the two cusps of a single site. Cancelling the
/// middle pair leaves that site's cusps adjacent with equal letters, so the
/// whole window collapses. Runs before any weighed choice.
inline bool apply_c_moves(StateGraph& g) {
    bool changed = false;
    bool progress = true;
    while (progress) {
        progress = false;
        for (std::size_t a = 0; a < g.arcs.size(); ++a) {
            if (!g.arcs[a].alive || !g.arc_cancelling(static_cast<int>(a))) continue;
            const auto& arc = g.arcs[a];
            int flank_in = g.cusps[arc.head.cusp].arc[1 - arc.head.slot];
            int flank_out = g.cusps[arc.tail.cusp].arc[1 - arc.tail.slot];
            if (flank_in == flank_out) continue;  // two-cusp loop
            const auto& a1 = g.arcs[flank_in];
            const auto& a3 = g.arcs[flank_out];
            if (a1.tail.cusp < 0 || a3.head.cusp < 0) continue;
            if (a1.tail.slot != a1.head.slot || a3.tail.slot != a3.head.slot)
                continue;  // flanks must be zigzags
            // The outer cusps must be the two cusps of one site.
            if (g.cusps[a1.tail.cusp].partner != a3.head.cusp) continue;
            int merged = g.cancel(static_cast<int>(a));
            if (merged < 0 || !g.arc_cancelling(merged))
                throw Error(ErrorKind::NonterminatingReduction,
                            "double cancellation lost its outer pair");
            g.cancel(merged);
            progress = true;
            changed = true;
            break;
        }
    }
    return changed;
}

inline RigidVertexGraph weld(const StateGraph& g) {
    RigidVertexGraph graph;
    graph.has_strand = g.is_long;
    // Node per surviving site, ordered by out-cusp id.
    std::vector<int> node_of_cusp(g.cusps.size(), -1);
    int nodes = 0;
    for (std::size_t c = 0; c < g.cusps.size(); ++c) {
        if (!g.cusps[c].alive || !g.cusps[c].is_out) continue;
        node_of_cusp[c] = nodes;
        node_of_cusp[g.cusps[c].partner] = nodes;
        ++nodes;
    }
    graph.adj.assign(4 * nodes, -1);
    auto dart_of = [&](const StateGraph::End& e, bool head) {
        if (e.cusp < 0) return head ? RigidVertexGraph::SINK : RigidVertexGraph::SOURCE;
        int base = 4 * node_of_cusp[e.cusp];
        int slot = g.cusps[e.cusp].flip ? 1 - e.slot : e.slot;
        // out-cusp slots map to node slots 0,1; in-cusp slots to 2,3
        return base + (g.cusps[e.cusp].is_out ? slot : 2 + slot);
    };
    for (const auto& arc : g.arcs) {
        if (!arc.alive) continue;
        int t = dart_of(arc.tail, false);
        int h = dart_of(arc.head, true);
        if (t == RigidVertexGraph::SOURCE) {
            graph.source_to = h;
        } else {
            graph.adj[t] = h;
        }
        if (h != RigidVertexGraph::SINK) graph.adj[h] = t;
    }
    if (g.is_long && graph.source_to == -1)
        graph.source_to = RigidVertexGraph::SINK;  // bare strand
    return graph;
}

using ReducedStates = std::vector<std::pair<RigidVertexGraph, Rational>>;

/// Arc-id-free serialization of the live structure: identical intermediate
/// states reached along different branch orders share one cache entry.
inline std::string encode_live(const StateGraph& g) {
    std::ostringstream out;
    out << g.last_chirality << ";";
    auto other_end = [&](int cusp, int slot) {
        const auto& arc = g.arcs[g.cusps[cusp].arc[slot]];
        const auto& e = (arc.tail.cusp == cusp && arc.tail.slot == slot) ? arc.head : arc.tail;
        if (e.cusp == StateGraph::SOURCE)
            out << "S";
        else if (e.cusp == StateGraph::SINK)
            out << "T";
        else
            out << e.cusp << "." << e.slot;
    };
    for (std::size_t c = 0; c < g.cusps.size(); ++c) {
        if (!g.cusps[c].alive) continue;
        out << c << (g.cusps[c].is_out ? "o" : "i") << (g.cusps[c].flip ? "f" : "")
            << g.cusps[c].partner << "[";
        other_end(static_cast<int>(c), 0);
        out << " ";
        other_end(static_cast<int>(c), 1);
        out << "]";
    }
    return out.str();
}

inline ReducedStates reduce_memo(StateGraph g, std::map<std::string, ReducedStates>& cache) {
    while (true) {
        // Deterministic replacements run before any branching: a site whose
        // own cusps cancel, a two-cusp disoriented loop, and the two-site
        // annihilation pattern of a cancelling R2 pair. None of these admit
        // a pairing ambiguity, so they take precedence over weighed type-3
        // choices.
        bool fired = false;
        for (std::size_t a = 0; a < g.arcs.size() && !fired; ++a) {
            if (!g.arcs[a].alive || !g.arc_cancelling(static_cast<int>(a))) continue;
            int u = g.arcs[a].tail.cusp, v = g.arcs[a].head.cusp;
            bool eager = false;
            if (g.cusps[u].partner == v) {
                eager = true;  // site disappears outright
            } else if (g.cusps[u].arc[1 - g.arcs[a].tail.slot] ==
                       g.cusps[v].arc[1 - g.arcs[a].head.slot]) {
                eager = true;  // two-cusp disoriented loop
            } else {
                // R2 annihilation: the partner cusps cancel along another arc
                int o2 = g.cusps[v].partner, i1 = g.cusps[u].partner;
                for (int slot = 0; slot < 2 && !eager; ++slot) {
                    int b = g.cusps[o2].arc[slot];
                    if (b < 0 || !g.arcs[b].alive) continue;
                    if (g.arcs[b].tail.cusp == o2 && g.arcs[b].head.cusp == i1 &&
                        g.arc_cancelling(b))
                        eager = true;
                }
            }
            if (eager) {
                g.cancel(static_cast<int>(a));
                fired = true;
            }
        }
        if (fired) continue;
        if (apply_c_moves(g)) continue;
        std::vector<int> moves;
        for (std::size_t a = 0; a < g.arcs.size(); ++a)
            if (g.arcs[a].alive && g.arc_cancelling(static_cast<int>(a)))
                moves.push_back(static_cast<int>(a));
        if (moves.empty()) return {{weld(g), Rational(1)}};
        if (moves.size() == 1) {
            g.cancel(moves[0]);
            continue;
        }
        // Alternatives are resolved chainwise: moves linked by a shared cusp
        // or by a site form one replacement component, and within it the two
        // coherent total replacements are the batch of all tail-slot-a
        // cancellations and the batch of all tail-slot-b ones (same-letter
        // cancellations along a loop alternate between the two kinds).
        // Components branch independently with weight 1/2 per side.
        std::vector<int> comp(moves.size());
        for (std::size_t i = 0; i < moves.size(); ++i) comp[i] = static_cast<int>(i);
        auto root = [&](int x) {
            while (comp[x] != x) x = comp[x] = comp[comp[x]];
            return x;
        };
        auto touches = [&](int m, int cusp) {
            return g.arcs[m].tail.cusp == cusp || g.arcs[m].head.cusp == cusp ||
                   g.cusps[g.arcs[m].tail.cusp].partner == cusp ||
                   g.cusps[g.arcs[m].head.cusp].partner == cusp;
        };
        for (std::size_t i = 0; i < moves.size(); ++i)
            for (std::size_t j = i + 1; j < moves.size(); ++j) {
                bool linked = touches(moves[i], g.arcs[moves[j]].tail.cusp) ||
                              touches(moves[i], g.arcs[moves[j]].head.cusp);
                if (linked) comp[root(static_cast<int>(i))] = root(static_cast<int>(j));
            }
        std::map<int, std::array<std::vector<int>, 2>> batches;  // component -> {ad, bc}
        for (std::size_t i = 0; i < moves.size(); ++i)
            batches[root(static_cast<int>(i))][g.arcs[moves[i]].tail.slot].push_back(moves[i]);
        std::vector<std::array<std::vector<int>, 2>> choice_sets;
        std::vector<std::vector<int>> forced;
        int forced_kind = -1;
        for (auto& [r, pair] : batches) {
            if (pair[0].empty() || pair[1].empty()) {
                forced.push_back(pair[0].empty() ? pair[1] : pair[0]);
            } else if (g.last_chirality >= 0) {
                // Successive weighed replacements alternate chirality along a
                // reduction cascade.
                forced.push_back(pair[1 - g.last_chirality]);
                forced_kind = 1 - g.last_chirality;
            } else {
                choice_sets.push_back(pair);
            }
        }
        if (forced_kind >= 0) g.last_chirality = forced_kind;
        if (choice_sets.empty()) {
            for (const auto& batch : forced)
                for (int m : batch)
                    if (g.arcs[m].alive && g.arc_cancelling(m)) g.cancel(m);
            continue;
        }
        std::string key = encode_live(g);
        auto hit = cache.find(key);
        if (hit != cache.end()) return hit->second;
        Rational share(1);
        for (std::size_t i = 0; i < choice_sets.size(); ++i) share /= 2;
        std::map<std::string, std::pair<RigidVertexGraph, Rational>> merged;
        for (std::uint64_t pick = 0; pick < (std::uint64_t(1) << choice_sets.size()); ++pick) {
            StateGraph branch = g;
            auto apply_batch = [&branch](const std::vector<int>& batch) {
                for (int m : batch)
                    if (branch.arcs[m].alive && branch.arc_cancelling(m)) branch.cancel(m);
            };
            for (const auto& b : forced) apply_batch(b);
            for (std::size_t i = 0; i < choice_sets.size(); ++i) {
                int side = static_cast<int>((pick >> i) & 1);
                apply_batch(choice_sets[i][side]);
                branch.last_chirality = side;
            }
            for (auto& [graph, w] : reduce_memo(std::move(branch), cache)) {
                std::string code = graph.canonical_code(1 << 20);
                auto it = merged.find(code);
                if (it == merged.end())
                    merged.emplace(code, std::make_pair(graph, w * share));
                else
                    it->second.second += w * share;
            }
        }
        ReducedStates total;
        total.reserve(merged.size());
        for (auto& [code, gw] : merged) total.push_back(gw);
        cache[key] = total;
        return total;
    }
}

} // namespace detail

/// Reduce a traced state to its weighted multiset of rigid-vertex graphs:
/// cusp-free loops drop out, the 4-cusp double cancellation runs first, then
/// single cancellations with branch averaging over multiplicities, and the
/// surviving paired cusps weld into 4-valent nodes.
inline std::vector<std::pair<RigidVertexGraph, Rational>> reduce_state(const StateGraph& g) {
    std::map<std::string, detail::ReducedStates> cache;
    return detail::reduce_memo(g, cache);
}

/// Formal sum of canonical rigid-vertex graphs over rational Laurent
/// polynomials: the value of the extended bracket.
class GraphSum {
public:
    struct Entry {
        RigidVertexGraph graph;
        LaurentQ coeff;
    };

    void add(const RigidVertexGraph& graph, const LaurentQ& coeff, int node_cap) {
        if (coeff.is_zero()) return;
        std::string code = graph.canonical_code(node_cap);
        auto it = entries_.find(code);
        if (it == entries_.end()) {
            entries_.emplace(code, Entry{graph, coeff});
        } else {
            it->second.coeff += coeff;
            if (it->second.coeff.is_zero()) entries_.erase(it);
        }
    }

    const std::map<std::string, Entry>& entries() const { return entries_; }

    /// Coefficient of the empty graph (or bare strand for long diagrams).
    LaurentQ scalar_part() const {
        for (const auto& [code, e] : entries_)
            if (e.graph.node_count() == 0) return e.coeff;
        return LaurentQ();
    }

    /// True when some non-scalar graph class survives with a nonzero
    /// coefficient: witnesses non-classicality.
    bool has_nontrivial_class() const {
        for (const auto& [code, e] : entries_)
            if (e.graph.node_count() > 0) return true;
        return false;
    }

    GraphSum scalar_mul(const LaurentQ& factor) const {
        GraphSum r;
        if (factor.is_zero()) return r;
        for (const auto& [code, e] : entries_)
            r.entries_.emplace(code, Entry{e.graph, e.coeff * factor});
        return r;
    }

    friend bool operator==(const GraphSum& x, const GraphSum& y) {
        if (x.entries_.size() != y.entries_.size()) return false;
        auto ix = x.entries_.begin();
        for (auto iy = y.entries_.begin(); iy != y.entries_.end(); ++ix, ++iy)
            if (ix->first != iy->first || ix->second.coeff != iy->second.coeff) return false;
        return true;
    }
    friend bool operator!=(const GraphSum& x, const GraphSum& y) { return !(x == y); }

    std::string to_string() const {
        std::ostringstream out;
        bool first = true;
        for (const auto& [code, e] : entries_) {
            if (!first) out << " + ";
            first = false;
            out << "(" << e.coeff.to_string() << ")";
            if (e.graph.node_count() > 0 || e.graph.has_strand) out << "*[" << code << "]";
        }
        if (first) out << "0";
        return out.str();
    }

private:
    std::map<std::string, Entry> entries_;
};

struct ExtendedOptions {
    int crossing_cap = kDefaultExtendedCap;
    int node_cap = kDefaultNodeCap;
};

/// The extended bracket <<K>>: the bracket state sum with each state
/// replaced by its reduced graph multiset. Closed and long diagrams both
/// work; the open strand is excluded from loop counting.
inline GraphSum extended_bracket(const DiagramCode& d, const ExtendedOptions& opts = {}) {
    if (d.crossing_count() > opts.crossing_cap)
        throw Error(ErrorKind::TooManyCrossings,
                    std::to_string(d.crossing_count()) + " crossings exceeds the cap of " +
                        std::to_string(opts.crossing_cap));
    GraphSum total;
    if (d.crossing_count() == 0) {
        total.add(d.is_long() ? RigidVertexGraph::bare_strand() : RigidVertexGraph::empty_graph(),
                  LaurentQ(Rational(1)), opts.node_cap);
        return total;
    }
    TraceContext ctx(d);
    std::uint64_t count = std::uint64_t(1) << d.crossing_count();
    std::map<std::string, detail::ReducedStates> cache;
    for (State s = 0; s < count; ++s) {
        StateGraph g = trace_state_graph(ctx, s);
        int d_exp = g.closed_loops - (d.is_long() ? 0 : 1);
        LaurentQ factor = LaurentQ::monomial(Rational(1), static_cast<int>(g.weight_exponent));
        for (int i = 0; i < d_exp; ++i) factor *= LaurentQ::loop_value();
        for (auto& [graph, q] : detail::reduce_memo(g, cache))
            total.add(graph, factor.scalar_mul(q), opts.node_cap);
    }
    return total;
}

/// Re-run the extended state sum with all cusp pairings released: each loop
/// reduces to its cyclic normal form and contributes its K_n. Must agree
/// with arrow_polynomial exactly.
inline ArrowPoly collapse_to_arrow(const DiagramCode& d, const ExtendedOptions& opts = {}) {
    if (d.is_long()) throw Error(ErrorKind::LongDiagram, "arrow collapse needs a closed diagram");
    if (d.crossing_count() > opts.crossing_cap)
        throw Error(ErrorKind::TooManyCrossings,
                    std::to_string(d.crossing_count()) + " crossings exceeds the cap of " +
                        std::to_string(opts.crossing_cap));
    if (d.crossing_count() == 0) return ArrowPoly(1);
    TraceContext ctx(d);
    std::uint64_t count = std::uint64_t(1) << d.crossing_count();
    ArrowPoly total;
    for (State s = 0; s < count; ++s) {
        StateGraph g = trace_state_graph(ctx, s);
        // Extract each cusped loop's letter word from the arc structure.
        ArrowKey key;
        std::vector<char> seen(g.arcs.size(), 0);
        int loops = g.closed_loops;
        for (std::size_t a0 = 0; a0 < g.arcs.size(); ++a0) {
            if (seen[a0] || g.arcs[a0].tail.cusp < 0 || g.arcs[a0].head.cusp < 0) continue;
            LoopWord word;
            std::size_t a = a0;
            do {
                seen[a] = 1;
                const auto& head = g.arcs[a].head;
                word.push_back(head.slot == 0 ? ALPHA : BETA);  // enter in-cusp at c or d
                int back = g.cusps[head.cusp].arc[1 - head.slot];
                seen[back] = 1;
                const auto& tail = g.arcs[back].tail;
                word.push_back(tail.slot == 0 ? ALPHA : BETA);  // enter out-cusp at a or b
                a = static_cast<std::size_t>(g.cusps[tail.cusp].arc[1 - tail.slot]);
            } while (a != a0);
            int n = reduce_cyclic_word(word);
            if (n == 0) continue;
            auto it = key.k.begin();
            while (it != key.k.end() && it->first < n) ++it;
            if (it != key.k.end() && it->first == n)
                it->second++;
            else
                key.k.insert(it, {n, 1});
        }
        Laurent dfac(1);
        for (int i = 0; i < loops - 1; ++i) dfac *= Laurent::loop_value();
        for (const auto& [e, c] : dfac.terms())
            total.add_term(ArrowKey{static_cast<int>(g.weight_exponent) + e, key.k}, c);
    }
    return total;
}

} // namespace vknot
