#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "vknot/diagram.hpp"
#include "vknot/extended.hpp"
#include "vknot/rigid_graph.hpp"
#include "vknot/state_sum.hpp"

namespace vknot {

/// A rotation system is exactly what a RigidVertexGraph stores: the cyclic
/// half-edge order (a,b,c,d) at each 4-valent node plus the edge involution.
using RotationSystem = RigidVertexGraph;

namespace detail {

/// Close the open strand (if any) so face tracing sees a closed ribbon
/// graph. A bare strand closes into a free circle, which the caller counts
/// as one extra face.
inline std::pair<RigidVertexGraph, int> close_strand(const RigidVertexGraph& g) {
    if (!g.has_strand) return {g, 0};
    RigidVertexGraph r = g;
    r.has_strand = false;
    if (r.source_to == RigidVertexGraph::SINK) {
        r.source_to = -1;
        return {r, 1};
    }
    int sink_from = -1;
    for (int dart = 0; dart < static_cast<int>(r.adj.size()); ++dart)
        if ((dart & 3) <= 1 && r.adj[dart] == RigidVertexGraph::SINK) sink_from = dart;
    r.adj[sink_from] = r.source_to;
    r.adj[r.source_to] = sink_from;
    r.source_to = -1;
    return {r, 0};
}

} // namespace detail

/// Number of boundary components of the ribbon neighborhood N(G): the
/// orbits of dart -> rotation successor of its partner dart.
inline int boundary_components(const RotationSystem& rs) {
    auto [g, extra] = detail::close_strand(rs);
    const int darts = static_cast<int>(g.adj.size());
    std::vector<char> seen(darts, 0);
    int faces = extra;
    for (int start = 0; start < darts; ++start) {
        if (seen[start]) continue;
        ++faces;
        int dart = start;
        do {
            seen[dart] = 1;
            int partner = g.adj[dart];
            dart = (partner & ~3) + ((partner + 1) & 3);
        } while (dart != start);
    }
    return faces;
}

/// Genus of the least-genus orientable surface supporting the graph:
/// g = 1 + (v - f)/2 per connected component, summed over components.
/// Isolated circles (no nodes) are genus 0.
inline int graph_genus(const RigidVertexGraph& graph) {
    auto [g, extra_faces] = detail::close_strand(graph);
    (void)extra_faces;
    const int n = g.node_count();
    if (n == 0) return 0;

    // Partition nodes into connected components.
    std::vector<int> comp(n, -1);
    int comps = 0;
    for (int root = 0; root < n; ++root) {
        if (comp[root] != -1) continue;
        std::vector<int> stack{root};
        comp[root] = comps;
        while (!stack.empty()) {
            int node = stack.back();
            stack.pop_back();
            for (int s = 0; s < 4; ++s) {
                int m = g.adj[4 * node + s] >> 2;
                if (comp[m] == -1) {
                    comp[m] = comps;
                    stack.push_back(m);
                }
            }
        }
        ++comps;
    }

    std::vector<int> v(comps, 0), f(comps, 0);
    for (int node = 0; node < n; ++node) v[comp[node]]++;
    std::vector<char> seen(g.adj.size(), 0);
    for (int start = 0; start < static_cast<int>(g.adj.size()); ++start) {
        if (seen[start]) continue;
        f[comp[start >> 2]]++;
        int dart = start;
        do {
            seen[dart] = 1;
            int partner = g.adj[dart];
            dart = (partner & ~3) + ((partner + 1) & 3);
        } while (dart != start);
    }

    int genus = 0;
    for (int c = 0; c < comps; ++c) {
        if ((v[c] - f[c]) % 2 != 0)
            throw Error(ErrorKind::ParityViolation,
                        "v - f odd on a component: corrupt rotation data");
        genus += 1 + (v[c] - f[c]) / 2;
    }
    return genus;
}

/// The diagram's underlying 4-valent graph: one node per crossing with the
/// crossing's own (a,b,c,d) rotation. Its genus certifies the genus of this
/// particular representative.
inline RigidVertexGraph diagram_graph(const DiagramCode& d) {
    if (d.is_long()) throw Error(ErrorKind::LongDiagram, "diagram graph needs a closed diagram");
    RigidVertexGraph g;
    g.adj.assign(4 * d.crossing_count(), -1);
    std::vector<int> tail_of(d.labels.size(), -1), head_of(d.labels.size(), -1);
    for (int i = 0; i < d.crossing_count(); ++i) {
        const auto& c = d.crossings[i];
        tail_of[c.slots[SLOT_A]] = 4 * i + 0;
        tail_of[c.slots[SLOT_B]] = 4 * i + 1;
        head_of[c.slots[SLOT_C]] = 4 * i + 2;
        head_of[c.slots[SLOT_D]] = 4 * i + 3;
    }
    for (std::size_t l = 0; l < d.labels.size(); ++l) {
        if (tail_of[l] < 0 || head_of[l] < 0) continue;
        g.adj[tail_of[l]] = head_of[l];
        g.adj[head_of[l]] = tail_of[l];
    }
    return g;
}

struct GenusBound {
    int genus_lower_bound = 0;
    std::vector<std::string> certificates;  // canonical codes achieving the bound
};

/// Lower bound for the genus of the virtual link: the maximum graph genus
/// over the classes surviving in the extended bracket, with witnesses.
inline GenusBound genus_lower_bound(const DiagramCode& d, const ExtendedOptions& opts = {}) {
    GraphSum sum = extended_bracket(d, opts);
    GenusBound r;
    for (const auto& [code, entry] : sum.entries()) {
        int g = graph_genus(entry.graph);
        if (g > r.genus_lower_bound) {
            r.genus_lower_bound = g;
            r.certificates.clear();
        }
        if (g == r.genus_lower_bound) r.certificates.push_back(code);
    }
    return r;
}

struct AdequacyReport {
    bool a_adequate = true;
    bool b_adequate = true;
    int a_loops = 0;  // ||S|| of the all-A state
    int b_loops = 0;  // ||S'|| of the all-A^{-1} state
    GraphSum a_state_graphs;
    GraphSum b_state_graphs;
};

/// A site is self-touching when both of its smoothing arcs lie on one loop
/// of the state. If the all-A state has none, the top bracket degree is
/// pinned at v + 2||S|| - 2; dually for the all-A^{-1} state.
inline AdequacyReport adequacy(const DiagramCode& d, const ExtendedOptions& opts = {}) {
    if (d.is_long()) throw Error(ErrorKind::LongDiagram, "adequacy needs a closed diagram");
    AdequacyReport report;
    if (d.crossing_count() == 0) {
        report.a_loops = report.b_loops = 1;
        return report;  // vacuously adequate
    }
    TraceContext ctx(d);
    // All-A state: positive crossings smooth oriented, negative disoriented.
    State all_a = 0, all_b = 0;
    for (int i = 0; i < d.crossing_count(); ++i) {
        if (d.crossings[i].sign < 0)
            all_a |= State(1) << i;
        else
            all_b |= State(1) << i;
    }
    auto inspect = [&](State s, bool& adequate, int& loops, GraphSum& graphs) {
        StateTrace t = trace_state(ctx, s);
        loops = t.loop_count;
        for (const auto& arcs : t.site_loops)
            if (arcs[0] == arcs[1]) adequate = false;
        StateGraph g = trace_state_graph(ctx, s);
        int d_exp = g.closed_loops - 1;
        LaurentQ factor = LaurentQ::monomial(Rational(1), static_cast<int>(g.weight_exponent));
        for (int i = 0; i < d_exp; ++i) factor *= LaurentQ::loop_value();
        for (auto& [graph, q] : reduce_state(g)) graphs.add(graph, factor.scalar_mul(q), opts.node_cap);
    };
    inspect(all_a, report.a_adequate, report.a_loops, report.a_state_graphs);
    inspect(all_b, report.b_adequate, report.b_loops, report.b_state_graphs);
    return report;
}

} // namespace vknot
