#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <queue>
#include <sstream>
#include <string>
#include <vector>

#include "vknot/errors.hpp"

namespace vknot {

inline constexpr int kDefaultNodeCap = 16;

/// 4-valent rigid-vertex graph: the value type of the extended bracket. Each
/// node carries the cyclic half-edge order (out1, out2, in1, in2); the cyclic
/// order is part of the graph's identity, and since the out/in role pattern
/// admits no rotation two graphs are equal exactly when some node bijection
/// matches slots one-to-one. Arcs are directed from an out slot to an in
/// slot. A long diagram's graph additionally carries one open strand whose
/// free ends are the distinguished SOURCE and SINK terminals.
class RigidVertexGraph {
public:
    static constexpr int SINK = -2;
    static constexpr int SOURCE = -3;

    // adj[4*n + s]: for out slots (s = 0,1) the arc's head dart (4*m + t,
    // t in {2,3}) or SINK; for in slots (s = 2,3) the arc's tail dart or
    // SOURCE.
    std::vector<int> adj;
    bool has_strand = false;
    int source_to = -1;  // dart the source arc heads into, or SINK for a bare arc

    int node_count() const { return static_cast<int>(adj.size()) / 4; }
    bool empty() const { return adj.empty() && !has_strand; }

    static RigidVertexGraph empty_graph() { return RigidVertexGraph{}; }

    static RigidVertexGraph bare_strand() {
        RigidVertexGraph g;
        g.has_strand = true;
        g.source_to = SINK;
        return g;
    }

    /// Build a closed graph from explicit arcs (tail node/slot 0 or 1 ->
    /// head node/slot 2 or 3). Every dart must be used exactly once.
    static RigidVertexGraph from_arcs(int nodes,
                                      const std::vector<std::array<int, 4>>& arcs) {
        RigidVertexGraph g;
        g.adj.assign(4 * nodes, -1);
        for (const auto& [tn, ts, hn, hs] : arcs) {
            g.adj[4 * tn + ts] = 4 * hn + hs;
            g.adj[4 * hn + hs] = 4 * tn + ts;
        }
        for (int d = 0; d < 4 * nodes; ++d)
            if (g.adj[d] == -1)
                throw Error(ErrorKind::ParityViolation, "half-edge left unmatched");
        return g;
    }

    /// Strand components of the graph seen as immersed curves: a strand
    /// entering at in1 leaves at out1, one entering at in2 leaves at out2
    /// (the connectivity the node inherited from its crossing). The open
    /// strand is not counted.
    int loop_count() const {
        const int darts = static_cast<int>(adj.size());
        std::vector<char> used(darts, 0);
        // Mark the open strand's path.
        if (has_strand) {
            int dart = source_to;
            while (dart != SINK) {
                used[dart] = 1;  // an in dart
                int out = (dart & 3) == 2 ? (dart & ~3) : (dart & ~3) + 1;
                used[out] = 1;
                dart = adj[out];
            }
        }
        int loops = 0;
        for (int start = 0; start < darts; ++start) {
            if (used[start] || (start & 3) >= 2) continue;
            ++loops;
            int dart = start;  // an out dart
            do {
                used[dart] = 1;
                int head = adj[dart];
                used[head] = 1;
                dart = (head & 3) == 2 ? (head & ~3) : (head & ~3) + 1;
            } while (dart != start);
        }
        return loops;
    }

    /// Connected components (nodes linked by arcs; the strand binds what it
    /// touches into one component).
    int component_count() const;

    std::string canonical_code(int node_cap = kDefaultNodeCap) const;

    friend bool operator==(const RigidVertexGraph&, const RigidVertexGraph&) = default;

private:
    std::string component_code_from(int root, std::vector<int>& global_number) const;
};

namespace detail {

inline void append_dart(std::ostringstream& out, int dart, const std::vector<int>& number) {
    if (dart == RigidVertexGraph::SINK)
        out << "T";
    else
        out << number[dart >> 2] << "." << (dart & 3);
}

} // namespace detail

inline std::string RigidVertexGraph::component_code_from(int root,
                                                         std::vector<int>& number) const {
    // Deterministic BFS numbering; slots are rigid so the rooted code is
    // canonical for the component.
    std::vector<int> order;
    number[root] = 0;
    order.push_back(root);
    for (std::size_t qi = 0; qi < order.size(); ++qi) {
        int n = order[qi];
        for (int s = 0; s < 4; ++s) {
            int target = adj[4 * n + s];
            if (target < 0) continue;
            int m = target >> 2;
            if (number[m] == -1) {
                number[m] = static_cast<int>(order.size());
                order.push_back(m);
            }
        }
    }
    std::ostringstream out;
    for (int n : order) {
        out << "(";
        for (int s : {0, 1}) {  // out slots carry each arc once
            int target = adj[4 * n + s];
            if (s) out << " ";
            detail::append_dart(out, target, number);
        }
        out << ")";
    }
    return out.str();
}

inline int RigidVertexGraph::component_count() const {
    int n = node_count();
    std::vector<int> number(n, -1);
    int components = 0;
    if (has_strand) {
        // walk the strand, binding its nodes into one visited set
        std::vector<int> order;
        int dart = source_to;
        while (dart != SINK) {
            int node = dart >> 2;
            if (number[node] == -1) {
                number[node] = 0;
                order.push_back(node);
            }
            int out = (dart & 3) == 2 ? (dart & ~3) : (dart & ~3) + 1;
            dart = adj[out];
        }
        // expand to everything reachable
        for (std::size_t qi = 0; qi < order.size(); ++qi)
            for (int s = 0; s < 4; ++s) {
                int target = adj[4 * order[qi] + s];
                if (target < 0) continue;
                int m = target >> 2;
                if (number[m] == -1) {
                    number[m] = 0;
                    order.push_back(m);
                }
            }
        components = 1;  // the strand itself
    }
    for (int root = 0; root < n; ++root) {
        if (number[root] != -1) continue;
        std::vector<int> local(n, -1);
        component_code_from(root, local);
        for (int i = 0; i < n; ++i)
            if (local[i] != -1) number[i] = 0;
        ++components;
    }
    return components;
}

/// Isomorphism-invariant canonical code. The strand component is coded from
/// the SOURCE end; each closed component takes the lexicographically least
/// rooted code over its nodes; component codes are sorted.
inline std::string RigidVertexGraph::canonical_code(int node_cap) const {
    int n = node_count();
    if (n > node_cap)
        throw Error(ErrorKind::TooLarge,
                    std::to_string(n) + " nodes exceeds the cap of " + std::to_string(node_cap));
    if (empty()) return "0";

    std::vector<char> in_strand(n, 0);
    std::string strand_code;
    if (has_strand) {
        // Number nodes in strand-walk order, then BFS closure.
        std::vector<int> number(n, -1);
        std::vector<int> order;
        int dart = source_to;
        while (dart != SINK) {
            int node = dart >> 2;
            if (number[node] == -1) {
                number[node] = static_cast<int>(order.size());
                order.push_back(node);
            }
            int out = (dart & 3) == 2 ? (dart & ~3) : (dart & ~3) + 1;
            dart = adj[out];
        }
        for (std::size_t qi = 0; qi < order.size(); ++qi)
            for (int s = 0; s < 4; ++s) {
                int target = adj[4 * order[qi] + s];
                if (target < 0) continue;
                int m = target >> 2;
                if (number[m] == -1) {
                    number[m] = static_cast<int>(order.size());
                    order.push_back(m);
                }
            }
        std::ostringstream out;
        out << "S[";
        if (source_to == SINK)
            out << "T";
        else
            detail::append_dart(out, source_to, number);
        for (int node : order) {
            out << "(";
            for (int s : {0, 1}) {
                int target = adj[4 * node + s];
                if (s) out << " ";
                detail::append_dart(out, target, number);
            }
            out << ")";
        }
        out << "]";
        strand_code = out.str();
        for (int i = 0; i < n; ++i) in_strand[i] = number[i] != -1;
    }

    std::vector<char> assigned = in_strand;
    std::vector<std::string> component_codes;
    for (int root = 0; root < n; ++root) {
        if (assigned[root]) continue;
        // gather the component
        std::vector<int> number(n, -1);
        component_code_from(root, number);
        std::vector<int> members;
        for (int i = 0; i < n; ++i)
            if (number[i] != -1) {
                members.push_back(i);
                assigned[i] = 1;
            }
        std::string best;
        for (int r : members) {
            std::vector<int> num(n, -1);
            std::string code = component_code_from(r, num);
            if (best.empty() || code < best) best = code;
        }
        component_codes.push_back(best);
    }
    std::sort(component_codes.begin(), component_codes.end());

    std::ostringstream out;
    if (has_strand) out << strand_code;
    for (const auto& c : component_codes) {
        if (out.tellp() > 0) out << "|";
        out << c;
    }
    return out.str();
}

} // namespace vknot
