#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <thread>
#include <vector>

#include "vknot/arrow_poly.hpp"
#include "vknot/diagram.hpp"
#include "vknot/errors.hpp"
#include "vknot/gauss.hpp"

namespace vknot {

inline constexpr int kDefaultStateCap = 28;

/// A bracket state: bit i set means crossing i takes the disoriented
/// smoothing, clear means the oriented one. States are enumerated in plain
/// ascending bitmask order.
using State = std::uint64_t;

inline std::uint64_t state_count(const DiagramCode& d, int cap = kDefaultStateCap) {
    int n = d.crossing_count();
    if (n > cap)
        throw Error(ErrorKind::TooManyCrossings,
                    std::to_string(n) + " crossings exceeds the cap of " + std::to_string(cap));
    return std::uint64_t(1) << n;
}

/// Letters of a loop word. Traversing a cusp from its first slot to its
/// second emits ALPHA, the other way BETA; adjacent equal letters cancel.
inline constexpr std::uint8_t ALPHA = 0;
inline constexpr std::uint8_t BETA = 1;

using LoopWord = std::vector<std::uint8_t>;

/// One traced bracket state. `loops` holds the cyclic cusp word of every
/// closed loop; long diagrams also carry the open strand's linear word,
/// which is excluded from loop_count. site_loops records, per crossing, the
/// loop ids touched by its two smoothing arcs (adequacy detection);
/// -1 marks the open strand.
struct StateTrace {
    std::vector<LoopWord> loops;
    std::optional<LoopWord> open_word;
    int loop_count = 0;
    long weight_exponent = 0;
    std::vector<std::array<int, 2>> site_loops;
};

/// Positions of every edge label's two endpoints, shared across all states
/// of one diagram.
class TraceContext {
public:
    explicit TraceContext(const DiagramCode& d) : diagram_(&d) {
        const int nl = static_cast<int>(d.labels.size());
        out_pos_.assign(nl, {-1, -1});
        in_pos_.assign(nl, {-1, -1});
        for (int i = 0; i < d.crossing_count(); ++i) {
            const auto& c = d.crossings[i];
            out_pos_[c.slots[SLOT_A]] = {i, SLOT_A};
            out_pos_[c.slots[SLOT_B]] = {i, SLOT_B};
            in_pos_[c.slots[SLOT_C]] = {i, SLOT_C};
            in_pos_[c.slots[SLOT_D]] = {i, SLOT_D};
        }
    }

    const DiagramCode& diagram() const { return *diagram_; }
    std::pair<int, int> out_pos(int label) const { return out_pos_[label]; }
    std::pair<int, int> in_pos(int label) const { return in_pos_[label]; }

private:
    const DiagramCode* diagram_;
    std::vector<std::pair<int, int>> out_pos_, in_pos_;
};

namespace detail {

// Dart encoding: 2*label for forward (tail to head), 2*label+1 for backward.
struct Walker {
    const TraceContext& ctx;
    State state;
    StateTrace& trace;
    std::vector<char>& visited;

    bool disoriented(int crossing) const { return (state >> crossing) & 1; }

    void record_site_loop(int crossing, int arc, int loop_id) {
        auto& slot = trace.site_loops[crossing][arc];
        if (slot == -2) slot = loop_id;
    }

    // One step from a dart; returns the next dart (or -1 at a free end) and
    // appends the letter emitted at a cusp passage, tagging site arcs with
    // the current loop id.
    long step(long dart, LoopWord& word, int loop_id) {
        const auto& d = ctx.diagram();
        int label = static_cast<int>(dart / 2);
        bool forward = (dart % 2) == 0;
        if (forward) {
            auto [ci, cs] = ctx.in_pos(label);
            if (ci < 0) return -1;  // free head of the exit edge
            const auto& c = d.crossings[ci];
            if (!disoriented(ci)) {
                // oriented smoothing: d -> a, c -> b
                record_site_loop(ci, cs == SLOT_D ? 0 : 1, loop_id);
                int exit = cs == SLOT_D ? SLOT_A : SLOT_B;
                return 2L * c.slots[exit];
            }
            // in-cusp (c,d): entering at c emits ALPHA, at d BETA; leave
            // backward along the other incoming edge.
            record_site_loop(ci, 1, loop_id);
            word.push_back(cs == SLOT_C ? ALPHA : BETA);
            int exit = cs == SLOT_C ? SLOT_D : SLOT_C;
            return 2L * c.slots[exit] + 1;
        }
        auto [ci, cs] = ctx.out_pos(label);
        if (ci < 0) return -1;  // free tail of the entry edge
        const auto& c = d.crossings[ci];
        if (!disoriented(ci)) {
            record_site_loop(ci, cs == SLOT_A ? 0 : 1, loop_id);
            int from = cs == SLOT_A ? SLOT_D : SLOT_C;
            return 2L * c.slots[from] + 1;
        }
        // out-cusp (a,b): entering at a emits ALPHA, at b BETA; leave forward
        // along the other outgoing edge.
        record_site_loop(ci, 0, loop_id);
        word.push_back(cs == SLOT_A ? ALPHA : BETA);
        int exit = cs == SLOT_A ? SLOT_B : SLOT_A;
        return 2L * c.slots[exit];
    }
};

} // namespace detail

/// Trace one bracket state: the oriented smoothing joins d->a and c->b, the
/// disoriented one installs an out-cusp on (a,b) and an in-cusp on (c,d).
inline StateTrace trace_state(const TraceContext& ctx, State state) {
    const auto& d = ctx.diagram();
    StateTrace trace;
    trace.site_loops.assign(d.crossing_count(), {-2, -2});
    for (int i = 0; i < d.crossing_count(); ++i) {
        bool dis = (state >> i) & 1;
        trace.weight_exponent += (d.crossings[i].sign > 0) == !dis ? +1 : -1;
    }

    const long dart_count = 2L * static_cast<long>(d.labels.size());
    std::vector<char> visited(dart_count, 0);
    detail::Walker walker{ctx, state, trace, visited};

    if (d.is_long()) {
        LoopWord word;
        int entry = d.open_ends->first;
        if (ctx.in_pos(entry).first >= 0) {  // strand actually meets a crossing
            long dart = 2L * entry;
            while (dart >= 0) {
                visited[dart] = 1;
                visited[dart ^ 1] = 1;
                dart = walker.step(dart, word, -1);
            }
        }
        trace.open_word = std::move(word);
    }

    for (long start = 0; start < dart_count; ++start) {
        if (visited[start]) continue;
        int label = static_cast<int>(start / 2);
        bool forward = (start % 2) == 0;
        // Skip darts with no continuation (labels absent from slots).
        if (forward && ctx.in_pos(label).first < 0) continue;
        if (!forward && ctx.out_pos(label).first < 0) continue;
        int loop_id = static_cast<int>(trace.loops.size());
        LoopWord word;
        long dart = start;
        do {
            visited[dart] = 1;
            visited[dart ^ 1] = 1;
            dart = walker.step(dart, word, loop_id);
        } while (dart != start);
        trace.loops.push_back(std::move(word));
    }

    trace.loop_count = static_cast<int>(trace.loops.size());
    if (!d.is_long() && d.crossing_count() == 0) trace.loop_count = 1;  // empty diagram = unknot
    return trace;
}

/// Reduce a cyclic cusp word: adjacent equal letters cancel (cyclically).
/// The normal form is empty or alternating; returns half its length, the n
/// of the loop variable K_n (0 for a trivial circle).
inline int reduce_cyclic_word(const LoopWord& word) {
    if (word.size() % 2 != 0)
        throw Error(ErrorKind::OddLength, "loop word of length " + std::to_string(word.size()));
    std::vector<std::uint8_t> stack;
    for (std::uint8_t letter : word) {
        if (!stack.empty() && stack.back() == letter)
            stack.pop_back();
        else
            stack.push_back(letter);
    }
    std::size_t lo = 0, hi = stack.size();
    while (hi - lo >= 2 && stack[lo] == stack[hi - 1]) {
        ++lo;
        --hi;
    }
    return static_cast<int>(hi - lo) / 2;
}

struct ArrowOptions {
    int state_cap = kDefaultStateCap;
    unsigned threads = 1;  // contiguous state blocks, merged in block order
};

namespace detail {

inline ArrowPoly arrow_block(const TraceContext& ctx, State begin, State end,
                             const std::vector<Laurent>& dpow) {
    ArrowPoly total;
    for (State s = begin; s < end; ++s) {
        StateTrace t = trace_state(ctx, s);
        ArrowKey key;
        for (const auto& w : t.loops) {
            int n = reduce_cyclic_word(w);
            if (n == 0) continue;
            auto it = key.k.begin();
            while (it != key.k.end() && it->first < n) ++it;
            if (it != key.k.end() && it->first == n)
                it->second++;
            else
                key.k.insert(it, {n, 1});
        }
        const Laurent& dfac = dpow[t.loop_count - (ctx.diagram().is_long() ? 0 : 1)];
        for (const auto& [e, c] : dfac.terms())
            total.add_term(ArrowKey{static_cast<int>(t.weight_exponent) + e, key.k}, c);
    }
    return total;
}

} // namespace detail

/// The arrow polynomial state sum A[K] = sum over states of
/// <K|S> d^{||S||-1} V[S], with each irreducible 2n-cusp loop contributing
/// K_n. Defined for closed diagrams; the empty diagram evaluates to 1.
inline ArrowPoly arrow_polynomial(const DiagramCode& d, const ArrowOptions& opts = {}) {
    if (d.is_long()) throw Error(ErrorKind::LongDiagram, "arrow polynomial needs a closed diagram");
    if (d.crossing_count() == 0) return ArrowPoly(1);
    std::uint64_t count = state_count(d, opts.state_cap);
    TraceContext ctx(d);

    int max_loops = d.crossing_count() + component_count(d) + 1;
    std::vector<Laurent> dpow(max_loops + 1);
    dpow[0] = Laurent(1);
    for (int i = 1; i <= max_loops; ++i) dpow[i] = dpow[i - 1] * Laurent::loop_value();

    unsigned threads = opts.threads == 0 ? std::thread::hardware_concurrency() : opts.threads;
    if (threads <= 1 || count < 2 * threads)
        return detail::arrow_block(ctx, 0, count, dpow);

    std::vector<ArrowPoly> parts(threads);
    std::vector<std::thread> pool;
    std::uint64_t chunk = (count + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
        State begin = t * chunk;
        State end = std::min<std::uint64_t>(begin + chunk, count);
        if (begin >= end) break;
        pool.emplace_back(
            [&, begin, end, t] { parts[t] = detail::arrow_block(ctx, begin, end, dpow); });
    }
    for (auto& th : pool) th.join();
    ArrowPoly total;
    for (const auto& p : parts) total += p;
    return total;
}

inline Laurent bracket(const DiagramCode& d, const ArrowOptions& opts = {}) {
    return arrow_polynomial(d, opts).collapse_k();
}

inline Laurent f_polynomial(const DiagramCode& d, const ArrowOptions& opts = {}) {
    return normalize_writhe(bracket(d, opts), writhe(d));
}

/// W[K] = (-A^3)^{-wr(K)} A[K], invariant under all moves.
inline ArrowPoly arrow_normalized(const DiagramCode& d, const ArrowOptions& opts = {}) {
    return arrow_polynomial(d, opts).normalize_writhe(writhe(d));
}

/// F[K] = A[K](A=1), the flat invariant.
inline ArrowPoly flat_arrow(const DiagramCode& d, const ArrowOptions& opts = {}) {
    return arrow_polynomial(d, opts).substitute_a1();
}

inline ArrowPoly flat_arrow(const FlatCode& flat, const ArrowOptions& opts = {}) {
    return flat_arrow(resolve_flat(flat), opts);
}

} // namespace vknot
