#pragma once

#include <array>
#include <cctype>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "vknot/errors.hpp"

namespace vknot {

/// One classical crossing of a virtual diagram. `sign` is the orientation
/// sign (+1 rendered X, -1 rendered Y). The slots (a,b,c,d) list the edge
/// labels in counterclockwise order starting at the lower-right outgoing
/// arrow: a,b are outgoing half-edges, c,d incoming. The strand entering at
/// d exits at b, the strand entering at c exits at a. For a positive
/// crossing the c->a strand is the over strand; for a negative crossing the
/// d->b strand is.
struct CrossingCode {
    int sign = +1;
    std::array<int, 4> slots{};  // label ids

    friend bool operator==(const CrossingCode&, const CrossingCode&) = default;
};

// Slot indices. OUT1/OUT2 are tails of edges, IN1/IN2 heads.
inline constexpr int SLOT_A = 0;
inline constexpr int SLOT_B = 1;
inline constexpr int SLOT_C = 2;
inline constexpr int SLOT_D = 3;

struct ValidationReport {
    bool ok = true;
    std::vector<std::string> violations;
    int component_count = 0;
    bool is_long = false;
};

/// A virtual knot or link diagram as a PD code: a list of signed crossings
/// whose slots carry edge labels. Virtual crossings are never stored; the
/// code is the abstract Gauss datum, so detour moves are no-ops here.
/// Immutable in practice: all structural operations return new values.
class DiagramCode {
public:
    std::vector<CrossingCode> crossings;
    std::vector<std::string> labels;                 // id -> printable name
    std::optional<std::pair<int, int>> open_ends;    // (entry label, exit label) for long diagrams

    bool is_long() const { return open_ends.has_value(); }
    int crossing_count() const { return static_cast<int>(crossings.size()); }

    int intern(const std::string& name) {
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == name) return static_cast<int>(i);
        labels.push_back(name);
        return static_cast<int>(labels.size()) - 1;
    }

    int fresh_label(const std::string& hint) {
        std::string name = hint;
        int counter = 0;
        while (true) {
            bool taken = false;
            for (const auto& l : labels)
                if (l == name) { taken = true; break; }
            if (!taken) break;
            name = hint + "_" + std::to_string(counter++);
        }
        labels.push_back(name);
        return static_cast<int>(labels.size()) - 1;
    }

    std::optional<int> find_label(const std::string& name) const {
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == name) return static_cast<int>(i);
        return std::nullopt;
    }

    /// Position of label `id` in an outgoing slot, as (crossing, slot).
    std::optional<std::pair<int, int>> out_slot_of(int id) const {
        for (std::size_t i = 0; i < crossings.size(); ++i)
            for (int s : {SLOT_A, SLOT_B})
                if (crossings[i].slots[s] == id) return std::make_pair(static_cast<int>(i), s);
        return std::nullopt;
    }
    std::optional<std::pair<int, int>> in_slot_of(int id) const {
        for (std::size_t i = 0; i < crossings.size(); ++i)
            for (int s : {SLOT_C, SLOT_D})
                if (crossings[i].slots[s] == id) return std::make_pair(static_cast<int>(i), s);
        return std::nullopt;
    }

    friend bool operator==(const DiagramCode& x, const DiagramCode& y) {
        return x.crossings == y.crossings && x.labels == y.labels && x.open_ends == y.open_ends;
    }
};

inline int exit_slot_for_entry(int in_slot) {
    // Strand connectivity through a crossing: d exits at b, c exits at a.
    return in_slot == SLOT_D ? SLOT_B : SLOT_A;
}

namespace detail {

inline void skip_ws(const std::string& s, std::size_t& i) {
    while (i < s.size() && (std::isspace(static_cast<unsigned char>(s[i])) || s[i] == ',')) ++i;
}

inline std::string read_token(const std::string& s, std::size_t& i) {
    std::size_t start = i;
    while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
    if (i == start) throw Error(ErrorKind::SyntaxError, "expected an edge label", start);
    return s.substr(start, i - start);
}

} // namespace detail

/// Parse the paper-style concatenation "X[a,c,h,b]Y[h,b,g,a]..." or the
/// line format "X a b c d". Empty input is the 0-crossing unknot.
inline DiagramCode parse_pd(const std::string& text) {
    DiagramCode d;
    std::size_t i = 0;
    detail::skip_ws(text, i);
    while (i < text.size()) {
        char head = text[i];
        int sign;
        if (head == 'X' || head == 'x')
            sign = +1;
        else if (head == 'Y' || head == 'y')
            sign = -1;
        else
            throw Error(ErrorKind::SyntaxError, "expected crossing symbol X or Y", i);
        ++i;
        detail::skip_ws(text, i);
        bool bracketed = i < text.size() && text[i] == '[';
        if (bracketed) ++i;
        CrossingCode c;
        c.sign = sign;
        for (int s = 0; s < 4; ++s) {
            detail::skip_ws(text, i);
            c.slots[s] = d.intern(detail::read_token(text, i));
        }
        detail::skip_ws(text, i);
        if (bracketed) {
            if (i >= text.size() || text[i] != ']')
                throw Error(ErrorKind::SyntaxError, "expected closing ]", i);
            ++i;
        }
        d.crossings.push_back(c);
        detail::skip_ws(text, i);
    }

    // Structural validation: every label twice, once outgoing, once incoming.
    std::vector<int> outs(d.labels.size(), 0), ins(d.labels.size(), 0);
    for (const auto& c : d.crossings) {
        outs[c.slots[SLOT_A]]++;
        outs[c.slots[SLOT_B]]++;
        ins[c.slots[SLOT_C]]++;
        ins[c.slots[SLOT_D]]++;
    }
    for (std::size_t l = 0; l < d.labels.size(); ++l) {
        if (outs[l] != 1 || ins[l] != 1)
            throw Error(ErrorKind::UnbalancedLabel,
                        "label '" + d.labels[l] + "' occurs " + std::to_string(outs[l]) +
                            " time(s) outgoing and " + std::to_string(ins[l]) + " incoming");
    }
    return d;
}

inline std::string to_pd_string(const DiagramCode& d) {
    std::ostringstream out;
    for (std::size_t i = 0; i < d.crossings.size(); ++i) {
        const auto& c = d.crossings[i];
        if (i) out << " ";
        out << (c.sign > 0 ? "X[" : "Y[");
        for (int s = 0; s < 4; ++s) {
            if (s) out << ",";
            out << d.labels[c.slots[s]];
        }
        out << "]";
    }
    if (d.open_ends)
        out << (d.crossings.empty() ? "" : " ") << "LONG(" << d.labels[d.open_ends->first] << ","
            << d.labels[d.open_ends->second] << ")";
    return out.str();
}

/// Count strand components by following edges through crossings. The open
/// strand of a long diagram is not counted as a component here; callers add
/// one for it where that convention applies.
inline int closed_component_count(const DiagramCode& d) {
    const int n = d.crossing_count();
    if (n == 0) return 0;
    // visited in-slots
    std::vector<std::array<bool, 4>> seen(n, {false, false, false, false});
    auto head_of = [&](int label) { return d.in_slot_of(label); };

    int components = 0;
    // Exclude the open strand by pre-walking it.
    if (d.open_ends) {
        int cur = d.open_ends->first;
        while (true) {
            auto at = head_of(cur);
            if (!at) break;  // reached the free head (exit edge)
            seen[at->first][at->second] = true;
            cur = d.crossings[at->first].slots[exit_slot_for_entry(at->second)];
        }
    }
    for (int i = 0; i < n; ++i) {
        for (int s : {SLOT_C, SLOT_D}) {
            if (seen[i][s]) continue;
            ++components;
            int ci = i, cs = s;
            while (!seen[ci][cs]) {
                seen[ci][cs] = true;
                int label = d.crossings[ci].slots[exit_slot_for_entry(cs)];
                auto at = head_of(label);
                if (!at) throw Error(ErrorKind::UnbalancedLabel, "dangling edge '" + d.labels[label] + "'");
                ci = at->first;
                cs = at->second;
            }
        }
    }
    return components;
}

inline int component_count(const DiagramCode& d) {
    if (d.crossings.empty() && !d.open_ends) return 1;  // empty diagram = unknot
    return closed_component_count(d) + (d.open_ends ? 1 : 0);
}

inline ValidationReport validate(const DiagramCode& d) {
    ValidationReport r;
    r.is_long = d.is_long();
    std::vector<int> outs(d.labels.size(), 0), ins(d.labels.size(), 0);
    for (const auto& c : d.crossings) {
        outs[c.slots[SLOT_A]]++;
        outs[c.slots[SLOT_B]]++;
        ins[c.slots[SLOT_C]]++;
        ins[c.slots[SLOT_D]]++;
    }
    for (std::size_t l = 0; l < d.labels.size(); ++l) {
        int expect_out = 1, expect_in = 1;
        if (d.open_ends) {
            if (static_cast<int>(l) == d.open_ends->first && static_cast<int>(l) == d.open_ends->second)
                expect_out = expect_in = 0;  // bare long arc
            else if (static_cast<int>(l) == d.open_ends->first)
                expect_out = 0;  // entry edge: free tail
            else if (static_cast<int>(l) == d.open_ends->second)
                expect_in = 0;  // exit edge: free head
        }
        if (outs[l] != expect_out || ins[l] != expect_in) {
            r.ok = false;
            r.violations.push_back("label '" + d.labels[l] + "': " + std::to_string(outs[l]) +
                                   " outgoing / " + std::to_string(ins[l]) +
                                   " incoming occurrence(s)");
        }
    }
    if (r.ok) r.component_count = component_count(d);
    return r;
}

inline long writhe(const DiagramCode& d) {
    long w = 0;
    for (const auto& c : d.crossings) w += c.sign;
    return w;
}

/// Switch a crossing: the under strand becomes the over strand. The sign
/// negates; slots are unchanged.
inline DiagramCode switch_crossing(const DiagramCode& d, int index) {
    if (index < 0 || index >= d.crossing_count())
        throw Error(ErrorKind::IndexOutOfRange, "crossing " + std::to_string(index));
    DiagramCode r = d;
    r.crossings[index].sign = -r.crossings[index].sign;
    return r;
}

/// Virtualize a crossing: flank it with two virtual crossings. In code form
/// the sign negates and both the outgoing and incoming slot pairs swap,
/// which preserves the strand connectivity (same Gauss word) while the over
/// strand stays over.
inline DiagramCode virtualize_crossing(const DiagramCode& d, int index) {
    if (index < 0 || index >= d.crossing_count())
        throw Error(ErrorKind::IndexOutOfRange, "crossing " + std::to_string(index));
    DiagramCode r = d;
    auto& c = r.crossings[index];
    c.sign = -c.sign;
    std::swap(c.slots[SLOT_A], c.slots[SLOT_B]);
    std::swap(c.slots[SLOT_C], c.slots[SLOT_D]);
    return r;
}

/// Mirror image (reflection in the plane): every crossing sign flips while
/// each over strand stays over.
inline DiagramCode mirror(const DiagramCode& d) {
    DiagramCode r = d;
    for (auto& c : r.crossings) {
        c.sign = -c.sign;
        std::swap(c.slots[SLOT_A], c.slots[SLOT_B]);
        std::swap(c.slots[SLOT_C], c.slots[SLOT_D]);
    }
    return r;
}

/// Close a long diagram by joining its two ends into one edge.
inline DiagramCode closure(const DiagramCode& d) {
    if (!d.is_long()) throw Error(ErrorKind::ClosedInput, "closure needs a long diagram");
    DiagramCode r = d;
    auto [entry, exit] = *r.open_ends;
    r.open_ends.reset();
    if (entry == exit) {
        // Bare arc component closes into a free unknot; with no crossings on
        // it the label simply disappears.
        if (r.crossings.empty()) return DiagramCode{};
        // A long diagram whose open strand meets no crossing: closing it adds
        // a split unknot component, which this representation cannot carry.
        throw Error(ErrorKind::ClosedInput, "closure of a crossing-free strand beside closed components");
    }
    for (auto& c : r.crossings)
        for (auto& s : c.slots)
            if (s == exit) s = entry;
    return r;
}

} // namespace vknot
