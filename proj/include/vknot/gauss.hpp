#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "vknot/diagram.hpp"
#include "vknot/errors.hpp"

namespace vknot {

struct GaussPass {
    int id = 0;
    bool over = false;
    int sign = +1;

    friend bool operator==(const GaussPass&, const GaussPass&) = default;
};

/// Oriented signed Gauss code, one pass sequence per component. For a long
/// diagram the first component is the open strand, read start to end; the
/// in/out names are carried along so PD conversion can label the free ends.
struct GaussCode {
    std::vector<std::vector<GaussPass>> components;
    bool is_long = false;
    std::string long_in = "in";
    std::string long_out = "out";

    int pass_count() const {
        int n = 0;
        for (const auto& c : components) n += static_cast<int>(c.size());
        return n;
    }
    int crossing_count() const { return pass_count() / 2; }

    friend bool operator==(const GaussCode&, const GaussCode&) = default;
};

struct FlatPass {
    int id = 0;
    int sign = +1;  // intersection sign, equal on both passes of a crossing

    friend bool operator==(const FlatPass&, const FlatPass&) = default;
};

/// Flat (over/under-free) Gauss code. The intersection sign of a crossing is
/// the orientation of the frame (second-visit direction, first-visit
/// direction): the convention under which the ascending map preserves signs.
struct FlatCode {
    std::vector<std::vector<FlatPass>> components;
    bool is_long = false;
    std::string long_in = "in";
    std::string long_out = "out";

    friend bool operator==(const FlatCode&, const FlatCode&) = default;
};

namespace detail {

inline bool parse_long_marker(const std::string& text, std::size_t& i, std::string& in_name,
                              std::string& out_name) {
    if (text.compare(i, 4, "LONG") != 0) return false;
    i += 4;
    if (i < text.size() && text[i] == '(') {
        ++i;
        std::size_t comma = text.find(',', i);
        std::size_t close = text.find(')', i);
        if (comma == std::string::npos || close == std::string::npos || comma > close)
            throw Error(ErrorKind::SyntaxError, "malformed LONG(in,out) marker", i);
        in_name = text.substr(i, comma - i);
        out_name = text.substr(comma + 1, close - comma - 1);
        i = close + 1;
    }
    return true;
}

inline int parse_int(const std::string& text, std::size_t& i) {
    std::size_t start = i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
    if (i == start) throw Error(ErrorKind::MalformedPass, "expected a crossing number", start);
    return std::stoi(text.substr(start, i - start));
}

inline int parse_sign(const std::string& text, std::size_t& i) {
    if (i >= text.size() || (text[i] != '+' && text[i] != '-'))
        throw Error(ErrorKind::MalformedPass, "expected + or - sign", i);
    return text[i++] == '+' ? +1 : -1;
}

template <typename Code>
void check_pairing(const Code& code) {
    std::map<int, int> count;
    for (const auto& comp : code.components)
        for (const auto& p : comp) count[p.id]++;
    for (const auto& [id, n] : count)
        if (n != 2)
            throw Error(ErrorKind::UnpairedCrossing,
                        "crossing " + std::to_string(id) + " appears " + std::to_string(n) +
                            " time(s)");
}

} // namespace detail

/// Parse "O1+U2-..." with `|` between components; an optional leading
/// LONG or LONG(in,out) marker makes the first component the open strand.
inline GaussCode parse_gauss(const std::string& text) {
    GaussCode code;
    code.components.emplace_back();
    std::size_t i = 0;
    bool saw_marker = false;
    while (i < text.size()) {
        char ch = text[i];
        if (std::isspace(static_cast<unsigned char>(ch))) {
            ++i;
            continue;
        }
        if (ch == '|') {
            code.components.emplace_back();
            ++i;
            continue;
        }
        if (ch == 'L' && detail::parse_long_marker(text, i, code.long_in, code.long_out)) {
            if (saw_marker) throw Error(ErrorKind::SyntaxError, "duplicate LONG marker", i);
            saw_marker = true;
            code.is_long = true;
            continue;
        }
        if (ch != 'O' && ch != 'U')
            throw Error(ErrorKind::MalformedPass, "expected O or U pass", i);
        GaussPass p;
        p.over = ch == 'O';
        ++i;
        p.id = detail::parse_int(text, i);
        p.sign = detail::parse_sign(text, i);
        code.components.back().push_back(p);
    }
    if (code.components.size() > 1 && code.components.back().empty()) code.components.pop_back();

    detail::check_pairing(code);
    std::map<int, std::pair<GaussPass, GaussPass>> pairs;
    std::map<int, int> seen;
    for (const auto& comp : code.components)
        for (const auto& p : comp) {
            if (seen[p.id]++ == 0)
                pairs[p.id].first = p;
            else
                pairs[p.id].second = p;
        }
    for (const auto& [id, pq] : pairs) {
        if (pq.first.sign != pq.second.sign)
            throw Error(ErrorKind::MismatchedSigns, "crossing " + std::to_string(id));
        if (pq.first.over == pq.second.over)
            throw Error(ErrorKind::MalformedPass,
                        "crossing " + std::to_string(id) + " must pass over once and under once");
    }
    return code;
}

inline std::string to_string(const GaussCode& code) {
    std::ostringstream out;
    if (code.is_long) out << "LONG(" << code.long_in << "," << code.long_out << ") ";
    for (std::size_t c = 0; c < code.components.size(); ++c) {
        if (c) out << "|";
        for (const auto& p : code.components[c])
            out << (p.over ? 'O' : 'U') << p.id << (p.sign > 0 ? '+' : '-');
    }
    return out.str();
}

inline FlatCode parse_flat(const std::string& text) {
    FlatCode code;
    code.components.emplace_back();
    std::size_t i = 0;
    bool saw_marker = false;
    while (i < text.size()) {
        char ch = text[i];
        if (std::isspace(static_cast<unsigned char>(ch))) {
            ++i;
            continue;
        }
        if (ch == '|') {
            code.components.emplace_back();
            ++i;
            continue;
        }
        if (ch == 'L' && !saw_marker &&
            detail::parse_long_marker(text, i, code.long_in, code.long_out)) {
            saw_marker = true;
            code.is_long = true;
            continue;
        }
        FlatPass p;
        p.id = detail::parse_int(text, i);
        p.sign = detail::parse_sign(text, i);
        code.components.back().push_back(p);
    }
    if (code.components.size() > 1 && code.components.back().empty()) code.components.pop_back();

    detail::check_pairing(code);
    std::map<int, std::vector<int>> signs;
    for (const auto& comp : code.components)
        for (const auto& p : comp) signs[p.id].push_back(p.sign);
    for (const auto& [id, ss] : signs)
        if (ss[0] != ss[1]) throw Error(ErrorKind::MismatchedSigns, "crossing " + std::to_string(id));
    return code;
}

inline std::string to_string(const FlatCode& code) {
    std::ostringstream out;
    if (code.is_long) out << "LONG(" << code.long_in << "," << code.long_out << ") ";
    for (std::size_t c = 0; c < code.components.size(); ++c) {
        if (c) out << "|";
        for (const auto& p : code.components[c]) out << p.id << (p.sign > 0 ? '+' : '-');
    }
    return out.str();
}

inline GaussCode mirror(const GaussCode& code) {
    GaussCode r = code;
    for (auto& comp : r.components)
        for (auto& p : comp) p.sign = -p.sign;
    return r;
}

inline FlatCode mirror(const FlatCode& code) {
    FlatCode r = code;
    for (auto& comp : r.components)
        for (auto& p : comp) p.sign = -p.sign;
    return r;
}

/// Odd writhe J: the sum of signs over crossings whose two passes enclose an
/// odd number of other passes. Defined for one-component codes.
inline long odd_writhe(const GaussCode& code) {
    if (code.components.size() > 1)
        throw Error(ErrorKind::MultiComponent, "odd writhe needs a one-component code");
    if (code.components.empty()) return 0;
    const auto& seq = code.components[0];
    std::map<int, std::vector<int>> positions;
    for (std::size_t i = 0; i < seq.size(); ++i) positions[seq[i].id].push_back(static_cast<int>(i));
    long j = 0;
    for (const auto& [id, pos] : positions) {
        int between = pos[1] - pos[0] - 1;
        if (between % 2 != 0) {
            for (const auto& p : seq)
                if (p.id == id) {
                    j += p.sign;
                    break;
                }
        }
    }
    return j;
}

/// Build a PD code from a Gauss code. Edge k of a component enters pass k;
/// slots follow the fixed chirality convention (see CrossingCode), so the
/// round trip through pd_to_gauss is exact.
inline DiagramCode gauss_to_pd(const GaussCode& code) {
    DiagramCode d;
    struct PassSite {
        bool over;
        int sign;
        int in_edge;
        int out_edge;
    };
    std::map<int, std::vector<PassSite>> sites;
    std::vector<int> first_seen;

    for (std::size_t ci = 0; ci < code.components.size(); ++ci) {
        const auto& comp = code.components[ci];
        bool open = code.is_long && ci == 0;
        if (comp.empty()) {
            if (open) {
                int e = d.intern(code.long_in.empty() ? "in" : code.long_in);
                d.open_ends = {e, e};
            }
            // An empty closed component is not representable; treat as unknot
            // only when it is the whole code.
            continue;
        }
        std::vector<int> edge_ids(comp.size() + (open ? 1 : 0));
        if (open) {
            edge_ids[0] = d.intern(code.long_in);
            for (std::size_t k = 1; k < comp.size(); ++k)
                edge_ids[k] = d.fresh_label("e" + std::to_string(d.labels.size()));
            edge_ids[comp.size()] = d.intern(code.long_out);
            d.open_ends = {edge_ids[0], edge_ids[comp.size()]};
        } else {
            for (std::size_t k = 0; k < comp.size(); ++k)
                edge_ids[k] = d.fresh_label("e" + std::to_string(d.labels.size()));
        }
        for (std::size_t k = 0; k < comp.size(); ++k) {
            const auto& p = comp[k];
            int in_edge = edge_ids[k];
            int out_edge = open ? edge_ids[k + 1] : edge_ids[(k + 1) % comp.size()];
            if (sites.find(p.id) == sites.end()) first_seen.push_back(p.id);
            sites[p.id].push_back(PassSite{p.over, p.sign, in_edge, out_edge});
        }
    }

    for (int id : first_seen) {
        const auto& ps = sites[id];
        if (ps.size() != 2)
            throw Error(ErrorKind::UnpairedCrossing, "crossing " + std::to_string(id));
        const PassSite& over = ps[0].over ? ps[0] : ps[1];
        const PassSite& under = ps[0].over ? ps[1] : ps[0];
        CrossingCode c;
        c.sign = ps[0].sign;
        if (c.sign > 0)
            c.slots = {over.out_edge, under.out_edge, over.in_edge, under.in_edge};
        else
            c.slots = {under.out_edge, over.out_edge, under.in_edge, over.in_edge};
        d.crossings.push_back(c);
    }
    return d;
}

/// Recover the Gauss code of a diagram. Crossings are numbered 1,2,... in
/// first-visit order; the walk starts on the open strand for long diagrams
/// and otherwise at the lowest-numbered edge of each component.
inline GaussCode pd_to_gauss(const DiagramCode& d) {
    GaussCode code;
    code.is_long = d.is_long();
    if (d.is_long()) {
        code.long_in = d.labels[d.open_ends->first];
        code.long_out = d.labels[d.open_ends->second];
    }

    const int n = d.crossing_count();
    std::map<int, std::pair<int, int>> heads;  // label -> (crossing, in slot)
    for (int i = 0; i < n; ++i)
        for (int s : {SLOT_C, SLOT_D}) heads[d.crossings[i].slots[s]] = {i, s};

    std::vector<std::array<bool, 4>> visited(n, {false, false, false, false});
    std::map<int, int> number;  // crossing index -> emitted id
    int next_id = 1;

    auto emit_walk = [&](int start_label, bool open) {
        std::vector<GaussPass> comp;
        int cur = start_label;
        while (true) {
            auto it = heads.find(cur);
            if (it == heads.end()) {
                if (!open)
                    throw Error(ErrorKind::UnbalancedLabel, "dangling edge '" + d.labels[cur] + "'");
                break;
            }
            auto [ci, cs] = it->second;
            if (visited[ci][cs]) break;  // closed component completed
            visited[ci][cs] = true;
            const auto& c = d.crossings[ci];
            if (number.find(ci) == number.end()) number[ci] = next_id++;
            GaussPass p;
            p.id = number[ci];
            p.sign = c.sign;
            // Over strand: c->a on positive crossings, d->b on negative.
            p.over = (c.sign > 0) ? (cs == SLOT_C) : (cs == SLOT_D);
            comp.push_back(p);
            cur = c.slots[exit_slot_for_entry(cs)];
        }
        return comp;
    };

    if (d.is_long()) code.components.push_back(emit_walk(d.open_ends->first, true));

    while (true) {
        int best = -1;
        for (int i = 0; i < n; ++i)
            for (int s : {SLOT_C, SLOT_D}) {
                int label = d.crossings[i].slots[s];
                if (!visited[i][s] && (best == -1 || label < best)) best = label;
            }
        if (best == -1) break;
        code.components.push_back(emit_walk(best, false));
    }
    if (code.components.empty()) code.components.emplace_back();
    return code;
}

/// Ascending map: lift a long flat code to the long virtual diagram in which
/// every crossing is passed under first. With the intersection-sign
/// convention above the crossing keeps its flat sign.
inline GaussCode ascending_gauss(const FlatCode& flat) {
    if (!flat.is_long) throw Error(ErrorKind::ClosedInput, "ascending map needs a long flat code");
    if (flat.components.size() > 1)
        throw Error(ErrorKind::MultiComponent, "ascending map needs a one-component code");
    GaussCode code;
    code.is_long = true;
    code.long_in = flat.long_in;
    code.long_out = flat.long_out;
    code.components.emplace_back();
    std::map<int, int> seen;
    for (const auto& p : flat.components[0]) {
        GaussPass g;
        g.id = p.id;
        g.sign = p.sign;
        g.over = seen[p.id]++ > 0;  // first visit under, second over
        code.components[0].push_back(g);
    }
    return code;
}

inline DiagramCode ascending(const FlatCode& flat) { return gauss_to_pd(ascending_gauss(flat)); }

/// Forget over/under data. The flat intersection sign of a crossing whose
/// first visit is the under pass equals the crossing sign, and negates when
/// the first visit is the over pass; this makes flatten a left inverse of
/// the ascending map.
inline FlatCode flatten(const GaussCode& code) {
    FlatCode flat;
    flat.is_long = code.is_long;
    flat.long_in = code.long_in;
    flat.long_out = code.long_out;
    std::map<int, bool> first_over;
    for (const auto& comp : code.components) {
        flat.components.emplace_back();
        for (const auto& p : comp) {
            auto it = first_over.find(p.id);
            bool first_visit = it == first_over.end();
            if (first_visit) first_over[p.id] = p.over;
            FlatPass f;
            f.id = p.id;
            f.sign = first_over[p.id] ? -p.sign : p.sign;
            flat.components.back().push_back(f);
        }
    }
    return flat;
}

inline FlatCode flatten(const DiagramCode& d) { return flatten(pd_to_gauss(d)); }

/// Resolve a flat code to a virtual diagram (every crossing passed under
/// first, signs kept). Any resolution gives the same flat invariant at A=1.
inline DiagramCode resolve_flat(const FlatCode& flat) {
    GaussCode code;
    code.is_long = flat.is_long;
    code.long_in = flat.long_in;
    code.long_out = flat.long_out;
    std::map<int, int> seen;
    for (const auto& comp : flat.components) {
        code.components.emplace_back();
        for (const auto& p : comp) {
            GaussPass g;
            g.id = p.id;
            g.sign = p.sign;
            g.over = seen[p.id]++ > 0;
            code.components.back().push_back(g);
        }
    }
    return gauss_to_pd(code);
}

} // namespace vknot
