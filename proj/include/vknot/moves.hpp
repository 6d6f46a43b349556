#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "vknot/extended.hpp"
#include "vknot/gauss.hpp"
#include "vknot/state_sum.hpp"

namespace vknot {

enum class MoveKind {
    R1Plus,
    R1Minus,
    R2Plus,
    R2Minus,
    R3,
    Switch,
    Virtualize,
    ForbiddenF1,
};

inline const char* move_kind_name(MoveKind k) {
    switch (k) {
        case MoveKind::R1Plus: return "r1+";
        case MoveKind::R1Minus: return "r1-";
        case MoveKind::R2Plus: return "r2+";
        case MoveKind::R2Minus: return "r2-";
        case MoveKind::R3: return "r3";
        case MoveKind::Switch: return "switch";
        case MoveKind::Virtualize: return "virtualize";
        case MoveKind::ForbiddenF1: return "f1";
    }
    return "?";
}

inline MoveKind move_kind_from_name(const std::string& name) {
    for (MoveKind k : {MoveKind::R1Plus, MoveKind::R1Minus, MoveKind::R2Plus, MoveKind::R2Minus,
                       MoveKind::R3, MoveKind::Switch, MoveKind::Virtualize, MoveKind::ForbiddenF1})
        if (name == move_kind_name(k)) return k;
    throw Error(ErrorKind::UnknownEntry, "move kind '" + name + "'");
}

/// One rewrite step on a Gauss code. Locations are (component, position)
/// pairs: pass positions for removals and swaps, gap indices for
/// insertions (gap k sits before pass k; a closed component with L passes
/// has gaps 0..L-1, the open strand 0..L).
struct MoveInstance {
    MoveKind kind = MoveKind::R1Plus;
    int c1 = 0, p1 = 0;
    int c2 = 0, p2 = 0;
    int c3 = 0, p3 = 0;
    int sign = +1;  // R1 chirality
    int side = 0;   // R1: 0 inserts (O,U), 1 (U,O); R2: 0 direct, 1 reverse
    std::uint64_t seed = 0;  // rng provenance when generated
};

namespace movedetail {

inline int gap_count(const GaussCode& g, int comp) {
    int len = static_cast<int>(g.components[comp].size());
    bool open = g.is_long && comp == 0;
    if (open) return len + 1;
    return len == 0 ? 1 : len;
}

inline int fresh_id(const GaussCode& g) {
    int id = 0;
    for (const auto& comp : g.components)
        for (const auto& p : comp) id = std::max(id, p.id);
    return id + 1;
}

inline void insert_passes(GaussCode& g, int comp, int gap, const std::vector<GaussPass>& ps) {
    auto& seq = g.components[comp];
    seq.insert(seq.begin() + gap, ps.begin(), ps.end());
}

} // namespace movedetail

inline GaussCode apply_r1(const GaussCode& g, int comp, int gap, int sign, int side) {
    if (comp < 0 || comp >= static_cast<int>(g.components.size()) || gap < 0 ||
        gap >= movedetail::gap_count(g, comp))
        throw Error(ErrorKind::NoSuchEdge, "no such insertion point");
    GaussCode r = g;
    int id = movedetail::fresh_id(r);
    GaussPass over{id, true, sign}, under{id, false, sign};
    std::vector<GaussPass> ps = side == 0 ? std::vector<GaussPass>{over, under}
                                          : std::vector<GaussPass>{under, over};
    movedetail::insert_passes(r, comp, gap, ps);
    return r;
}

/// Curls: cyclically adjacent pass pairs of one crossing.
inline std::vector<MoveInstance> find_r1_removals(const GaussCode& g) {
    std::vector<MoveInstance> out;
    for (std::size_t c = 0; c < g.components.size(); ++c) {
        const auto& seq = g.components[c];
        int len = static_cast<int>(seq.size());
        bool open = g.is_long && c == 0;
        int limit = open ? len - 1 : len;
        for (int k = 0; k < limit; ++k) {
            int k2 = (k + 1) % len;
            if (len >= 2 && seq[k].id == seq[k2].id) {
                MoveInstance m;
                m.kind = MoveKind::R1Minus;
                m.c1 = static_cast<int>(c);
                m.p1 = k;
                m.sign = seq[k].sign;
                out.push_back(m);
            }
        }
    }
    return out;
}

inline GaussCode apply_r1_removal(const GaussCode& g, int comp, int pos) {
    GaussCode r = g;
    auto& seq = r.components[comp];
    int len = static_cast<int>(seq.size());
    if (len < 2 || seq[pos].id != seq[(pos + 1) % len].id)
        throw Error(ErrorKind::PatternMismatch, "no curl at that position");
    int k2 = (pos + 1) % len;
    if (k2 > pos)
        seq.erase(seq.begin() + pos, seq.begin() + pos + 2);
    else {
        seq.erase(seq.begin() + pos);
        seq.erase(seq.begin());
    }
    return r;
}

/// Insert a cancelling crossing pair: the strand at gap (c1,g1) passes over
/// both new crossings, the strand at (c2,g2) under. With the same gap the
/// strand pokes itself.
inline GaussCode apply_r2(const GaussCode& g, int comp1, int gap1, int comp2, int gap2,
                          int orientation) {
    for (auto [c, gp] : {std::pair{comp1, gap1}, std::pair{comp2, gap2}})
        if (c < 0 || c >= static_cast<int>(g.components.size()) || gp < 0 ||
            gp >= movedetail::gap_count(g, c))
            throw Error(ErrorKind::NoSuchEdge, "no such insertion point");
    GaussCode r = g;
    int i = movedetail::fresh_id(r), j = i + 1;
    std::vector<GaussPass> over{{i, true, +1}, {j, true, -1}};
    std::vector<GaussPass> under = orientation == 0
                                       ? std::vector<GaussPass>{{i, false, +1}, {j, false, -1}}
                                       : std::vector<GaussPass>{{j, false, -1}, {i, false, +1}};
    if (comp1 == comp2 && gap1 == gap2) {
        std::vector<GaussPass> both = over;
        both.insert(both.end(), under.begin(), under.end());
        movedetail::insert_passes(r, comp1, gap1, both);
    } else if (comp1 == comp2 && gap2 < gap1) {
        movedetail::insert_passes(r, comp1, gap1, over);
        movedetail::insert_passes(r, comp2, gap2, under);
    } else {
        movedetail::insert_passes(r, comp2, gap2, under);
        movedetail::insert_passes(r, comp1, gap1, over);
    }
    return r;
}

/// Cancelling bigons: an adjacent over-pass pair whose under passes are also
/// adjacent, with opposite signs.
inline std::vector<MoveInstance> find_r2_removals(const GaussCode& g) {
    std::vector<MoveInstance> out;
    struct Pos {
        int c, k;
    };
    auto adjacent = [&](int c, int k) {
        const auto& seq = g.components[c];
        int len = static_cast<int>(seq.size());
        bool open = g.is_long && c == 0;
        int k2 = (k + 1) % len;
        if (open && k + 1 >= len) return -1;
        if (len < 2) return -1;
        return k2;
    };
    // locate every pass of every crossing
    std::map<int, std::vector<Pos>> where;
    for (std::size_t c = 0; c < g.components.size(); ++c)
        for (std::size_t k = 0; k < g.components[c].size(); ++k)
            where[g.components[c][k].id].push_back({static_cast<int>(c), static_cast<int>(k)});

    for (std::size_t c = 0; c < g.components.size(); ++c) {
        const auto& seq = g.components[c];
        for (int k = 0; k < static_cast<int>(seq.size()); ++k) {
            int k2 = adjacent(static_cast<int>(c), k);
            if (k2 < 0) continue;
            const auto& p = seq[k];
            const auto& q = seq[k2];
            if (!p.over || !q.over || p.id == q.id || p.sign == q.sign) continue;
            // find the under passes
            Pos up{}, uq{};
            for (const auto& pos : where[p.id])
                if (!g.components[pos.c][pos.k].over) up = pos;
            for (const auto& pos : where[q.id])
                if (!g.components[pos.c][pos.k].over) uq = pos;
            if (up.c != uq.c) continue;
            int next = adjacent(up.c, up.k);
            int prev_ok = adjacent(uq.c, uq.k);
            MoveInstance m;
            m.kind = MoveKind::R2Minus;
            m.c1 = static_cast<int>(c);
            m.p1 = k;
            if (next == uq.k) {
                m.c2 = up.c;
                m.p2 = up.k;
                m.side = 0;  // direct: unders in the same order
                out.push_back(m);
            } else if (prev_ok == up.k) {
                m.c2 = uq.c;
                m.p2 = uq.k;
                m.side = 1;  // reverse
                out.push_back(m);
            }
        }
    }
    return out;
}

inline GaussCode apply_r2_removal(const GaussCode& g, const MoveInstance& m) {
    const auto& over_seq = g.components[m.c1];
    int olen = static_cast<int>(over_seq.size());
    int i = over_seq[m.p1].id;
    int j = over_seq[(m.p1 + 1) % olen].id;
    const auto& under_seq = g.components[m.c2];
    int ulen = static_cast<int>(under_seq.size());
    int u1 = under_seq[m.p2].id, u2 = under_seq[(m.p2 + 1) % ulen].id;
    bool match = (u1 == i && u2 == j) || (u1 == j && u2 == i);
    if (!match || over_seq[m.p1].sign == over_seq[(m.p1 + 1) % olen].sign)
        throw Error(ErrorKind::PatternMismatch, "no cancelling pair at that position");
    GaussCode r = g;
    for (auto& comp : r.components) {
        std::vector<GaussPass> kept;
        for (const auto& p : comp)
            if (p.id != i && p.id != j) kept.push_back(p);
        comp = std::move(kept);
    }
    return r;
}

/// Triangles admitting a third Reidemeister slide. The arcs are adjacent
/// pass pairs; realizability solves for strand directions against a fixed
/// reference triangle (all three pair orders reverse under the slide).
inline std::vector<MoveInstance> find_r3(const GaussCode& g) {
    std::vector<MoveInstance> out;
    struct Pair {
        int c, k, k2;
        int id_first, id_second;
        bool over_first, over_second;
        int sign_first, sign_second;
    };
    std::vector<Pair> pairs;
    for (std::size_t c = 0; c < g.components.size(); ++c) {
        const auto& seq = g.components[c];
        int len = static_cast<int>(seq.size());
        bool open = g.is_long && c == 0;
        int limit = open ? len - 1 : len;
        for (int k = 0; k < limit; ++k) {
            if (len < 2) break;
            int k2 = (k + 1) % len;
            if (seq[k].id == seq[k2].id) continue;
            pairs.push_back(Pair{static_cast<int>(c), k, k2, seq[k].id, seq[k2].id,
                                 seq[k].over, seq[k2].over, seq[k].sign, seq[k2].sign});
        }
    }
    auto disjoint = [](const Pair& x, const Pair& y) {
        if (x.c != y.c) return true;
        return x.k != y.k && x.k != y.k2 && x.k2 != y.k && x.k2 != y.k2;
    };
    const int n = static_cast<int>(pairs.size());
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            if (!disjoint(pairs[a], pairs[b])) continue;
            for (int c = b + 1; c < n; ++c) {
                if (!disjoint(pairs[a], pairs[c]) || !disjoint(pairs[b], pairs[c])) continue;
                // the three pairs must cover exactly three crossings twice each
                std::map<int, int> uses;
                for (const Pair* pr : {&pairs[a], &pairs[b], &pairs[c]}) {
                    uses[pr->id_first]++;
                    uses[pr->id_second]++;
                }
                if (uses.size() != 3) continue;
                bool twice = true;
                for (const auto& [id, k] : uses)
                    if (k != 2) twice = false;
                if (!twice) continue;

                // try the six assignments of arcs to reference strands A,B,C
                const Pair* arcs[3] = {&pairs[a], &pairs[b], &pairs[c]};
                int perm[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
                bool legal = false;
                for (auto& pm : perm) {
                    const Pair* A = arcs[pm[0]];
                    const Pair* B = arcs[pm[1]];
                    const Pair* C = arcs[pm[2]];
                    // AB = A∩B, AC = A∩C, BC = B∩C
                    auto common = [](const Pair* x, const Pair* y) {
                        if (x->id_first == y->id_first || x->id_first == y->id_second)
                            return x->id_first;
                        return x->id_second;
                    };
                    int ab = common(A, B), ac = common(A, C), bc = common(B, C);
                    if (ab == ac || ab == bc || ac == bc) continue;
                    auto eps = [](const Pair* arc, int first_crossing) {
                        return arc->id_first == first_crossing ? +1 : -1;
                    };
                    int eA = eps(A, ab);   // reference: A meets AB then AC
                    int eB = eps(B, ab);   // B meets AB then BC
                    int eC = eps(C, bc);   // C meets BC then AC
                    auto over_at = [](const Pair* arc, int id) {
                        return arc->id_first == id ? arc->over_first : arc->over_second;
                    };
                    auto sign_at = [](const Pair* arc, int id) {
                        return arc->id_first == id ? arc->sign_first : arc->sign_second;
                    };
                    // Heights are totally ordered: A above B above C.
                    if (!over_at(A, ab) || !over_at(A, ac) || !over_at(B, bc)) continue;
                    int t_ab = sign_at(A, ab) * (over_at(A, ab) ? +1 : -1);
                    int t_ac = sign_at(A, ac) * (over_at(A, ac) ? +1 : -1);
                    int t_bc = sign_at(B, bc) * (over_at(B, bc) ? +1 : -1);
                    int mu = t_ab * eA * eB;
                    if (t_ac == -mu * eA * eC && t_bc == -mu * eB * eC) {
                        legal = true;
                        break;
                    }
                }
                if (!legal) continue;
                MoveInstance m;
                m.kind = MoveKind::R3;
                m.c1 = pairs[a].c;
                m.p1 = pairs[a].k;
                m.c2 = pairs[b].c;
                m.p2 = pairs[b].k;
                m.c3 = pairs[c].c;
                m.p3 = pairs[c].k;
                out.push_back(m);
            }
        }
    return out;
}

inline GaussCode apply_r3(const GaussCode& g, const MoveInstance& m) {
    // Validate against the current code before swapping.
    bool found = false;
    for (const auto& cand : find_r3(g)) {
        if (cand.c1 == m.c1 && cand.p1 == m.p1 && cand.c2 == m.c2 && cand.p2 == m.p2 &&
            cand.c3 == m.c3 && cand.p3 == m.p3) {
            found = true;
            break;
        }
    }
    if (!found) throw Error(ErrorKind::PatternMismatch, "no slide triangle at those positions");
    GaussCode r = g;
    for (auto [c, k] : {std::pair{m.c1, m.p1}, std::pair{m.c2, m.p2}, std::pair{m.c3, m.p3}}) {
        auto& seq = r.components[c];
        int len = static_cast<int>(seq.size());
        std::swap(seq[k], seq[(k + 1) % len]);
    }
    return r;
}

inline GaussCode switch_crossing(const GaussCode& g, int id) {
    GaussCode r = g;
    bool seen = false;
    for (auto& comp : r.components)
        for (auto& p : comp)
            if (p.id == id) {
                p.over = !p.over;
                p.sign = -p.sign;
                seen = true;
            }
    if (!seen) throw Error(ErrorKind::IndexOutOfRange, "crossing " + std::to_string(id));
    return r;
}

inline GaussCode virtualize_crossing(const GaussCode& g, int id) {
    GaussCode r = g;
    bool seen = false;
    for (auto& comp : r.components)
        for (auto& p : comp)
            if (p.id == id) {
                p.sign = -p.sign;
                seen = true;
            }
    if (!seen) throw Error(ErrorKind::IndexOutOfRange, "crossing " + std::to_string(id));
    return r;
}

/// First forbidden move: two adjacent over passes exchange. Not an isotopy;
/// kept for negative tests.
inline std::vector<MoveInstance> find_forbidden_f1(const GaussCode& g) {
    std::vector<MoveInstance> out;
    for (std::size_t c = 0; c < g.components.size(); ++c) {
        const auto& seq = g.components[c];
        int len = static_cast<int>(seq.size());
        bool open = g.is_long && c == 0;
        int limit = open ? len - 1 : len;
        for (int k = 0; k < limit; ++k) {
            if (len < 2) break;
            int k2 = (k + 1) % len;
            if (seq[k].over && seq[k2].over && seq[k].id != seq[k2].id) {
                MoveInstance m;
                m.kind = MoveKind::ForbiddenF1;
                m.c1 = static_cast<int>(c);
                m.p1 = k;
                out.push_back(m);
            }
        }
    }
    return out;
}

inline GaussCode apply_forbidden_f1(const GaussCode& g, int comp, int pos) {
    GaussCode r = g;
    auto& seq = r.components[comp];
    int len = static_cast<int>(seq.size());
    int k2 = (pos + 1) % len;
    if (len < 2 || !seq[pos].over || !seq[k2].over || seq[pos].id == seq[k2].id)
        throw Error(ErrorKind::PatternMismatch, "no adjacent over pair at that position");
    std::swap(seq[pos], seq[k2]);
    return r;
}

inline GaussCode apply_move(const GaussCode& g, const MoveInstance& m) {
    switch (m.kind) {
        case MoveKind::R1Plus: return apply_r1(g, m.c1, m.p1, m.sign, m.side);
        case MoveKind::R1Minus: return apply_r1_removal(g, m.c1, m.p1);
        case MoveKind::R2Plus: return apply_r2(g, m.c1, m.p1, m.c2, m.p2, m.side);
        case MoveKind::R2Minus: return apply_r2_removal(g, m);
        case MoveKind::R3: return apply_r3(g, m);
        case MoveKind::Switch: return switch_crossing(g, m.p1);
        case MoveKind::Virtualize: return virtualize_crossing(g, m.p1);
        case MoveKind::ForbiddenF1: return apply_forbidden_f1(g, m.c1, m.p1);
    }
    throw Error(ErrorKind::PatternMismatch, "unknown move");
}

struct IsotopyOptions {
    int crossing_cap = 14;
};

/// Deterministic random isotopy: `steps` moves drawn from the available
/// R1/R2/R3 instances under the crossing cap. Returns the rewritten code and
/// the trace that reproduces it.
inline std::pair<GaussCode, std::vector<MoveInstance>> random_isotopy(
    const GaussCode& start, std::uint64_t seed, int steps, const IsotopyOptions& opts = {}) {
    std::mt19937_64 rng(seed);
    auto pick = [&rng](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
    GaussCode g = start;
    std::vector<MoveInstance> trace;
    for (int step = 0; step < steps; ++step) {
        int n = g.crossing_count();
        std::vector<MoveKind> kinds;
        if (n + 1 <= opts.crossing_cap) kinds.push_back(MoveKind::R1Plus);
        auto r1s = find_r1_removals(g);
        if (!r1s.empty()) kinds.push_back(MoveKind::R1Minus);
        if (n + 2 <= opts.crossing_cap) kinds.push_back(MoveKind::R2Plus);
        auto r2s = find_r2_removals(g);
        if (!r2s.empty()) kinds.push_back(MoveKind::R2Minus);
        auto r3s = find_r3(g);
        if (!r3s.empty()) kinds.push_back(MoveKind::R3);
        if (kinds.empty()) throw Error(ErrorKind::CapExceeded, "no admissible move under the cap");

        MoveInstance m;
        m.kind = kinds[pick(kinds.size())];
        m.seed = seed;
        switch (m.kind) {
            case MoveKind::R1Plus: {
                m.c1 = static_cast<int>(pick(g.components.size()));
                m.p1 = static_cast<int>(pick(movedetail::gap_count(g, m.c1)));
                m.sign = pick(2) == 0 ? +1 : -1;
                m.side = static_cast<int>(pick(2));
                break;
            }
            case MoveKind::R1Minus:
                m = r1s[pick(r1s.size())];
                m.seed = seed;
                break;
            case MoveKind::R2Plus: {
                m.c1 = static_cast<int>(pick(g.components.size()));
                m.p1 = static_cast<int>(pick(movedetail::gap_count(g, m.c1)));
                m.c2 = static_cast<int>(pick(g.components.size()));
                m.p2 = static_cast<int>(pick(movedetail::gap_count(g, m.c2)));
                m.side = static_cast<int>(pick(2));
                break;
            }
            case MoveKind::R2Minus:
                m = r2s[pick(r2s.size())];
                m.seed = seed;
                break;
            case MoveKind::R3:
                m = r3s[pick(r3s.size())];
                m.seed = seed;
                break;
            default: break;
        }
        g = apply_move(g, m);
        trace.push_back(m);
    }
    return {g, trace};
}

} // namespace vknot
