#pragma once

#include <utility>
#include <vector>

#include "vknot/diagram.hpp"
#include "vknot/laurent.hpp"

namespace vknot {

/// Naive recursive skein evaluation of the bracket polynomial, used as an
/// independent cross-check of the state-sum engine. Each crossing is
/// expanded in place by rewiring edge labels; no state enumeration, loop
/// tracing or cusp machinery is shared with the main path.
namespace skein {

struct Xing {
    int sign;
    std::array<int, 4> slots;
};

namespace detail {

inline void relabel(std::vector<Xing>& cs, std::pair<int, int>& pending, int from, int to) {
    if (from == to) return;
    for (auto& c : cs)
        for (auto& s : c.slots)
            if (s == from) s = to;
    if (pending.first == from) pending.first = to;
    if (pending.second == from) pending.second = to;
}

inline Laurent eval(std::vector<Xing> cs, int loops) {
    if (cs.empty()) {
        if (loops == 0) return Laurent(1);  // empty diagram
        Laurent r(1);
        for (int i = 1; i < loops; ++i) r *= Laurent::loop_value();
        return r;
    }
    Xing c = cs.back();
    cs.pop_back();
    auto branch = [&](std::pair<int, int> p1, std::pair<int, int> p2) {
        std::vector<Xing> rest = cs;
        int gained = 0;
        if (p1.first == p1.second)
            ++gained;
        else
            relabel(rest, p2, p1.second, p1.first);
        if (p2.first == p2.second)
            ++gained;
        else {
            std::pair<int, int> none{-1, -1};
            relabel(rest, none, p2.second, p2.first);
        }
        return eval(std::move(rest), loops + gained);
    };
    std::pair<int, int> oriented1{c.slots[SLOT_D], c.slots[SLOT_A]};
    std::pair<int, int> oriented2{c.slots[SLOT_C], c.slots[SLOT_B]};
    std::pair<int, int> dis1{c.slots[SLOT_A], c.slots[SLOT_B]};
    std::pair<int, int> dis2{c.slots[SLOT_C], c.slots[SLOT_D]};
    Laurent a_part = branch(oriented1, oriented2);
    Laurent b_part = branch(dis1, dis2);
    return Laurent::monomial(Int(1), c.sign) * a_part +
           Laurent::monomial(Int(1), -c.sign) * b_part;
}

} // namespace detail

/// <K> by direct recursion. Closed diagrams only.
inline Laurent bracket(const DiagramCode& d) {
    if (d.is_long()) throw Error(ErrorKind::LongDiagram, "skein oracle needs a closed diagram");
    std::vector<Xing> cs;
    cs.reserve(d.crossings.size());
    for (const auto& c : d.crossings) cs.push_back(Xing{c.sign, c.slots});
    // A crossing-free closed diagram is the unknot by convention.
    return detail::eval(std::move(cs), 0);
}

inline Laurent f_polynomial(const DiagramCode& d) {
    return normalize_writhe(skein::bracket(d), writhe(d));
}

} // namespace skein
} // namespace vknot
