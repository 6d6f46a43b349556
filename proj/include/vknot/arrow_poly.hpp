#pragma once

#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "vknot/laurent.hpp"

namespace vknot {

/// One monomial key of an arrow polynomial: an A-exponent together with the
/// multiset of loop variables K_n (stored as sorted (n, exponent) pairs with
/// exponents >= 1).
struct ArrowKey {
    int a_exp = 0;
    std::vector<std::pair<int, int>> k;  // sorted by n

    friend bool operator==(const ArrowKey& x, const ArrowKey& y) {
        return x.a_exp == y.a_exp && x.k == y.k;
    }
    /// Display / storage order: ascending A-exponent, then lexicographic
    /// K-multiset. Keeps text output byte-stable.
    friend bool operator<(const ArrowKey& x, const ArrowKey& y) {
        if (x.a_exp != y.a_exp) return x.a_exp < y.a_exp;
        return x.k < y.k;
    }
};

/// Exact polynomial in A, A^{-1} and the loop variables K_1, K_2, ... with
/// big-integer coefficients. Values of the arrow polynomial state sum.
class ArrowPoly {
public:
    using term_map = std::map<ArrowKey, Int>;

    ArrowPoly() = default;
    ArrowPoly(long constant) {
        if (constant != 0) terms_[ArrowKey{}] = Int(constant);
    }

    static ArrowPoly monomial(Int c, int a_exp, std::vector<std::pair<int, int>> k = {}) {
        ArrowPoly p;
        if (c != 0) p.terms_[ArrowKey{a_exp, std::move(k)}] = std::move(c);
        return p;
    }

    /// K_n as a polynomial.
    static ArrowPoly k_var(int n, int exp = 1) {
        return monomial(Int(1), 0, {{n, exp}});
    }

    static ArrowPoly from_laurent(const Laurent& p) {
        ArrowPoly r;
        for (const auto& [e, c] : p.terms()) r.terms_[ArrowKey{e, {}}] = c;
        return r;
    }

    bool is_zero() const { return terms_.empty(); }
    const term_map& terms() const { return terms_; }

    void add_term(const ArrowKey& key, const Int& c) {
        if (c == 0) return;
        auto [it, inserted] = terms_.emplace(key, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    ArrowPoly& operator+=(const ArrowPoly& rhs) {
        for (const auto& [k, c] : rhs.terms_) add_term(k, c);
        return *this;
    }
    ArrowPoly& operator-=(const ArrowPoly& rhs) {
        for (const auto& [k, c] : rhs.terms_) add_term(k, -c);
        return *this;
    }
    friend ArrowPoly operator+(ArrowPoly a, const ArrowPoly& b) { return a += b; }
    friend ArrowPoly operator-(ArrowPoly a, const ArrowPoly& b) { return a -= b; }

    ArrowPoly operator-() const {
        ArrowPoly r;
        for (const auto& [k, c] : terms_) r.terms_[k] = -c;
        return r;
    }

    friend ArrowPoly operator*(const ArrowPoly& a, const ArrowPoly& b) {
        ArrowPoly r;
        for (const auto& [ka, ca] : a.terms_)
            for (const auto& [kb, cb] : b.terms_) r.add_term(mul_keys(ka, kb), ca * cb);
        return r;
    }
    ArrowPoly& operator*=(const ArrowPoly& rhs) { return *this = *this * rhs; }

    ArrowPoly scalar_mul(const Int& c) const {
        ArrowPoly r;
        if (c == 0) return r;
        for (const auto& [k, v] : terms_) r.terms_[k] = v * c;
        return r;
    }

    friend bool operator==(const ArrowPoly& a, const ArrowPoly& b) {
        return a.terms_ == b.terms_;
    }
    friend bool operator!=(const ArrowPoly& a, const ArrowPoly& b) { return !(a == b); }

    bool has_k_variables() const {
        for (const auto& [k, c] : terms_)
            if (!k.k.empty()) return true;
        return false;
    }

    /// Set every K_n = 1; what remains is the classical bracket part.
    Laurent collapse_k() const {
        Laurent r;
        for (const auto& [k, c] : terms_) r.add_term(k.a_exp, c);
        return r;
    }

    /// Set A = 1; what remains is the flat invariant in the K_n.
    ArrowPoly substitute_a1() const {
        ArrowPoly r;
        for (const auto& [k, c] : terms_) r.add_term(ArrowKey{0, k.k}, c);
        return r;
    }

    /// Multiply by (-A^3)^{-w}, the writhe normalization.
    ArrowPoly normalize_writhe(long w) const {
        ArrowPoly r;
        int shift = static_cast<int>(-3 * w);
        bool negate = (w % 2) != 0;
        for (const auto& [k, c] : terms_)
            r.terms_[ArrowKey{k.a_exp + shift, k.k}] = negate ? Int(-c) : c;
        return r;
    }

    std::string to_string() const {
        if (terms_.empty()) return "0";
        std::ostringstream out;
        bool first = true;
        for (const auto& [key, c] : terms_) {
            Int mag = c < 0 ? Int(-c) : c;
            if (first) {
                if (c < 0) out << "-";
                first = false;
            } else {
                out << (c < 0 ? " - " : " + ");
            }
            std::vector<std::string> factors;
            if (key.a_exp != 0) {
                std::ostringstream f;
                f << "A";
                if (key.a_exp != 1) f << "^" << key.a_exp;
                factors.push_back(f.str());
            }
            for (const auto& [n, e] : key.k) {
                std::ostringstream f;
                f << "K" << n;
                if (e != 1) f << "^" << e;
                factors.push_back(f.str());
            }
            if (factors.empty()) {
                out << mag;
            } else {
                if (mag != 1) out << mag << "*";
                for (std::size_t i = 0; i < factors.size(); ++i) {
                    if (i) out << "*";
                    out << factors[i];
                }
            }
        }
        return out.str();
    }

private:
    static ArrowKey mul_keys(const ArrowKey& x, const ArrowKey& y) {
        ArrowKey r;
        r.a_exp = x.a_exp + y.a_exp;
        auto ix = x.k.begin(), iy = y.k.begin();
        while (ix != x.k.end() || iy != y.k.end()) {
            if (iy == y.k.end() || (ix != x.k.end() && ix->first < iy->first)) {
                r.k.push_back(*ix++);
            } else if (ix == x.k.end() || iy->first < ix->first) {
                r.k.push_back(*iy++);
            } else {
                r.k.emplace_back(ix->first, ix->second + iy->second);
                ++ix;
                ++iy;
            }
        }
        return r;
    }

    term_map terms_;
};

/// Laurent counterpart of normalize_writhe for the plain bracket.
inline Laurent normalize_writhe(const Laurent& p, long w) {
    return p * Laurent::neg_a_cubed_pow(-w);
}

} // namespace vknot
