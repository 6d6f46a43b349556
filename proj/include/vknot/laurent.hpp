#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <map>
#include <sstream>
#include <string>

namespace vknot {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Laurent polynomial in the single variable A with exact coefficients.
/// Terms are kept in a sorted map keyed by exponent; zero coefficients are
/// never stored, so equality is structural.
template <typename Coeff>
class BasicLaurent {
public:
    using coeff_type = Coeff;
    using term_map = std::map<int, Coeff>;

    BasicLaurent() = default;
    BasicLaurent(long constant) {
        if (constant != 0) terms_[0] = Coeff(constant);
    }
    explicit BasicLaurent(const Coeff& constant) {
        if (constant != 0) terms_[0] = constant;
    }

    static BasicLaurent monomial(const Coeff& c, int exp) {
        BasicLaurent p;
        if (c != 0) p.terms_[exp] = c;
        return p;
    }

    /// d = -A^2 - A^{-2}, the loop value of the bracket state sum.
    static BasicLaurent loop_value() {
        BasicLaurent p;
        p.terms_[2] = Coeff(-1);
        p.terms_[-2] = Coeff(-1);
        return p;
    }

    /// (-A^3)^k for any integer k, the curl normalization factor.
    static BasicLaurent neg_a_cubed_pow(long k) {
        BasicLaurent p;
        p.terms_[static_cast<int>(3 * k)] = (k % 2 == 0) ? Coeff(1) : Coeff(-1);
        return p;
    }

    bool is_zero() const { return terms_.empty(); }
    const term_map& terms() const { return terms_; }

    Coeff coeff(int exp) const {
        auto it = terms_.find(exp);
        return it == terms_.end() ? Coeff(0) : it->second;
    }

    int min_degree() const { return terms_.empty() ? 0 : terms_.begin()->first; }
    int max_degree() const { return terms_.empty() ? 0 : terms_.rbegin()->first; }

    void add_term(int exp, const Coeff& c) {
        if (c == 0) return;
        auto [it, inserted] = terms_.emplace(exp, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    BasicLaurent& operator+=(const BasicLaurent& rhs) {
        for (const auto& [e, c] : rhs.terms_) add_term(e, c);
        return *this;
    }
    BasicLaurent& operator-=(const BasicLaurent& rhs) {
        for (const auto& [e, c] : rhs.terms_) add_term(e, -c);
        return *this;
    }

    friend BasicLaurent operator+(BasicLaurent a, const BasicLaurent& b) { return a += b; }
    friend BasicLaurent operator-(BasicLaurent a, const BasicLaurent& b) { return a -= b; }

    BasicLaurent operator-() const {
        BasicLaurent r;
        for (const auto& [e, c] : terms_) r.terms_[e] = -c;
        return r;
    }

    friend BasicLaurent operator*(const BasicLaurent& a, const BasicLaurent& b) {
        BasicLaurent r;
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) r.add_term(ea + eb, ca * cb);
        return r;
    }
    BasicLaurent& operator*=(const BasicLaurent& rhs) { return *this = *this * rhs; }

    BasicLaurent scalar_mul(const Coeff& c) const {
        BasicLaurent r;
        if (c == 0) return r;
        for (const auto& [e, k] : terms_) r.terms_[e] = k * c;
        return r;
    }

    friend bool operator==(const BasicLaurent& a, const BasicLaurent& b) {
        return a.terms_ == b.terms_;
    }
    friend bool operator!=(const BasicLaurent& a, const BasicLaurent& b) { return !(a == b); }
    friend bool operator<(const BasicLaurent& a, const BasicLaurent& b) {
        return a.terms_ < b.terms_;
    }

    /// Substitute A = 1 (collapses every term onto the constant).
    Coeff evaluate_at_one() const {
        Coeff total(0);
        for (const auto& [e, c] : terms_) total += c;
        return total;
    }

    /// Terms printed in ascending A-exponent so output is byte-stable.
    std::string to_string() const {
        if (terms_.empty()) return "0";
        std::ostringstream out;
        bool first = true;
        for (const auto& [e, c] : terms_) {
            Coeff mag = c < 0 ? Coeff(-c) : c;
            if (first) {
                if (c < 0) out << "-";
                first = false;
            } else {
                out << (c < 0 ? " - " : " + ");
            }
            if (e == 0) {
                out << mag;
            } else {
                if (mag != 1) out << mag << "*";
                out << "A";
                if (e != 1) out << "^" << e;
            }
        }
        return out.str();
    }

private:
    term_map terms_;
};

using Laurent = BasicLaurent<Int>;
using LaurentQ = BasicLaurent<Rational>;

inline LaurentQ to_rational(const Laurent& p) {
    LaurentQ r;
    for (const auto& [e, c] : p.terms()) r.add_term(e, Rational(c));
    return r;
}

} // namespace vknot
