/// @file ratpoly.hpp
/// Sparse multivariate polynomials over Q: variable registry, monomials,
/// arithmetic, monomial orders and text serialization.

#pragma once

#include "elab/rational.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

namespace elab {

using VarId = std::uint32_t;

struct RingMismatch : std::runtime_error {
    RingMismatch() : std::runtime_error("polynomials over different variable tables") {}
};

// ---------------------------------------------------------------------------
// VariableTable
// ---------------------------------------------------------------------------

/// Registry of variable names; polynomials refer to variables by id.
class VariableTable {
public:
    VarId add(const std::string& name) {
        auto it = ids_.find(name);
        if (it != ids_.end()) return it->second;
        VarId id = static_cast<VarId>(names_.size());
        names_.push_back(name);
        ids_.emplace(name, id);
        return id;
    }

    std::optional<VarId> find(const std::string& name) const {
        auto it = ids_.find(name);
        if (it == ids_.end()) return std::nullopt;
        return it->second;
    }

    const std::string& name(VarId id) const { return names_.at(id); }
    std::size_t size() const { return names_.size(); }

    std::vector<VarId> all() const {
        std::vector<VarId> v(names_.size());
        for (VarId i = 0; i < names_.size(); ++i) v[i] = i;
        return v;
    }

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, VarId> ids_;
};

// ---------------------------------------------------------------------------
// Monomial
// ---------------------------------------------------------------------------

/// Power product; exponent pairs sorted by variable id, no zero exponents.
class Monomial {
public:
    Monomial() = default;
    explicit Monomial(std::vector<std::pair<VarId, std::uint32_t>> e) : e_(std::move(e)) {
        std::sort(e_.begin(), e_.end());
        std::size_t w = 0;
        for (auto& p : e_)
            if (p.second != 0) e_[w++] = p;
        e_.resize(w);
    }

    static Monomial var(VarId v, std::uint32_t exp = 1) {
        Monomial m;
        if (exp != 0) m.e_.push_back({v, exp});
        return m;
    }

    bool is_one() const { return e_.empty(); }
    std::uint32_t degree() const {
        std::uint32_t d = 0;
        for (auto& p : e_) d += p.second;
        return d;
    }
    std::uint32_t exponent(VarId v) const {
        for (auto& p : e_)
            if (p.first == v) return p.second;
        return 0;
    }
    const std::vector<std::pair<VarId, std::uint32_t>>& factors() const { return e_; }

    Monomial operator*(const Monomial& o) const {
        Monomial r;
        r.e_.reserve(e_.size() + o.e_.size());
        auto a = e_.begin(), b = o.e_.begin();
        while (a != e_.end() && b != o.e_.end()) {
            if (a->first < b->first)
                r.e_.push_back(*a++);
            else if (b->first < a->first)
                r.e_.push_back(*b++);
            else {
                r.e_.push_back({a->first, a->second + b->second});
                ++a, ++b;
            }
        }
        r.e_.insert(r.e_.end(), a, e_.end());
        r.e_.insert(r.e_.end(), b, o.e_.end());
        return r;
    }

    bool divides(const Monomial& m) const {
        auto a = e_.begin();
        auto b = m.e_.begin();
        while (a != e_.end()) {
            while (b != m.e_.end() && b->first < a->first) ++b;
            if (b == m.e_.end() || b->first != a->first || b->second < a->second) return false;
            ++a;
        }
        return true;
    }

    /// this / d; requires d.divides(*this).
    Monomial operator/(const Monomial& d) const {
        Monomial r;
        auto b = d.e_.begin();
        for (auto& p : e_) {
            if (b != d.e_.end() && b->first == p.first) {
                if (p.second > b->second) r.e_.push_back({p.first, p.second - b->second});
                ++b;
            } else {
                r.e_.push_back(p);
            }
        }
        return r;
    }

    static Monomial lcm(const Monomial& x, const Monomial& y) {
        Monomial r;
        auto a = x.e_.begin(), b = y.e_.begin();
        while (a != x.e_.end() && b != y.e_.end()) {
            if (a->first < b->first)
                r.e_.push_back(*a++);
            else if (b->first < a->first)
                r.e_.push_back(*b++);
            else {
                r.e_.push_back({a->first, std::max(a->second, b->second)});
                ++a, ++b;
            }
        }
        r.e_.insert(r.e_.end(), a, x.e_.end());
        r.e_.insert(r.e_.end(), b, y.e_.end());
        return r;
    }

    static bool coprime(const Monomial& x, const Monomial& y) {
        auto a = x.e_.begin(), b = y.e_.begin();
        while (a != x.e_.end() && b != y.e_.end()) {
            if (a->first < b->first)
                ++a;
            else if (b->first < a->first)
                ++b;
            else
                return false;
        }
        return true;
    }

    bool operator==(const Monomial& o) const { return e_ == o.e_; }
    /// Structural order used only as a canonical map key.
    bool operator<(const Monomial& o) const { return e_ < o.e_; }

private:
    std::vector<std::pair<VarId, std::uint32_t>> e_;
};

// ---------------------------------------------------------------------------
// MonomialOrder
// ---------------------------------------------------------------------------

/// Term order: lex or degrevlex over a variable ranking, or a two-block
/// elimination order (high block compared first).
class MonomialOrder {
public:
    enum class Kind { lex, degrevlex, block };

    static MonomialOrder lex(std::vector<VarId> ranking) {
        MonomialOrder o;
        o.kind_ = Kind::lex;
        o.groups_.push_back({std::move(ranking), Kind::lex});
        return o;
    }
    static MonomialOrder degrevlex(std::vector<VarId> ranking) {
        MonomialOrder o;
        o.kind_ = Kind::degrevlex;
        o.groups_.push_back({std::move(ranking), Kind::degrevlex});
        return o;
    }
    /// Elimination order: monomials are compared on `high` first.
    static MonomialOrder block(std::vector<VarId> high, std::vector<VarId> low,
                               Kind high_kind = Kind::degrevlex, Kind low_kind = Kind::degrevlex) {
        MonomialOrder o;
        o.kind_ = Kind::block;
        o.groups_.push_back({std::move(high), high_kind});
        o.groups_.push_back({std::move(low), low_kind});
        return o;
    }

    Kind kind() const { return kind_; }

    /// Variables in the high (eliminated) block; empty for single-group orders.
    const std::vector<VarId>& high_block() const {
        static const std::vector<VarId> none;
        return kind_ == Kind::block ? groups_[0].ranking : none;
    }

    /// <0 if a < b, 0 if equal, >0 if a > b.
    int compare(const Monomial& a, const Monomial& b) const {
        for (const auto& g : groups_) {
            int c = compare_group(g, a, b);
            if (c != 0) return c;
        }
        return 0;
    }
    bool less(const Monomial& a, const Monomial& b) const { return compare(a, b) < 0; }

private:
    struct Group {
        std::vector<VarId> ranking;  // highest variable first
        Kind kind;
    };

    static int compare_group(const Group& g, const Monomial& a, const Monomial& b) {
        if (g.kind == Kind::lex) {
            for (VarId v : g.ranking) {
                std::int64_t d = std::int64_t(a.exponent(v)) - std::int64_t(b.exponent(v));
                if (d != 0) return d > 0 ? 1 : -1;
            }
            return 0;
        }
        // degrevlex: total group degree, then reverse scan, lower exponent on
        // the lowest-ranked differing variable wins.
        std::int64_t da = 0, db = 0;
        for (VarId v : g.ranking) {
            da += a.exponent(v);
            db += b.exponent(v);
        }
        if (da != db) return da > db ? 1 : -1;
        for (auto it = g.ranking.rbegin(); it != g.ranking.rend(); ++it) {
            std::int64_t d = std::int64_t(a.exponent(*it)) - std::int64_t(b.exponent(*it));
            if (d != 0) return d > 0 ? -1 : 1;
        }
        return 0;
    }

    Kind kind_ = Kind::degrevlex;
    std::vector<Group> groups_;
};

// ---------------------------------------------------------------------------
// MultiPoly
// ---------------------------------------------------------------------------

/// Sparse multivariate polynomial over Q. Canonical: no zero coefficients,
/// terms keyed by monomial, so equal polynomials compare equal structurally.
class MultiPoly {
public:
    using TermMap = std::map<Monomial, Rational>;

    MultiPoly() : ring_(nullptr) {}
    explicit MultiPoly(const VariableTable* ring) : ring_(ring) {}

    static MultiPoly constant(const VariableTable* ring, const Rational& c) {
        MultiPoly p(ring);
        if (c != 0) p.terms_.emplace(Monomial{}, c);
        return p;
    }
    static MultiPoly var(const VariableTable* ring, VarId v, std::uint32_t exp = 1) {
        MultiPoly p(ring);
        p.terms_.emplace(Monomial::var(v, exp), Rational(1));
        return p;
    }
    static MultiPoly term(const VariableTable* ring, const Rational& c, Monomial m) {
        MultiPoly p(ring);
        if (c != 0) p.terms_.emplace(std::move(m), c);
        return p;
    }

    const VariableTable* ring() const { return ring_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }

    std::uint32_t total_degree() const {
        std::uint32_t d = 0;
        for (auto& [m, c] : terms_) d = std::max(d, m.degree());
        return d;
    }

    Rational coefficient(const Monomial& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    void add_term(const Monomial& m, const Rational& c) {
        if (c == 0) return;
        auto [it, fresh] = terms_.emplace(m, c);
        if (!fresh) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    MultiPoly& operator+=(const MultiPoly& o) {
        check_ring(o);
        for (auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    MultiPoly& operator-=(const MultiPoly& o) {
        check_ring(o);
        for (auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }
    MultiPoly operator+(const MultiPoly& o) const {
        MultiPoly r = *this;
        r += o;
        return r;
    }
    MultiPoly operator-(const MultiPoly& o) const {
        MultiPoly r = *this;
        r -= o;
        return r;
    }
    MultiPoly operator-() const {
        MultiPoly r = *this;
        for (auto& [m, c] : r.terms_) c = -c;
        return r;
    }

    MultiPoly operator*(const MultiPoly& o) const {
        check_ring(o);
        MultiPoly r(ring_ ? ring_ : o.ring_);
        for (auto& [ma, ca] : terms_)
            for (auto& [mb, cb] : o.terms_) r.add_term(ma * mb, ca * cb);
        return r;
    }
    MultiPoly& operator*=(const MultiPoly& o) { return *this = *this * o; }

    MultiPoly operator*(const Rational& c) const {
        MultiPoly r(ring_);
        if (c == 0) return r;
        r.terms_ = terms_;
        for (auto& [m, v] : r.terms_) v *= c;
        return r;
    }
    MultiPoly& operator*=(const Rational& c) { return *this = *this * c; }

    /// Multiply by c * m in place.
    void mul_term(const Rational& c, const Monomial& m) {
        if (c == 0) {
            terms_.clear();
            return;
        }
        TermMap out;
        for (auto& [mm, cc] : terms_) out.emplace(mm * m, cc * c);
        terms_ = std::move(out);
    }

    MultiPoly pow(std::uint32_t n) const {
        MultiPoly r = constant(ring_, Rational(1));
        for (std::uint32_t i = 0; i < n; ++i) r = r * (*this);
        return r;
    }

    bool operator==(const MultiPoly& o) const { return terms_ == o.terms_; }
    bool operator!=(const MultiPoly& o) const { return !(*this == o); }
    /// Structural order (term maps), for use in sets; not a term order.
    bool operator<(const MultiPoly& o) const { return terms_ < o.terms_; }

    /// Leading monomial/coefficient under an order; zero polynomial has none.
    const Monomial& leading_monomial(const MonomialOrder& ord) const {
        auto best = terms_.begin();
        for (auto it = std::next(terms_.begin()); it != terms_.end(); ++it)
            if (ord.less(best->first, it->first)) best = it;
        return best->first;
    }
    Rational leading_coefficient(const MonomialOrder& ord) const {
        return terms_.at(leading_monomial(ord));
    }

    MultiPoly monic(const MonomialOrder& ord) const {
        if (is_zero()) return *this;
        Rational lc = leading_coefficient(ord);
        return *this * (Rational(1) / lc);
    }

    /// Substitute variables by polynomials; unmapped variables stay.
    MultiPoly substitute(const std::map<VarId, MultiPoly>& repl) const {
        MultiPoly out(ring_);
        for (auto& [m, c] : terms_) {
            MultiPoly t = constant(ring_, c);
            Monomial untouched;
            for (auto& [v, e] : m.factors()) {
                auto it = repl.find(v);
                if (it == repl.end())
                    untouched = untouched * Monomial::var(v, e);
                else
                    t = t * it->second.pow(e);
            }
            t.mul_term(Rational(1), untouched);
            out += t;
        }
        return out;
    }

    /// Exact evaluation; `values` indexed by variable id.
    Rational eval(const std::vector<Rational>& values) const {
        Rational acc(0);
        for (auto& [m, c] : terms_) {
            Rational t = c;
            for (auto& [v, e] : m.factors())
                for (std::uint32_t i = 0; i < e; ++i) t *= values.at(v);
            acc += t;
        }
        return acc;
    }

    double eval(const std::vector<double>& values) const {
        double acc = 0;
        for (auto& [m, c] : terms_) {
            double t = to_double(c);
            for (auto& [v, e] : m.factors()) {
                double x = values.at(v);
                for (std::uint32_t i = 0; i < e; ++i) t *= x;
            }
            acc += t;
        }
        return acc;
    }

    /// Variables actually present.
    std::vector<VarId> support() const {
        std::vector<VarId> s;
        for (auto& [m, c] : terms_)
            for (auto& [v, e] : m.factors()) s.push_back(v);
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
        return s;
    }

private:
    void check_ring(const MultiPoly& o) const {
        if (ring_ && o.ring_ && ring_ != o.ring_) throw RingMismatch();
    }

    const VariableTable* ring_;
    TermMap terms_;
};

inline MultiPoly operator*(const Rational& c, const MultiPoly& p) { return p * c; }

// ---------------------------------------------------------------------------
// Text serialization:  terms `c * v1^e1*...*vk^ek` joined by +/-.
// ---------------------------------------------------------------------------

inline std::string to_string(const Monomial& m, const VariableTable& ring) {
    if (m.is_one()) return "1";
    std::string s;
    for (auto& [v, e] : m.factors()) {
        if (!s.empty()) s += "*";
        s += ring.name(v);
        if (e != 1) s += "^" + std::to_string(e);
    }
    return s;
}

inline std::string to_string(const MultiPoly& p) {
    if (p.is_zero()) return "0";
    // Print highest degree first, ties broken structurally, for readability.
    std::vector<std::pair<Monomial, Rational>> terms(p.terms().begin(), p.terms().end());
    std::stable_sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
        if (a.first.degree() != b.first.degree()) return a.first.degree() > b.first.degree();
        return b.first < a.first;
    });
    std::string s;
    for (auto& [m, c] : terms) {
        Rational a = c;
        if (s.empty()) {
            if (a < 0) {
                s += "-";
                a = -a;
            }
        } else {
            s += a < 0 ? " - " : " + ";
            if (a < 0) a = -a;
        }
        bool coeff_one = (a == 1);
        if (!coeff_one || m.is_one()) s += to_string(a);
        if (!m.is_one()) {
            if (!coeff_one) s += "*";
            s += to_string(m, *p.ring());
        }
    }
    return s;
}

inline std::ostream& operator<<(std::ostream& os, const MultiPoly& p) { return os << to_string(p); }

struct PolyParseError : std::runtime_error {
    explicit PolyParseError(const std::string& what) : std::runtime_error("polynomial parse: " + what) {}
};

/// Parses the text form; variables must already be registered unless
/// `register_new` is set.
inline MultiPoly parse_poly(const std::string& text, VariableTable& ring, bool register_new = false) {
    MultiPoly out(&ring);
    std::size_t i = 0;
    auto skip_ws = [&] {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    auto peek = [&]() -> int {
        return i < text.size() ? static_cast<unsigned char>(text[i]) : -1;
    };

    skip_ws();
    if (i >= text.size()) throw PolyParseError("empty input");
    bool first = true;
    while (true) {
        skip_ws();
        if (i >= text.size()) break;
        int sign = 1;
        if (peek() == '+' || peek() == '-') {
            if (text[i] == '-') sign = -1;
            ++i;
            skip_ws();
        } else if (!first) {
            throw PolyParseError("expected '+' or '-' at position " + std::to_string(i));
        }
        first = false;

        Rational coeff(1);
        bool saw_factor = false;
        if (std::isdigit(peek())) {
            std::size_t j = i;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
            std::string num = text.substr(i, j - i);
            i = j;
            skip_ws();
            if (peek() == '/') {
                ++i;
                skip_ws();
                std::size_t k = i;
                while (k < text.size() && std::isdigit(static_cast<unsigned char>(text[k]))) ++k;
                if (k == i) throw PolyParseError("denominator expected");
                coeff = parse_rational(num + "/" + text.substr(i, k - i));
                i = k;
            } else {
                coeff = parse_rational(num);
            }
            saw_factor = true;
        }
        Monomial mono;
        while (true) {
            skip_ws();
            if (saw_factor) {
                if (peek() != '*') break;
                ++i;
                skip_ws();
            }
            if (!(std::isalpha(peek()) || peek() == '_')) {
                if (saw_factor) throw PolyParseError("variable expected at position " + std::to_string(i));
                break;
            }
            std::size_t j = i;
            while (j < text.size()) {
                unsigned char c = static_cast<unsigned char>(text[j]);
                if (std::isalnum(c) || c == '_' || c == '\'')
                    ++j;
                else
                    break;
            }
            std::string name = text.substr(i, j - i);
            i = j;
            std::uint32_t exp = 1;
            skip_ws();
            if (peek() == '^') {
                ++i;
                skip_ws();
                std::size_t k = i;
                while (k < text.size() && std::isdigit(static_cast<unsigned char>(text[k]))) ++k;
                if (k == i) throw PolyParseError("exponent expected");
                exp = static_cast<std::uint32_t>(std::stoul(text.substr(i, k - i)));
                i = k;
            }
            VarId v;
            if (register_new) {
                v = ring.add(name);
            } else {
                auto found = ring.find(name);
                if (!found) throw PolyParseError("unknown variable '" + name + "'");
                v = *found;
            }
            mono = mono * Monomial::var(v, exp);
            saw_factor = true;
        }
        if (!saw_factor) throw PolyParseError("term expected at position " + std::to_string(i));
        out.add_term(mono, sign < 0 ? -coeff : coeff);
    }
    return out;
}

}  // namespace elab
