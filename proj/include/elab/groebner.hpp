/// @file groebner.hpp
/// Multivariate division, Buchberger completion, elimination ideals,
/// combinatorial ideal dimension and the restricted sum-of-squares split.

#pragma once

#include "elab/ratpoly.hpp"

#include <cstddef>
#include <deque>
#include <set>
#include <stdexcept>
#include <tuple>

namespace elab {

struct Ideal {
    std::vector<MultiPoly> generators;
    const VariableTable* ring = nullptr;
};

struct GroebnerBasis {
    std::vector<MultiPoly> elements;  // monic, auto-reduced, sorted by LM ascending
    MonomialOrder order;
};

struct ResourceExhausted : std::runtime_error {
    explicit ResourceExhausted(std::size_t pending)
        : std::runtime_error("buchberger aborted with " + std::to_string(pending) +
                             " pairs still queued"),
          pending_pairs(pending) {}
    std::size_t pending_pairs;
};

struct NotSumOfSquares : std::runtime_error {
    NotSumOfSquares() : std::runtime_error("polynomial is not a positive combination of squares") {}
};

// ---------------------------------------------------------------------------
// Division / normal form
// ---------------------------------------------------------------------------

/// Remainder of f on division by `basis`: no monomial of the result is
/// divisible by any basis leading monomial. Unique when `basis` is a
/// Groebner basis for `ord`.
inline MultiPoly normal_form(const MultiPoly& f, const std::vector<MultiPoly>& basis,
                             const MonomialOrder& ord) {
    for (const auto& g : basis)
        if (f.ring() && g.ring() && f.ring() != g.ring()) throw RingMismatch();

    struct Lead {
        const MultiPoly* g;
        Monomial lm;
        Rational lc;
    };
    std::vector<Lead> leads;
    leads.reserve(basis.size());
    for (const auto& g : basis)
        if (!g.is_zero()) leads.push_back({&g, g.leading_monomial(ord), g.leading_coefficient(ord)});

    MultiPoly h = f;
    MultiPoly r(f.ring());
    while (!h.is_zero()) {
        Monomial lm = h.leading_monomial(ord);
        Rational lc = h.coefficient(lm);
        bool reduced = false;
        for (const auto& d : leads) {
            if (d.lm.divides(lm)) {
                MultiPoly sub = *d.g;
                sub.mul_term(lc / d.lc, lm / d.lm);
                h -= sub;
                reduced = true;
                break;
            }
        }
        if (!reduced) {
            r.add_term(lm, lc);
            h.add_term(lm, -lc);
        }
    }
    return r;
}

inline MultiPoly normal_form(const MultiPoly& f, const GroebnerBasis& G) {
    return normal_form(f, G.elements, G.order);
}

inline MultiPoly s_polynomial(const MultiPoly& f, const MultiPoly& g, const MonomialOrder& ord) {
    Monomial lmf = f.leading_monomial(ord), lmg = g.leading_monomial(ord);
    Monomial L = Monomial::lcm(lmf, lmg);
    MultiPoly a = f, b = g;
    a.mul_term(Rational(1) / f.leading_coefficient(ord), L / lmf);
    b.mul_term(Rational(1) / g.leading_coefficient(ord), L / lmg);
    return a - b;
}

// ---------------------------------------------------------------------------
// Buchberger
// ---------------------------------------------------------------------------

namespace detail {

/// Inter-reduce a generating set in place: drop elements whose LM is divisible
/// by another's, fully reduce each against the rest, normalize monic.
inline void auto_reduce(std::vector<MultiPoly>& gs, const MonomialOrder& ord) {
    bool changed = true;
    while (changed) {
        changed = false;
        // minimality: remove redundant leading monomials
        for (std::size_t i = 0; i < gs.size();) {
            bool drop = false;
            Monomial lmi = gs[i].leading_monomial(ord);
            for (std::size_t j = 0; j < gs.size(); ++j) {
                if (i == j) continue;
                if (gs[j].leading_monomial(ord).divides(lmi)) {
                    drop = true;
                    break;
                }
            }
            if (drop) {
                gs.erase(gs.begin() + static_cast<std::ptrdiff_t>(i));
                changed = true;
            } else {
                ++i;
            }
        }
        // tail reduction
        for (std::size_t i = 0; i < gs.size(); ++i) {
            std::vector<MultiPoly> rest;
            rest.reserve(gs.size() - 1);
            for (std::size_t j = 0; j < gs.size(); ++j)
                if (j != i) rest.push_back(gs[j]);
            MultiPoly red = normal_form(gs[i], rest, ord);
            if (red != gs[i]) {
                changed = true;
                if (red.is_zero()) {
                    gs.erase(gs.begin() + static_cast<std::ptrdiff_t>(i));
                    --i;
                } else {
                    gs[i] = red;
                }
            }
        }
    }
    for (auto& g : gs) g = g.monic(ord);
    std::sort(gs.begin(), gs.end(), [&](const MultiPoly& a, const MultiPoly& b) {
        return ord.less(a.leading_monomial(ord), b.leading_monomial(ord));
    });
}

}  // namespace detail

/// Auto-reduce a set of polynomials: monic, mutually fully reduced, sorted by
/// leading monomial. For the low block of a block-order Groebner basis this is
/// the reduced basis of the elimination ideal.
inline std::vector<MultiPoly> inter_reduce(std::vector<MultiPoly> gs, const MonomialOrder& ord) {
    gs.erase(std::remove_if(gs.begin(), gs.end(), [](const MultiPoly& p) { return p.is_zero(); }),
             gs.end());
    detail::auto_reduce(gs, ord);
    return gs;
}

/// Reduced Groebner basis of <gens> under `ord`. Deterministic: pairs are
/// processed by minimal lcm degree, ties by generator indices; both classical
/// pair-elimination criteria (coprime leading monomials, chain) are applied.
inline GroebnerBasis buchberger(std::vector<MultiPoly> gens, const MonomialOrder& ord,
                                std::size_t max_pairs = 2'000'000) {
    const VariableTable* ring = nullptr;
    for (auto& g : gens)
        if (g.ring()) ring = g.ring();

    std::vector<MultiPoly> basis;
    for (auto& g : gens) {
        if (g.is_zero()) continue;
        MultiPoly m = g.monic(ord);
        bool dup = false;
        for (auto& b : basis)
            if (b == m) dup = true;
        if (!dup) basis.push_back(std::move(m));
    }
    if (basis.empty()) return {{}, ord};

    std::vector<Monomial> lms;
    for (auto& b : basis) lms.push_back(b.leading_monomial(ord));

    using Pair = std::tuple<std::uint32_t, std::size_t, std::size_t>;  // (deg lcm, i, j)
    std::set<Pair> queue;
    std::set<std::pair<std::size_t, std::size_t>> done;
    auto push_pair = [&](std::size_t i, std::size_t j) {
        queue.insert({Monomial::lcm(lms[i], lms[j]).degree(), i, j});
    };
    for (std::size_t j = 1; j < basis.size(); ++j)
        for (std::size_t i = 0; i < j; ++i) push_pair(i, j);

    std::size_t processed = 0;
    while (!queue.empty()) {
        if (++processed > max_pairs) throw ResourceExhausted(queue.size());
        auto [deg, i, j] = *queue.begin();
        queue.erase(queue.begin());
        done.insert({i, j});

        if (Monomial::coprime(lms[i], lms[j])) continue;  // Buchberger 1
        Monomial L = Monomial::lcm(lms[i], lms[j]);
        bool chained = false;  // Buchberger 2 (chain criterion)
        for (std::size_t k = 0; k < basis.size() && !chained; ++k) {
            if (k == i || k == j) continue;
            if (!lms[k].divides(L)) continue;
            auto key = [&](std::size_t a, std::size_t b) {
                return std::make_pair(std::min(a, b), std::max(a, b));
            };
            if (done.count(key(i, k)) && done.count(key(j, k))) chained = true;
        }
        if (chained) continue;

        MultiPoly s = normal_form(s_polynomial(basis[i], basis[j], ord), basis, ord);
        if (s.is_zero()) continue;
        s = s.monic(ord);
        basis.push_back(s);
        lms.push_back(s.leading_monomial(ord));
        std::size_t n = basis.size() - 1;
        for (std::size_t k = 0; k < n; ++k) push_pair(k, n);
    }

    detail::auto_reduce(basis, ord);
    (void)ring;
    return {std::move(basis), ord};
}

inline GroebnerBasis buchberger(const Ideal& I, const MonomialOrder& ord) {
    return buchberger(I.generators, ord);
}

// ---------------------------------------------------------------------------
// Elimination
// ---------------------------------------------------------------------------

/// Generators of I ∩ K[keep]: Buchberger under a block order with the
/// eliminated variables in the high block, then filtering. `inner` selects
/// the order used inside each block.
inline std::vector<MultiPoly> elimination_ideal(const Ideal& I, const std::vector<VarId>& keep,
                                                MonomialOrder::Kind inner = MonomialOrder::Kind::degrevlex) {
    std::set<VarId> keep_set(keep.begin(), keep.end());
    std::vector<VarId> eliminated;
    for (VarId v : I.ring->all())
        if (!keep_set.count(v)) eliminated.push_back(v);

    GroebnerBasis gb = buchberger(I.generators, MonomialOrder::block(eliminated, keep, inner, inner));
    std::vector<MultiPoly> low;
    for (const auto& g : gb.elements) {
        bool pure = true;
        for (VarId v : g.support())
            if (!keep_set.count(v)) pure = false;
        if (pure) low.push_back(g);
    }
    return low;
}

// ---------------------------------------------------------------------------
// Dimension
// ---------------------------------------------------------------------------

/// Krull dimension of the leading-term ideal over an explicit ambient variable
/// set: the size of a largest variable subset S such that no leading monomial
/// is supported inside S.
inline int ideal_dimension(const GroebnerBasis& G, const std::vector<VarId>& ring_vars) {
    if (ring_vars.size() > 63) throw std::invalid_argument("ideal_dimension: too many variables");
    std::vector<std::uint64_t> lt_supports;
    for (const auto& g : G.elements) {
        if (g.is_zero()) continue;
        Monomial lm = g.leading_monomial(G.order);
        if (lm.is_one()) return -1;  // unit ideal, empty variety
        std::uint64_t mask = 0;
        for (auto& [v, e] : lm.factors()) {
            auto it = std::find(ring_vars.begin(), ring_vars.end(), v);
            if (it == ring_vars.end())
                throw std::invalid_argument("ideal_dimension: leading monomial uses a variable outside the ring");
            mask |= std::uint64_t(1) << (it - ring_vars.begin());
        }
        lt_supports.push_back(mask);
    }

    const std::size_t n = ring_vars.size();
    int best = 0;
    // Depth-first over subsets with a remaining-count bound.
    std::function<void(std::size_t, std::uint64_t, int)> walk = [&](std::size_t idx,
                                                                    std::uint64_t mask, int count) {
        if (count + int(n - idx) <= best) return;
        if (idx == n) {
            best = std::max(best, count);
            return;
        }
        std::uint64_t with = mask | (std::uint64_t(1) << idx);
        bool ok = true;
        for (auto s : lt_supports)
            if ((s & ~with) == 0) {
                ok = false;
                break;
            }
        if (ok) walk(idx + 1, with, count + 1);
        walk(idx + 1, mask, count);
    };
    walk(0, 0, 0);
    return best;
}

inline int ideal_dimension(const GroebnerBasis& G) {
    return ideal_dimension(G, G.elements.empty() ? std::vector<VarId>{} : G.elements.front().ring()->all());
}

// ---------------------------------------------------------------------------
// Restricted real-radical step
// ---------------------------------------------------------------------------

/// If f = sum of c_i * m_i^2 with rational c_i > 0 and monomials m_i, returns
/// the m_i (coefficient 1). Throws NotSumOfSquares otherwise. Each m_i lies in
/// the real radical of any real ideal containing f.
inline std::vector<MultiPoly> sos_split(const MultiPoly& f) {
    std::vector<MultiPoly> roots;
    for (auto& [m, c] : f.terms()) {
        if (c < 0) throw NotSumOfSquares();
        std::vector<std::pair<VarId, std::uint32_t>> half;
        for (auto& [v, e] : m.factors()) {
            if (e % 2 != 0) throw NotSumOfSquares();
            half.push_back({v, e / 2});
        }
        roots.push_back(MultiPoly::term(f.ring(), Rational(1), Monomial(std::move(half))));
    }
    return roots;
}

}  // namespace elab
