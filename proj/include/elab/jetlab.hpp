/// @file jetlab.hpp
/// Jet-variable systems over two independent variables: formal total
/// derivatives, prolongation, the affine-rigidity pipeline and the Killing
/// equation demo.

#pragma once

#include "elab/groebner.hpp"
#include "elab/ratpoly.hpp"

#include <json.hpp>

#include <array>
#include <set>
#include <string>

namespace elab {

/// Identifies the jet variable u^k_{n1 n2}: k-th component differentiated
/// n1 times in the first and n2 times in the second label direction.
struct JetVariable {
    int k;
    int n1;
    int n2;
    int order() const { return n1 + n2; }
    bool operator<(const JetVariable& o) const {
        return std::tie(k, n1, n2) < std::tie(o.k, o.n1, o.n2);
    }
};

/// Registers jet variables `<base><k>_<n1><n2>` on demand in a shared table
/// and keeps the id -> jet mapping needed by total derivatives.
class JetSpace {
public:
    JetSpace(VariableTable* table, int functions, std::string base = "u")
        : table_(table), functions_(functions), base_(std::move(base)) {}

    VariableTable* table() const { return table_; }
    int functions() const { return functions_; }

    VarId var(int k, int n1, int n2) {
        VarId id = table_->add(name(k, n1, n2));
        jets_[id] = JetVariable{k, n1, n2};
        return id;
    }
    std::string name(int k, int n1, int n2) const {
        return base_ + std::to_string(k) + "_" + std::to_string(n1) + std::to_string(n2);
    }
    const JetVariable* lookup(VarId v) const {
        auto it = jets_.find(v);
        return it == jets_.end() ? nullptr : &it->second;
    }

    MultiPoly jet(int k, int n1, int n2) {
        return MultiPoly::var(table_, var(k, n1, n2));
    }

    /// All registered jet variables of the given differentiation order.
    std::vector<VarId> vars_of_order(int ord) const {
        std::vector<VarId> out;
        for (auto& [id, j] : jets_)
            if (j.order() == ord) out.push_back(id);
        std::sort(out.begin(), out.end());
        return out;
    }

private:
    VariableTable* table_;
    int functions_;
    std::string base_;
    std::map<VarId, JetVariable> jets_;
};

/// Formal total derivative in direction 1 or 2: u^k_v -> u^k_{v+e_dir},
/// extended to polynomials by the product rule. Non-jet variables are
/// treated as constants.
inline MultiPoly total_derivative(const MultiPoly& f, int direction, JetSpace& space) {
    if (direction != 1 && direction != 2) throw std::invalid_argument("direction must be 1 or 2");
    MultiPoly out(f.ring());
    for (auto& [m, c] : f.terms()) {
        for (auto& [v, e] : m.factors()) {
            const JetVariable* j = space.lookup(v);
            if (!j) continue;
            VarId bumped = space.var(j->k, j->n1 + (direction == 1), j->n2 + (direction == 2));
            // c * e * m / v * bumped
            Monomial rest = m / Monomial::var(v, 1);
            out.add_term(rest * Monomial::var(bumped, 1), c * Rational(e));
        }
    }
    return out;
}

struct JetSystem {
    std::vector<MultiPoly> equations;
    JetSpace* space = nullptr;

    int order() const {
        int q = 0;
        for (auto& eq : equations)
            for (VarId v : eq.support())
                if (const JetVariable* j = space->lookup(v)) q = std::max(q, j->order());
        return q;
    }
};

/// Original equations plus all distinct total derivatives up to `times`
/// extra orders.
inline JetSystem prolong(const JetSystem& S, int times) {
    if (times < 1) throw std::invalid_argument("prolong: times must be >= 1");
    std::set<MultiPoly> seen(S.equations.begin(), S.equations.end());
    JetSystem out{S.equations, S.space};
    std::vector<MultiPoly> frontier = S.equations;
    for (int step = 0; step < times; ++step) {
        std::vector<MultiPoly> next;
        for (auto& eq : frontier) {
            for (int dir : {1, 2}) {
                MultiPoly d = total_derivative(eq, dir, *S.space);
                if (d.is_zero()) continue;
                if (seen.insert(d).second) {
                    out.equations.push_back(d);
                    next.push_back(d);
                }
            }
        }
        frontier = std::move(next);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Affine rigidity (area-preserving + harmonic => affine)
// ---------------------------------------------------------------------------

struct RigidityPipelineError : std::runtime_error {
    RigidityPipelineError(const std::string& stage, const std::string& what)
        : std::runtime_error("rigidity pipeline, stage '" + stage + "': " + what), stage(stage) {}
    std::string stage;
};

struct RigidityReport {
    std::vector<std::string> initial_system;
    std::size_t prolonged_equation_count = 0;
    std::vector<std::string> eliminated_basis;   // auto-reduced basis of the projected ideal
    std::vector<std::string> printed_gs;         // the four expected quadrics
    bool basis_contains_printed_gs = false;
    std::vector<std::string> sos_generators;     // basis members that split as sums of squares
    std::vector<std::string> sos_vanishing;      // jets forced to zero by the splits
    std::vector<std::string> vanishing_jets;     // all second-order jets, once the traces kick in
    std::string residual_constraint;             // what survives the substitution
    int dimension_complex = 0;
    int dimension_real = 0;
    std::vector<std::string> notes;
};

inline nlohmann::json to_json(const RigidityReport& r) {
    return nlohmann::json{{"initial_system", r.initial_system},
                          {"prolonged_equation_count", r.prolonged_equation_count},
                          {"eliminated_basis", r.eliminated_basis},
                          {"printed_gs", r.printed_gs},
                          {"basis_contains_printed_gs", r.basis_contains_printed_gs},
                          {"sos_generators", r.sos_generators},
                          {"sos_vanishing", r.sos_vanishing},
                          {"vanishing_jets", r.vanishing_jets},
                          {"residual_constraint", r.residual_constraint},
                          {"dimensions",
                           {{"complex", r.dimension_complex}, {"real", r.dimension_real}}},
                          {"notes", r.notes}};
}

namespace detail {

/// Variable ranking for the rigidity elimination: third-order jets form the
/// high block; inside the low block the pure second derivatives y^k_02 rank
/// above the mixed and y^k_20 ones so that the traces y^k_20 + y^k_02 reduce
/// the former, keeping the printed quadrics intact under auto-reduction.
inline void rigidity_rankings(JetSpace& jets, std::vector<VarId>& high, std::vector<VarId>& low) {
    for (int k : {1, 2})
        for (int n1 = 3; n1 >= 0; --n1) high.push_back(jets.var(k, n1, 3 - n1));
    for (int k : {1, 2}) low.push_back(jets.var(k, 0, 2));
    low.push_back(jets.var(1, 1, 1));
    low.push_back(jets.var(2, 2, 0));
    low.push_back(jets.var(1, 2, 0));
    low.push_back(jets.var(2, 1, 1));
    for (int k : {1, 2}) {
        low.push_back(jets.var(k, 1, 0));
        low.push_back(jets.var(k, 0, 1));
    }
}

}  // namespace detail

/// Runs the whole affine-rigidity computation: builds the area-preserving +
/// harmonic system, prolongs once, eliminates the third-order jets, splits the
/// sum-of-squares members, and computes the two variety dimensions. Every
/// stage asserts the shape it expects and aborts loudly otherwise.
inline RigidityReport prove_affine_rigidity(
    MonomialOrder::Kind inner_order = MonomialOrder::Kind::degrevlex) {
    VariableTable ring;
    JetSpace jets(&ring, 2, "y");

    std::vector<VarId> high, low;
    detail::rigidity_rankings(jets, high, low);

    auto J = [&](int k, int n1, int n2) { return jets.jet(k, n1, n2); };
    MultiPoly one = MultiPoly::constant(&ring, Rational(1));

    // det(dy) - 1, its two total derivatives, and the two harmonicity traces
    MultiPoly f1 = J(1, 1, 0) * J(2, 0, 1) - J(1, 0, 1) * J(2, 1, 0) - one;
    MultiPoly f2 = total_derivative(f1, 1, jets);
    MultiPoly f3 = total_derivative(f1, 2, jets);
    MultiPoly f4 = J(1, 2, 0) + J(1, 0, 2);
    MultiPoly f5 = J(2, 2, 0) + J(2, 0, 2);

    JetSystem R2{{f1, f2, f3, f4, f5}, &jets};
    JetSystem R3 = prolong(R2, 1);
    if (R3.equations.size() != 12)
        throw RigidityPipelineError("prolongation", "expected 12 equations, got " +
                                                        std::to_string(R3.equations.size()));

    RigidityReport report;
    for (auto& eq : R2.equations) report.initial_system.push_back(to_string(eq));
    report.prolonged_equation_count = R3.equations.size();
    report.notes.push_back(
        "f2 and f3 enter the initial second-order system as the two first total "
        "derivatives of f1; the content is identical either way.");

    // Project out the 8 third-order jets through a block order.
    MonomialOrder elim = MonomialOrder::block(high, low, inner_order, inner_order);
    GroebnerBasis gb3 = buchberger(R3.equations, elim);
    std::vector<MultiPoly> basis;
    std::set<VarId> high_set(high.begin(), high.end());
    for (const auto& g : gb3.elements) {
        bool pure = true;
        for (VarId v : g.support())
            if (high_set.count(v)) pure = false;
        if (pure) basis.push_back(g);
    }
    MonomialOrder low_order = inner_order == MonomialOrder::Kind::degrevlex
                                  ? MonomialOrder::degrevlex(low)
                                  : MonomialOrder::lex(low);
    basis = inter_reduce(basis, low_order);
    if (basis.empty()) throw RigidityPipelineError("elimination", "projected ideal came out empty");
    for (auto& g : basis) report.eliminated_basis.push_back(to_string(g));

    MultiPoly g1 = J(1, 1, 1) * J(2, 2, 0) - J(2, 1, 1) * J(1, 2, 0);
    MultiPoly g2 = J(1, 1, 1) * J(1, 1, 1) + J(1, 2, 0) * J(1, 2, 0);
    MultiPoly g3 = J(2, 1, 1) * J(1, 1, 1) + J(2, 2, 0) * J(1, 2, 0);
    MultiPoly g4 = J(2, 1, 1) * J(2, 1, 1) + J(2, 2, 0) * J(2, 2, 0);
    for (auto* g : {&g1, &g2, &g3, &g4}) report.printed_gs.push_back(to_string(*g));

    auto member = [&](const MultiPoly& p) {
        for (auto& b : basis)
            if (b == p) return true;
        return false;
    };
    report.basis_contains_printed_gs = member(g1) && member(g2) && member(g3) && member(g4);

    // ideal must agree with the printed nine-element basis regardless of order
    GroebnerBasis low_gb{basis, low_order};
    for (auto* g : {&g1, &g2, &g3, &g4})
        if (!normal_form(*g, low_gb).is_zero())
            throw RigidityPipelineError("elimination",
                                        "printed quadric not in the projected ideal: " + to_string(*g));

    // Sum-of-squares members force jets to vanish over the reals.
    std::set<std::string> vanish;
    for (auto& b : basis) {
        try {
            auto roots = sos_split(b);
            bool nonconstant = true;
            for (auto& r : roots)
                if (r.total_degree() == 0) nonconstant = false;
            if (!nonconstant) continue;
            report.sos_generators.push_back(to_string(b));
            for (auto& r : roots) vanish.insert(to_string(r));
        } catch (const NotSumOfSquares&) {
        }
    }
    std::array<std::string, 4> expected_vanish = {jets.name(1, 1, 1), jets.name(1, 2, 0),
                                                  jets.name(2, 1, 1), jets.name(2, 2, 0)};
    for (auto& v : expected_vanish)
        if (!vanish.count(v))
            throw RigidityPipelineError("sos", "jet " + v + " not forced to vanish");
    report.sos_vanishing.assign(vanish.begin(), vanish.end());

    // Traces then clear the remaining second derivatives; substitute all of
    // them away and check only the area constraint survives.
    std::map<VarId, MultiPoly> to_zero;
    for (int k : {1, 2})
        for (auto [n1, n2] : std::array<std::array<int, 2>, 3>{{{2, 0}, {1, 1}, {0, 2}}}) {
            to_zero[jets.var(k, n1, n2)] = MultiPoly(&ring);
            report.vanishing_jets.push_back(jets.name(k, n1, n2));
        }
    std::set<MultiPoly> survivors;
    for (auto& b : basis) {
        MultiPoly s = b.substitute(to_zero);
        if (!s.is_zero()) survivors.insert(s.monic(low_order));
    }
    if (survivors.size() != 1 || !(*survivors.begin() == f1.monic(low_order) ||
                                   *survivors.begin() == (-f1).monic(low_order)))
        throw RigidityPipelineError("substitution",
                                    "expected the area constraint alone to survive");
    report.residual_constraint = to_string(f1);

    // Dimensions in Q[y, y1, y2]: append the order-0 variables, which appear
    // in no equation, and reuse the same ranking so leading terms are stable.
    std::vector<VarId> ring12 = low;
    ring12.push_back(jets.var(1, 0, 0));
    ring12.push_back(jets.var(2, 0, 0));
    MonomialOrder dim_order = MonomialOrder::degrevlex(ring12);
    GroebnerBasis gb12 = buchberger(basis, dim_order);
    report.dimension_complex = ideal_dimension(gb12, ring12);

    std::vector<MultiPoly> with_sos = basis;
    for (auto& v : expected_vanish) with_sos.push_back(MultiPoly::var(&ring, *ring.find(v)));
    GroebnerBasis gb_real = buchberger(with_sos, dim_order);
    report.dimension_real = ideal_dimension(gb_real, ring12);

    if (report.dimension_complex != 6 || report.dimension_real != 5)
        throw RigidityPipelineError(
            "dimension", "expected (6, 5), got (" + std::to_string(report.dimension_complex) +
                             ", " + std::to_string(report.dimension_real) + ")");
    return report;
}

// ---------------------------------------------------------------------------
// Killing equations
// ---------------------------------------------------------------------------

struct UnsupportedDimension : std::invalid_argument {
    UnsupportedDimension() : std::invalid_argument("only n = 2 is implemented") {}
};

/// Builds the Killing system du + du^T = 0 in the plane, prolongs once,
/// verifies that every second-order jet is forced to zero, and returns the
/// number of free jet parameters at a point (= dim of the solution space).
inline int killing_solution_dimension(int n) {
    if (n != 2) throw UnsupportedDimension();
    VariableTable ring;
    JetSpace jets(&ring, 2, "u");

    std::vector<VarId> ranking;
    for (int ord = 2; ord >= 0; --ord)
        for (int k : {1, 2})
            for (int n1 = ord; n1 >= 0; --n1) ranking.push_back(jets.var(k, n1, ord - n1));

    auto J = [&](int k, int n1, int n2) { return jets.jet(k, n1, n2); };
    std::vector<MultiPoly> eqs = {
        Rational(2) * J(1, 1, 0),          // i = j = 1
        J(1, 0, 1) + J(2, 1, 0),           // i = 1, j = 2
        Rational(2) * J(2, 0, 1),          // i = j = 2
    };
    JetSystem R1{eqs, &jets};
    JetSystem R2 = prolong(R1, 1);

    MonomialOrder ord = MonomialOrder::degrevlex(ranking);
    GroebnerBasis gb = buchberger(R2.equations, ord);
    for (VarId v : jets.vars_of_order(2))
        if (!normal_form(MultiPoly::var(&ring, v), gb).is_zero())
            throw RigidityPipelineError("killing", "second-order jet " + ring.name(v) +
                                                       " not forced to vanish");
    return ideal_dimension(gb, ranking);
}

}  // namespace elab
