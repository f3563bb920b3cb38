#include "elab/groebner.hpp"

#include "test_support.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace elab;

namespace {

bool contains(const std::vector<MultiPoly>& set, const MultiPoly& p) {
    for (auto& g : set)
        if (g == p) return true;
    return false;
}

/// Every pairwise S-polynomial reduces to zero, elements are monic, no
/// leading monomial divides another.
bool is_reduced_gb(const GroebnerBasis& G) {
    for (auto& g : G.elements)
        if (g.is_zero() || g.leading_coefficient(G.order) != 1) return false;
    for (std::size_t i = 0; i < G.elements.size(); ++i)
        for (std::size_t j = 0; j < G.elements.size(); ++j) {
            if (i == j) continue;
            if (G.elements[i].leading_monomial(G.order).divides(
                    G.elements[j].leading_monomial(G.order)))
                return false;
        }
    for (std::size_t i = 0; i < G.elements.size(); ++i)
        for (std::size_t j = i + 1; j < G.elements.size(); ++j)
            if (!normal_form(s_polynomial(G.elements[i], G.elements[j], G.order), G).is_zero())
                return false;
    return true;
}

}  // namespace

TEST_CASE("normal form: generator reduces to zero") {
    VariableTable ring;
    ring.add("c1");
    ring.add("s1");
    MultiPoly f = parse_poly("c1^2 + s1^2 - 1", ring);
    GroebnerBasis G = buchberger({f}, MonomialOrder::degrevlex(ring.all()));
    CHECK(normal_form(f, G).is_zero());
}

TEST_CASE("normal form: one-step division") {
    VariableTable ring;
    ring.add("x");
    auto ord = MonomialOrder::lex(ring.all());
    GroebnerBasis G = buchberger({parse_poly("x^2 - 1", ring)}, ord);
    CHECK(normal_form(parse_poly("x^3", ring), G) == parse_poly("x", ring));
}

TEST_CASE("normal form: full reduction below the leading term") {
    VariableTable ring;
    ring.add("x");
    ring.add("y");
    auto ord = MonomialOrder::degrevlex(ring.all());
    // division by the raw list, in list order
    std::vector<MultiPoly> divisors = {parse_poly("x*y - 1", ring), parse_poly("y^2 - 1", ring)};
    CHECK(normal_form(parse_poly("x^2*y + x*y^2 + y^2", ring), divisors, ord) ==
          parse_poly("x + y + 1", ring));
    // against the completed basis the ideal collapses further: x = y, y^2 = 1
    GroebnerBasis G = buchberger(divisors, ord);
    CHECK(normal_form(parse_poly("x^2*y + x*y^2 + y^2", ring), G) ==
          parse_poly("2*y + 1", ring));
}

TEST_CASE("buchberger: coprime leading monomials are already a basis") {
    VariableTable ring;
    VarId x = ring.add("x");
    VarId y = ring.add("y");
    (void)x;
    (void)y;
    auto gb = buchberger({parse_poly("x^2", ring), parse_poly("y", ring)},
                         MonomialOrder::degrevlex(ring.all()));
    REQUIRE(gb.elements.size() == 2);
    CHECK(contains(gb.elements, parse_poly("x^2", ring)));
    CHECK(contains(gb.elements, parse_poly("y", ring)));
}

TEST_CASE("buchberger: circle and hyperbola under lex, resultant oracle") {
    VariableTable ring;
    VarId x = ring.add("x");
    ring.add("y");
    MultiPoly f = parse_poly("x^2 + y^2 - 1", ring);
    MultiPoly g = parse_poly("x*y - 1", ring);

    // Oracle: the univariate eliminant is the resultant in x.
    MultiPoly res = test::sylvester_resultant(f, g, x);
    CHECK(res == parse_poly("y^4 - y^2 + 1", ring));

    auto gb = buchberger({f, g}, MonomialOrder::lex(ring.all()));
    CHECK(is_reduced_gb(gb));
    CHECK(contains(gb.elements, parse_poly("y^4 - y^2 + 1", ring)));
    CHECK(normal_form(f, gb).is_zero());
    CHECK(normal_form(g, gb).is_zero());
}

TEST_CASE("buchberger: reduced basis is canonical under generator permutation") {
    VariableTable ring;
    ring.add("x");
    ring.add("y");
    ring.add("z");
    auto ord = MonomialOrder::degrevlex(ring.all());
    std::vector<MultiPoly> gens = {parse_poly("x + y + z", ring),
                                   parse_poly("x*y + y*z + z*x", ring),
                                   parse_poly("x*y*z - 1", ring)};
    auto gb1 = buchberger(gens, ord);
    std::swap(gens[0], gens[2]);
    auto gb2 = buchberger(gens, ord);
    std::swap(gens[1], gens[2]);
    auto gb3 = buchberger(gens, ord);
    CHECK(gb1.elements == gb2.elements);
    CHECK(gb1.elements == gb3.elements);
    CHECK(is_reduced_gb(gb1));
}

TEST_CASE("buchberger: idempotence on its own output") {
    VariableTable ring;
    ring.add("x");
    ring.add("y");
    auto ord = MonomialOrder::degrevlex(ring.all());
    auto gb = buchberger({parse_poly("x^2 - y", ring), parse_poly("x^3 - x", ring)}, ord);
    auto gb2 = buchberger(gb.elements, ord);
    CHECK(gb.elements == gb2.elements);
}

TEST_CASE("buchberger: membership via normal form on random combinations") {
    VariableTable ring;
    ring.add("x");
    ring.add("y");
    auto ord = MonomialOrder::degrevlex(ring.all());
    std::vector<MultiPoly> gens = {parse_poly("x^2 + y^2 - 1", ring), parse_poly("x*y - 1", ring)};
    auto gb = buchberger(gens, ord);

    std::mt19937 rng(11);
    auto vars = ring.all();
    for (int i = 0; i < 20; ++i) {
        MultiPoly combo(&ring);
        for (auto& g : gens) combo += test::random_poly(&ring, vars, rng) * g;
        CHECK(normal_form(combo, gb).is_zero());
    }
    CHECK_FALSE(normal_form(parse_poly("x + y", ring), gb).is_zero());
}

TEST_CASE("elimination ideal: identity case and twisted cubic") {
    VariableTable ring;
    VarId x = ring.add("x");
    VarId y = ring.add("y");
    VarId t = ring.add("t");

    Ideal I{{parse_poly("x - t^2", ring), parse_poly("y - t^3", ring)}, &ring};

    // eliminate nothing: reduced GB of I itself
    auto all = elimination_ideal(I, ring.all());
    auto direct = buchberger(I.generators, MonomialOrder::block({}, ring.all()));
    CHECK(all == direct.elements);

    // eliminate t -> <y^2 - x^3>; oracle: resultant of the generators in t
    auto low = elimination_ideal(I, {x, y});
    MultiPoly res = test::sylvester_resultant(parse_poly("t^2 - x", ring),
                                              parse_poly("t^3 - y", ring), t);
    REQUIRE(low.size() == 1);
    MultiPoly expect = parse_poly("y^2 - x^3", ring);
    CHECK((res == expect || res == -expect));
    CHECK(low[0] == -expect);  // monic under degrevlex: x^3 - y^2
}

TEST_CASE("elimination ideal members vanish on sampled variety points") {
    VariableTable ring;
    VarId x = ring.add("x");
    VarId y = ring.add("y");
    VarId t = ring.add("t");
    Ideal I{{parse_poly("x - t^2", ring), parse_poly("y - t^3", ring)}, &ring};
    auto low = elimination_ideal(I, {x, y});
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> num(-8, 8);
    std::uniform_int_distribution<int> den(1, 5);
    for (int i = 0; i < 100; ++i) {
        Rational tv(num(rng), den(rng));
        std::vector<Rational> pt(3);
        pt[x] = tv * tv;
        pt[y] = tv * tv * tv;
        pt[t] = tv;
        for (auto& g : low) CHECK(g.eval(pt) == 0);
    }
}

TEST_CASE("ideal dimension") {
    VariableTable ring;
    VarId x = ring.add("x");
    VarId y = ring.add("y");
    VarId z = ring.add("z");
    auto ord = MonomialOrder::degrevlex(ring.all());

    GroebnerBasis zero{{}, ord};
    CHECK(ideal_dimension(zero, ring.all()) == 3);

    auto full = buchberger({MultiPoly::var(&ring, x), MultiPoly::var(&ring, y),
                            MultiPoly::var(&ring, z)},
                           ord);
    CHECK(ideal_dimension(full, ring.all()) == 0);

    auto curve = buchberger({parse_poly("x^2 - y", ring)}, ord);
    CHECK(ideal_dimension(curve, ring.all()) == 2);
}

TEST_CASE("sos_split") {
    VariableTable ring;
    VarId x = ring.add("x");
    VarId y = ring.add("y");

    auto roots = sos_split(parse_poly("x^2 + y^2", ring));
    REQUIRE(roots.size() == 2);
    CHECK(contains(roots, MultiPoly::var(&ring, x)));
    CHECK(contains(roots, MultiPoly::var(&ring, y)));

    auto single = sos_split(parse_poly("x^2", ring));
    REQUIRE(single.size() == 1);
    CHECK(single[0] == MultiPoly::var(&ring, x));

    CHECK_THROWS_AS(sos_split(parse_poly("x^2 - y^2", ring)), NotSumOfSquares);
    CHECK_THROWS_AS(sos_split(parse_poly("x^2 + x", ring)), NotSumOfSquares);

    // reconstruction: sum of c_i * m_i^2 gives back f
    MultiPoly f = parse_poly("4*x^2 + 9/2*y^4", ring);
    auto ms = sos_split(f);
    MultiPoly back(&ring);
    for (auto& m : ms) back += f.coefficient((m * m).terms().begin()->first) * m * m;
    CHECK(back == f);
}

TEST_CASE("buchberger aborts with pending-pair report when starved") {
    VariableTable ring;
    ring.add("x");
    ring.add("y");
    ring.add("z");
    std::vector<MultiPoly> gens = {parse_poly("x + y + z", ring),
                                   parse_poly("x*y + y*z + z*x", ring),
                                   parse_poly("x*y*z - 1", ring)};
    CHECK_THROWS_AS(buchberger(gens, MonomialOrder::degrevlex(ring.all()), 1), ResourceExhausted);
}
