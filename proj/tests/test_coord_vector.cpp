#include "doctest.h"

#include "asqlab/coord_vector.hpp"
#include "asqlab/rational.hpp"

using asqlab::CoordVector;
using asqlab::Rational;

TEST_CASE("coord vector stores sparse entries sorted, no explicit zeros") {
    CoordVector<Rational> v;
    v.set(5, Rational(1, 2));
    v.set(2, Rational(3));
    v.set(9, Rational(-1));
    CHECK(v.support_size() == 3);
    CHECK(v.entries()[0].first == 2);
    CHECK(v.entries()[1].first == 5);
    CHECK(v.entries()[2].first == 9);
    CHECK(v.max_support() == 9);
    CHECK(v.get(5) == Rational(1, 2));
    CHECK(v.get(4) == Rational(0));

    v.set(5, Rational(0));
    CHECK(v.support_size() == 2);
    v.add(2, Rational(-3));
    CHECK(v.support_size() == 1);
    CHECK_THROWS_AS(v.set(0, Rational(1)), asqlab::InputError);
}

TEST_CASE("coord vector arithmetic") {
    CoordVector<Rational> a;
    a.set(1, Rational(1));
    a.set(3, Rational(2));
    CoordVector<Rational> b;
    b.set(3, Rational(-2));
    b.set(4, Rational(5));

    auto s = a + b;
    CHECK(s.get(1) == Rational(1));
    CHECK(s.get(3) == Rational(0));
    CHECK(s.get(4) == Rational(5));
    CHECK(s.support_size() == 2);

    auto d = a - b;
    CHECK(d.get(3) == Rational(4));
    CHECK(d.get(4) == Rational(-5));

    auto t = a.scaled(Rational(1, 2));
    CHECK(t.get(1) == Rational(1, 2));
    CHECK(t.get(3) == Rational(1));

    CHECK(a.prefix(2).support_size() == 1);
    CHECK(a.prefix(0).empty());
    CHECK(a.linf() == Rational(2));
}

TEST_CASE("csv round trip with rational and decimal values") {
    auto v = CoordVector<Rational>::from_csv("index,value\n4,2\n9,-1/3\n");
    CHECK(v.get(4) == Rational(2));
    CHECK(v.get(9) == Rational(-1, 3));

    auto again = CoordVector<Rational>::from_csv(v.to_csv());
    CHECK(again == v);

    auto f = CoordVector<double>::from_csv("2,0.5\n7,-1/4\n");
    CHECK(f.get(2) == doctest::Approx(0.5));
    CHECK(f.get(7) == doctest::Approx(-0.25));

    auto round = CoordVector<double>::from_csv(f.to_csv());
    CHECK(round.get(2) == f.get(2));
    CHECK(round.get(7) == f.get(7));

    CHECK_THROWS_AS(CoordVector<Rational>::from_csv("1;2\n"), asqlab::InputError);
    CHECK_THROWS_AS(CoordVector<Rational>::from_csv("1,1\n1,2\n"), asqlab::InputError);
    CHECK_THROWS_AS(CoordVector<Rational>::from_csv("0,1\n"), asqlab::InputError);
}
