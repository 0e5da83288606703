#include "doctest.h"

#include "asqlab/poly_norm.hpp"
#include "asqlab/rng.hpp"
#include "asqlab/spaces.hpp"

using asqlab::block_inrange_size;
using asqlab::block_of;
using asqlab::CoordVector;
using asqlab::FunctionalFamily;
using asqlab::Rational;

namespace {

CoordVector<Rational> rv(std::initializer_list<std::pair<std::int64_t, Rational>> entries) {
    CoordVector<Rational> v;
    for (const auto& [i, x] : entries) v.set(i, x);
    return v;
}

} // namespace

TEST_CASE("dyadic block helpers") {
    CHECK(block_of(2) == 1);
    CHECK(block_of(3) == 1);
    CHECK(block_of(4) == 2);
    CHECK(block_of(7) == 2);
    CHECK(block_of(8) == 3);
    CHECK(block_of(15) == 3);
    CHECK(block_of(16) == 4);
    CHECK(asqlab::block_first(3) == 8);
    CHECK(asqlab::block_last(3) == 15);
    CHECK(block_inrange_size(3, 16) == 8);
    CHECK(block_inrange_size(4, 16) == 1);
    CHECK(block_inrange_size(2, 5) == 2);
    CHECK(block_inrange_size(5, 16) == 0);
}

TEST_CASE("two-family space norm values") {
    auto F = asqlab::make_fkn<Rational>(2, 4, 8);

    CHECK(F.space.norm(rv({{1, 1}, {2, 1}, {3, 1}, {4, 1}})) == Rational(1));
    CHECK(F.space.norm(rv({{1, 2}})) == Rational(1));
    CHECK(F.space.norm(rv({})) == Rational(0));

    // averages may take fewer than the maximum number of terms: the best
    // subset for (3, -1) is the singleton {1}
    auto f = rv({{1, 3}, {2, -1}});
    CHECK(family_sup(F.space.families[0], f, F.m) == Rational(3, 4));
    CHECK(F.space.norm(f) == Rational(3, 2));

    // mixing signs never helps: negatives compete separately
    auto g = rv({{1, 1}, {2, -1}, {3, -1}, {4, -1}, {5, -1}, {6, 1}});
    CHECK(family_sup(F.space.families[0], g, F.m) == Rational(1));
}

TEST_CASE("three-family space norm values") {
    auto X = asqlab::make_xn<Rational>(2, 2, 16);

    CHECK(X.space.norm(CoordVector<Rational>::unit(4)) == Rational(1, 2));
    CHECK(X.space.norm(rv({{4, 2}})) == Rational(1));
    CHECK(X.space.norm(rv({{8, 1}, {9, 1}})) == Rational(1));
    CHECK(X.space.norm(rv({{8, 1}, {9, -1}})) == Rational(1));
    CHECK(X.space.norm(rv({{2, 1}, {3, 1}})) == Rational(1));
    // index 1 sits in no block
    CHECK(X.space.norm(CoordVector<Rational>::unit(1)) == Rational(1, 2));
    // block starting at 16 has a single in-range index, so pairs vanish
    CHECK(X.space.norm(CoordVector<Rational>::unit(16)) == Rational(1, 2));

    auto X4 = asqlab::make_xn<Rational>(2, 4, 32);
    CHECK(X4.space.norm(CoordVector<Rational>::unit(4)) == Rational(1, 2));
    CHECK(X4.space.norm(rv({{4, 1}, {5, 1}, {6, 1}, {7, 1}})) == Rational(1));
}

TEST_CASE("input and configuration errors") {
    auto X = asqlab::make_xn<Rational>(2, 2, 16);
    CHECK_THROWS_AS(X.space.norm(CoordVector<Rational>::unit(17)), asqlab::InputError);
    CHECK_THROWS_AS(asqlab::make_xn<Rational>(1, 2, 16), asqlab::ConfigError);
    CHECK_THROWS_AS(asqlab::make_fkn<Rational>(2, 1, 8), asqlab::ConfigError);
    CHECK_THROWS_AS(asqlab::make_fkn<Rational>(2, 4, 3), asqlab::ConfigError);

    // averages wider than the truncation are a configuration error
    auto Xsmall = asqlab::make_xn<Rational>(2, 4, 4);
    CHECK_THROWS_AS(Xsmall.space.norm(CoordVector<Rational>::unit(2)), asqlab::ConfigError);
}

TEST_CASE("enumeration oracle agrees with the closed form") {
    auto X = asqlab::make_xn<Rational>(2, 2, 16);
    auto F = asqlab::make_fkn<Rational>(2, 4, 8);

    for (auto f : {rv({{4, 2}}), rv({{8, 1}, {9, 1}}), rv({{1, 3}, {2, -1}}),
                   rv({{2, Rational(1, 3)}, {3, Rational(-4, 3)}, {11, 2}})}) {
        CHECK(X.space.oracle_norm(f) == X.space.norm(f));
    }

    asqlab::Rng rng(20260814);
    for (int t = 0; t < 100; ++t) {
        auto f = asqlab::random_vector<Rational>(rng, 16, 10);
        CHECK(X.space.oracle_norm(f) == X.space.norm(f));
        auto g = asqlab::random_vector<Rational>(rng, 8, 8);
        CHECK(F.space.oracle_norm(g) == F.space.norm(g));
    }
}

TEST_CASE("enumeration cap refuses oversized oracle runs") {
    auto X = asqlab::make_xn<Rational>(2, 2, 16);
    auto f = rv({{2, 1}, {3, 1}, {4, 1}, {5, 1}, {6, 1}});
    CHECK_THROWS_AS(X.space.oracle_norm(f, 5.0), asqlab::CapError);
    CHECK(X.space.enumeration_size(f) > 5.0);
}

TEST_CASE("norm axioms hold exactly in rational mode") {
    auto X = asqlab::make_xn<Rational>(2, 2, 32);
    asqlab::Rng rng(7);
    for (int t = 0; t < 200; ++t) {
        auto f = asqlab::random_vector<Rational>(rng, 32, 12);
        auto g = asqlab::random_vector<Rational>(rng, 32, 12);
        auto nf = X.space.norm(f);
        auto ng = X.space.norm(g);
        CHECK(X.space.norm(f + g) <= nf + ng);
        CHECK(X.space.norm(f.scaled(Rational(-3, 7))) == Rational(3, 7) * nf);
        CHECK(X.space.norm(f.scaled(Rational(-1))) == nf);
        if (f.empty()) CHECK(nf == Rational(0));
        if (!f.empty()) CHECK(Rational(0) < nf);
    }
}

TEST_CASE("max-norm sandwich for both space kinds") {
    asqlab::Rng rng(11);
    auto F = asqlab::make_fkn<Rational>(3, 9, 18);
    auto X = asqlab::make_xn<Rational>(2, 4, 32);
    for (int t = 0; t < 200; ++t) {
        auto f = asqlab::random_vector<Rational>(rng, 18, 12);
        auto nf = F.space.norm(f);
        CHECK(f.linf() * Rational(1, 3) <= nf);
        CHECK(nf <= f.linf());

        auto g = asqlab::random_vector<Rational>(rng, 32, 12);
        auto ng = X.space.norm(g);
        CHECK(g.linf() * Rational(1, 2) <= ng);
        CHECK(ng <= Rational(2) * g.linf());
    }
}

TEST_CASE("prefix norms are nondecreasing and reach the full norm") {
    auto X = asqlab::make_xn<Rational>(2, 2, 16);
    auto rep = asqlab::monotone_check(X.space, rv({{4, 2}}));
    CHECK(rep.nondecreasing);
    CHECK(rep.attained);
    CHECK(rep.values[2] == Rational(0));
    CHECK(rep.values[3] == Rational(1));
    CHECK(rep.values[15] == Rational(1));

    asqlab::Rng rng(13);
    for (int t = 0; t < 50; ++t) {
        auto f = asqlab::random_vector<Rational>(rng, 16, 10);
        auto r = asqlab::monotone_check(X.space, f);
        CHECK(r.nondecreasing);
        CHECK(r.attained);
    }
}

TEST_CASE("functional membership checks") {
    using asqlab::SparseFunctional;
    auto X = asqlab::make_xn<Rational>(2, 2, 16);
    const auto& A = X.space.families[0];
    const auto& B = X.space.families[1];
    const auto& C = X.space.families[2];

    SparseFunctional<Rational> avg{{{4, Rational(1, 2)}, {8, Rational(1, 2)}}};
    CHECK(in_family(A, avg, 16));
    CHECK_FALSE(in_family(B, avg, 16));
    CHECK_FALSE(in_family(C, avg, 16)); // 4 and 8 sit in different blocks

    SparseFunctional<Rational> single{{{3, Rational(-1, 2)}}};
    CHECK(in_family(B, single, 16));
    CHECK(in_family(A, single, 16));

    SparseFunctional<Rational> pair{{{8, Rational(1, 2)}, {9, Rational(-1, 2)}}};
    CHECK(in_family(C, pair, 16));
    CHECK_FALSE(in_family(A, pair, 16)); // mixed signs are not an average

    SparseFunctional<Rational> wide{
        {{1, Rational(1, 2)}, {2, Rational(1, 2)}, {3, Rational(1, 2)}, {4, Rational(1, 2)},
         {5, Rational(1, 2)}}};
    CHECK_FALSE(in_family(A, wide, 16)); // five terms exceed the width 2*2
    SparseFunctional<Rational> out{{{17, Rational(1, 2)}}};
    CHECK_FALSE(in_family(B, out, 16));
}
