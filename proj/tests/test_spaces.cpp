#include "doctest.h"

#include "asqlab/rng.hpp"
#include "asqlab/spaces.hpp"

using asqlab::CoordVector;
using asqlab::Rational;
using asqlab::SumVector;

TEST_CASE("space constructors reject out-of-range parameters") {
    CHECK_THROWS_AS(asqlab::make_fkn<Rational>(4, 3, 8), asqlab::ConfigError);  // k > n
    CHECK_THROWS_AS(asqlab::make_xn<Rational>(1, 2, 16), asqlab::ConfigError);  // k < 2
    CHECK_NOTHROW(asqlab::make_xn<Rational>(2, 3, 16)); // odd N is a valid space; only
                                                        // c0 sums require even widths
}

TEST_CASE("c0 sum norm is the max of component norms") {
    auto sum = asqlab::make_c0_sum<Rational>({asqlab::make_xn<Rational>(2, 2, 16),
                                              asqlab::make_xn<Rational>(2, 4, 32)});
    SumVector<Rational> x;
    x.set_part(0, CoordVector<Rational>::unit(4, Rational(2)));
    x.set_part(1, CoordVector<Rational>::unit(4));
    CHECK(asqlab::sum_norm(sum, x) == Rational(1));

    SumVector<Rational> y;
    y.set_part(1, CoordVector<Rational>::unit(4));
    CHECK(asqlab::sum_norm(sum, y) == Rational(1, 2));
    CHECK(asqlab::sum_norm(sum, SumVector<Rational>{}) == Rational(0));

    SumVector<Rational> z;
    z.set_part(2, CoordVector<Rational>::unit(1));
    CHECK_THROWS_AS(asqlab::sum_norm(sum, z), asqlab::InputError);

    CHECK_THROWS_AS(asqlab::make_c0_sum<Rational>({asqlab::make_xn<Rational>(2, 3, 16)}),
                    asqlab::ConfigError);
    CHECK_THROWS_AS(asqlab::make_c0_sum<Rational>({}), asqlab::ConfigError);

    auto d = x - y;
    CHECK(d.part(0).get(4) == Rational(2));
    CHECK(d.part(1).empty());
    CHECK(x.scaled(Rational(1, 2)).part(0).get(4) == Rational(1));
}

TEST_CASE("pair norm takes the max across two spaces") {
    auto F = asqlab::make_fkn<Rational>(2, 4, 8);
    auto X = asqlab::make_xn<Rational>(2, 2, 16);
    auto w = CoordVector<Rational>::unit(1, Rational(2));
    auto x = CoordVector<Rational>::unit(4);
    CHECK(asqlab::pair_norm(F.space, X.space, w, x) == Rational(1));
}

TEST_CASE("interleave pairing walks shells in the documented order") {
    using asqlab::interleave_index;
    CHECK(interleave_index(1, 1) == 1);
    CHECK(interleave_index(2, 1) == 2);
    CHECK(interleave_index(1, 2) == 3);
    CHECK(interleave_index(2, 2) == 4);
    CHECK(interleave_index(3, 1) == 5);
    CHECK(interleave_index(3, 2) == 6);
    CHECK(interleave_index(1, 3) == 7);
    CHECK(interleave_index(2, 3) == 8);
    CHECK(interleave_index(3, 3) == 9);
    CHECK(interleave_index(4, 1) == 10);

    // bijection on a big rectangle
    std::vector<bool> hit(50 * 50 + 1, false);
    for (std::int64_t t = 1; t <= 50; ++t) {
        for (std::int64_t j = 1; j <= 50; ++j) {
            auto pos = interleave_index(t, j);
            REQUIRE(pos >= 1);
            REQUIRE(pos <= 50 * 50);
            REQUIRE_FALSE(hit[static_cast<std::size_t>(pos)]);
            hit[static_cast<std::size_t>(pos)] = true;
            auto [tt, jj] = asqlab::deinterleave_index(pos);
            CHECK(tt == t);
            CHECK(jj == j);
        }
    }
}

TEST_CASE("interleave round-trips sum vectors and preserves coordinates") {
    SumVector<Rational> x;
    x.set_part(0, CoordVector<Rational>::unit(2, Rational(5)));
    x.set_part(2, CoordVector<Rational>::unit(1, Rational(-1, 3)));
    auto flat = asqlab::interleave(x);
    CHECK(flat.get(3) == Rational(5));           // (1,2) -> 3
    CHECK(flat.get(5) == Rational(-1, 3));       // (3,1) -> 5
    CHECK(flat.support_size() == 2);
    auto back = asqlab::deinterleave(flat);
    CHECK(back.part(0).get(2) == Rational(5));
    CHECK(back.part(2).get(1) == Rational(-1, 3));
}

TEST_CASE("interleaved max norm sandwiches the sum norm") {
    auto sum = asqlab::make_c0_sum<Rational>({asqlab::make_xn<Rational>(2, 2, 64),
                                              asqlab::make_xn<Rational>(2, 4, 64),
                                              asqlab::make_xn<Rational>(2, 6, 64)});
    asqlab::Rng rng(99);
    for (int t = 0; t < 100; ++t) {
        SumVector<Rational> x;
        for (std::size_t c = 0; c < 3; ++c)
            x.set_part(c, asqlab::random_vector<Rational>(rng, 64, 8));
        auto flat = asqlab::interleave(x);
        auto nx = asqlab::sum_norm(sum, x);
        CHECK(flat.linf() * Rational(1, 2) <= nx);
        CHECK(nx <= Rational(2) * flat.linf());
    }
}

TEST_CASE("rng is deterministic and generators are reproducible") {
    asqlab::Rng a(42);
    asqlab::Rng b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.bits() == b.bits());

    auto c = asqlab::Rng::derive(42, 7);
    auto d = asqlab::Rng::derive(42, 7);
    auto e = asqlab::Rng::derive(42, 8);
    CHECK(c.bits() == d.bits());
    CHECK(c.bits() != e.bits()); // overwhelmingly likely for a decent mix

    asqlab::Rng g1(5);
    asqlab::Rng g2(5);
    auto v1 = asqlab::random_vector<Rational>(g1, 32, 10);
    auto v2 = asqlab::random_vector<Rational>(g2, 32, 10);
    CHECK(v1 == v2);

    asqlab::Rng g3(5);
    for (int i = 0; i < 50; ++i) {
        auto x = g3.uniform_int(-4, 4);
        CHECK(x >= -4);
        CHECK(x <= 4);
    }
}
