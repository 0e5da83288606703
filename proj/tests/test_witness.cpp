#include "doctest.h"

#include "asqlab/generators.hpp"
#include "asqlab/witness.hpp"

using asqlab::CoordVector;
using asqlab::Rational;
using asqlab::SumVector;

namespace {

CoordVector<Rational> rv(std::initializer_list<std::pair<std::int64_t, Rational>> entries) {
    CoordVector<Rational> v;
    for (const auto& [i, x] : entries) v.set(i, x);
    return v;
}

} // namespace

TEST_CASE("single-vector witness: hand instances") {
    auto F = asqlab::make_fkn<Rational>(2, 4, 8);

    auto rep = asqlab::lemma22_witness(F, rv({{1, 2}}));
    CHECK(rep.pass);
    CHECK(rep.h == CoordVector<Rational>::unit(2, Rational(2)));
    CHECK(rep.h_norm == Rational(1));
    CHECK(rep.per_input[0] == Rational(1)); // exactly 1, not just within bound

    CoordVector<Rational> ones;
    for (std::int64_t j = 1; j <= 8; ++j) ones.set(j, Rational(1));
    auto rep2 = asqlab::lemma22_witness(F, ones);
    CHECK(rep2.pass);
    CHECK(rep2.h == CoordVector<Rational>::unit(1, Rational(2)));
    CHECK(rep2.per_input[0] == Rational(3, 2)); // meets the bound exactly
    CHECK(rep2.bound == Rational(3, 2));

    // negative-majority inputs use the other sign class
    CoordVector<Rational> negs;
    for (std::int64_t j = 1; j <= 8; ++j) negs.set(j, Rational(-1));
    auto rep3 = asqlab::lemma22_witness(F, negs);
    CHECK(rep3.pass);
    CHECK(rep3.per_input[0] == Rational(3, 2));

    CHECK_THROWS_AS(asqlab::lemma22_witness(F, rv({{1, 4}})), asqlab::InputError);
    CHECK_THROWS_AS(asqlab::lemma22_witness(asqlab::make_fkn<Rational>(2, 4, 6), rv({{1, 1}})),
                    asqlab::ConfigError);
}

TEST_CASE("single-vector witness: random unit inputs stay within the bound") {
    auto F24 = asqlab::make_fkn<Rational>(2, 4, 8);
    auto F39 = asqlab::make_fkn<Rational>(3, 9, 18);
    asqlab::Rng rng(101);
    for (int t = 0; t < 200; ++t) {
        auto f = asqlab::random_unit(F24.space, rng, 8, 8);
        auto rep = asqlab::lemma22_witness(F24, f);
        CHECK(rep.pass);
        CHECK(rep.h_norm == Rational(1));
        CHECK(rep.per_input[0] <= Rational(3, 2));

        auto g = asqlab::random_unit(F39.space, rng, 18, 18);
        auto rep9 = asqlab::lemma22_witness(F39, g);
        CHECK(rep9.pass);
        CHECK(rep9.per_input[0] <= Rational(4, 3));
    }
}

TEST_CASE("multi-vector witness shares one direction") {
    auto F = asqlab::make_fkn<Rational>(2, 4, 32);
    asqlab::Rng rng(55);
    std::vector<CoordVector<Rational>> fs;
    for (int i = 0; i < 5; ++i) fs.push_back(asqlab::random_unit(F.space, rng, 32, 10));
    auto rep = asqlab::remark23_witness(F, fs);
    CHECK(rep.pass);
    CHECK(rep.h_norm == Rational(1));
    CHECK(rep.per_input.size() == 5);
    CHECK(rep.worst() <= Rational(3, 2));

    // wide spaces are fine, but k*k > n is not
    CHECK_THROWS_AS(asqlab::remark23_witness(asqlab::make_fkn<Rational>(3, 4, 8), fs),
                    asqlab::ConfigError);

    // every index bad for some input: needs a bigger truncation
    auto F8 = asqlab::make_fkn<Rational>(2, 4, 8);
    std::vector<CoordVector<Rational>> blockers;
    for (int i = 0; i < 4; ++i)
        blockers.push_back(rv({{2 * i + 1, 2}, {2 * i + 2, 2}}));
    try {
        asqlab::remark23_witness(F8, blockers);
        FAIL("expected TruncationError");
    } catch (const asqlab::TruncationError& e) {
        CHECK(e.required_m == 25); // 2K(n-1)+1 with K=4, n=4
    }
}

TEST_CASE("block pair search: documented instances") {
    auto X = asqlab::make_xn<Rational>(2, 2, 16);

    auto res = asqlab::lemma33_block_pair(X, {rv({{4, 2}})}, Rational(1, 2));
    CHECK(res.first_clean_block == 3);
    CHECK(res.block == 3);
    CHECK(res.l == 8);
    CHECK(res.r == 9);

    auto trivial = asqlab::lemma33_block_pair(X, {}, Rational(1, 2));
    CHECK(trivial.block == 1);
    CHECK(trivial.l == 2);
    CHECK(trivial.r == 3);

    CHECK_THROWS_AS(asqlab::lemma33_block_pair(X, {}, Rational(0)), asqlab::ConfigError);
}

TEST_CASE("block pair search: truncation estimate when nothing collides") {
    auto X = asqlab::make_xn<Rational>(2, 2, 16);
    CoordVector<Rational> f;
    std::int64_t c = 1;
    for (std::int64_t j = 2; j <= 15; ++j) f.set(j, Rational(c++, 40)); // distinct small values
    CHECK(X.space.norm(f) <= Rational(1));
    try {
        asqlab::lemma33_block_pair(X, {f}, Rational(1, 100));
        FAIL("expected TruncationError");
    } catch (const asqlab::TruncationError& e) {
        CHECK(e.required_m == 256); // 101 cells force a collision in block 7
    }
}

TEST_CASE("block pair witness: hand instance is exact") {
    auto X = asqlab::make_xn<Rational>(2, 2, 16);
    auto rep = asqlab::lemma34_witness(X, {rv({{4, 2}})});
    CHECK(rep.pass);
    CHECK(rep.h == rv({{8, 1}, {9, -1}}));
    CHECK(rep.h_norm == Rational(1));
    CHECK(rep.bound == Rational(3, 2));
    CHECK(rep.per_input[0] == Rational(3, 2)); // meets the bound exactly
}

TEST_CASE("block pair witness: random multi-input runs, exact arithmetic") {
    auto X2 = asqlab::make_xn<Rational>(2, 2, 64);
    auto X4 = asqlab::make_xn<Rational>(2, 4, 64);
    asqlab::Rng rng(7001);
    for (int t = 0; t < 50; ++t) {
        std::vector<CoordVector<Rational>> fs;
        for (int i = 0; i < 3; ++i) fs.push_back(asqlab::random_unit(X2.space, rng, 8, 6));
        auto rep = asqlab::lemma34_witness(X2, fs);
        CHECK(rep.pass);
        CHECK(rep.h_norm == Rational(1));
        CHECK(rep.worst() <= Rational(3, 2));

        std::vector<CoordVector<Rational>> gs;
        for (int i = 0; i < 2; ++i) gs.push_back(asqlab::random_unit(X4.space, rng, 8, 6));
        auto rep4 = asqlab::lemma34_witness(X4, gs);
        CHECK(rep4.pass);
        CHECK(rep4.worst() <= Rational(5, 4));
    }
}

namespace {

asqlab::C0Sum<Rational> demo_sum() {
    return asqlab::make_c0_sum<Rational>({asqlab::make_xn<Rational>(2, 2, 64),
                                          asqlab::make_xn<Rational>(2, 4, 64),
                                          asqlab::make_xn<Rational>(2, 6, 64)});
}

} // namespace

TEST_CASE("sum witness picks the smallest wide enough component") {
    auto sum = demo_sum();
    asqlab::Rng rng(31);
    std::vector<SumVector<Rational>> xs;
    for (int i = 0; i < 3; ++i) xs.push_back(asqlab::random_unit_sum(sum, rng, 8, 5));

    auto rep = asqlab::thm35_witness(sum, xs, Rational(1, 4));
    CHECK(rep.pass);
    CHECK(rep.M == 6); // 4 * (1/4) = 1 is not strictly above 1
    CHECK(rep.comp_pos == 2);
    CHECK(rep.h_norm == Rational(1));
    CHECK(rep.bound == Rational(7, 6));
    CHECK(rep.worst() <= Rational(7, 6));
    CHECK(rep.bound < Rational(5, 4));

    auto loose = asqlab::thm35_witness(sum, xs, Rational(3, 5));
    CHECK(loose.M == 2);

    try {
        asqlab::thm35_witness(sum, xs, Rational(1, 20));
        FAIL("expected ConfigError");
    } catch (const asqlab::ConfigError& e) {
        CHECK(std::string(e.what()).find("22") != std::string::npos);
    }
}

TEST_CASE("pair transfer reuses the right-part witness") {
    auto F = asqlab::make_fkn<Rational>(2, 4, 8);
    auto X = asqlab::make_xn<Rational>(2, 2, 64);
    asqlab::Rng rng(77);
    std::vector<CoordVector<Rational>> ws;
    std::vector<CoordVector<Rational>> xs;
    for (int i = 0; i < 10; ++i) {
        auto w = asqlab::random_unit(F.space, rng, 8, 8);
        // leave some left parts strictly inside the ball
        if (i % 2 == 0) w = w.scaled(Rational(1, 2));
        ws.push_back(w);
        xs.push_back(asqlab::random_unit(X.space, rng, 8, 6));
    }
    auto rep = asqlab::transfer_witness(F.space, ws, X, xs);
    CHECK(rep.pass);
    CHECK(rep.max_identity);
    CHECK(rep.right.h_norm == Rational(1));
    CHECK(rep.worst() <= Rational(3, 2));
    CHECK(rep.per_input.size() == 10);

    std::vector<CoordVector<Rational>> short_ws(ws.begin(), ws.begin() + 3);
    CHECK_THROWS_AS(asqlab::transfer_witness(F.space, short_ws, X, xs), asqlab::InputError);
}

TEST_CASE("witness sequence pinches norms from both sides") {
    auto sum = demo_sum();
    asqlab::Rng rng(123);
    std::vector<SumVector<Rational>> pts;
    for (int i = 0; i < 2; ++i) pts.push_back(asqlab::random_unit_sum(sum, rng, 8, 5));

    std::vector<Rational> eps_seq{Rational(1, 2), Rational(1, 3), Rational(1, 5)};
    auto seq = asqlab::lemma43_sequence(sum, pts, eps_seq);
    CHECK(seq.pass);
    CHECK(seq.steps.size() == 3);
    CHECK(seq.steps[0].M == 4);
    CHECK(seq.steps[2].M == 6);

    std::vector<Rational> bad{Rational(1, 2), Rational(1, 2)};
    CHECK_THROWS_AS(asqlab::lemma43_sequence(sum, pts, bad), asqlab::ConfigError);
}

TEST_CASE("limit type of the sequence matches max(norm, 1) on tested rays") {
    auto sum = demo_sum();
    asqlab::Rng rng(321);
    std::vector<SumVector<Rational>> pts;
    for (int i = 0; i < 3; ++i) pts.push_back(asqlab::random_unit_sum(sum, rng, 8, 5));
    std::vector<Rational> eps_seq{Rational(1, 2), Rational(1, 3), Rational(1, 5)};
    auto seq = asqlab::lemma43_sequence(sum, pts, eps_seq);
    REQUIRE(seq.pass);

    auto zero = asqlab::type_tau(sum, SumVector<Rational>{}, seq, pts);
    CHECK(zero.target == Rational(1));
    CHECK(zero.tau == Rational(1)); // tau(0) = ||h_last|| = 1
    CHECK(zero.density_gap == Rational(0));

    for (const auto& p : pts) {
        auto at = asqlab::type_tau(sum, p, seq, pts);
        CHECK(at.target == Rational(1));
        CHECK(at.density_gap == Rational(0));
        CHECK(at.deviation <= Rational(1, 5));

        auto doubled = asqlab::type_tau(sum, p.scaled(Rational(2)), seq, pts);
        CHECK(doubled.target == Rational(2));
        CHECK(doubled.density_gap == Rational(0));
        CHECK(doubled.deviation <= Rational(1, 5));
    }
}
