#include "doctest.h"

#include <cmath>

#include "asqlab/moduli.hpp"

using asqlab::Matrix;

namespace {

std::vector<std::vector<double>> square_vertices() {
    return {{1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
}

std::vector<std::vector<double>> cross_vertices() {
    return {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
}

} // namespace

TEST_CASE("dense linear algebra helpers") {
    Matrix a(2, 2);
    a.at(0, 0) = 4;
    a.at(0, 1) = 1;
    a.at(1, 0) = 1;
    a.at(1, 1) = 3;
    auto x = asqlab::solve(a, {1.0, 2.0});
    CHECK(std::abs(x[0] - 1.0 / 11.0) < 1e-12);
    CHECK(std::abs(x[1] - 7.0 / 11.0) < 1e-12);
    CHECK(std::abs(asqlab::determinant(a) - 11.0) < 1e-12);

    Matrix inv = asqlab::inverse(a);
    Matrix prod = a * inv;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) CHECK(std::abs(prod.at(i, j) - (i == j ? 1.0 : 0.0)) < 1e-12);

    auto e = asqlab::jacobi_eigensym(a);
    // eigenvalues of [[4,1],[1,3]]: (7 +- sqrt(5))/2
    CHECK(std::abs(e.values[0] - (7.0 - std::sqrt(5.0)) / 2.0) < 1e-10);
    CHECK(std::abs(e.values[1] - (7.0 + std::sqrt(5.0)) / 2.0) < 1e-10);

    Matrix r = asqlab::sym_inv_sqrt(a);
    Matrix rr = r * a * r; // Q^{-1/2} Q Q^{-1/2} = I
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) CHECK(std::abs(rr.at(i, j) - (i == j ? 1.0 : 0.0)) < 1e-10);

    Matrix sing(2, 2);
    sing.at(0, 0) = 1;
    sing.at(0, 1) = 2;
    sing.at(1, 0) = 2;
    sing.at(1, 1) = 4;
    CHECK_THROWS_AS(asqlab::inverse(sing), asqlab::InputError);
}

TEST_CASE("minimal ellipsoids of the hand shapes") {
    auto sq = asqlab::mvee(square_vertices());
    CHECK(sq.converged);
    CHECK(sq.gap <= 1e-7);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            CHECK(std::abs(sq.Q.at(i, j) - (i == j ? 0.5 : 0.0)) < 1e-6);

    auto cr = asqlab::mvee(cross_vertices());
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            CHECK(std::abs(cr.Q.at(i, j) - (i == j ? 1.0 : 0.0)) < 1e-6);

    // balanced points on the radius-2 sphere: minimal ball of radius 2
    double r = 2.0, s = r / std::sqrt(2.0);
    auto sp = asqlab::mvee({{r, 0}, {0, r}, {s, s}, {s, -s}});
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            CHECK(std::abs(sp.Q.at(i, j) - (i == j ? 0.25 : 0.0)) < 1e-6);

    // every returned ellipsoid touches its farthest point: shrinking fails
    double worst = 0.0;
    for (const auto& v : square_vertices()) {
        std::vector<double> qv = sq.Q.mul(v);
        worst = std::max(worst, asqlab::dot(v, qv));
    }
    CHECK(worst >= 1.0 - 1e-12);

    CHECK_THROWS_AS(asqlab::mvee({{1.0, 2.0}, {2.0, 4.0}, {-1.0, -2.0}}), asqlab::InputError);
}

TEST_CASE("facet enumeration and gauges") {
    auto sq_normals = asqlab::facet_normals(square_vertices());
    REQUIRE(sq_normals.size() == 2); // x = +-1 and y = +-1, one rep each
    auto sq_gauge = asqlab::facet_gauge(square_vertices());
    CHECK(sq_gauge.eval({0.5, 2.0}) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(sq_gauge.eval({-0.25, 0.0}) == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(sq_gauge.linf_lower() == doctest::Approx(1.0));

    auto cr_gauge = asqlab::facet_gauge(cross_vertices());
    CHECK(cr_gauge.eval({0.5, 2.0}) == doctest::Approx(2.5).epsilon(1e-12)); // l1 gauge
    for (const auto& v : cross_vertices())
        CHECK(cr_gauge.eval(v) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("contact point and the sandwich") {
    auto sq = asqlab::mvee(square_vertices());
    auto contact = asqlab::contact_point(square_vertices(), sq);
    CHECK(contact.j_norm == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(contact.gauge == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::abs(contact.point[0]) == doctest::Approx(1.0));
    CHECK(std::abs(contact.point[1]) == doctest::Approx(1.0));

    auto rep = asqlab::john_sandwich_check(square_vertices(), sq, 2, 500, 11);
    CHECK(rep.outer_pass);
    CHECK(rep.inner_pass);
    CHECK(rep.pass);
    CHECK(rep.worst_facet == doctest::Approx(1.0).epsilon(1e-6));

    // inflating the ellipsoid by 2 breaks the inner inclusion only
    asqlab::Ellipsoid big = sq;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) big.Q.at(i, j) /= 4.0;
    auto bad = asqlab::john_sandwich_check(square_vertices(), big, 2, 500, 11);
    CHECK(bad.outer_pass);
    CHECK_FALSE(bad.inner_pass);
    CHECK_FALSE(bad.pass);
}

TEST_CASE("modulus search on the sup-norm square") {
    asqlab::LinfNorm linf(2);
    asqlab::SearchConfig cfg;
    cfg.starts = 8;
    cfg.seed = 3;
    auto est = asqlab::lasq_modulus(linf, {1.0, 1.0}, cfg);
    CHECK(est.value_upper == doctest::Approx(2.0).epsilon(1e-9));
    REQUIRE(est.value_lower.has_value());
    CHECK(est.grid_min == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(*est.value_lower == doctest::Approx(2.0 - est.mesh).epsilon(1e-12));
    CHECK(*est.value_lower > 1.99);
    CHECK(est.starts.size() == 8);

    CHECK_THROWS_AS(asqlab::lasq_modulus(linf, {0.5, 0.5}, cfg), asqlab::InputError);
}

TEST_CASE("modulus search on the Euclidean circle") {
    asqlab::EllipsoidNorm eu(Matrix::identity(2));
    asqlab::SearchConfig cfg;
    cfg.starts = 8;
    cfg.seed = 5;
    auto est = asqlab::lasq_modulus(eu, {1.0, 0.0}, cfg);
    CHECK(std::abs(est.value_upper - std::sqrt(2.0)) < 1e-3);
    REQUIRE(est.value_lower.has_value());
    CHECK(*est.value_lower > std::sqrt(2.0) - 5e-3);
    CHECK(*est.value_lower <= est.value_upper + 1e-12);
}

TEST_CASE("modulus search in the polyhedral space") {
    auto X = asqlab::make_xn<double>(2, 2, 16);
    asqlab::PolyNormD nrm(X.space, X.k);
    asqlab::CoordVector<double> x;
    x.set(4, 1.0);
    x.set(5, -1.0);
    REQUIRE(nrm.space().norm(x) == 1.0);
    asqlab::CoordVector<double> w;
    w.set(8, 1.0);
    w.set(9, -1.0);

    asqlab::SearchConfig cfg;
    cfg.starts = 10;
    cfg.seed = 9;
    cfg.init_candidates = {nrm.to_dense(w)};
    auto est = asqlab::lasq_modulus(nrm, nrm.to_dense(x), cfg);
    CHECK(est.value_upper <= 1.5 + 1e-9); // the seeded witness already gives 3/2
    CHECK_FALSE(est.value_lower.has_value());

    // objective is symmetric in x -> -x, so the pair finds the same value
    auto xm = x.scaled(-1.0);
    auto est_pair = asqlab::asq_modulus(nrm, {nrm.to_dense(x), nrm.to_dense(xm)}, cfg);
    CHECK(est_pair.value_upper == est.value_upper);
}

TEST_CASE("contact certificate on the square and random solids") {
    asqlab::Prop21Config cfg;
    cfg.samples = 2000;
    cfg.seed = 21;
    cfg.grid_res = 1e-3;
    auto rep = asqlab::prop21_certificate(square_vertices(), 2, cfg);
    CHECK(rep.bound == doctest::Approx(std::sqrt(1.5)).epsilon(1e-12));
    CHECK(rep.grid_used);
    CHECK(rep.grid_min == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(rep.worst_value == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(rep.violations == 0);
    CHECK(rep.pass);

    auto sweep = asqlab::prop21_sweep(3, 5, 1000, 77, 2);
    CHECK(sweep.pass);
    CHECK(sweep.violations == 0);
    CHECK(sweep.min_value >= std::sqrt(4.0 / 3.0) - 1e-9);
    CHECK(sweep.reports.size() == 5);
}

TEST_CASE("sweep refutes every candidate at the counterexample") {
    auto X = asqlab::make_xn<double>(2, 2, 16);
    asqlab::SearchConfig cfg;
    cfg.starts = 40;
    cfg.seed = 31;
    auto rep = asqlab::refute_lasq_sweep(X, cfg);
    CHECK(rep.threshold == doctest::Approx(7.0 / 6.0).epsilon(1e-12));
    CHECK(rep.best_found >= rep.threshold - 1e-9);
    CHECK(rep.best_found <= 1.5 + 1e-9);
    CHECK(rep.search_ok);
    CHECK(rep.candidates_total == 41); // 40 random + the seeded witness
    CHECK(rep.candidates_refuted == 41);
    CHECK(rep.refutations_ok);
    CHECK_FALSE(rep.critical);
    CHECK(rep.pass);
    CHECK(rep.certificates.size() == 41);

    // rerunning with the same seed reproduces the result bit for bit
    auto rep2 = asqlab::refute_lasq_sweep(X, cfg);
    CHECK(rep2.best_found == rep.best_found);
    CHECK(rep2.estimate.argmin_h == rep.estimate.argmin_h);

    // and a parallel run merges to the identical report
    asqlab::SearchConfig par = cfg;
    par.jobs = 4;
    auto rep4 = asqlab::refute_lasq_sweep(X, par);
    CHECK(rep4.best_found == rep.best_found);
    CHECK(rep4.estimate.argmin_h == rep.estimate.argmin_h);

    // control point: a direction the space treats kindly, search only
    asqlab::CoordVector<double> good;
    good.set(4, 1.0);
    good.set(5, -1.0);
    auto ctrl = asqlab::refute_lasq_sweep(X, cfg, good);
    CHECK(ctrl.control_mode);
    CHECK(ctrl.best_found <= 1.5 + 1e-9);
    CHECK(ctrl.pass);
    CHECK(ctrl.certificates.empty());
}
