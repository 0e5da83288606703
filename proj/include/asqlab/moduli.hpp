#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "asqlab/certificates.hpp"
#include "asqlab/norms.hpp"
#include "asqlab/rng.hpp"

namespace asqlab {

// ---------------------------------------------------------------- geometry

struct Ellipsoid {
    Matrix Q;          // J = {x : x'Qx <= 1}
    double gap = 0.0;  // max_i v_i'Qv_i - 1 at the final weights
    int iterations = 0;
    bool converged = false;
};

// Minimum-volume origin-symmetric ellipsoid enclosing the given points
// (the set is symmetrized internally). First-order weight ascent with away
// steps; converged means the duality gap dropped below tol.
Ellipsoid mvee(const std::vector<std::vector<double>>& points, double tol = 1e-7,
               int max_iter = 100000);

// All facet functionals a with a.v = 1 on some spanning vertex subset and
// a.w <= 1+tol for every vertex w; one representative per +-a pair.
std::vector<std::vector<double>> facet_normals(const std::vector<std::vector<double>>& vertices,
                                               double tol = 1e-9);

// Gauge of conv(+-vertices) as a dense norm.
FacetNorm facet_gauge(const std::vector<std::vector<double>>& vertices, double tol = 1e-9);

struct ContactReport {
    std::vector<double> point; // a vertex on both unit spheres
    double j_norm = 0.0;       // its ellipsoid norm, >= 1 - tol
    double gauge = 0.0;        // its polytope gauge, == 1 for a vertex
};

ContactReport contact_point(const std::vector<std::vector<double>>& vertices, const Ellipsoid& E,
                            double tol = 1e-6);

struct JohnReport {
    bool outer_pass = false;   // every vertex inside J
    double worst_vertex = 0.0; // max vertex ellipsoid norm
    std::vector<double> worst_vertex_vec;
    bool inner_pass = false;   // n^{-1/2} J inside the ball
    double worst_inner = 0.0;  // max gauge over scaled boundary points
    std::vector<double> worst_inner_vec;
    double worst_facet = 0.0;  // exact: max over facets of n^{-1/2}|a|_{Q^{-1}}
    bool pass = false;
};

// Checks the sandwich n^{-1/2} J <= ball <= J: vertices against the outer
// inclusion, facets (exact) plus sampled boundary points against the inner.
JohnReport john_sandwich_check(const std::vector<std::vector<double>>& vertices,
                               const Ellipsoid& E, int n, long samples = 1000,
                               std::uint64_t seed = 1, double tol = 1e-6);

// 2*dim*dim unit-sphere points, symmetrized: the vertex list of a random
// symmetric polytope.
std::vector<std::vector<double>> random_symmetric_polytope(int dim, Rng& rng);

// ------------------------------------------------------------ sphere search

struct SearchConfig {
    int starts = 20;
    int iters = 200;
    std::uint64_t seed = 1;
    double grid_res = 1e-3; // grid sweep in ambient dims <= 3; 0 disables
    int jobs = 1;
    // deterministic extra starts (already near-unit directions)
    std::vector<std::vector<double>> init_candidates;
};

struct StartResult {
    int start = 0;
    double value = 0.0;
    std::vector<double> h;
    long evals = 0;
};

struct ModulusEstimate {
    double value_upper = 0.0;            // best max over inputs of max|x+-h|
    std::optional<double> value_lower;   // grid_min - mesh, dims <= 3 only
    std::vector<double> argmin_h;
    double grid_min = 0.0;
    double mesh = 0.0;
    std::vector<StartResult> starts;
};

// Multi-start pattern search for inf over unit h of max_i max||x_i +- h||.
// Every x_i must be a unit vector of the norm.
ModulusEstimate asq_modulus(const DenseNorm& nrm, const std::vector<std::vector<double>>& xs,
                            const SearchConfig& cfg);

ModulusEstimate lasq_modulus(const DenseNorm& nrm, const std::vector<double>& x,
                             const SearchConfig& cfg);

// ------------------------------------------------------- uniform lower bound

struct Prop21Config {
    long samples = 10000;
    std::uint64_t seed = 1;
    double grid_res = 0.0; // per-polytope grid check in dims <= 3; 0 disables
    double tol = 1e-9;
};

struct Prop21Report {
    Ellipsoid ell;
    std::vector<double> contact;
    double bound = 0.0;       // sqrt(1 + 1/n)
    double worst_value = 0.0; // min over tested h of max gauge(x +- h)
    std::vector<double> worst_h;
    long violations = 0;
    bool grid_used = false;
    double grid_min = 0.0;
    bool pass = false;
};

// At the contact point of the polytope with its minimal ellipsoid, every
// unit perturbation h must push the pair max||x +- h|| to at least
// sqrt(1 + 1/n); sampled (and optionally grid) h directions confirm it.
Prop21Report prop21_certificate(const std::vector<std::vector<double>>& vertices, int n,
                                const Prop21Config& cfg);

struct Prop21SweepReport {
    int dim = 0;
    int polytopes = 0;
    long samples = 0;
    double bound = 0.0;
    double min_value = 0.0; // over all polytopes
    long violations = 0;
    bool pass = false;
    std::vector<Prop21Report> reports;
};

Prop21SweepReport prop21_sweep(int dim, int polytopes, long samples, std::uint64_t seed,
                               int jobs = 1);

// ------------------------------------------------------------- LASQ sweep

struct SweepReport {
    double best_found = 0.0;
    double threshold = 0.0; // 1 + 1/(3N)
    bool search_ok = false; // best_found cleared the threshold
    bool control_mode = false;
    double eps = 0.0;       // refutation level, 1/(4N)
    int candidates_total = 0;
    int candidates_refuted = 0;
    bool refutations_ok = false;
    bool critical = false;  // a candidate beat the threshold AND resisted refutation
    ModulusEstimate estimate;
    std::vector<RefutationCertificate<double>> certificates;
    bool pass = false;
};

// Multi-start search at the counterexample vector (or at an override point,
// in which case only the search runs): the best value must stay above
// 1 + 1/(3N), and every per-start final direction must admit an explicit
// refutation certificate at eps = 1/(4N).
SweepReport refute_lasq_sweep(const XnSpace<double>& X, const SearchConfig& cfg,
                              const std::optional<CoordVector<double>>& at = {});

} // namespace asqlab
