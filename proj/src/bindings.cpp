// Python surface (float mode): spaces with closed-form and oracle norms,
// the witness constructions, refutation certificates, minimal-ellipsoid
// bounds, and the modulus searches. Reports come back as plain dicts with
// the same field names the CLI emits.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "asqlab/certificates.hpp"
#include "asqlab/generators.hpp"
#include "asqlab/moduli.hpp"
#include "asqlab/norms.hpp"
#include "asqlab/parallel.hpp"
#include "asqlab/report_json.hpp"
#include "asqlab/witness.hpp"

namespace py = pybind11;
using namespace asqlab;

namespace {

using Pairs = std::vector<std::pair<std::int64_t, double>>;

CoordVector<double> from_pairs(const Pairs& entries) {
    CoordVector<double> v;
    for (const auto& [j, x] : entries) v.set(j, x);
    return v;
}

SumVector<double> from_parts(const std::vector<Pairs>& parts) {
    SumVector<double> x;
    for (std::size_t i = 0; i < parts.size(); ++i) x.set_part(i, from_pairs(parts[i]));
    return x;
}

std::vector<CoordVector<double>> from_pairs_list(const std::vector<Pairs>& fs) {
    std::vector<CoordVector<double>> out;
    out.reserve(fs.size());
    for (const auto& f : fs) out.push_back(from_pairs(f));
    return out;
}

Pairs to_pairs(const CoordVector<double>& f) {
    return {f.entries().begin(), f.entries().end()};
}

py::object to_py(const json& j) {
    switch (j.type()) {
    case json::value_t::null: return py::none();
    case json::value_t::boolean: return py::bool_(j.get<bool>());
    case json::value_t::number_integer: return py::int_(j.get<std::int64_t>());
    case json::value_t::number_unsigned: return py::int_(j.get<std::uint64_t>());
    case json::value_t::number_float: return py::float_(j.get<double>());
    case json::value_t::string: return py::str(j.get<std::string>());
    case json::value_t::array: {
        py::list out;
        for (const auto& v : j) out.append(to_py(v));
        return out;
    }
    case json::value_t::object: {
        py::dict out;
        for (const auto& [k, v] : j.items()) out[py::str(k)] = to_py(v);
        return out;
    }
    default: return py::none();
    }
}

SearchConfig search_config(int starts, int iters, std::uint64_t seed, double grid_res,
                           int jobs) {
    SearchConfig cfg;
    cfg.starts = starts;
    cfg.iters = iters;
    cfg.seed = seed;
    cfg.grid_res = grid_res;
    cfg.jobs = jobs > 0 ? jobs : default_jobs();
    return cfg;
}

} // namespace

PYBIND11_MODULE(_asqlab, m) {
    m.doc() = "almost-square witness laboratory (float mode)";

    py::register_exception<ConfigError>(m, "SpaceConfigError", PyExc_ValueError);
    py::register_exception<InputError>(m, "VectorInputError", PyExc_ValueError);
    py::register_exception<TruncationError>(m, "TruncationTooSmall", PyExc_ValueError);
    py::register_exception<CapError>(m, "EnumerationCapExceeded", PyExc_ValueError);

    py::class_<FknSpace<double>>(m, "Fkn")
        .def(py::init([](std::int64_t k, std::int64_t n, std::int64_t m_) {
                 return make_fkn<double>(k, n, m_);
             }),
             py::arg("k"), py::arg("n"), py::arg("m"))
        .def_readonly("k", &FknSpace<double>::k)
        .def_readonly("n", &FknSpace<double>::n)
        .def_property_readonly("m", [](const FknSpace<double>& F) { return F.space.m; })
        .def("norm",
             [](const FknSpace<double>& F, const Pairs& f) { return F.space.norm(from_pairs(f)); })
        .def("oracle_norm",
             [](const FknSpace<double>& F, const Pairs& f, double cap) {
                 return F.space.oracle_norm(from_pairs(f), cap);
             },
             py::arg("f"), py::arg("cap") = kDefaultEnumCap)
        .def("monotone_check", [](const FknSpace<double>& F, const Pairs& f) {
            return to_py(monotone_json(monotone_check(F.space, from_pairs(f))));
        });

    py::class_<XnSpace<double>>(m, "Xn")
        .def(py::init([](std::int64_t k, std::int64_t N, std::int64_t m_) {
                 return make_xn<double>(k, N, m_);
             }),
             py::arg("k"), py::arg("N"), py::arg("m"))
        .def_readonly("k", &XnSpace<double>::k)
        .def_readonly("N", &XnSpace<double>::N)
        .def_readonly("m", &XnSpace<double>::m)
        .def("norm",
             [](const XnSpace<double>& X, const Pairs& f) { return X.space.norm(from_pairs(f)); })
        .def("oracle_norm",
             [](const XnSpace<double>& X, const Pairs& f, double cap) {
                 return X.space.oracle_norm(from_pairs(f), cap);
             },
             py::arg("f"), py::arg("cap") = kDefaultEnumCap)
        .def("monotone_check", [](const XnSpace<double>& X, const Pairs& f) {
            return to_py(monotone_json(monotone_check(X.space, from_pairs(f))));
        });

    py::class_<C0Sum<double>>(m, "C0Sum")
        .def(py::init([](std::int64_t k, const std::vector<std::int64_t>& widths,
                         std::int64_t m_) {
                 std::vector<XnSpace<double>> comps;
                 comps.reserve(widths.size());
                 for (std::int64_t N : widths) comps.push_back(make_xn<double>(k, N, m_));
                 return make_c0_sum(std::move(comps));
             }),
             py::arg("k"), py::arg("components"), py::arg("m"))
        .def_property_readonly("components",
                               [](const C0Sum<double>& s) {
                                   std::vector<std::int64_t> out;
                                   for (const auto& c : s.comps) out.push_back(c.N);
                                   return out;
                               })
        .def("norm", [](const C0Sum<double>& s, const std::vector<Pairs>& parts) {
            return sum_norm(s, from_parts(parts));
        });

    // ----------------------------------------------------------- witnesses
    m.def("lemma22", [](const FknSpace<double>& F, const Pairs& f) {
        return to_py(witness_json(lemma22_witness(F, from_pairs(f))));
    });
    m.def("remark23", [](const FknSpace<double>& F, const std::vector<Pairs>& fs) {
        return to_py(witness_json(remark23_witness(F, from_pairs_list(fs))));
    });
    m.def("lemma33_pair", [](const XnSpace<double>& X, const std::vector<Pairs>& fs,
                             double eps) {
        return to_py(block_pair_json(lemma33_block_pair(X, from_pairs_list(fs), eps)));
    });
    m.def("lemma34", [](const XnSpace<double>& X, const std::vector<Pairs>& fs) {
        return to_py(witness_json(lemma34_witness(X, from_pairs_list(fs))));
    });
    m.def("thm35", [](const C0Sum<double>& s, const std::vector<std::vector<Pairs>>& xs,
                      double eps) {
        std::vector<SumVector<double>> pts;
        pts.reserve(xs.size());
        for (const auto& x : xs) pts.push_back(from_parts(x));
        return to_py(sum_witness_json(thm35_witness(s, pts, eps)));
    });
    m.def("transfer", [](const FknSpace<double>& L, const XnSpace<double>& R,
                         const std::vector<Pairs>& ws, const std::vector<Pairs>& xs) {
        return to_py(pair_witness_json(
            transfer_witness(L.space, from_pairs_list(ws), R, from_pairs_list(xs))));
    });

    // --------------------------------------------------------- refutations
    m.def("counterexample", [](const XnSpace<double>& X) {
        return to_pairs(build_counterexample(X));
    });
    m.def("refute_unit_h", [](const XnSpace<double>& X, const Pairs& h, double eps) {
        return to_py(certificate_json(refute_unit_h(X, from_pairs(h), eps)));
    });
    m.def(
        "refute_sweep",
        [](const XnSpace<double>& X, int starts, int iters, std::uint64_t seed, int jobs) {
            return to_py(
                sweep_json(refute_lasq_sweep(X, search_config(starts, iters, seed, 0.0, jobs))));
        },
        py::arg("space"), py::arg("starts") = 20, py::arg("iters") = 200, py::arg("seed") = 1,
        py::arg("jobs") = 0);

    // ------------------------------------------------- ellipsoid machinery
    m.def(
        "mvee",
        [](const std::vector<std::vector<double>>& points, double tol, int max_iter) {
            return to_py(ellipsoid_json(mvee(points, tol, max_iter)));
        },
        py::arg("points"), py::arg("tol") = 1e-7, py::arg("max_iter") = 100000);
    m.def(
        "john_check",
        [](const std::vector<std::vector<double>>& verts, int n, long samples,
           std::uint64_t seed, double tol) {
            auto E = mvee(verts);
            json j = john_json(john_sandwich_check(verts, E, n, samples, seed, tol));
            j["ellipsoid"] = ellipsoid_json(E);
            j["contact"] = contact_json(contact_point(verts, E, tol));
            return to_py(j);
        },
        py::arg("vertices"), py::arg("n"), py::arg("samples") = 1000, py::arg("seed") = 1,
        py::arg("tol") = 1e-6);
    m.def(
        "prop21",
        [](const std::vector<std::vector<double>>& verts, int n, long samples,
           std::uint64_t seed, double grid_res) {
            Prop21Config cfg;
            cfg.samples = samples;
            cfg.seed = seed;
            cfg.grid_res = grid_res;
            return to_py(prop21_json(prop21_certificate(verts, n, cfg)));
        },
        py::arg("vertices"), py::arg("n"), py::arg("samples") = 10000, py::arg("seed") = 1,
        py::arg("grid_res") = 0.0);
    m.def(
        "prop21_sweep",
        [](int dim, int polytopes, long samples, std::uint64_t seed, int jobs) {
            return to_py(prop21_sweep_json(
                prop21_sweep(dim, polytopes, samples, seed, jobs > 0 ? jobs : default_jobs()),
                false));
        },
        py::arg("dim"), py::arg("polytopes"), py::arg("samples") = 10000, py::arg("seed") = 1,
        py::arg("jobs") = 0);

    // ------------------------------------------------------------- moduli
    m.def(
        "lasq_modulus",
        [](const XnSpace<double>& X, const Pairs& x, int starts, int iters, std::uint64_t seed,
           double grid_res, int jobs) {
            PolyNormD nrm(X.space, X.k);
            auto est = lasq_modulus(nrm, nrm.to_dense(from_pairs(x)),
                                    search_config(starts, iters, seed, grid_res, jobs));
            return to_py(estimate_json(est));
        },
        py::arg("space"), py::arg("x"), py::arg("starts") = 20, py::arg("iters") = 200,
        py::arg("seed") = 1, py::arg("grid_res") = 0.0, py::arg("jobs") = 0);
    m.def(
        "asq_modulus",
        [](const XnSpace<double>& X, const std::vector<Pairs>& xs, int starts, int iters,
           std::uint64_t seed, double grid_res, int jobs) {
            PolyNormD nrm(X.space, X.k);
            std::vector<std::vector<double>> pts;
            pts.reserve(xs.size());
            for (const auto& x : xs) pts.push_back(nrm.to_dense(from_pairs(x)));
            auto est =
                asq_modulus(nrm, pts, search_config(starts, iters, seed, grid_res, jobs));
            return to_py(estimate_json(est));
        },
        py::arg("space"), py::arg("xs"), py::arg("starts") = 20, py::arg("iters") = 200,
        py::arg("seed") = 1, py::arg("grid_res") = 0.0, py::arg("jobs") = 0);

    // ------------------------------------------------------------ utility
    m.def(
        "random_unit",
        [](const XnSpace<double>& X, std::uint64_t seed, std::int64_t index_hi,
           std::int64_t support) {
            Rng rng = Rng::derive(seed, 0);
            return to_pairs(random_unit(X.space, rng, index_hi > 0 ? index_hi : X.m, support));
        },
        py::arg("space"), py::arg("seed"), py::arg("index_hi") = 0, py::arg("support") = 8);
}
