#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>

#include "json.hpp"

#include "asqlab/certificates.hpp"
#include "asqlab/moduli.hpp"
#include "asqlab/poly_norm.hpp"
#include "asqlab/witness.hpp"

namespace asqlab {

// Reports keep their field order on the wire, so builders insert keys in the
// order they should print.
using json = nlohmann::ordered_json;

inline json jval(double v) { return json(v); }
inline json jval(const Rational& v) { return json(v.str()); }

template <class S>
json coord_json(const CoordVector<S>& v) {
    json a = json::array();
    for (const auto& [j, c] : v.entries()) a.push_back(json::array({j, jval(c)}));
    return a;
}

template <class S>
json sum_json(const SumVector<S>& x) {
    json a = json::array();
    for (const auto& part : x.parts) a.push_back(coord_json(part));
    return a;
}

template <class S>
json functional_json(const SparseFunctional<S>& phi) {
    json a = json::array();
    for (const auto& [j, c] : phi.coeffs) a.push_back(json::array({j, jval(c)}));
    return a;
}

inline json dense_json(const std::vector<double>& v) {
    json a = json::array();
    for (double c : v) a.push_back(c);
    return a;
}

inline json matrix_json(const Matrix& M) {
    json rows = json::array();
    for (int i = 0; i < M.rows; ++i) {
        json r = json::array();
        for (int j = 0; j < M.cols; ++j) r.push_back(M.at(i, j));
        rows.push_back(std::move(r));
    }
    return rows;
}

inline const char* verdict_str(bool pass) { return pass ? "pass" : "fail"; }

// ------------------------------------------------------------ witness layer

template <class S>
json per_input_json(const std::vector<S>& values) {
    json a = json::array();
    for (std::size_t i = 0; i < values.size(); ++i)
        a.push_back(json::array({i, jval(values[i])}));
    return a;
}

template <class S>
json witness_json(const WitnessReport<S>& rep, json params = json::object()) {
    json j;
    j["lemma"] = rep.lemma;
    j["params"] = std::move(params);
    j["h"] = coord_json(rep.h);
    j["h_norm"] = jval(rep.h_norm);
    j["per_input"] = per_input_json(rep.per_input);
    j["bound"] = jval(rep.bound);
    j["verdict"] = verdict_str(rep.pass);
    return j;
}

inline json block_pair_json(const BlockPairResult& res) {
    json j;
    j["block"] = res.block;
    j["l"] = res.l;
    j["r"] = res.r;
    j["first_clean_block"] = res.first_clean_block;
    j["cells_per_axis"] = res.cells_per_axis;
    return j;
}

template <class S>
json sum_witness_json(const SumWitnessReport<S>& rep, json params = json::object()) {
    json j;
    j["lemma"] = rep.lemma;
    j["params"] = std::move(params);
    j["component"] = rep.comp_pos;
    j["component_width"] = rep.M;
    j["h"] = sum_json(rep.h);
    j["h_norm"] = jval(rep.h_norm);
    j["per_input"] = per_input_json(rep.per_input);
    j["bound"] = jval(rep.bound);
    j["eps"] = jval(rep.eps);
    j["verdict"] = verdict_str(rep.pass);
    return j;
}

template <class S>
json pair_witness_json(const PairWitnessReport<S>& rep, json params = json::object()) {
    json j;
    j["lemma"] = "transfer";
    j["params"] = std::move(params);
    j["right"] = witness_json(rep.right);
    j["per_input"] = per_input_json(rep.per_input);
    j["bound"] = jval(rep.bound);
    j["max_identity"] = rep.max_identity;
    j["verdict"] = verdict_str(rep.pass);
    return j;
}

template <class S>
json sequence_json(const SequenceReport<S>& rep, json params = json::object()) {
    json j;
    j["lemma"] = "lemma43";
    j["params"] = std::move(params);
    json steps = json::array();
    for (const auto& s : rep.steps) steps.push_back(sum_witness_json(s));
    j["steps"] = std::move(steps);
    j["verdict"] = verdict_str(rep.pass);
    return j;
}

template <class S>
json tau_json(const TauReport<S>& rep) {
    json j;
    json vals = json::array();
    for (const auto& v : rep.values) vals.push_back(jval(v));
    j["values"] = std::move(vals);
    j["tau"] = jval(rep.tau);
    j["tail_variation"] = jval(rep.tail_variation);
    j["x_norm"] = jval(rep.x_norm);
    j["target"] = jval(rep.target);
    j["density_gap"] = jval(rep.density_gap);
    j["deviation"] = jval(rep.deviation);
    return j;
}

template <class S>
json monotone_json(const MonotoneReport<S>& rep) {
    json j;
    json vals = json::array();
    for (const auto& v : rep.values) vals.push_back(jval(v));
    j["values"] = std::move(vals);
    j["nondecreasing"] = rep.nondecreasing;
    j["attained"] = rep.attained;
    return j;
}

template <class S>
json certificate_json(const RefutationCertificate<S>& cert) {
    json j;
    j["case"] = cert.case_tag;
    j["family"] = cert.family;
    j["derived_from_peak"] = cert.derived_from_peak;
    j["functional"] = functional_json(cert.phi);
    j["sign"] = cert.sign;
    j["achieved"] = jval(cert.achieved);
    j["threshold"] = jval(scalar_traits<S>::from_int(1) + cert.eps);
    j["display_bound"] = jval(cert.display_bound);
    j["eps"] = jval(cert.eps);
    j["margin"] = jval(cert.margin);
    return j;
}

// ------------------------------------------------------------- moduli layer

inline json ellipsoid_json(const Ellipsoid& E) {
    json j;
    j["Q"] = matrix_json(E.Q);
    j["gap"] = E.gap;
    j["iterations"] = E.iterations;
    j["converged"] = E.converged;
    return j;
}

inline json contact_json(const ContactReport& rep) {
    json j;
    j["point"] = dense_json(rep.point);
    j["j_norm"] = rep.j_norm;
    j["gauge"] = rep.gauge;
    return j;
}

inline json john_json(const JohnReport& rep) {
    json j;
    j["outer_pass"] = rep.outer_pass;
    j["worst_vertex"] = rep.worst_vertex;
    j["worst_vertex_vec"] = dense_json(rep.worst_vertex_vec);
    j["inner_pass"] = rep.inner_pass;
    j["worst_inner"] = rep.worst_inner;
    j["worst_inner_vec"] = dense_json(rep.worst_inner_vec);
    j["worst_facet"] = rep.worst_facet;
    j["verdict"] = verdict_str(rep.pass);
    return j;
}

inline json start_json(const StartResult& s) {
    json j;
    j["start"] = s.start;
    j["value"] = s.value;
    j["h"] = dense_json(s.h);
    j["evals"] = s.evals;
    return j;
}

inline json estimate_json(const ModulusEstimate& est, bool with_starts = true) {
    json j;
    j["value_upper"] = est.value_upper;
    j["value_lower"] = est.value_lower ? json(*est.value_lower) : json(nullptr);
    j["argmin_h"] = dense_json(est.argmin_h);
    j["grid_min"] = est.value_lower ? json(est.grid_min) : json(nullptr);
    j["mesh"] = est.value_lower ? json(est.mesh) : json(nullptr);
    if (with_starts) {
        json starts = json::array();
        for (const auto& s : est.starts) starts.push_back(start_json(s));
        j["starts"] = std::move(starts);
    }
    return j;
}

inline json prop21_json(const Prop21Report& rep, bool with_ellipsoid = true) {
    json j;
    j["bound"] = rep.bound;
    j["worst_value"] = rep.worst_value;
    j["worst_h"] = dense_json(rep.worst_h);
    j["violations"] = rep.violations;
    j["grid_used"] = rep.grid_used;
    j["grid_min"] = rep.grid_used ? json(rep.grid_min) : json(nullptr);
    j["contact"] = dense_json(rep.contact);
    if (with_ellipsoid) j["ellipsoid"] = ellipsoid_json(rep.ell);
    j["verdict"] = verdict_str(rep.pass);
    return j;
}

inline json prop21_sweep_json(const Prop21SweepReport& rep, bool with_reports = true) {
    json j;
    j["dim"] = rep.dim;
    j["polytopes"] = rep.polytopes;
    j["samples"] = rep.samples;
    j["bound"] = rep.bound;
    j["min_value"] = rep.min_value;
    j["violations"] = rep.violations;
    if (with_reports) {
        json rs = json::array();
        for (const auto& r : rep.reports) rs.push_back(prop21_json(r, false));
        j["reports"] = std::move(rs);
    }
    j["verdict"] = verdict_str(rep.pass);
    return j;
}

inline json sweep_json(const SweepReport& rep, bool with_starts = false) {
    json j;
    j["best_found"] = rep.best_found;
    j["threshold"] = rep.threshold;
    j["search_ok"] = rep.search_ok;
    j["control_mode"] = rep.control_mode;
    j["eps"] = rep.eps;
    j["candidates_total"] = rep.candidates_total;
    j["candidates_refuted"] = rep.candidates_refuted;
    j["refutations_ok"] = rep.refutations_ok;
    j["critical"] = rep.critical;
    j["estimate"] = estimate_json(rep.estimate, with_starts);
    json certs = json::array();
    for (const auto& c : rep.certificates) certs.push_back(certificate_json(c));
    j["certificates"] = std::move(certs);
    j["verdict"] = verdict_str(rep.pass);
    return j;
}

// ---------------------------------------------------------------- envelope

inline json report_envelope(const std::string& command, const std::string& mode,
                            std::optional<std::uint64_t> seed, bool pass, json report) {
    json j;
    j["schema"] = 1;
    j["command"] = command;
    j["mode"] = mode;
    j["seed"] = seed ? json(*seed) : json(nullptr);
    j["pass"] = pass;
    j["report"] = std::move(report);
    return j;
}

// ------------------------------------------------------------------- dump

namespace detail {

inline std::string fmt17(double v) {
    if (!std::isfinite(v)) return "null";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void newline_indent(std::string& out, int indent, int depth) {
    if (indent <= 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent) * depth, ' ');
}

inline void dump_rec(const json& j, std::string& out, int indent, int depth) {
    switch (j.type()) {
        case json::value_t::null:
            out += "null";
            break;
        case json::value_t::boolean:
            out += j.get<bool>() ? "true" : "false";
            break;
        case json::value_t::number_integer:
            out += std::to_string(j.get<std::int64_t>());
            break;
        case json::value_t::number_unsigned:
            out += std::to_string(j.get<std::uint64_t>());
            break;
        case json::value_t::number_float:
            out += fmt17(j.get<double>());
            break;
        case json::value_t::string:
            out += nlohmann::json(j.get<std::string>()).dump();
            break;
        case json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                break;
            }
            out += '[';
            bool first = true;
            for (const auto& item : j) {
                if (!first) out += ',';
                first = false;
                newline_indent(out, indent, depth + 1);
                dump_rec(item, out, indent, depth + 1);
            }
            newline_indent(out, indent, depth);
            out += ']';
            break;
        }
        case json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                break;
            }
            out += '{';
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ',';
                first = false;
                newline_indent(out, indent, depth + 1);
                out += nlohmann::json(it.key()).dump();
                out += indent > 0 ? ": " : ":";
                dump_rec(it.value(), out, indent, depth + 1);
            }
            newline_indent(out, indent, depth);
            out += '}';
            break;
        }
        default:
            throw InternalError("json dump: unsupported value type");
    }
}

} // namespace detail

// Serializer used for every report: floats carry 17 significant digits so a
// reader recovers the exact double, and key order follows insertion order.
inline std::string dump_report(const json& j, int indent = 2) {
    std::string out;
    detail::dump_rec(j, out, indent, 0);
    if (indent > 0) out += '\n';
    return out;
}

} // namespace asqlab
