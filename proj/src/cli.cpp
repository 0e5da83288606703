#include "asqlab/cli.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "asqlab/certificates.hpp"
#include "asqlab/generators.hpp"
#include "asqlab/moduli.hpp"
#include "asqlab/norms.hpp"
#include "asqlab/parallel.hpp"
#include "asqlab/report_json.hpp"
#include "asqlab/spec_json.hpp"
#include "asqlab/witness.hpp"

namespace asqlab {

namespace {

// ------------------------------------------------------------ scalar text

std::string scalar_text(double v) { return detail::fmt17(v); }
std::string scalar_text(const Rational& v) { return v.str(); }

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::int64_t parse_int64(const std::string& raw) {
    std::string t = trim(raw);
    std::size_t pos = 0;
    std::int64_t v = 0;
    try {
        v = std::stoll(t, &pos);
    } catch (const std::exception&) {
        throw InputError("cannot read integer from '" + raw + "'");
    }
    if (pos != t.size()) throw InputError("cannot read integer from '" + raw + "'");
    return v;
}

// Accepts "p/q", plain integers, and short decimals; rational mode keeps
// every form exact.
template <class S>
S parse_scalar(const std::string& raw) {
    std::string t = trim(raw);
    if (t.empty()) throw InputError("scalar: empty text");
    auto slash = t.find('/');
    if (slash != std::string::npos) {
        std::int64_t p = parse_int64(t.substr(0, slash));
        std::int64_t q = parse_int64(t.substr(slash + 1));
        if (q == 0) throw InputError("scalar: zero denominator in '" + raw + "'");
        if constexpr (scalar_traits<S>::exact)
            return S(p, q);
        else
            return static_cast<double>(p) / static_cast<double>(q);
    }
    if constexpr (scalar_traits<S>::exact) {
        auto dot = t.find('.');
        if (dot == std::string::npos) return S(parse_int64(t), 1);
        std::string frac = t.substr(dot + 1);
        if (frac.empty() || frac.size() > 15)
            throw InputError("scalar: cannot read '" + raw + "' exactly");
        std::int64_t den = 1;
        for (char c : frac) {
            if (!std::isdigit(static_cast<unsigned char>(c)))
                throw InputError("scalar: cannot read '" + raw + "' exactly");
            den *= 10;
        }
        std::string ip = t.substr(0, dot);
        bool neg = !ip.empty() && ip[0] == '-';
        std::int64_t intpart = (ip.empty() || ip == "-" || ip == "+") ? 0 : parse_int64(ip);
        std::int64_t fracnum = parse_int64(frac);
        std::int64_t num = intpart * den + (neg ? -fracnum : fracnum);
        return S(num, den);
    } else {
        std::size_t pos = 0;
        double v = 0.0;
        try {
            v = std::stod(t, &pos);
        } catch (const std::exception&) {
            throw InputError("scalar: cannot read '" + raw + "'");
        }
        if (pos != t.size()) throw InputError("scalar: cannot read '" + raw + "'");
        return v;
    }
}

// ---------------------------------------------------- vector exchange (CSV)

template <class S>
std::string vector_csv(const CoordVector<S>& v) {
    std::string out;
    for (const auto& [j, c] : v.entries()) {
        out += std::to_string(j);
        out += ',';
        out += scalar_text(c);
        out += '\n';
    }
    return out;
}

template <class S>
json sum_csv_json(const SumVector<S>& x) {
    json a = json::array();
    for (const auto& part : x.parts) a.push_back(vector_csv(part));
    return a;
}

template <class S>
CoordVector<S> parse_vector_text(std::string text) {
    for (char& ch : text)
        if (ch == ';') ch = '\n';
    CoordVector<S> v;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty()) continue;
        auto comma = line.find(',');
        if (comma == std::string::npos)
            throw InputError("vector csv: line '" + line + "' must read index,value");
        v.set(parse_int64(line.substr(0, comma)), parse_scalar<S>(line.substr(comma + 1)));
    }
    return v;
}

// Inline text (with ';' standing in for newlines) or a path to a CSV file.
template <class S>
CoordVector<S> parse_vector_arg(const std::string& arg) {
    std::error_code ec;
    if (std::filesystem::is_regular_file(arg, ec)) {
        std::ifstream f(arg);
        if (!f) throw InputError("vector csv: cannot open " + arg);
        std::stringstream ss;
        ss << f.rdbuf();
        return parse_vector_text<S>(ss.str());
    }
    return parse_vector_text<S>(arg);
}

// ------------------------------------------------------------------ output

void deliver(const std::string& out_path, const std::string& text, std::ostream& os) {
    if (out_path.empty()) {
        os << text;
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw ConfigError("cannot open output path " + out_path);
    f << text;
}

std::string csv_text(const std::string& header, const std::vector<std::string>& rows) {
    std::string text = header;
    text += '\n';
    for (const auto& r : rows) {
        text += r;
        text += '\n';
    }
    return text;
}

// --------------------------------------------------------------- mode gate

template <class Fn>
int dispatch_mode(const std::string& mode, std::int64_t top_m, Fn&& fn) {
    if (mode == "float") return fn(double{});
    if (mode == "rational") {
        if (top_m > 64)
            throw ConfigError("rational mode rejects runs with truncation m > 64 (got m = " +
                              std::to_string(top_m) + ")");
        return fn(Rational{});
    }
    throw ConfigError("mode must be float or rational");
}

void require_float_mode(const std::string& mode, const char* command) {
    if (mode != "float")
        throw ConfigError(std::string(command) + " runs in float mode only");
}

// ------------------------------------------------------------ trial engine

struct TrialOut {
    bool pass = true;
    double rank = 0.0;
    json detail;
};

struct TrialSummary {
    long trials = 0;
    long failures = 0;
    long worst_trial = -1;
    double worst_rank = 0.0;
    json worst_detail;
    long first_failure = -1;
    json first_failure_detail;
};

// Trials fan out over the worker pool; the per-index slots make the merge
// (and therefore the report bytes) independent of the schedule.
template <class Fn>
TrialSummary run_trials(long trials, int jobs, Fn&& per_trial) {
    if (trials < 1) throw ConfigError("trials must be >= 1");
    std::vector<TrialOut> outs(static_cast<std::size_t>(trials));
    parallel_for(static_cast<std::size_t>(trials), jobs,
                 [&](std::size_t i) { outs[i] = per_trial(static_cast<long>(i)); });
    TrialSummary s;
    s.trials = trials;
    for (long i = 0; i < trials; ++i) {
        const auto& o = outs[static_cast<std::size_t>(i)];
        if (!o.pass) {
            ++s.failures;
            if (s.first_failure < 0) {
                s.first_failure = i;
                s.first_failure_detail = o.detail;
            }
        }
        if (s.worst_trial < 0 || o.rank > s.worst_rank) {
            s.worst_trial = i;
            s.worst_rank = o.rank;
            s.worst_detail = o.detail;
        }
    }
    return s;
}

json summary_json(const TrialSummary& s) {
    json j;
    j["trials"] = s.trials;
    j["failures"] = s.failures;
    j["worst_trial"] = s.worst_trial;
    j["worst"] = s.worst_detail;
    j["first_failure"] = s.first_failure < 0 ? json(nullptr) : s.first_failure_detail;
    return j;
}

// ----------------------------------------------------------------- options

struct Opts {
    std::string mode = "float";
    std::uint64_t seed = 0;
    long trials = 100;
    long vectors = 1;
    std::int64_t support = 8;
    int jobs = 0;
    std::string out;
    std::string format = "json";
    double tol = -1.0; // sentinel: commands resolve their own default

    std::int64_t k = 0, n = 0, N = 0, m = 0;
    std::string eps;
    std::vector<std::string> eps_seq;
    std::vector<std::int64_t> components;
    std::string left_spec, right_spec, space_spec;
    std::vector<std::string> points;
    std::string at;
    int starts = 20;
    int iters = 200;
    double grid_res = 0.0;
    int dim = 0;
    int polytopes = 10;
    long samples = 10000;
};

int resolve_jobs(int flag) { return flag > 0 ? flag : default_jobs(); }

double tol_or(const Opts& o, double fallback) { return o.tol >= 0.0 ? o.tol : fallback; }

// Random inputs for block-structured spaces stay in the bottom quarter of
// the truncation so at least two clean blocks remain fully in range.
std::int64_t input_window(std::int64_t m) { return std::max<std::int64_t>(1, m / 4); }

int finish_json(const Opts& o, std::ostream& os, const std::string& command, json params,
                bool pass, json report) {
    json env = report_envelope(command, o.mode, o.seed, pass, std::move(report));
    // params slot right after the seed keeps the envelope self-describing
    json ordered;
    for (auto it = env.begin(); it != env.end(); ++it) {
        ordered[it.key()] = std::move(it.value());
        if (it.key() == "seed") ordered["params"] = std::move(params);
    }
    deliver(o.out, dump_report(ordered), os);
    return pass ? 0 : 1;
}

int finish_csv(const Opts& o, std::ostream& os, const std::string& header,
               const std::vector<std::string>& rows, bool pass) {
    deliver(o.out, csv_text(header, rows), os);
    return pass ? 0 : 1;
}

template <class S>
S linf_of(const CoordVector<S>& f) {
    S m{};
    for (const auto& [j, c] : f.entries()) {
        (void)j;
        m = std::max(m, scalar_traits<S>::abs(c));
    }
    return m;
}

// ------------------------------------------------------------ sandwich cmds

// verify-eq8 (two-family spaces, upper factor 1) and verify-eq9 (three-family
// spaces, upper factor k): (1/k) sup|f| <= ||f|| <= factor * sup|f|.
int cmd_sandwich(const Opts& o, std::ostream& os, bool xn_variant) {
    const std::string command = xn_variant ? "verify-eq9" : "verify-eq8";
    return dispatch_mode(o.mode, o.m, [&](auto tag) {
        using S = decltype(tag);
        PolyNormSpace<S> space =
            xn_variant ? make_xn<S>(o.k, o.N, o.m).space : make_fkn<S>(o.k, o.n, o.m).space;
        const S inv_k = scalar_traits<S>::from_ratio(1, o.k);
        const S factor =
            xn_variant ? scalar_traits<S>::from_int(o.k) : scalar_traits<S>::from_int(1);
        const double tol = tol_or(o, 1e-12);
        std::vector<std::string> rows(static_cast<std::size_t>(o.trials));

        auto summary = run_trials(o.trials, resolve_jobs(o.jobs), [&](long t) {
            Rng rng = Rng::derive(o.seed, static_cast<std::uint64_t>(t));
            auto f = random_vector<S>(rng, o.m, o.support);
            S nrm = space.norm(f);
            S linf = linf_of(f);
            S lower = inv_k * linf;
            S upper = factor * linf;
            TrialOut out;
            out.pass = le_tol(lower, nrm, tol) && le_tol(nrm, upper, tol);
            out.rank = scalar_traits<S>::to_double(nrm);
            out.detail = json{{"trial", t},
                              {"f", coord_json(f)},
                              {"f_csv", vector_csv(f)},
                              {"norm", jval(nrm)},
                              {"sup", jval(linf)},
                              {"lower", jval(lower)},
                              {"upper", jval(upper)},
                              {"verdict", verdict_str(out.pass)}};
            rows[static_cast<std::size_t>(t)] = std::to_string(t) + "," + scalar_text(nrm) + "," +
                                                scalar_text(lower) + "," + scalar_text(upper) +
                                                "," + (out.pass ? "1" : "0");
            return out;
        });

        json params{{"k", o.k},    {"m", o.m},         {"trials", o.trials},
                    {"support", o.support}, {"tol", tol}};
        if (xn_variant)
            params["N"] = o.N;
        else
            params["n"] = o.n;
        bool pass = summary.failures == 0;
        if (o.format == "csv")
            return finish_csv(o, os, "trial,norm,lower,upper,pass", rows, pass);
        return finish_json(o, os, command, std::move(params), pass, summary_json(summary));
    });
}

// ------------------------------------------------------------- witness cmds

template <class S, class F>
json witness_trial_json(long t, const std::vector<CoordVector<S>>& inputs, const F& space,
                        json report) {
    (void)space;
    json in_csv = json::array();
    json in_coords = json::array();
    for (const auto& f : inputs) {
        in_csv.push_back(vector_csv(f));
        in_coords.push_back(coord_json(f));
    }
    return json{{"trial", t},
                {"inputs", std::move(in_coords)},
                {"inputs_csv", std::move(in_csv)},
                {"report", std::move(report)}};
}

int cmd_lemma22(const Opts& o, std::ostream& os) {
    return dispatch_mode(o.mode, o.m, [&](auto tag) {
        using S = decltype(tag);
        auto F = make_fkn<S>(o.k, o.n, o.m);
        if (F.k * F.k > F.n) throw ConfigError("verify-lemma22: needs k*k <= n");
        const double tol = tol_or(o, kDefaultRelTol);
        std::vector<std::string> rows(static_cast<std::size_t>(o.trials));
        json params{{"k", o.k}, {"n", o.n}, {"m", o.m}, {"trials", o.trials},
                    {"support", o.support}, {"tol", tol}};

        auto summary = run_trials(o.trials, resolve_jobs(o.jobs), [&](long t) {
            Rng rng = Rng::derive(o.seed, static_cast<std::uint64_t>(t));
            auto f = random_unit(F.space, rng, o.m, o.support);
            auto rep = lemma22_witness(F, f, tol);
            TrialOut out;
            out.pass = rep.pass;
            out.rank = scalar_traits<S>::to_double(rep.worst());
            out.detail = witness_trial_json(t, std::vector<CoordVector<S>>{f}, F,
                                            witness_json(rep, params));
            rows[static_cast<std::size_t>(t)] = std::to_string(t) + "," +
                                                scalar_text(rep.worst()) + "," +
                                                (rep.pass ? "1" : "0");
            return out;
        });

        bool pass = summary.failures == 0;
        if (o.format == "csv") return finish_csv(o, os, "trial,value,pass", rows, pass);
        return finish_json(o, os, "verify-lemma22", std::move(params), pass,
                           summary_json(summary));
    });
}

int cmd_remark23(const Opts& o, std::ostream& os) {
    return dispatch_mode(o.mode, o.m, [&](auto tag) {
        using S = decltype(tag);
        auto F = make_fkn<S>(o.k, o.n, o.m);
        const double tol = tol_or(o, kDefaultRelTol);
        std::vector<std::string> rows(static_cast<std::size_t>(o.trials));
        json params{{"k", o.k},       {"n", o.n},           {"m", o.m},
                    {"trials", o.trials}, {"vectors", o.vectors}, {"support", o.support},
                    {"tol", tol}};

        auto summary = run_trials(o.trials, resolve_jobs(o.jobs), [&](long t) {
            Rng rng = Rng::derive(o.seed, static_cast<std::uint64_t>(t));
            std::vector<CoordVector<S>> fs;
            for (long i = 0; i < o.vectors; ++i)
                fs.push_back(random_unit(F.space, rng, o.m, o.support));
            auto rep = remark23_witness(F, fs, tol);
            TrialOut out;
            out.pass = rep.pass;
            out.rank = scalar_traits<S>::to_double(rep.worst());
            out.detail = witness_trial_json(t, fs, F, witness_json(rep, params));
            rows[static_cast<std::size_t>(t)] = std::to_string(t) + "," +
                                                scalar_text(rep.worst()) + "," +
                                                (rep.pass ? "1" : "0");
            return out;
        });

        bool pass = summary.failures == 0;
        if (o.format == "csv") return finish_csv(o, os, "trial,value,pass", rows, pass);
        return finish_json(o, os, "verify-remark23", std::move(params), pass,
                           summary_json(summary));
    });
}

int cmd_lemma33(const Opts& o, std::ostream& os) {
    return dispatch_mode(o.mode, o.m, [&](auto tag) {
        using S = decltype(tag);
        auto X = make_xn<S>(o.k, o.N, o.m);
        S eps = parse_scalar<S>(o.eps);
        const double tol = tol_or(o, kDefaultRelTol);
        const std::int64_t win = input_window(o.m);
        std::vector<std::string> rows(static_cast<std::size_t>(o.trials));
        json params{{"k", o.k},       {"N", o.N},           {"m", o.m},
                    {"eps", jval(eps)}, {"trials", o.trials}, {"vectors", o.vectors},
                    {"support", o.support}, {"window", win}};

        auto summary = run_trials(o.trials, resolve_jobs(o.jobs), [&](long t) {
            Rng rng = Rng::derive(o.seed, static_cast<std::uint64_t>(t));
            std::vector<CoordVector<S>> fs;
            for (long i = 0; i < o.vectors; ++i)
                fs.push_back(random_unit(X.space, rng, win, o.support));
            auto pair = lemma33_block_pair(X, fs, eps, tol);
            TrialOut out;
            out.pass = true; // the search validates |f(l) - f(r)| <= eps itself
            out.rank = static_cast<double>(pair.block);
            json in_csv = json::array();
            for (const auto& f : fs) in_csv.push_back(vector_csv(f));
            out.detail = json{{"trial", t},
                              {"inputs_csv", std::move(in_csv)},
                              {"pair", block_pair_json(pair)}};
            rows[static_cast<std::size_t>(t)] = std::to_string(t) + "," +
                                                std::to_string(pair.block) + "," +
                                                std::to_string(pair.l) + "," +
                                                std::to_string(pair.r);
            return out;
        });

        bool pass = summary.failures == 0;
        if (o.format == "csv") return finish_csv(o, os, "trial,block,l,r", rows, pass);
        return finish_json(o, os, "verify-lemma33", std::move(params), pass,
                           summary_json(summary));
    });
}

int cmd_lemma34(const Opts& o, std::ostream& os) {
    return dispatch_mode(o.mode, o.m, [&](auto tag) {
        using S = decltype(tag);
        auto X = make_xn<S>(o.k, o.N, o.m);
        const double tol = tol_or(o, kDefaultRelTol);
        const std::int64_t win = input_window(o.m);
        std::vector<std::string> rows(static_cast<std::size_t>(o.trials));
        json params{{"k", o.k},       {"N", o.N},           {"m", o.m},
                    {"trials", o.trials}, {"vectors", o.vectors}, {"support", o.support},
                    {"window", win},  {"tol", tol}};

        auto summary = run_trials(o.trials, resolve_jobs(o.jobs), [&](long t) {
            Rng rng = Rng::derive(o.seed, static_cast<std::uint64_t>(t));
            std::vector<CoordVector<S>> fs;
            for (long i = 0; i < o.vectors; ++i)
                fs.push_back(random_unit(X.space, rng, win, o.support));
            auto rep = lemma34_witness(X, fs, tol);
            TrialOut out;
            out.pass = rep.pass;
            out.rank = scalar_traits<S>::to_double(rep.worst());
            out.detail = witness_trial_json(t, fs, X, witness_json(rep, params));
            rows[static_cast<std::size_t>(t)] = std::to_string(t) + "," +
                                                scalar_text(rep.worst()) + "," +
                                                (rep.pass ? "1" : "0");
            return out;
        });

        bool pass = summary.failures == 0;
        if (o.format == "csv") return finish_csv(o, os, "trial,value,pass", rows, pass);
        return finish_json(o, os, "verify-lemma34", std::move(params), pass,
                           summary_json(summary));
    });
}

int cmd_thm35(const Opts& o, std::ostream& os) {
    return dispatch_mode(o.mode, o.m, [&](auto tag) {
        using S = decltype(tag);
        SpaceSpec spec;
        spec.kind = "c0_sum";
        spec.k = o.k;
        spec.m = o.m;
        spec.components = o.components;
        auto sum = build_c0_sum<S>(spec);
        S eps = parse_scalar<S>(o.eps);
        const double tol = tol_or(o, kDefaultRelTol);
        const std::int64_t win = input_window(o.m);
        std::vector<std::string> rows(static_cast<std::size_t>(o.trials));
        json params{{"k", o.k},       {"m", o.m},           {"components", o.components},
                    {"eps", jval(eps)}, {"trials", o.trials}, {"vectors", o.vectors},
                    {"support", o.support}, {"window", win}, {"tol", tol}};

        auto summary = run_trials(o.trials, resolve_jobs(o.jobs), [&](long t) {
            Rng rng = Rng::derive(o.seed, static_cast<std::uint64_t>(t));
            std::vector<SumVector<S>> xs;
            for (long i = 0; i < o.vectors; ++i)
                xs.push_back(random_unit_sum(sum, rng, win, o.support));
            auto rep = thm35_witness(sum, xs, eps, tol);
            TrialOut out;
            out.pass = rep.pass;
            out.rank = scalar_traits<S>::to_double(rep.worst());
            json in_csv = json::array();
            for (const auto& x : xs) in_csv.push_back(sum_csv_json(x));
            out.detail = json{{"trial", t},
                              {"inputs_csv", std::move(in_csv)},
                              {"report", sum_witness_json(rep, params)}};
            rows[static_cast<std::size_t>(t)] = std::to_string(t) + "," +
                                                scalar_text(rep.worst()) + "," +
                                                (rep.pass ? "1" : "0");
            return out;
        });

        bool pass = summary.failures == 0;
        if (o.format == "csv") return finish_csv(o, os, "trial,value,pass", rows, pass);
        return finish_json(o, os, "verify-thm35", std::move(params), pass,
                           summary_json(summary));
    });
}

int cmd_transfer(const Opts& o, std::ostream& os) {
    SpaceSpec left = parse_space_spec(o.left_spec);
    SpaceSpec right = parse_space_spec(o.right_spec);
    if (right.kind != "xn") throw ConfigError("verify-transfer: right space must have kind xn");
    if (left.kind == "c0_sum")
        throw ConfigError("verify-transfer: left space must have kind fkn or xn");
    return dispatch_mode(o.mode, std::max(left.m, right.m), [&](auto tag) {
        using S = decltype(tag);
        PolyNormSpace<S> L =
            left.kind == "fkn" ? build_fkn<S>(left).space : build_xn<S>(left).space;
        auto R = build_xn<S>(right);
        const double tol = tol_or(o, kDefaultRelTol);
        const std::int64_t win = input_window(R.m);
        std::vector<std::string> rows(static_cast<std::size_t>(o.trials));
        json params{{"left", o.left_spec},  {"right", o.right_spec}, {"trials", o.trials},
                    {"vectors", o.vectors}, {"support", o.support},  {"tol", tol}};

        auto summary = run_trials(o.trials, resolve_jobs(o.jobs), [&](long t) {
            Rng rng = Rng::derive(o.seed, static_cast<std::uint64_t>(t));
            std::vector<CoordVector<S>> ws, xs;
            for (long i = 0; i < o.vectors; ++i) {
                // left parts stay inside the unit ball; right parts are unit
                S scale = scalar_traits<S>::from_ratio(rng.uniform_int(0, 8), 8);
                ws.push_back(random_unit(L, rng, L.m, o.support).scaled(scale));
                xs.push_back(random_unit(R.space, rng, win, o.support));
            }
            auto rep = transfer_witness(L, ws, R, xs, tol);
            TrialOut out;
            out.pass = rep.pass;
            out.rank = scalar_traits<S>::to_double(rep.worst());
            json w_csv = json::array();
            json x_csv = json::array();
            for (const auto& w : ws) w_csv.push_back(vector_csv(w));
            for (const auto& x : xs) x_csv.push_back(vector_csv(x));
            out.detail = json{{"trial", t},
                              {"left_csv", std::move(w_csv)},
                              {"right_csv", std::move(x_csv)},
                              {"report", pair_witness_json(rep, params)}};
            rows[static_cast<std::size_t>(t)] = std::to_string(t) + "," +
                                                scalar_text(rep.worst()) + "," +
                                                (rep.max_identity ? "1" : "0") + "," +
                                                (rep.pass ? "1" : "0");
            return out;
        });

        bool pass = summary.failures == 0;
        if (o.format == "csv")
            return finish_csv(o, os, "trial,value,max_identity,pass", rows, pass);
        return finish_json(o, os, "verify-transfer", std::move(params), pass,
                           summary_json(summary));
    });
}

// --------------------------------------------------------------- sweep cmds

int cmd_refute_lasq(const Opts& o, std::ostream& os) {
    require_float_mode(o.mode, "refute-lasq");
    auto X = make_xn<double>(o.k, o.N, o.m);
    SearchConfig cfg;
    cfg.starts = o.starts;
    cfg.iters = o.iters;
    cfg.seed = o.seed;
    cfg.grid_res = o.grid_res;
    cfg.jobs = resolve_jobs(o.jobs);
    std::optional<CoordVector<double>> at;
    if (!o.at.empty()) at = parse_vector_arg<double>(o.at);
    auto rep = refute_lasq_sweep(X, cfg, at);

    json params{{"k", o.k},         {"N", o.N},         {"m", o.m},
                {"starts", o.starts}, {"iters", o.iters}, {"grid_res", o.grid_res},
                {"control", !o.at.empty()}};
    if (o.format == "csv") {
        std::vector<std::string> rows;
        rows.reserve(rep.certificates.size());
        for (std::size_t i = 0; i < rep.certificates.size(); ++i) {
            const auto& c = rep.certificates[i];
            rows.push_back(std::to_string(i) + "," + c.case_tag + "," + scalar_text(c.achieved) +
                           "," + scalar_text(1.0 + c.eps) + "," + scalar_text(c.margin));
        }
        return finish_csv(o, os, "candidate,case,achieved,threshold,margin", rows, rep.pass);
    }
    return finish_json(o, os, "refute-lasq", std::move(params), rep.pass, sweep_json(rep));
}

int cmd_mvee_check(const Opts& o, std::ostream& os) {
    require_float_mode(o.mode, "mvee-check");
    const double tol = tol_or(o, 1e-6);
    struct Canned {
        const char* name;
        std::vector<std::vector<double>> verts;
        std::vector<double> q_diag;
    };
    const double r2 = std::sqrt(2.0);
    std::vector<Canned> canned = {
        {"square", {{1.0, 1.0}, {1.0, -1.0}}, {0.5, 0.5}},
        {"cross", {{1.0, 0.0}, {0.0, 1.0}}, {1.0, 1.0}},
        {"sphere4", {{2.0, 0.0}, {0.0, 2.0}, {r2, r2}, {r2, -r2}}, {0.25, 0.25}},
    };

    bool all_pass = true;
    json canned_json = json::array();
    std::vector<std::string> rows;
    for (std::size_t i = 0; i < canned.size(); ++i) {
        const auto& c = canned[i];
        auto E = mvee(c.verts);
        bool q_ok = E.converged;
        for (std::size_t a = 0; a < 2 && q_ok; ++a)
            for (std::size_t b = 0; b < 2 && q_ok; ++b) {
                double want = a == b ? c.q_diag[a] : 0.0;
                if (std::abs(E.Q.at(a, b) - want) > 1e-5) q_ok = false;
            }
        auto john = john_sandwich_check(c.verts, E, 2, o.samples, Rng::mix(o.seed, i), tol);
        auto contact = contact_point(c.verts, E, tol);
        bool ok = q_ok && john.pass;
        all_pass = all_pass && ok;
        canned_json.push_back(json{{"name", c.name},
                                   {"ellipsoid", ellipsoid_json(E)},
                                   {"q_ok", q_ok},
                                   {"john", john_json(john)},
                                   {"contact", contact_json(contact)},
                                   {"verdict", verdict_str(ok)}});
        rows.push_back(std::string(c.name) + "," + detail::fmt17(john.worst_vertex) + "," +
                       detail::fmt17(john.worst_inner) + "," + (ok ? "1" : "0"));
    }

    if (o.dim < 1) throw ConfigError("mvee-check: --dim must be >= 1");
    std::vector<json> random_json(static_cast<std::size_t>(o.polytopes));
    std::vector<char> random_ok(static_cast<std::size_t>(o.polytopes), 0);
    std::vector<std::string> random_rows(static_cast<std::size_t>(o.polytopes));
    parallel_for(static_cast<std::size_t>(o.polytopes), resolve_jobs(o.jobs), [&](std::size_t p) {
        Rng rng = Rng::derive(o.seed, 100 + p);
        auto verts = random_symmetric_polytope(o.dim, rng);
        auto E = mvee(verts);
        auto john =
            john_sandwich_check(verts, E, o.dim, o.samples, Rng::mix(o.seed, 1000 + p), tol);
        bool ok = E.converged && john.pass;
        random_ok[p] = ok ? 1 : 0;
        random_json[p] = json{{"polytope", p},
                              {"gap", E.gap},
                              {"iterations", E.iterations},
                              {"converged", E.converged},
                              {"john", john_json(john)},
                              {"verdict", verdict_str(ok)}};
        random_rows[p] = std::to_string(p) + "," + detail::fmt17(john.worst_vertex) + "," +
                         detail::fmt17(john.worst_inner) + "," + (ok ? "1" : "0");
    });
    json random_arr = json::array();
    for (std::size_t p = 0; p < random_json.size(); ++p) {
        all_pass = all_pass && random_ok[p];
        random_arr.push_back(std::move(random_json[p]));
        rows.push_back(std::move(random_rows[p]));
    }

    json params{{"dim", o.dim}, {"polytopes", o.polytopes}, {"samples", o.samples},
                {"tol", tol}};
    if (o.format == "csv")
        return finish_csv(o, os, "case,worst_vertex,worst_inner,pass", rows, all_pass);
    json report{{"canned", std::move(canned_json)}, {"random", std::move(random_arr)}};
    return finish_json(o, os, "mvee-check", std::move(params), all_pass, std::move(report));
}

int cmd_prop21_sweep(const Opts& o, std::ostream& os) {
    require_float_mode(o.mode, "prop21-sweep");
    auto rep = prop21_sweep(o.dim, o.polytopes, o.samples, o.seed, resolve_jobs(o.jobs));
    json params{{"dim", o.dim}, {"polytopes", o.polytopes}, {"samples", o.samples}};
    if (o.format == "csv") {
        std::vector<std::string> rows;
        rows.reserve(rep.reports.size());
        for (std::size_t p = 0; p < rep.reports.size(); ++p) {
            const auto& r = rep.reports[p];
            rows.push_back(std::to_string(p) + "," + detail::fmt17(r.worst_value) + "," +
                           detail::fmt17(r.bound) + "," + std::to_string(r.violations) + "," +
                           (r.pass ? "1" : "0"));
        }
        return finish_csv(o, os, "polytope,worst_value,bound,violations,pass", rows, rep.pass);
    }
    return finish_json(o, os, "prop21-sweep", std::move(params), rep.pass,
                       prop21_sweep_json(rep));
}

int cmd_moduli(const Opts& o, std::ostream& os) {
    require_float_mode(o.mode, "moduli");
    SpaceSpec sp = parse_space_spec(o.space_spec);
    SearchConfig cfg;
    cfg.starts = o.starts;
    cfg.iters = o.iters;
    cfg.seed = o.seed;
    cfg.grid_res = o.grid_res;
    cfg.jobs = resolve_jobs(o.jobs);

    std::vector<std::vector<double>> pts;
    json points_json = json::array();
    ModulusEstimate est;

    if (sp.kind == "c0_sum") {
        auto sum = build_c0_sum<double>(sp);
        SumNormD nrm(sum);
        if (!o.points.empty()) {
            for (const auto& p : o.points) {
                auto f = parse_vector_arg<double>(p); // concatenated-slot indices
                std::vector<double> dense(static_cast<std::size_t>(nrm.dim()), 0.0);
                for (const auto& [j, v] : f.entries()) {
                    if (j > nrm.dim())
                        throw InputError("moduli: point index past the concatenated layout");
                    dense[static_cast<std::size_t>(j - 1)] = v;
                }
                pts.push_back(std::move(dense));
            }
        } else {
            Rng rng = Rng::derive(o.seed, 9000);
            std::vector<SumVector<double>> xs;
            for (long i = 0; i < o.vectors; ++i)
                xs.push_back(random_unit_sum(sum, rng, input_window(sp.m), o.support));
            for (const auto& x : xs) pts.push_back(nrm.to_dense(x));
            // seed the search with the constructive witness direction
            std::int64_t max_n = 0;
            for (const auto& c : sum.comps) max_n = std::max(max_n, c.N);
            try {
                auto wit = thm35_witness(sum, xs, 1.5 / static_cast<double>(max_n));
                cfg.init_candidates.push_back(nrm.to_dense(wit.h));
            } catch (const Error&) {
            }
        }
        for (const auto& p : pts) points_json.push_back(dense_json(p));
        est = pts.size() == 1 ? lasq_modulus(nrm, pts[0], cfg) : asq_modulus(nrm, pts, cfg);
    } else {
        PolyNormD nrm = sp.kind == "fkn"
                            ? PolyNormD(build_fkn<double>(sp).space, sp.k)
                            : PolyNormD(build_xn<double>(sp).space, sp.k);
        std::vector<CoordVector<double>> sparse;
        if (!o.points.empty()) {
            for (const auto& p : o.points) sparse.push_back(parse_vector_arg<double>(p));
        } else {
            Rng rng = Rng::derive(o.seed, 9000);
            const std::int64_t win = sp.kind == "xn" ? input_window(sp.m) : sp.m;
            for (long i = 0; i < o.vectors; ++i)
                sparse.push_back(random_unit(nrm.space(), rng, win, o.support));
        }
        for (const auto& f : sparse) pts.push_back(nrm.to_dense(f));
        if (sp.kind == "xn") {
            try {
                auto wit = lemma34_witness(build_xn<double>(sp), sparse);
                cfg.init_candidates.push_back(nrm.to_dense(wit.h));
            } catch (const Error&) {
            }
        } else {
            try {
                auto wit = lemma22_witness(build_fkn<double>(sp), sparse.front());
                cfg.init_candidates.push_back(nrm.to_dense(wit.h));
            } catch (const Error&) {
            }
        }
        for (const auto& p : pts) points_json.push_back(dense_json(p));
        est = pts.size() == 1 ? lasq_modulus(nrm, pts[0], cfg) : asq_modulus(nrm, pts, cfg);
    }

    json params{{"space", o.space_spec}, {"vectors", o.vectors},   {"starts", o.starts},
                {"iters", o.iters},      {"grid_res", o.grid_res}, {"support", o.support}};
    if (o.format == "csv") {
        std::vector<std::string> rows;
        rows.reserve(est.starts.size());
        for (const auto& s : est.starts)
            rows.push_back(std::to_string(s.start) + "," + detail::fmt17(s.value) + "," +
                           std::to_string(s.evals));
        return finish_csv(o, os, "start,value,evals", rows, true);
    }
    json report;
    report["points"] = std::move(points_json);
    report["estimate"] = estimate_json(est);
    return finish_json(o, os, "moduli", std::move(params), true, std::move(report));
}

int cmd_lemma43_tau(const Opts& o, std::ostream& os) {
    return dispatch_mode(o.mode, o.m, [&](auto tag) {
        using S = decltype(tag);
        SpaceSpec spec;
        spec.kind = "c0_sum";
        spec.k = o.k;
        spec.m = o.m;
        spec.components = o.components;
        auto sum = build_c0_sum<S>(spec);
        if (o.eps_seq.empty()) throw ConfigError("lemma43-tau: --eps-seq must be nonempty");
        std::vector<S> eps_seq;
        for (const auto& e : o.eps_seq) eps_seq.push_back(parse_scalar<S>(e));

        const double tol = tol_or(o, kDefaultRelTol);
        Rng rng = Rng::derive(o.seed, 0);
        std::vector<SumVector<S>> points;
        for (long i = 0; i < o.vectors; ++i)
            points.push_back(random_unit_sum(sum, rng, input_window(o.m), o.support));

        auto seq = lemma43_sequence(sum, points, eps_seq, tol);
        S two_eps = eps_seq.back() + eps_seq.back();

        bool all_ok = seq.pass;
        json taus = json::array();
        std::vector<std::string> rows;
        for (std::size_t i = 0; i < points.size(); ++i) {
            auto tau = type_tau(sum, points[i], seq, points);
            S allowed = two_eps + tau.density_gap;
            bool ok = le_tol(tau.deviation, allowed, tol);
            all_ok = all_ok && ok;
            json tj = tau_json(tau);
            tj["point"] = i;
            tj["allowed"] = jval(allowed);
            tj["verdict"] = verdict_str(ok);
            taus.push_back(std::move(tj));
            rows.push_back(std::to_string(i) + "," + scalar_text(tau.tau) + "," +
                           scalar_text(tau.target) + "," + scalar_text(tau.deviation) + "," +
                           scalar_text(allowed) + "," + (ok ? "1" : "0"));
        }

        json params{{"k", o.k},
                    {"m", o.m},
                    {"components", o.components},
                    {"vectors", o.vectors},
                    {"support", o.support},
                    {"tol", tol}};
        json eps_arr = json::array();
        for (const auto& e : eps_seq) eps_arr.push_back(jval(e));
        params["eps_seq"] = std::move(eps_arr);
        if (o.format == "csv")
            return finish_csv(o, os, "point,tau,target,deviation,allowed,pass", rows, all_ok);
        json report{{"sequence", sequence_json(seq, params)}, {"taus", std::move(taus)}};
        return finish_json(o, os, "lemma43-tau", std::move(params), all_ok, std::move(report));
    });
}

int cmd_oracle_diff(const Opts& o, std::ostream& os) {
    SpaceSpec sp = parse_space_spec(o.space_spec);
    if (sp.kind == "c0_sum")
        throw ConfigError("oracle-diff: space must have kind fkn or xn");
    return dispatch_mode(o.mode, sp.m, [&](auto tag) {
        using S = decltype(tag);
        PolyNormSpace<S> space =
            sp.kind == "fkn" ? build_fkn<S>(sp).space : build_xn<S>(sp).space;
        const double tol = tol_or(o, 1e-12);
        std::vector<std::string> rows(static_cast<std::size_t>(o.trials));
        json params{{"space", o.space_spec}, {"trials", o.trials}, {"support", o.support},
                    {"tol", tol}};

        auto summary = run_trials(o.trials, resolve_jobs(o.jobs), [&](long t) {
            Rng rng = Rng::derive(o.seed, static_cast<std::uint64_t>(t));
            auto f = random_vector<S>(rng, sp.m, o.support);
            S closed = space.norm(f);
            S enumerated = space.oracle_norm(f);
            TrialOut out;
            if constexpr (scalar_traits<S>::exact)
                out.pass = closed == enumerated;
            else
                out.pass = close_tol(closed, enumerated, tol);
            out.rank = std::abs(scalar_traits<S>::to_double(closed) -
                                scalar_traits<S>::to_double(enumerated));
            out.detail = json{{"trial", t},
                              {"f_csv", vector_csv(f)},
                              {"closed", jval(closed)},
                              {"enumerated", jval(enumerated)},
                              {"verdict", verdict_str(out.pass)}};
            rows[static_cast<std::size_t>(t)] = std::to_string(t) + "," + scalar_text(closed) +
                                                "," + scalar_text(enumerated) + "," +
                                                (out.pass ? "1" : "0");
            return out;
        });

        bool pass = summary.failures == 0;
        if (o.format == "csv")
            return finish_csv(o, os, "trial,closed,enumerated,pass", rows, pass);
        return finish_json(o, os, "oracle-diff", std::move(params), pass,
                           summary_json(summary));
    });
}

// ------------------------------------------------------------------- wiring

void add_common(CLI::App* sc, Opts& o, bool with_mode = true) {
    sc->add_option("--seed", o.seed, "random seed (mandatory for randomized commands)")
        ->required();
    sc->add_option("--jobs", o.jobs, "worker threads (default: ASQLAB_JOBS or 1)");
    sc->add_option("--out", o.out, "write the report here instead of stdout");
    sc->add_option("--format", o.format, "output format")
        ->check(CLI::IsMember({"json", "csv"}));
    if (with_mode)
        sc->add_option("--mode", o.mode, "numeric mode")
            ->check(CLI::IsMember({"float", "rational"}));
}

} // namespace

int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"polyhedral norm laboratory: witness constructions, refutation sweeps, "
                 "ellipsoid bounds"};
    app.require_subcommand(1);
    Opts o;
    std::function<int()> job;

    auto* eq8 = app.add_subcommand("verify-eq8",
                                   "two-sided sup bounds in a two-family space on random vectors");
    eq8->add_option("--k", o.k)->required();
    eq8->add_option("--n", o.n)->required();
    eq8->add_option("--m", o.m)->required();
    eq8->add_option("--trials", o.trials);
    eq8->add_option("--support", o.support);
    eq8->add_option("--tol", o.tol);
    add_common(eq8, o);
    eq8->callback([&] { job = [&] { return cmd_sandwich(o, out, false); }; });

    auto* eq9 = app.add_subcommand(
        "verify-eq9", "two-sided sup bounds in a three-family space on random vectors");
    eq9->add_option("--k", o.k)->required();
    eq9->add_option("--N", o.N)->required();
    eq9->add_option("--m", o.m)->required();
    eq9->add_option("--trials", o.trials);
    eq9->add_option("--support", o.support);
    eq9->add_option("--tol", o.tol);
    add_common(eq9, o);
    eq9->callback([&] { job = [&] { return cmd_sandwich(o, out, true); }; });

    auto* l22 = app.add_subcommand("verify-lemma22",
                                   "single-index witness h = k e_l for one unit vector");
    l22->add_option("--k", o.k)->required();
    l22->add_option("--n", o.n)->required();
    l22->add_option("--m", o.m)->required();
    l22->add_option("--trials", o.trials);
    l22->add_option("--support", o.support);
    l22->add_option("--tol", o.tol);
    add_common(l22, o);
    l22->callback([&] { job = [&] { return cmd_lemma22(o, out); }; });

    auto* r23 = app.add_subcommand("verify-remark23",
                                   "one witness index serving several unit vectors at once");
    r23->add_option("--k", o.k)->required();
    r23->add_option("--n", o.n)->required();
    r23->add_option("--m", o.m)->required();
    r23->add_option("--trials", o.trials);
    r23->add_option("--vectors", o.vectors);
    r23->add_option("--support", o.support);
    r23->add_option("--tol", o.tol);
    add_common(r23, o);
    r23->callback([&] { job = [&] { return cmd_remark23(o, out); }; });

    auto* l33 = app.add_subcommand("verify-lemma33",
                                   "clean block pair with eps-close coordinates on all inputs");
    l33->add_option("--k", o.k)->required();
    l33->add_option("--N", o.N)->required();
    l33->add_option("--m", o.m)->required();
    l33->add_option("--eps", o.eps, "cell size, e.g. 1/8 or 0.125")->required();
    l33->add_option("--trials", o.trials);
    l33->add_option("--vectors", o.vectors);
    l33->add_option("--support", o.support);
    l33->add_option("--tol", o.tol);
    add_common(l33, o);
    l33->callback([&] { job = [&] { return cmd_lemma33(o, out); }; });

    auto* l34 = app.add_subcommand("verify-lemma34",
                                   "block-pair witness h = e_l - e_r for unit vectors");
    l34->add_option("--k", o.k)->required();
    l34->add_option("--N", o.N)->required();
    l34->add_option("--m", o.m)->required();
    l34->add_option("--trials", o.trials);
    l34->add_option("--vectors", o.vectors);
    l34->add_option("--support", o.support);
    l34->add_option("--tol", o.tol);
    add_common(l34, o);
    l34->callback([&] { job = [&] { return cmd_lemma34(o, out); }; });

    auto* t35 = app.add_subcommand("verify-thm35",
                                   "embedded witness in a finite sup-sum of block spaces");
    t35->add_option("--k", o.k)->required();
    t35->add_option("--m", o.m)->required();
    t35->add_option("--components", o.components, "component widths, comma separated")
        ->delimiter(',')
        ->required();
    t35->add_option("--eps", o.eps)->required();
    t35->add_option("--trials", o.trials);
    t35->add_option("--vectors", o.vectors);
    t35->add_option("--support", o.support);
    t35->add_option("--tol", o.tol);
    add_common(t35, o);
    t35->callback([&] { job = [&] { return cmd_thm35(o, out); }; });

    auto* tr = app.add_subcommand("verify-transfer",
                                  "witness transfer across a two-part sup pairing");
    tr->add_option("--left", o.left_spec, "left space spec (JSON)")->required();
    tr->add_option("--right", o.right_spec, "right space spec (JSON, kind xn)")->required();
    tr->add_option("--trials", o.trials);
    tr->add_option("--vectors", o.vectors);
    tr->add_option("--support", o.support);
    tr->add_option("--tol", o.tol);
    add_common(tr, o);
    tr->callback([&] { job = [&] { return cmd_transfer(o, out); }; });

    auto* rl = app.add_subcommand("refute-lasq",
                                  "search for low-value perturbations and refute each candidate");
    rl->add_option("--k", o.k)->required();
    rl->add_option("--N", o.N)->required();
    rl->add_option("--m", o.m)->required();
    rl->add_option("--starts", o.starts);
    rl->add_option("--iters", o.iters);
    rl->add_option("--grid-res", o.grid_res);
    rl->add_option("--at", o.at, "control point (CSV text with ';' line breaks, or a file)");
    add_common(rl, o);
    rl->callback([&] { job = [&] { return cmd_refute_lasq(o, out); }; });

    auto* mc = app.add_subcommand("mvee-check",
                                  "minimal ellipsoids: canned shapes plus random polytopes");
    mc->add_option("--dim", o.dim)->required();
    mc->add_option("--polytopes", o.polytopes);
    mc->add_option("--samples", o.samples);
    mc->add_option("--tol", o.tol);
    add_common(mc, o);
    mc->callback([&] { job = [&] { return cmd_mvee_check(o, out); }; });

    auto* ps = app.add_subcommand("prop21-sweep",
                                  "contact-point lower bound over random polytopes");
    ps->add_option("--dim", o.dim)->required();
    ps->add_option("--polytopes", o.polytopes);
    ps->add_option("--samples", o.samples);
    add_common(ps, o);
    ps->callback([&] { job = [&] { return cmd_prop21_sweep(o, out); }; });

    auto* md = app.add_subcommand("moduli", "pattern-search estimate of the perturbation "
                                            "modulus at given or random points");
    md->add_option("--space", o.space_spec, "space spec (JSON)")->required();
    md->add_option("--point", o.points, "point (CSV text or file); repeatable");
    md->add_option("--vectors", o.vectors, "random points when no --point is given");
    md->add_option("--support", o.support);
    md->add_option("--starts", o.starts);
    md->add_option("--iters", o.iters);
    md->add_option("--grid-res", o.grid_res);
    add_common(md, o);
    md->callback([&] { job = [&] { return cmd_moduli(o, out); }; });

    auto* lt = app.add_subcommand("lemma43-tau",
                                  "witness sequence along decreasing tolerances and its limit");
    lt->add_option("--k", o.k)->required();
    lt->add_option("--m", o.m)->required();
    lt->add_option("--components", o.components)->delimiter(',')->required();
    lt->add_option("--eps-seq", o.eps_seq, "strictly decreasing tolerances, comma separated")
        ->delimiter(',')
        ->required();
    lt->add_option("--vectors", o.vectors);
    lt->add_option("--support", o.support);
    lt->add_option("--tol", o.tol);
    add_common(lt, o);
    lt->callback([&] { job = [&] { return cmd_lemma43_tau(o, out); }; });

    auto* od = app.add_subcommand("oracle-diff",
                                  "closed-form norm against full family enumeration");
    od->add_option("--space", o.space_spec, "space spec (JSON)")->required();
    od->add_option("--trials", o.trials);
    od->add_option("--support", o.support);
    od->add_option("--tol", o.tol);
    add_common(od, o);
    od->callback([&] { job = [&] { return cmd_oracle_diff(o, out); }; });

    std::reverse(args.begin(), args.end());
    try {
        app.parse(std::move(args));
    } catch (const CLI::Success& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return 2;
    }

    auto emit_error = [&](const char* type, const std::string& msg, json extra) {
        json env;
        env["schema"] = 1;
        env["error"] = json{{"type", type}, {"message", msg}};
        for (auto it = extra.begin(); it != extra.end(); ++it)
            env["error"][it.key()] = std::move(it.value());
        out << dump_report(env);
        err << msg << '\n';
    };

    try {
        return job ? job() : 2;
    } catch (const TruncationError& e) {
        emit_error("truncation_too_small", e.what(), json{{"required_m", e.required_m}});
        return 2;
    } catch (const CapError& e) {
        emit_error("enumeration_cap", e.what(),
                   json{{"requested", e.requested}, {"cap", e.cap}});
        return 2;
    } catch (const ConfigError& e) {
        emit_error("config", e.what(), json::object());
        return 2;
    } catch (const InputError& e) {
        emit_error("input", e.what(), json::object());
        return 2;
    } catch (const InternalError& e) {
        emit_error("internal_invariant", e.what(), json::object());
        return 1;
    }
}

} // namespace asqlab
