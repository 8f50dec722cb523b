#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "gpfp/dist.hpp"
#include "gpfp/errors.hpp"
#include "gpfp/fid.hpp"
#include "gpfp/holomorphic.hpp"
#include "gpfp/moments.hpp"

namespace gpfp {

using Json = nlohmann::ordered_json;

// ---- distribution spec format ----------------------------------------------
// { "a": number, "b": number, "alpha": [numbers], "l": [numbers],
//   "norm": number | null }
// A null norm asks the loader to normalize.

inline GpfpSpec spec_from_json(const Json& j) {
    GpfpSpec s;
    try {
        s.a = j.at("a").get<double>();
        s.b = j.at("b").get<double>();
        s.alpha = j.at("alpha").get<std::vector<double>>();
        s.l = j.at("l").get<std::vector<double>>();
        if (!j.contains("norm") || j.at("norm").is_null()) {
            s.norm = 1.0;
            validate_params(s);
            s = normalize(std::move(s));
        } else {
            s.norm = j.at("norm").get<double>();
            validate_params(s);
        }
    } catch (const Json::exception& e) {
        throw SpecFormatError(std::string("spec json: ") + e.what());
    } catch (const std::domain_error& e) {
        throw SpecFormatError(std::string("spec json: ") + e.what());
    }
    s.exact = try_align_fp(s);
    return s;
}

inline GpfpSpec load_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SpecFormatError("cannot open spec file: " + path);
    Json j;
    try {
        in >> j;
    } catch (const Json::exception& e) {
        throw SpecFormatError(std::string("spec json parse: ") + e.what());
    }
    return spec_from_json(j);
}

inline Json spec_to_json(const GpfpSpec& s) {
    Json j;
    j["a"] = s.a;
    j["b"] = s.b;
    j["alpha"] = s.alpha;
    j["l"] = s.l;
    j["norm"] = s.norm;
    return j;
}

// ---- reports ----------------------------------------------------------------

struct FIDReport {
    std::string measure;
    std::optional<double> alpha2;
    int order = 2;
    double det = 0.0;
    std::string verdict;  // "fail" | "inconclusive"
};

inline Json fid_report_to_json(const FIDReport& r) {
    Json j;
    j["measure"] = r.measure;
    if (r.alpha2)
        j["alpha2"] = *r.alpha2;
    else
        j["alpha2"] = nullptr;
    j["order"] = r.order;
    j["det"] = r.det;
    j["verdict"] = r.verdict;
    return j;
}

inline Json ui_report_to_json(const UIReport& r) {
    Json j;
    j["power"] = r.r;
    j["epsilon"] = r.epsilon;
    j["theta"] = r.theta;
    j["delta"] = r.delta;
    j["eta"] = r.eta;
    j["far_field"] = r.far_field;
    j["boundary_case"] = r.boundary_case;
    Json probes = Json::array();
    for (const auto& p : r.probes) {
        Json pj;
        pj["re"] = p.w.real();
        pj["im"] = p.w.imag();
        if (p.excluded) {
            pj["excluded"] = true;
            pj["note"] = p.note;
        } else {
            pj["winding"] = p.winding;
        }
        probes.push_back(std::move(pj));
    }
    j["probes"] = std::move(probes);
    auto check = [](const AssumptionCheck& c) {
        Json cj;
        cj["residual"] = c.residual;
        cj["pass"] = c.pass;
        return cj;
    };
    j["assumption_checks"] = {{"a2", check(r.a2)},
                              {"a3", check(r.a3)},
                              {"a4", check(r.a4)},
                              {"a5", check(r.a5)},
                              {"a6_richardson", check(r.a6)}};
    j["windings_all_one"] = r.windings_all_one;
    j["assumptions_pass"] = r.assumptions_pass;
    if (r.witness) {
        j["witness"] = {{"re", r.witness->real()}, {"im", r.witness->imag()}};
    }
    j["verdict"] = r.verdict;
    return j;
}

// Contour trace rows (z_re, z_im, G_re, G_im) in curve order.
inline void write_contour_csv(std::ostream& out, const Contour& c) {
    out << "z_re,z_im,G_re,G_im\n";
    out.precision(17);
    for (const auto& seg : c.segments)
        for (const auto& s : seg.samples)
            out << s.z.real() << ',' << s.z.imag() << ',' << s.G.real() << ',' << s.G.imag()
                << '\n';
}

// ---- run configuration -------------------------------------------------------

struct RunConfig {
    double tol = 1e-10;
    int quad_nodes = 256;
    int probes = 100;
    double epsilon = 1e-2;
    std::uint64_t seed = 1;
    std::string output = "json";  // "json" | "csv"
    int threads = 0;              // 0 = auto
};

inline RunConfig config_from_json(const Json& j) {
    RunConfig c;
    if (j.contains("tol")) c.tol = j.at("tol").get<double>();
    if (j.contains("quad_nodes")) c.quad_nodes = j.at("quad_nodes").get<int>();
    if (j.contains("probes")) c.probes = j.at("probes").get<int>();
    if (j.contains("epsilon")) c.epsilon = j.at("epsilon").get<double>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("output")) c.output = j.at("output").get<std::string>();
    if (j.contains("threads")) c.threads = j.at("threads").get<int>();
    if (!(c.tol > 0.0) || !(c.epsilon > 0.0) || c.probes < 1 || c.quad_nodes < 8)
        throw SpecFormatError("config: tolerances and counts must be positive");
    return c;
}

inline Json config_to_json(const RunConfig& c) {
    Json j;
    j["tol"] = c.tol;
    j["quad_nodes"] = c.quad_nodes;
    j["probes"] = c.probes;
    j["epsilon"] = c.epsilon;
    j["seed"] = c.seed;
    j["output"] = c.output;
    j["threads"] = c.threads;
    return j;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SpecFormatError("cannot open config file: " + path);
    Json j;
    try {
        in >> j;
    } catch (const Json::exception& e) {
        throw SpecFormatError(std::string("config json parse: ") + e.what());
    }
    return config_from_json(j);
}

}  // namespace gpfp
