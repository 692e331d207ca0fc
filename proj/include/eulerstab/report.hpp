#pragma once

// Machine-readable outputs: JSON reports, CSV series, and the per-run
// manifest. CSV uses comma separators, '.' decimals and lowercase snake_case
// headers; numbers are emitted with std::to_chars so output is locale-free
// and byte-stable.

#include <charconv>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "eulerstab/density.hpp"
#include "eulerstab/ensemble.hpp"
#include "eulerstab/spectra.hpp"
#include "eulerstab/version.hpp"

namespace eulerstab {

using json = nlohmann::json;

inline std::string format_number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline void to_json(json& j, const LatticeVector& v) { j = json::array({v.x, v.y}); }
inline void from_json(const json& j, LatticeVector& v) {
    v.x = j.at(0).get<std::int64_t>();
    v.y = j.at(1).get<std::int64_t>();
}

inline void to_json(json& j, const Classification& c) {
    j = json{{"zero", c.zero},
             {"imaginary", c.imaginary},
             {"real_pairs", c.real_pairs},
             {"quadruplets", c.quadruplets}};
}
inline void from_json(const json& j, Classification& c) {
    j.at("zero").get_to(c.zero);
    j.at("imaginary").get_to(c.imaginary);
    j.at("real_pairs").get_to(c.real_pairs);
    j.at("quadruplets").get_to(c.quadruplets);
}

inline void to_json(json& j, const Certificates& c) {
    j = json{{"lambda_dagger", c.lambda_dagger},
             {"bracketed_root", c.bracketed_root},
             {"lambda_dagger_scaled", c.lambda_dagger_scaled},
             {"bracketed_root_scaled", c.bracketed_root_scaled}};
}
inline void from_json(const json& j, Certificates& c) {
    j.at("lambda_dagger").get_to(c.lambda_dagger);
    j.at("bracketed_root").get_to(c.bracketed_root);
    j.at("lambda_dagger_scaled").get_to(c.lambda_dagger_scaled);
    j.at("bracketed_root_scaled").get_to(c.bracketed_root_scaled);
}

inline void to_json(json& j, const ClassRecord& r) {
    j = json{{"leader", r.leader},     {"size", r.size},
             {"alpha", r.alpha},       {"case", to_string(r.stability)},
             {"solved", r.solved},     {"classification", r.classification}};
    if (r.certificates) j["certificates"] = *r.certificates;
}
inline void from_json(const json& j, ClassRecord& r) {
    j.at("leader").get_to(r.leader);
    j.at("size").get_to(r.size);
    j.at("alpha").get_to(r.alpha);
    j.at("solved").get_to(r.solved);
    j.at("classification").get_to(r.classification);
    const std::string c = j.at("case").get<std::string>();
    r.stability = c == "zero_alpha"  ? StabilityCase::zero_alpha
                  : c == "stable"    ? StabilityCase::stable
                  : c == "case_i"    ? StabilityCase::case_i
                  : c == "case_ii"   ? StabilityCase::case_ii
                                     : StabilityCase::case_iii;
    if (j.contains("certificates")) r.certificates = j.at("certificates").get<Certificates>();
}

inline void to_json(json& j, const DiscCensus& c) {
    j = json{{"interior_points", c.interior_points}, {"lens_points", c.lens_points}};
}
inline void from_json(const json& j, DiscCensus& c) {
    j.at("interior_points").get_to(c.interior_points);
    j.at("lens_points").get_to(c.lens_points);
}

inline void to_json(json& j, const EnsembleCounts& c) {
    j = json{{"zero", c.zero},
             {"imaginary", c.imaginary},
             {"real", c.real},
             {"complex", c.complex_count},
             {"nonimaginary", c.nonimaginary},
             {"unsolved_modes", c.unsolved_modes}};
}
inline void from_json(const json& j, EnsembleCounts& c) {
    j.at("zero").get_to(c.zero);
    j.at("imaginary").get_to(c.imaginary);
    j.at("real").get_to(c.real);
    j.at("complex").get_to(c.complex_count);
    j.at("nonimaginary").get_to(c.nonimaginary);
    j.at("unsolved_modes").get_to(c.unsolved_modes);
}

inline void to_json(json& j, const EnsembleConfig& c) {
    j = json{{"p", c.p},
             {"gamma", c.gamma},
             {"n", c.domain.n_max()},
             {"kind", to_string(c.kind)},
             {"tolerance", c.tol_rel},
             {"fast", c.fast},
             {"threads", c.threads}};
}
inline void from_json(const json& j, EnsembleConfig& c) {
    j.at("p").get_to(c.p);
    j.at("gamma").get_to(c.gamma);
    c.domain = Domain(j.at("n").get<std::int64_t>());
    c.kind = j.at("kind").get<std::string>() == "galerkin" ? TruncationKind::galerkin
                                                           : TruncationKind::zeitlin;
    j.at("tolerance").get_to(c.tol_rel);
    j.at("fast").get_to(c.fast);
    j.at("threads").get_to(c.threads);
}

inline void to_json(json& j, const EnsembleReport& r) {
    j = json{{"config", r.config},
             {"census", r.census},
             {"counts", r.counts},
             {"classes", r.classes}};
}
inline void from_json(const json& j, EnsembleReport& r) {
    j.at("config").get_to(r.config);
    j.at("census").get_to(r.census);
    j.at("counts").get_to(r.counts);
    j.at("classes").get_to(r.classes);
}

inline json class_spectrum_to_json(const ClassSpectrum& cs) {
    json j{{"leader", cs.descriptor.leader},
           {"p", cs.descriptor.p},
           {"kind", to_string(cs.descriptor.kind)},
           {"n", cs.descriptor.domain.n_max()},
           {"gamma", cs.gamma},
           {"size", cs.descriptor.size()},
           {"alpha", cs.alpha},
           {"case", to_string(cs.stability)},
           {"classification", cs.classification}};
    json modes = json::array();
    for (const auto& m : cs.descriptor.modes) modes.push_back(m);
    j["modes"] = modes;
    if (cs.alpha != 0.0) {
        json rho = json::array();
        for (double r : rho_list(cs.descriptor)) rho.push_back(r);
        j["rho"] = rho;
    }
    json evs = json::array();
    for (const auto& z : cs.eigenvalues) evs.push_back(json::array({z.real(), z.imag()}));
    j["eigenvalues"] = evs;
    json evs_u = json::array();
    for (const auto& z : cs.eigenvalues_unscaled) evs_u.push_back(json::array({z.real(), z.imag()}));
    j["eigenvalues_unscaled"] = evs_u;
    if (cs.certificates) j["certificates"] = *cs.certificates;
    return j;
}

// Eigenvalue table sorted by (re, im, leader); the sort happened upstream.
inline std::string ensemble_eigenvalues_csv(const EnsembleReport& r) {
    std::string out = "re,im,leader_x,leader_y\n";
    for (const auto& [z, leader] : r.eigenvalues) {
        out += format_number(z.real());
        out += ',';
        out += format_number(z.imag());
        out += ',';
        out += std::to_string(leader.x);
        out += ',';
        out += std::to_string(leader.y);
        out += '\n';
    }
    return out;
}

struct ConvergenceRow {
    std::int64_t n = 0;        // x-axis domain size
    std::string kind;          // zeitlin | galerkin | galerkin_matched
    std::int64_t domain_n = 0; // actual domain used (differs for the matched series)
    double real_eigenvalue = 0.0;
};

inline std::string convergence_csv(const std::vector<ConvergenceRow>& rows) {
    std::string out = "n,kind,domain_n,real_eigenvalue\n";
    for (const auto& row : rows) {
        out += std::to_string(row.n);
        out += ',';
        out += row.kind;
        out += ',';
        out += std::to_string(row.domain_n);
        out += ',';
        out += format_number(row.real_eigenvalue);
        out += '\n';
    }
    return out;
}

inline std::string density_csv(const Histogram& h, const LatticeVector& p, double alpha) {
    std::string out = "bin_center,empirical,model\n";
    for (std::size_t b = 0; b < h.centers.size(); ++b) {
        out += format_number(h.centers[b]);
        out += ',';
        out += format_number(h.density[b]);
        out += ',';
        double model = 0.0;
        try {
            model = density_f(h.centers[b], p, alpha);
        } catch (const std::domain_error&) {
            model = 0.0; // edge bin centers can fall outside the open support
        }
        out += format_number(model);
        out += '\n';
    }
    return out;
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file: " + path);
    f << content;
}

// Provenance manifest: semantic version, command, config echo, tolerance and
// wall time. Byte-stable across reruns except the timing field.
inline json make_manifest(const std::string& command, const json& config, double tol_rel,
                          double wall_seconds) {
    return json{{"version", version},
                {"command", command},
                {"config", config},
                {"tolerance", tol_rel},
                {"wall_time_seconds", wall_seconds}};
}

} // namespace eulerstab
