// Command-line front end: single-class analysis, full ensembles, convergence
// studies, density comparisons, and the built-in verification suite.
//
// Exit codes: 0 success, 2 usage error, 3 numerical failure, 4 verification
// failure.

#include <atomic>
#include <chrono>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "eulerstab/charpoly.hpp"
#include "eulerstab/density.hpp"
#include "eulerstab/ensemble.hpp"
#include "eulerstab/report.hpp"
#include "eulerstab/spectra.hpp"
#include "eulerstab/verify.hpp"
#include "eulerstab/version.hpp"

namespace {

using namespace eulerstab;

LatticeVector parse_vec(const std::string& s, const std::string& flag) {
    const auto comma = s.find(',');
    if (comma == std::string::npos)
        throw std::invalid_argument(flag + ": expected X,Y, got '" + s + "'");
    try {
        return {std::stoll(s.substr(0, comma)), std::stoll(s.substr(comma + 1))};
    } catch (const std::exception&) {
        throw std::invalid_argument(flag + ": expected integer X,Y, got '" + s + "'");
    }
}

std::vector<std::int64_t> parse_int_list(const std::string& s, const std::string& flag) {
    std::vector<std::int64_t> out;
    std::size_t pos = 0;
    try {
        while (pos < s.size()) {
            std::size_t used = 0;
            out.push_back(std::stoll(s.substr(pos), &used));
            pos += used;
            if (pos < s.size() && s[pos] == ',') ++pos;
        }
    } catch (const std::exception&) {
        throw std::invalid_argument(flag + ": expected comma-separated integers, got '" + s + "'");
    }
    if (out.empty()) throw std::invalid_argument(flag + ": empty list");
    return out;
}

TruncationKind parse_kind(const std::string& s) {
    if (s == "galerkin") return TruncationKind::galerkin;
    if (s == "zeitlin") return TruncationKind::zeitlin;
    throw std::invalid_argument("--kind: expected galerkin or zeitlin, got '" + s + "'");
}

struct CommonArgs {
    std::string p_str;
    std::string a_str;
    std::int64_t n = -1;
    std::int64_t n_tilde = -1;
    double gamma = 0.5;
    std::string kind_str = "zeitlin";
    double tol = 1e-8;
    bool strict_admissible = false;
    std::string out;
    std::string format = "json";
    std::string format_csv = "csv";
    int threads = 0;
    bool fast = false;
    std::int64_t bins = 40;
};

Domain resolve_domain(const LatticeVector& p, const CommonArgs& args, TruncationKind kind) {
    std::int64_t n = args.n;
    if (args.n_tilde > 0) {
        if (args.n > 0) throw std::invalid_argument("give either --N or --n-tilde, not both");
        n = admissible_n(p, args.n_tilde);
    }
    if (n <= 0) throw std::invalid_argument("a domain size is required (--N or --n-tilde)");
    const Domain domain(n);
    if (args.strict_admissible && kind == TruncationKind::zeitlin && !is_admissible_n(p, n))
        throw std::invalid_argument("--strict-admissible: N=" + std::to_string(n) +
                                    " is not an admissible grid size for p");
    return domain;
}

void emit(const CommonArgs& args, const std::string& command, const json& config,
          const std::string& payload, const std::string& payload_suffix, double wall_seconds) {
    if (args.out.empty()) {
        std::cout << payload;
        if (!payload.empty() && payload.back() != '\n') std::cout << '\n';
        return;
    }
    const std::string primary = payload_suffix.empty() ? args.out : args.out + payload_suffix;
    write_file(primary, payload);
    write_file(args.out + ".manifest.json",
               make_manifest(command, config, args.tol, wall_seconds).dump(2) + "\n");
}

int cmd_class(const CommonArgs& args) {
    const auto t0 = std::chrono::steady_clock::now();
    const LatticeVector p = parse_vec(args.p_str, "--p");
    const LatticeVector a = parse_vec(args.a_str, "--a");
    const TruncationKind kind = parse_kind(args.kind_str);
    const Domain domain = resolve_domain(p, args, kind);
    if (!domain.contains(a)) throw std::invalid_argument("--a: leader outside the mode domain");
    if (args.format != "json") throw std::invalid_argument("class: only --format json is supported");

    const ClassDescriptor desc = enumerate_class(a, p, domain, kind);
    const ClassSpectrum spectrum = analyze_class(desc, args.gamma, args.tol);
    const json payload = class_spectrum_to_json(spectrum);
    const json config{{"p", p},          {"a", a},           {"n", domain.n_max()},
                      {"gamma", args.gamma}, {"kind", to_string(kind)}, {"tolerance", args.tol}};
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    emit(args, "class", config, payload.dump(2) + "\n", "", wall);
    return 0;
}

int cmd_ensemble(const CommonArgs& args) {
    const auto t0 = std::chrono::steady_clock::now();
    EnsembleConfig cfg;
    cfg.p = parse_vec(args.p_str, "--p");
    cfg.kind = parse_kind(args.kind_str);
    cfg.domain = resolve_domain(cfg.p, args, cfg.kind);
    cfg.gamma = args.gamma;
    cfg.tol_rel = args.tol;
    cfg.fast = args.fast;
    cfg.threads = args.threads;
    if (args.format != "json") throw std::invalid_argument("ensemble: only --format json is supported");

    const EnsembleReport report = run_ensemble(cfg);
    const json payload = report;
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (args.out.empty()) {
        std::cout << payload.dump(2) << '\n';
    } else {
        write_file(args.out, payload.dump(2) + "\n");
        write_file(args.out + ".eigenvalues.csv", ensemble_eigenvalues_csv(report));
        write_file(args.out + ".manifest.json",
                   make_manifest("ensemble", json(cfg), args.tol, wall).dump(2) + "\n");
    }
    return 0;
}

std::optional<double> largest_real_of_class(const LatticeVector& a, const LatticeVector& p,
                                            const Domain& domain, TruncationKind kind, double tol) {
    const ClassDescriptor desc = enumerate_class(a, p, domain, kind);
    const ClassMatrix cm = class_matrix(desc, 1.0);
    return max_real_eigenvalue(eigenvalues(cm.entries), tol);
}

int cmd_convergence(const CommonArgs& args, const std::string& n_list_str) {
    const auto t0 = std::chrono::steady_clock::now();
    const LatticeVector p = parse_vec(args.p_str, "--p");
    const LatticeVector a = parse_vec(args.a_str, "--a");
    if (args.format_csv != "csv")
        throw std::invalid_argument("convergence: only --format csv is supported");
    auto n_values = parse_int_list(n_list_str, "--N");
    std::sort(n_values.begin(), n_values.end());
    for (const std::int64_t n : n_values) {
        if (n < 1) throw std::invalid_argument("--N: sizes must be positive");
        if (!Domain(n).contains(a))
            throw std::invalid_argument("--a outside domain at N=" + std::to_string(n));
    }

    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<std::vector<ConvergenceRow>> per_n(n_values.size());
    const auto compute_one = [&](std::size_t i) {
        const std::int64_t n = n_values[i];
        const Domain domain(n);
        std::vector<ConvergenceRow>& rows = per_n[i];
        if (!args.strict_admissible || is_admissible_n(p, n)) {
            const auto lam_z = largest_real_of_class(a, p, domain, TruncationKind::zeitlin, args.tol);
            rows.push_back({n, "zeitlin", n, lam_z.value_or(nan)});
        }
        const auto lam_g = largest_real_of_class(a, p, domain, TruncationKind::galerkin, args.tol);
        rows.push_back({n, "galerkin", n, lam_g.value_or(nan)});

        // Matched series: smallest domain whose unwrapped class reaches the
        // wrapped class's mode count.
        const std::int64_t target = enumerate_class(a, p, domain, TruncationKind::zeitlin).size();
        for (std::int64_t ng = n;; ++ng) {
            if (ng > 100000) throw NumericalError("convergence: no matched domain below the size cap");
            const Domain dg(ng);
            if (!dg.contains(a)) continue;
            if (enumerate_class(a, p, dg, TruncationKind::galerkin).size() >= target) {
                const auto lam_m = largest_real_of_class(a, p, dg, TruncationKind::galerkin, args.tol);
                rows.push_back({n, "galerkin_matched", ng, lam_m.value_or(nan)});
                break;
            }
        }
    };

    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned workers = std::min<unsigned>(
        args.threads > 0 ? static_cast<unsigned>(args.threads) : hw,
        static_cast<unsigned>(n_values.size()));
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    const auto work = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n_values.size()) return;
            try {
                compute_one(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    std::vector<ConvergenceRow> rows;
    for (const auto& chunk : per_n) rows.insert(rows.end(), chunk.begin(), chunk.end());

    const json config{{"p", p}, {"a", a}, {"gamma", args.gamma}, {"n_values", n_values},
                      {"strict_admissible", args.strict_admissible}};
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    emit(args, "convergence", config, convergence_csv(rows), "", wall);
    return 0;
}

int cmd_density(const CommonArgs& args, const std::string& preset) {
    const auto t0 = std::chrono::steady_clock::now();
    CommonArgs a = args;
    if (preset == "fig6") {
        a.p_str = "3,1";
        a.a_str = "1,-2";
    } else if (preset == "text52") {
        a.p_str = "7,5";
        a.a_str = "-4,7";
    } else if (!preset.empty()) {
        throw std::invalid_argument("--preset: expected fig6 or text52");
    }
    const LatticeVector p = parse_vec(a.p_str, "--p");
    const LatticeVector leader = parse_vec(a.a_str, "--a");
    const TruncationKind kind = parse_kind(a.kind_str);
    const Domain domain = resolve_domain(p, a, kind);
    if (!domain.contains(leader)) throw std::invalid_argument("--a: leader outside the mode domain");
    if (a.bins < 1) throw std::invalid_argument("--bins must be positive");
    if (a.format_csv != "csv") throw std::invalid_argument("density: only --format csv is supported");

    const ClassDescriptor desc = enumerate_class(leader, p, domain, kind);
    const ClassSpectrum spectrum = analyze_class(desc, a.gamma, a.tol);
    const Histogram hist = empirical_density(spectrum, a.bins, a.tol);
    const DensityModel model = density_model(leader, p, a.gamma);

    const json config{{"p", p},       {"a", leader},          {"n", domain.n_max()},
                      {"gamma", a.gamma}, {"kind", to_string(kind)}, {"bins", a.bins},
                      {"beta", model.beta},  {"support", json::array({-model.support_abs, model.support_abs})}};
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    emit(a, "density", config, density_csv(hist, p, model.alpha), "", wall);
    return 0;
}

int cmd_verify(const std::string& level) {
    if (level != "quick" && level != "full")
        throw std::invalid_argument("--level: expected quick or full");
    const auto results = run_verification(level == "full");
    bool all_ok = true;
    for (const auto& r : results) {
        std::cout << (r.passed ? "PASS" : "FAIL") << "  " << r.name;
        if (!r.detail.empty()) std::cout << "  [" << r.detail << "]";
        std::cout << '\n';
        all_ok = all_ok && r.passed;
    }
    std::cout << (all_ok ? "verification passed" : "verification FAILED") << '\n';
    return all_ok ? 0 : 4;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectra of the truncated 2D Euler equations linearised about cos(p.x) equilibria"};
    app.set_version_flag("--version", eulerstab::version);
    app.require_subcommand(1);

    CommonArgs args;
    std::string n_list_str;
    std::string preset;
    std::string level = "quick";

    const auto add_common = [&](CLI::App* cmd, bool needs_a) {
        cmd->add_option("--p", args.p_str, "equilibrium mode p as X,Y")->required();
        if (needs_a) cmd->add_option("--a", args.a_str, "class leader a as X,Y")->required();
        cmd->add_option("--gamma", args.gamma, "equilibrium amplitude");
        cmd->add_option("--tol", args.tol, "relative classification tolerance");
        cmd->add_option("--out", args.out, "output path (side files get suffixes)");
        cmd->add_flag("--strict-admissible", args.strict_admissible,
                      "require an admissible sine-bracket grid size");
    };

    auto* c_class = app.add_subcommand("class", "analyse one class");
    add_common(c_class, true);
    c_class->add_option("--N", args.n, "domain size");
    c_class->add_option("--n-tilde", args.n_tilde, "derive N from an admissible sequence index");
    c_class->add_option("--kind", args.kind_str, "galerkin or zeitlin");
    c_class->add_option("--format", args.format, "json");

    auto* c_ens = app.add_subcommand("ensemble", "sweep all canonical classes");
    add_common(c_ens, false);
    c_ens->add_option("--N", args.n, "domain size");
    c_ens->add_option("--n-tilde", args.n_tilde, "derive N from an admissible sequence index");
    c_ens->add_option("--kind", args.kind_str, "galerkin or zeitlin");
    c_ens->add_option("--format", args.format, "json");
    c_ens->add_flag("--fast", args.fast, "skip dense solves of provably stable classes");
    c_ens->add_option("--threads", args.threads, "worker threads (0: all cores)");

    auto* c_conv = app.add_subcommand("convergence", "largest real eigenvalue vs domain size");
    add_common(c_conv, true);
    c_conv->add_option("--N", n_list_str, "comma-separated list of domain sizes")->required();
    c_conv->add_option("--threads", args.threads, "worker threads (0: all cores)");
    c_conv->add_option("--format", args.format_csv, "csv");

    auto* c_dens = app.add_subcommand("density", "imaginary-spectrum histogram vs arcsine model");
    args.p_str = "3,1"; // density defaults to the reference parameters
    args.a_str = "1,-2";
    c_dens->add_option("--p", args.p_str, "equilibrium mode p as X,Y");
    c_dens->add_option("--a", args.a_str, "class leader a as X,Y");
    c_dens->add_option("--gamma", args.gamma, "equilibrium amplitude");
    c_dens->add_option("--tol", args.tol, "relative classification tolerance");
    c_dens->add_option("--out", args.out, "output path (side files get suffixes)");
    c_dens->add_flag("--strict-admissible", args.strict_admissible,
                     "require an admissible sine-bracket grid size");
    c_dens->add_option("--N", args.n, "domain size");
    c_dens->add_option("--kind", args.kind_str, "galerkin or zeitlin");
    c_dens->add_option("--bins", args.bins, "histogram bins");
    c_dens->add_option("--format", args.format_csv, "csv");
    c_dens->add_option("--preset", preset, "fig6 or text52 parameter preset");

    auto* c_ver = app.add_subcommand("verify", "run the built-in verification suite");
    c_ver->add_option("--level", level, "quick or full");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(c_class)) return cmd_class(args);
        if (app.got_subcommand(c_ens)) return cmd_ensemble(args);
        if (app.got_subcommand(c_conv)) return cmd_convergence(args, n_list_str);
        if (app.got_subcommand(c_dens)) return cmd_density(args, preset);
        if (app.got_subcommand(c_ver)) return cmd_verify(level);
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const eulerstab::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 2;
}
