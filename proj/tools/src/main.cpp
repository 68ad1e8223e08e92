// Command-line front end: parameter schedules and width bounds, the
// numerical validation suite, sup-error experiments over network widths,
// and network build / eval round-trips.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "rvfl/bounds.hpp"
#include "rvfl/checks.hpp"
#include "rvfl/csv.hpp"
#include "rvfl/geometry.hpp"
#include "rvfl/kernel.hpp"
#include "rvfl/lipschitz.hpp"
#include "rvfl/network.hpp"
#include "rvfl/parallel.hpp"
#include "rvfl/rng.hpp"
#include "rvfl/serialize.hpp"
#include "rvfl/spectral.hpp"
#include "rvfl/targets.hpp"
#include "rvfl/version.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

// Errors in how the tool was invoked, as opposed to failed checks.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// small utilities

std::string fmt(double x) { return rvfl::csv::format_double(x); }

std::vector<long long> parse_int_list(const std::string& text) {
    std::vector<long long> out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t comma = text.find(',', pos);
        std::string tok = text.substr(pos, comma == std::string::npos ? std::string::npos
                                                                      : comma - pos);
        pos = comma == std::string::npos ? text.size() : comma + 1;
        if (tok.empty()) continue;
        std::size_t dots = tok.find("..");
        auto to_ll = [&](const std::string& s) {
            std::size_t used = 0;
            double v = std::stod(s, &used);
            if (used != s.size()) throw std::runtime_error("bad integer token '" + s + "'");
            long long r = std::llround(v);
            if (std::abs(v - static_cast<double>(r)) > 1e-9 * std::max(1.0, std::abs(v)))
                throw std::runtime_error("token '" + s + "' is not an integer");
            return r;
        };
        if (dots != std::string::npos) {
            long long lo = to_ll(tok.substr(0, dots));
            long long hi = to_ll(tok.substr(dots + 2));
            if (hi < lo) throw std::runtime_error("descending range '" + tok + "'");
            if (hi - lo > 1000000) throw std::runtime_error("range '" + tok + "' too large");
            for (long long v = lo; v <= hi; ++v) out.push_back(v);
        } else {
            out.push_back(to_ll(tok));
        }
    }
    if (out.empty()) throw std::runtime_error("empty integer list '" + text + "'");
    return out;
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        std::size_t used = 0;
        out.push_back(std::stod(tok, &used));
        if (used != tok.size()) throw std::runtime_error("bad number '" + tok + "'");
    }
    if (out.empty()) throw std::runtime_error("empty number list '" + text + "'");
    return out;
}

std::string default_out_dir() {
    if (const char* env = std::getenv("RVFL_OUT_DIR"); env != nullptr && *env != '\0')
        return env;
    return ".";
}

std::uint64_t hash_bytes(const std::string& bytes) {
    std::uint64_t h = 0x243F6A8885A308D3ull;
    for (unsigned char c : bytes) h = rvfl::mix64(h ^ c);
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

// Writes to a file path, or stdout when path is "-".
void write_text(const std::string& path, const std::string& text) {
    if (path == "-") {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << text;
    if (!out.flush()) throw std::runtime_error("write to '" + path + "' failed");
}

// ---------------------------------------------------------------------------
// JSON config file: values fill in defaults, command-line flags override.

using FieldSetters = std::map<std::string, std::function<void(const json&)>>;

template <class T>
void add_field(FieldSetters& fs, const std::string& key, T& var) {
    fs[key] = [&var](const json& j) { var = j.get<T>(); };
}

void apply_config_file(const std::string& path, const FieldSetters& setters) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
    json cfg = json::parse(in);
    if (!cfg.is_object()) throw std::runtime_error("config file must hold a JSON object");
    for (const auto& [key, value] : cfg.items()) {
        auto it = setters.find(key);
        if (it == setters.end()) {
            std::cerr << "warning: config key '" << key << "' not recognized here, ignored\n";
            continue;
        }
        try {
            it->second(value);
        } catch (const std::exception& e) {
            throw std::runtime_error("config key '" + key + "': " + e.what());
        }
    }
}

// First pass over argv: which subcommand, and is --config present?
struct Prescan {
    std::string subcommand;
    std::string config_path;
};

Prescan prescan_args(int argc, char** argv, const std::vector<std::string>& names) {
    Prescan p;
    for (int i = 1; i < argc; ++i) {
        std::string arg = argv[i];
        if (p.subcommand.empty() &&
            std::find(names.begin(), names.end(), arg) != names.end()) {
            p.subcommand = arg;
        } else if (arg == "--config" && i + 1 < argc) {
            p.config_path = argv[i + 1];
        } else if (arg.rfind("--config=", 0) == 0) {
            p.config_path = arg.substr(9);
        }
    }
    return p;
}

// ---------------------------------------------------------------------------
// target loading shared by validate-lemmas / experiment / build

struct TargetSpec {
    std::string target = "tent";  // builtin name or CSV path
    int m = 1;
    int resolution = 0;  // 0 = default_resolution(m)
    double ell = 0.0;    // 0 = use the sample estimate
};

TargetSpec resolved(TargetSpec spec) {
    if (spec.resolution <= 0) spec.resolution = rvfl::default_resolution(spec.m);
    return spec;
}

bool looks_like_path(const std::string& s) {
    return s.find('/') != std::string::npos || s.find(".csv") != std::string::npos;
}

rvfl::Target load_target(const TargetSpec& raw) {
    const TargetSpec spec = resolved(raw);
    if (!looks_like_path(spec.target)) {
        rvfl::Target t = rvfl::make_builtin_target(spec.target, spec.m, spec.resolution);
        if (spec.ell > 0) t.ell = spec.ell;
        return t;
    }
    std::vector<Eigen::VectorXd> points;
    std::vector<double> values;
    rvfl::csv::load_target(spec.target, points, values);
    rvfl::Target t{rvfl::Compactum(std::move(points)), std::move(values), std::nullopt};
    if (t.domain.dim() != spec.m)
        throw std::runtime_error("target file has m = " + std::to_string(t.domain.dim()) +
                                 " but --m is " + std::to_string(spec.m));
    if (spec.ell > 0) t.ell = spec.ell;
    return t;
}

json target_spec_json(const TargetSpec& spec) {
    return json{{"target", spec.target},
                {"m", spec.m},
                {"resolution", spec.resolution},
                {"ell", spec.ell}};
}

// ---------------------------------------------------------------------------
// bounds subcommand

struct BoundsArgs {
    std::string m_list = "1..5";
    std::string eps_list = "0.1";
    double eta = 0.05;
    double ell = 1.0;
    double R = 1.0;
    double sigma = 1.0;
    std::string dK = "1";  // number, or "auto"
    std::string target = "radial-bump";
    int resolution = 0;  // 0 = per-m automatic
    std::uint64_t dk_samples = 100000;
    std::uint64_t seed = 20240901;
    std::string format = "text";
    std::string out = "-";
};

int run_bounds(const BoundsArgs& a) {
    std::vector<long long> ms = parse_int_list(a.m_list);
    std::vector<double> epss = parse_double_list(a.eps_list);
    bool dk_auto = a.dK == "auto";
    double dk_fixed = 0.0;
    if (!dk_auto) {
        std::size_t used = 0;
        dk_fixed = std::stod(a.dK, &used);
        if (used != a.dK.size()) throw UsageError("--dK must be a number or 'auto'");
    }

    struct Row {
        int m;
        double eps, dK, dK_stderr;
        rvfl::ParameterSchedule sched;
        rvfl::ThetaRegime regime;
        double lg_main, lg_approx;
        std::optional<std::uint64_t> n_main;
    };
    std::vector<Row> rows;
    std::map<int, std::pair<double, double>> dk_cache;  // m -> (value, stderr)

    for (long long mll : ms) {
        int m = static_cast<int>(mll);
        double dK = dk_fixed, dK_err = 0.0;
        if (dk_auto) {
            auto it = dk_cache.find(m);
            if (it == dk_cache.end()) {
                const int res = a.resolution > 0 ? a.resolution : rvfl::default_resolution(m);
                rvfl::Target t = rvfl::make_builtin_target(a.target, m, res);
                rvfl::DimensionEstimate est =
                    t.domain.effective_dimension(a.dk_samples, a.seed);
                it = dk_cache.emplace(m, std::make_pair(est.value, est.stderr_)).first;
            }
            dK = it->second.first;
            dK_err = it->second.second;
        }
        for (double eps : epss) {
            Row r;
            r.m = m;
            r.eps = eps;
            r.dK = dK;
            r.dK_stderr = dK_err;
            r.sched = rvfl::schedule(m, eps, a.ell, a.R, a.sigma);
            r.regime = rvfl::theta_regime_report(r.sched);
            r.lg_main = rvfl::n_main_log10(m, eps, a.eta, a.ell, a.R, dK);
            r.lg_approx = rvfl::n_approx_log10(m, eps, a.eta, a.ell, a.R, dK);
            r.n_main = rvfl::n_main_integer(m, eps, a.eta, a.ell, a.R, dK);
            rows.push_back(std::move(r));
        }
    }

    auto sched_json = [](const rvfl::ParameterSchedule& s) {
        return json{{"alpha", s.alpha},   {"beta", s.beta},   {"gamma", s.gamma},
                    {"c_a", s.c_a},       {"Lambda", s.Lambda}, {"lambda", s.lambda},
                    {"theta", s.theta},   {"sigma", s.sigma}};
    };

    std::ostringstream os;
    if (a.format == "json") {
        json doc;
        doc["params"] = json{{"eta", a.eta},   {"ell", a.ell},     {"R", a.R},
                             {"sigma", a.sigma}, {"dK", a.dK},
                             {"dk_samples", a.dk_samples}, {"seed", a.seed}};
        json jrows = json::array();
        for (const Row& r : rows) {
            json jr{{"m", r.m},
                    {"epsilon", r.eps},
                    {"dK", r.dK},
                    {"schedule", sched_json(r.sched)},
                    {"log10_n_main", r.lg_main},
                    {"log10_n_approx", r.lg_approx},
                    {"theta_regime",
                     json{{"inv_theta", r.regime.inv_theta},
                          {"large_m_approx", r.regime.large_m_approx},
                          {"ratio", r.regime.ratio},
                          {"vm_root", r.regime.vm_root},
                          {"stirling", r.regime.stirling},
                          {"stirling_ratio", r.regime.stirling_ratio}}}};
            if (dk_auto) jr["dK_stderr"] = r.dK_stderr;
            if (r.n_main) jr["n_main"] = *r.n_main;
            jrows.push_back(std::move(jr));
        }
        doc["rows"] = std::move(jrows);
        if (rows.size() == 1) {
            doc["schedule"] = sched_json(rows[0].sched);
            doc["log10_n_main"] = rows[0].lg_main;
            doc["log10_n_approx"] = rows[0].lg_approx;
        }
        os << doc.dump(2) << '\n';
    } else if (a.format == "csv") {
        os << "m,epsilon,eta,ell,R,dK,alpha,beta,gamma,c_a,Lambda,lambda,theta,"
              "log10_n_main,log10_n_approx,n_main\n";
        for (const Row& r : rows) {
            std::vector<std::string> f{
                std::to_string(r.m), fmt(r.eps),          fmt(a.eta),
                fmt(a.ell),          fmt(a.R),            fmt(r.dK),
                fmt(r.sched.alpha),  fmt(r.sched.beta),   fmt(r.sched.gamma),
                fmt(r.sched.c_a),    fmt(r.sched.Lambda), fmt(r.sched.lambda),
                fmt(r.sched.theta),  fmt(r.lg_main),      fmt(r.lg_approx),
                r.n_main ? std::to_string(*r.n_main) : std::string()};
            os << rvfl::csv::make_row(f);
        }
    } else if (a.format == "text") {
        char line[512];
        std::snprintf(line, sizeof line, "%3s %9s %7s %8s %8s %12s %10s %12s %14s %14s\n",
                      "m", "eps", "dK", "alpha", "beta", "Lambda", "theta", "lg n_main",
                      "lg n_approx", "n_main");
        os << line;
        for (const Row& r : rows) {
            std::string nm = r.n_main ? std::to_string(*r.n_main) : "-";
            std::snprintf(line, sizeof line,
                          "%3d %9.4g %7.3f %8.5f %8.5f %12.5g %10.4g %12.6f %14.6f %14s\n",
                          r.m, r.eps, r.dK, r.sched.alpha, r.sched.beta, r.sched.Lambda,
                          r.sched.theta, r.lg_main, r.lg_approx, nm.c_str());
            os << line;
        }
    } else {
        throw UsageError("--format must be text, csv or json");
    }
    write_text(a.out, os.str());
    return kExitOk;
}

// ---------------------------------------------------------------------------
// validate-lemmas subcommand

struct ValidateArgs {
    rvfl::ValidationConfig cfg;
    std::string out = "-";
    std::string dump_kernel_table;
};

int run_validate(const ValidateArgs& a) {
    if (!a.dump_kernel_table.empty()) {
        rvfl::SmoothingKernel kernel(a.cfg.m, a.cfg.kernel_table_scale);
        std::ostringstream os;
        kernel.dump_table_csv(os);
        write_text(a.dump_kernel_table, os.str());
        return kExitOk;
    }
    std::vector<rvfl::CheckResult> results = rvfl::run_validation(a.cfg);
    for (const rvfl::CheckResult& r : results) {
        const char* tag = r.skipped ? "SKIP" : (r.pass ? "PASS" : "FAIL");
        std::fprintf(stderr, "[%s] %-28s observed=%.6g bound=%.6g margin=%.3g\n", tag,
                     r.check_id.c_str(), r.observed, r.bound, r.margin);
    }
    write_text(a.out, rvfl::results_to_json(results) + "\n");
    bool ok = rvfl::all_passed(results);
    std::fprintf(stderr, "%s\n", ok ? "all checks passed" : "CHECK FAILURES PRESENT");
    return ok ? kExitOk : kExitCheckFailed;
}

// ---------------------------------------------------------------------------
// experiment subcommand

struct ExperimentArgs {
    TargetSpec spec;
    double sigma = 1.0;
    double lambda = 20.0;
    double theta = 0.05;
    double eps = 0.0;  // > 0 derives lambda/theta from the schedule
    std::string n_list = "100,1000,10000";
    int seeds = 5;
    std::uint64_t master_seed = 20240901;
    double ridge = 0.0;
    std::string out_dir;
    std::string label = "experiment";
    bool dump_chain = false;
    bool estimate_dk = false;
    std::uint64_t dk_samples = 1000000;
    bool lambda_explicit = false;  // set from the parser
    bool eps_explicit = false;
};

int run_experiment(const ExperimentArgs& a) {
    if (a.spec.m > 3)
        throw UsageError("experiment needs the deterministic reference chain (m <= 3)");
    if (a.eps_explicit && a.lambda_explicit)
        throw UsageError("give either --eps or --lambda/--theta, not both");

    const TargetSpec spec = resolved(a.spec);
    rvfl::Target target = load_target(spec);
    rvfl::SampledFunction probe = rvfl::recenter(target.domain, target.values, target.ell);
    double lambda = a.lambda, theta = a.theta;
    std::optional<rvfl::ParameterSchedule> sched;
    if (a.eps > 0) {
        sched = rvfl::schedule(spec.m, a.eps, probe.ell, probe.R, a.sigma);
        lambda = sched->lambda;
        theta = sched->theta;
    }

    std::uint64_t volume_seed = rvfl::mix64(a.master_seed ^ 0xC0FFEEull);
    rvfl::Pipeline pipe = rvfl::build_pipeline(target, lambda, theta, a.sigma, volume_seed);
    const rvfl::McShaneExtension& ext = *pipe.extension;
    double zeta = ext.base().zeta;

    const std::vector<Eigen::VectorXd>& grid = pipe.sample_points;
    std::vector<double> original(pipe.sample_values.size());
    for (std::size_t i = 0; i < original.size(); ++i)
        original[i] = pipe.sample_values[i] + zeta;

    // Deterministic reference chain on the training grid.
    std::vector<double> h_vals(grid.size()), g_vals;
    if (a.dump_chain) g_vals.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        h_vals[i] = pipe.surrogate->h_quadrature(grid[i]).value;
        if (a.dump_chain) g_vals[i] = pipe.surrogate->g_quadrature(grid[i]).value;
    }

    rvfl::WeightDensity density(pipe.surrogate, a.sigma, ext.domain_radius(),
                                pipe.ktilde_volume);

    std::string base = (a.out_dir.empty() ? default_out_dir() : a.out_dir);
    std::filesystem::path dir = std::filesystem::path(base) / a.label;
    std::filesystem::create_directories(dir);

    json config{{"target", target_spec_json(spec)},
                {"sigma", a.sigma},
                {"lambda", lambda},
                {"theta", theta},
                {"eps", a.eps},
                {"n", a.n_list},
                {"seeds", a.seeds},
                {"master_seed", a.master_seed},
                {"ridge", a.ridge},
                {"label", a.label}};
    json manifest{{"version", rvfl::kVersion},
                  {"config", config},
                  {"config_hash", hex64(hash_bytes(config.dump()))},
                  {"master_seed", a.master_seed},
                  {"grid_points", grid.size()},
                  {"ell", ext.lipschitz()},
                  {"R", ext.domain_radius()},
                  {"M", ext.sup_abs()},
                  {"zeta", zeta},
                  {"ktilde_volume", pipe.ktilde_volume}};
    if (sched) {
        manifest["schedule"] = json{{"alpha", sched->alpha},   {"beta", sched->beta},
                                    {"gamma", sched->gamma},   {"Lambda", sched->Lambda},
                                    {"lambda", sched->lambda}, {"theta", sched->theta}};
    }
    if (a.estimate_dk) {
        rvfl::DimensionEstimate est =
            pipe.extension->base().domain.effective_dimension(a.dk_samples, a.master_seed);
        manifest["dK"] = est.value;
        manifest["dK_stderr"] = est.stderr_;
        manifest["dK_samples"] = a.dk_samples;
    }
    write_text((dir / "manifest.json").string(), manifest.dump(2) + "\n");

    if (a.dump_chain) {
        std::ostringstream os;
        std::vector<std::string> hdr;
        for (int d = 0; d < spec.m; ++d) hdr.push_back("x" + std::to_string(d));
        hdr.insert(hdr.end(), {"f", "g", "h"});
        os << rvfl::csv::make_row(hdr);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            std::vector<std::string> f;
            for (int d = 0; d < spec.m; ++d) f.push_back(fmt(grid[i][d]));
            f.push_back(fmt(pipe.sample_values[i]));
            f.push_back(fmt(g_vals[i]));
            f.push_back(fmt(h_vals[i]));
            os << rvfl::csv::make_row(f);
        }
        write_text((dir / "chain.csv").string(), os.str());
    }

    std::vector<long long> ns = parse_int_list(a.n_list);
    std::sort(ns.begin(), ns.end());

    std::ofstream csv_out(dir / "results.csv", std::ios::binary);
    if (!csv_out) throw std::runtime_error("cannot open results.csv for writing");
    csv_out << "n,seed,sup_f_constructive,sup_h_constructive,sup_f_ls,sup_h_ls,wall_ms\n";
    csv_out.flush();

    for (long long n : ns) {
        for (int s = 0; s < a.seeds; ++s) {
            // Layer seeds depend only on the seed index, so widths are nested.
            std::uint64_t layer_seed =
                rvfl::mix64(a.master_seed ^ (0x9E3779B97F4A7C15ull * (s + 1)));
            auto t0 = std::chrono::steady_clock::now();
            rvfl::HiddenLayer layer = rvfl::sample_hidden(static_cast<int>(n), spec.m, a.sigma,
                                                          ext.domain_radius(), layer_seed);
            rvfl::RvflNetwork cons = rvfl::build_constructive(layer, density, zeta);
            rvfl::RvflNetwork ls = rvfl::fit_least_squares(layer, grid, original, a.ridge);
            double sup_f_cons = rvfl::sup_error(cons, grid, original).value;
            double sup_h_cons = rvfl::sup_error(cons, grid, h_vals, zeta).value;
            double sup_f_ls = rvfl::sup_error(ls, grid, original).value;
            double sup_h_ls = rvfl::sup_error(ls, grid, h_vals, zeta).value;
            auto t1 = std::chrono::steady_clock::now();
            double wall_ms =
                std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(t1 - t0)
                    .count();
            std::vector<std::string> f{std::to_string(n),  std::to_string(s),
                                       fmt(sup_f_cons),    fmt(sup_h_cons),
                                       fmt(sup_f_ls),      fmt(sup_h_ls),
                                       fmt(wall_ms)};
            csv_out << rvfl::csv::make_row(f);
            csv_out.flush();
        }
    }
    if (!csv_out.flush()) throw std::runtime_error("write to results.csv failed");
    std::cerr << "experiment written to " << dir.string() << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// build / eval subcommands

struct BuildArgs {
    TargetSpec spec;
    double sigma = 1.0;
    double lambda = 20.0;
    double theta = 0.05;
    double eps = 0.0;
    int n = 1000;
    std::uint64_t seed = 20240901;
    std::string out;
    bool lambda_explicit = false;
    bool eps_explicit = false;
};

int run_build(const BuildArgs& a) {
    if (a.eps_explicit && a.lambda_explicit)
        throw UsageError("give either --eps or --lambda/--theta, not both");
    const TargetSpec spec = resolved(a.spec);
    rvfl::Target target = load_target(spec);
    rvfl::SampledFunction probe = rvfl::recenter(target.domain, target.values, target.ell);
    double lambda = a.lambda, theta = a.theta;
    if (a.eps > 0) {
        rvfl::ParameterSchedule sched =
            rvfl::schedule(spec.m, a.eps, probe.ell, probe.R, a.sigma);
        lambda = sched.lambda;
        theta = sched.theta;
    }
    std::uint64_t volume_seed = rvfl::mix64(a.seed ^ 0xC0FFEEull);
    rvfl::Pipeline pipe = rvfl::build_pipeline(target, lambda, theta, a.sigma, volume_seed);
    rvfl::WeightDensity density(pipe.surrogate, a.sigma, pipe.extension->domain_radius(),
                                pipe.ktilde_volume);
    rvfl::HiddenLayer layer = rvfl::sample_hidden(a.n, spec.m, a.sigma,
                                                  pipe.extension->domain_radius(), a.seed);
    rvfl::RvflNetwork net =
        rvfl::build_constructive(layer, density, pipe.extension->base().zeta);

    std::string out = a.out;
    if (out.empty())
        out = (std::filesystem::path(default_out_dir()) / "network.json").string();
    if (out == "-") {
        std::cout << rvfl::network_to_json(net) << "\n";
    } else {
        std::filesystem::path p(out);
        if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
        rvfl::save_network(net, out);
    }

    std::vector<double> original(pipe.sample_values.size());
    for (std::size_t i = 0; i < original.size(); ++i)
        original[i] = pipe.sample_values[i] + net.zeta;
    rvfl::GridSup sup = rvfl::sup_error(net, pipe.sample_points, original);
    std::fprintf(stderr,
                 "built constructive network: m=%d n=%d lambda=%g theta=%g sigma=%g\n"
                 "training-grid sup error %.6g; written to %s\n",
                 spec.m, a.n, lambda, theta, a.sigma, sup.value,
                 out == "-" ? "stdout" : out.c_str());
    return kExitOk;
}

struct EvalArgs {
    std::string network;
    std::string points;
    std::string out = "-";
};

int run_eval(const EvalArgs& a) {
    rvfl::RvflNetwork net = rvfl::load_network(a.network);
    std::vector<Eigen::VectorXd> pts = rvfl::csv::load_points(a.points);
    if (!pts.empty() && pts[0].size() != net.m)
        throw std::runtime_error("dimension mismatch: network expects m = " +
                                 std::to_string(net.m) + " but '" + a.points + "' has " +
                                 std::to_string(pts[0].size()) + " coordinate columns");
    std::vector<double> values = net.eval_batch(pts);
    std::ostringstream os;
    std::vector<std::string> hdr;
    for (int d = 0; d < net.m; ++d) hdr.push_back("x" + std::to_string(d));
    hdr.push_back("value");
    os << rvfl::csv::make_row(hdr);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        std::vector<std::string> f;
        for (int d = 0; d < net.m; ++d) f.push_back(fmt(pts[i][d]));
        f.push_back(fmt(values[i]));
        os << rvfl::csv::make_row(f);
    }
    write_text(a.out, os.str());
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Random-feature ReLU approximation toolkit"};
    app.set_version_flag("--version", std::string(rvfl::kVersion));
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "worker thread cap (0 = hardware)");

    BoundsArgs ba;
    ValidateArgs va;
    ExperimentArgs ea;
    BuildArgs bda;
    EvalArgs eva;
    std::string config_path;

    FieldSetters bounds_fields, validate_fields, experiment_fields, build_fields, eval_fields;

    // -- bounds ------------------------------------------------------------
    CLI::App* bounds = app.add_subcommand(
        "bounds", "parameter schedule and width lower bounds over a sweep");
    bounds->add_option("--m", ba.m_list, "dimensions, e.g. 3 or 1..5 or 1,2,4");
    bounds->add_option("--eps", ba.eps_list, "accuracies, comma separated");
    bounds->add_option("--eta", ba.eta, "failure probability in (0, 1)");
    bounds->add_option("--ell", ba.ell, "Lipschitz constant");
    bounds->add_option("--R", ba.R, "circumradius of the domain");
    bounds->add_option("--sigma", ba.sigma, "weight scale (schedule only)");
    bounds->add_option("--dK", ba.dK, "effective dimension, or 'auto' to estimate");
    bounds->add_option("--target", ba.target, "builtin target used when --dK auto");
    bounds->add_option("--resolution", ba.resolution,
                       "lattice resolution for --dK auto (0 = per-m automatic)");
    bounds->add_option("--dk-samples", ba.dk_samples, "Monte Carlo samples for --dK auto");
    bounds->add_option("--seed", ba.seed, "seed for --dK auto");
    bounds->add_option("--format", ba.format, "text, csv or json");
    bounds->add_flag_callback("--json", [&ba] { ba.format = "json"; },
                              "shorthand for --format json");
    bounds->add_option("--out", ba.out, "output path ('-' = stdout)");
    bounds->add_option("--config", config_path, "JSON config file (flags override)");
    add_field(bounds_fields, "m", ba.m_list);
    add_field(bounds_fields, "eps", ba.eps_list);
    add_field(bounds_fields, "eta", ba.eta);
    add_field(bounds_fields, "ell", ba.ell);
    add_field(bounds_fields, "R", ba.R);
    add_field(bounds_fields, "sigma", ba.sigma);
    add_field(bounds_fields, "dK", ba.dK);
    add_field(bounds_fields, "target", ba.target);
    add_field(bounds_fields, "resolution", ba.resolution);
    add_field(bounds_fields, "dk-samples", ba.dk_samples);
    add_field(bounds_fields, "seed", ba.seed);
    add_field(bounds_fields, "format", ba.format);
    add_field(bounds_fields, "out", ba.out);

    // -- validate-lemmas ----------------------------------------------------
    CLI::App* validate = app.add_subcommand(
        "validate-lemmas", "run the numerical validation suite and emit a JSON report");
    validate->add_option("--m", va.cfg.m, "dimension");
    validate->add_option("--target", va.cfg.target, rvfl::builtin_target_help());
    validate->add_option("--resolution", va.cfg.resolution, "samples per axis (0 = per-m default)");
    validate->add_option("--sigma", va.cfg.sigma, "weight scale");
    validate->add_option("--lambda", va.cfg.lambda, "smoothing frequency scale");
    validate->add_option("--theta", va.cfg.theta, "truncation fraction in (0, 1)");
    validate->add_option("--grid-points", va.cfg.grid_points, "sup-grid nodes per axis");
    validate->add_option("--mc-samples", va.cfg.mc_samples,
                         "Monte Carlo draws for the sampling-identity check");
    validate->add_option("--seeds", va.cfg.seeds, "concentration repetitions");
    validate->add_option("--network-n", va.cfg.network_n, "network width for concentration");
    validate->add_option("--seed", va.cfg.master_seed, "master seed");
    validate->add_option("--dump-kernel-table", va.dump_kernel_table,
                         "write the kernel table CSV to this path and exit");
    validate->add_option("--kernel-table-scale", va.cfg.kernel_table_scale,
                         "corrupt the kernel table by this factor (negative control)")
        ->group("");
    validate->add_option("--out", va.out, "report path ('-' = stdout)");
    validate->add_option("--config", config_path, "JSON config file (flags override)");
    add_field(validate_fields, "m", va.cfg.m);
    add_field(validate_fields, "target", va.cfg.target);
    add_field(validate_fields, "resolution", va.cfg.resolution);
    add_field(validate_fields, "sigma", va.cfg.sigma);
    add_field(validate_fields, "lambda", va.cfg.lambda);
    add_field(validate_fields, "theta", va.cfg.theta);
    add_field(validate_fields, "grid-points", va.cfg.grid_points);
    add_field(validate_fields, "mc-samples", va.cfg.mc_samples);
    add_field(validate_fields, "seeds", va.cfg.seeds);
    add_field(validate_fields, "network-n", va.cfg.network_n);
    add_field(validate_fields, "seed", va.cfg.master_seed);
    add_field(validate_fields, "kernel-table-scale", va.cfg.kernel_table_scale);
    add_field(validate_fields, "out", va.out);

    // -- experiment ----------------------------------------------------------
    CLI::App* experiment = app.add_subcommand(
        "experiment", "sup-error sweep over widths and seeds; CSV + manifest output");
    experiment->add_option("--target", ea.spec.target,
                           "builtin target name or CSV path (m columns + value)");
    experiment->add_option("--m", ea.spec.m, "dimension (<= 3)");
    experiment->add_option("--resolution", ea.spec.resolution, "samples per axis (0 = per-m default)");
    experiment->add_option("--ell", ea.spec.ell, "Lipschitz constant (0 = estimate)");
    experiment->add_option("--sigma", ea.sigma, "weight scale");
    CLI::Option* exp_lambda =
        experiment->add_option("--lambda", ea.lambda, "smoothing frequency scale");
    CLI::Option* exp_theta =
        experiment->add_option("--theta", ea.theta, "truncation fraction");
    CLI::Option* exp_eps = experiment->add_option(
        "--eps", ea.eps, "derive lambda/theta from the schedule at this accuracy");
    experiment->add_option("--n", ea.n_list, "widths, e.g. 100,1000,10000");
    experiment->add_option("--seeds", ea.seeds, "independent layers per width");
    experiment->add_option("--master-seed", ea.master_seed, "master seed");
    experiment->add_option("--ridge", ea.ridge, "ridge for the least-squares fit");
    experiment->add_option("--out-dir", ea.out_dir,
                           "output root (default $RVFL_OUT_DIR or '.')");
    experiment->add_option("--label", ea.label, "output subdirectory name");
    experiment->add_flag("--dump-chain", ea.dump_chain,
                         "also write f/g/h on the training grid");
    experiment->add_flag("--estimate-dk", ea.estimate_dk,
                         "record the effective dimension in the manifest");
    experiment->add_option("--dk-samples", ea.dk_samples, "samples for --estimate-dk");
    experiment->add_option("--config", config_path, "JSON config file (flags override)");
    add_field(experiment_fields, "target", ea.spec.target);
    add_field(experiment_fields, "m", ea.spec.m);
    add_field(experiment_fields, "resolution", ea.spec.resolution);
    add_field(experiment_fields, "ell", ea.spec.ell);
    add_field(experiment_fields, "sigma", ea.sigma);
    experiment_fields["lambda"] = [&ea](const json& j) {
        ea.lambda = j.get<double>();
        ea.lambda_explicit = true;
    };
    experiment_fields["theta"] = [&ea](const json& j) {
        ea.theta = j.get<double>();
        ea.lambda_explicit = true;
    };
    experiment_fields["eps"] = [&ea](const json& j) {
        ea.eps = j.get<double>();
        ea.eps_explicit = true;
    };
    add_field(experiment_fields, "n", ea.n_list);
    add_field(experiment_fields, "seeds", ea.seeds);
    add_field(experiment_fields, "master-seed", ea.master_seed);
    add_field(experiment_fields, "ridge", ea.ridge);
    add_field(experiment_fields, "out-dir", ea.out_dir);
    add_field(experiment_fields, "label", ea.label);
    add_field(experiment_fields, "dump-chain", ea.dump_chain);
    add_field(experiment_fields, "estimate-dk", ea.estimate_dk);
    add_field(experiment_fields, "dk-samples", ea.dk_samples);

    // -- build ---------------------------------------------------------------
    CLI::App* build = app.add_subcommand(
        "build", "construct a network for a target and serialize it as JSON");
    build->add_option("--target", bda.spec.target, "builtin target name or CSV path");
    build->add_option("--m", bda.spec.m, "dimension");
    build->add_option("--resolution", bda.spec.resolution, "samples per axis (0 = per-m default)");
    build->add_option("--ell", bda.spec.ell, "Lipschitz constant (0 = estimate)");
    build->add_option("--sigma", bda.sigma, "weight scale");
    CLI::Option* bld_lambda =
        build->add_option("--lambda", bda.lambda, "smoothing frequency scale");
    CLI::Option* bld_theta = build->add_option("--theta", bda.theta, "truncation fraction");
    CLI::Option* bld_eps = build->add_option(
        "--eps", bda.eps, "derive lambda/theta from the schedule at this accuracy");
    build->add_option("--n", bda.n, "network width");
    build->add_option("--seed", bda.seed, "hidden-layer seed");
    build->add_option("--out", bda.out, "network path (default $RVFL_OUT_DIR/network.json)");
    build->add_option("--config", config_path, "JSON config file (flags override)");
    add_field(build_fields, "target", bda.spec.target);
    add_field(build_fields, "m", bda.spec.m);
    add_field(build_fields, "resolution", bda.spec.resolution);
    add_field(build_fields, "ell", bda.spec.ell);
    add_field(build_fields, "sigma", bda.sigma);
    build_fields["lambda"] = [&bda](const json& j) {
        bda.lambda = j.get<double>();
        bda.lambda_explicit = true;
    };
    build_fields["theta"] = [&bda](const json& j) {
        bda.theta = j.get<double>();
        bda.lambda_explicit = true;
    };
    build_fields["eps"] = [&bda](const json& j) {
        bda.eps = j.get<double>();
        bda.eps_explicit = true;
    };
    add_field(build_fields, "n", bda.n);
    add_field(build_fields, "seed", bda.seed);
    add_field(build_fields, "out", bda.out);

    // -- eval ------------------------------------------------------------------
    CLI::App* eval = app.add_subcommand("eval", "evaluate a serialized network on points");
    eval->add_option("--network", eva.network, "network JSON path")->required();
    eval->add_option("--points", eva.points, "points CSV (m coordinate columns)")->required();
    eval->add_option("--out", eva.out, "output CSV ('-' = stdout)");
    eval->add_option("--config", config_path, "JSON config file (flags override)");
    add_field(eval_fields, "network", eva.network);
    add_field(eval_fields, "points", eva.points);
    add_field(eval_fields, "out", eva.out);

    // Values from --config fill in before parsing, so flags override them.
    Prescan pre = prescan_args(argc, argv,
                               {"bounds", "validate-lemmas", "experiment", "build", "eval"});
    try {
        if (!pre.config_path.empty()) {
            if (pre.subcommand == "bounds") apply_config_file(pre.config_path, bounds_fields);
            else if (pre.subcommand == "validate-lemmas")
                apply_config_file(pre.config_path, validate_fields);
            else if (pre.subcommand == "experiment")
                apply_config_file(pre.config_path, experiment_fields);
            else if (pre.subcommand == "build") apply_config_file(pre.config_path, build_fields);
            else if (pre.subcommand == "eval") apply_config_file(pre.config_path, eval_fields);
            else throw std::runtime_error("--config requires a subcommand");
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    ea.lambda_explicit = ea.lambda_explicit || exp_lambda->count() > 0 || exp_theta->count() > 0;
    ea.eps_explicit = ea.eps_explicit || exp_eps->count() > 0;
    bda.lambda_explicit =
        bda.lambda_explicit || bld_lambda->count() > 0 || bld_theta->count() > 0;
    bda.eps_explicit = bda.eps_explicit || bld_eps->count() > 0;

    if (threads > 0) rvfl::set_thread_limit(threads);

    try {
        if (bounds->parsed()) return run_bounds(ba);
        if (validate->parsed()) return run_validate(va);
        if (experiment->parsed()) return run_experiment(ea);
        if (build->parsed()) return run_build(bda);
        if (eval->parsed()) return run_eval(eva);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCheckFailed;
    }
    std::cerr << "error: no subcommand\n";
    return kExitUsage;
}
