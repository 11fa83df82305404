// boxdim: command-line front end for the box-counting laboratory.
//
//   boxdim clt-l --model stable --alpha 0.5 --deltas 1e-1,1e-2,1e-3,1e-4 --n 2000 --seed 7
//
// Every run writes <out>/<subcommand>-<timestamp>/{manifest,report.csv,summary.json,plots/}.
// Exit status: 0 all verdicts pass, 1 a verdict failed, 2 configuration error,
// 3 runtime failure.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "boxdim/cover_counts.hpp"
#include "boxdim/errors.hpp"
#include "boxdim/experiments.hpp"
#include "boxdim/model_io.hpp"
#include "boxdim/path_engine.hpp"
#include "boxdim/report.hpp"

#ifndef BOXDIM_BUILD_ID
#define BOXDIM_BUILD_ID "unknown"
#endif

namespace fs = std::filesystem;
using namespace boxdim;

namespace {

struct Options {
    // model
    std::string model = "stable";
    double alpha = 0.5;
    double rate = 1.0;
    double shape = 1.0;
    double cut = 1.0;
    double drift = 0.0;
    std::string tail_name;
    std::string model_file;
    // run
    double t = 1.0;
    std::vector<double> deltas;
    std::size_t n = 0;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    std::string out;
    std::optional<double> eps;
    double eps_scale = 1.0;
    // experiment knobs
    std::size_t renewal_n = 0;
    double r = 0.5;
    bool no_escalate = false;
    bool no_auto_horizon = false;
    // simulate / count
    std::uint64_t replica = 0;
    std::string skeleton_file;
    // diagnose / condition2
    double alpha_param = 1.0;
    double c_const = 1.0;
    double jp_delta = 1e-2;
    std::size_t mc_n = 10000;
    std::string growth = "I";
    int k_lo = 5;
    int k_hi = 20;
};

void add_model_options(CLI::App* app, Options& o) {
    app->add_option("--model", o.model, "stable | gamma | truncated_stable | custom | drift")
        ->check(CLI::IsMember({"stable", "gamma", "truncated_stable", "custom", "drift"}));
    app->add_option("--alpha", o.alpha, "stability index");
    app->add_option("--rate", o.rate, "gamma rate");
    app->add_option("--shape", o.shape, "gamma shape");
    app->add_option("--cut", o.cut, "truncation point of truncated_stable");
    app->add_option("--drift", o.drift, "drift d");
    app->add_option("--tail", o.tail_name, "built-in tail for --model custom");
    app->add_option("--model-file", o.model_file, "JSON model definition (overrides the model flags)");
}

void add_run_options(CLI::App* app, Options& o, bool with_deltas = true) {
    app->add_option("--t", o.t, "horizon");
    if (with_deltas) app->add_option("--deltas", o.deltas, "decreasing delta grid")->delimiter(',');
    app->add_option("--n", o.n, "number of paths / samples");
    app->add_option("--seed", o.seed, "64-bit seed");
    app->add_option("--threads", o.threads, "worker threads (output does not depend on it)");
    app->add_option("--out", o.out, "output directory (default $BOXDIM_OUT or ./runs)");
    app->add_option("--eps", o.eps, "explicit cutoff instead of the auto rule");
    app->add_option("--eps-scale", o.eps_scale, "multiplier on the cutoff");
}

GrowthFunction growth_of(const std::string& s) {
    if (s == "I") return GrowthFunction::integrated_tail;
    if (s == "H") return GrowthFunction::truncated_mean;
    throw ConfigError("--growth must be I or H");
}

LevyModel build_model(const Options& o) {
    if (!o.model_file.empty()) return load_model_file(o.model_file);
    nlohmann::json j;
    j["family"] = o.model;
    j["drift"] = o.drift;
    if (o.model == "stable") {
        j["alpha"] = o.alpha;
    } else if (o.model == "gamma") {
        j["rate"] = o.rate;
        j["shape"] = o.shape;
    } else if (o.model == "truncated_stable") {
        j["alpha"] = o.alpha;
        j["cut"] = o.cut;
    } else if (o.model == "custom") {
        if (o.tail_name.empty()) throw ConfigError("--model custom needs --tail");
        j["tail"] = o.tail_name;
    }
    return model_from_json(j);
}

fs::path make_run_dir(const Options& o, const std::string& sub) {
    fs::path base = o.out;
    if (base.empty()) {
        const char* env = std::getenv("BOXDIM_OUT");
        base = env && *env ? env : "runs";
    }
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y%m%d-%H%M%S", std::localtime(&now));
    fs::path dir = base / (sub + "-" + stamp);
    for (int k = 2; fs::exists(dir); ++k) dir = base / (sub + "-" + stamp + "-" + std::to_string(k));
    fs::create_directories(dir / "plots");
    return dir;
}

int finish(const ExperimentReport& rep, const fs::path& dir, const std::string& manifest) {
    write_text_file(dir / "manifest", manifest);
    write_text_file(dir / "report.csv", report_csv(rep));
    write_text_file(dir / "summary.json", summary_json(rep, BOXDIM_BUILD_ID).dump(2) + "\n");
    for (const auto& [name, body] : rep.tables) write_text_file(dir / name, body);
    write_report_plots(rep, dir / "plots");
    for (const auto& note : rep.notes) std::cout << "note: " << note << '\n';
    for (const auto& r : rep.rows) {
        if (r.verdict == "INFO") continue;
        std::cout << r.verdict << "  " << r.statistic << "  delta=" << fmt17(r.delta) << "  value=" << fmt17(r.value)
                  << "  target=" << fmt17(r.target) << "  tol=" << fmt17(r.tolerance) << '\n';
    }
    std::cout << (rep.passed() ? "PASS" : "FAIL") << "  " << rep.name << " -> " << dir.string() << '\n';
    return rep.passed() ? 0 : 1;
}

const std::map<std::string, ExperimentKind>& experiment_kinds() {
    static const std::map<std::string, ExperimentKind> kinds = {
        {"lln-n", ExperimentKind::lln_N}, {"lln-l", ExperimentKind::lln_L},  {"clt-n", ExperimentKind::clt_N},
        {"clt-l", ExperimentKind::clt_L}, {"ratio", ExperimentKind::ratio_NL}, {"graph", ExperimentKind::graph_identity}};
    return kinds;
}

// Fills the grid and sample sizes a subcommand would otherwise default, so
// the run and the manifest see the same values.
void resolve_defaults(Options& o, const std::string& name) {
    auto grid = [&](std::vector<double> d) {
        if (o.deltas.empty()) o.deltas = std::move(d);
    };
    if (name == "renewal") {
        grid({1e-2, 1e-3, 1e-4});
        if (!o.n) o.n = 10000;
    } else if (name == "count") {
        grid({1e-1, 1e-2, 1e-3});
        if (!o.n) o.n = 1;
    } else if (name == "diagnose") {
        const DiagnoseConfig dc;
        grid(dc.deltas);
        if (!o.renewal_n) o.renewal_n = dc.renewal_n;
    } else if (auto it = experiment_kinds().find(name); it != experiment_kinds().end()) {
        const auto cfg = default_config(it->second);
        grid(cfg.deltas);
        if (!o.n) o.n = cfg.n_paths;
        if (!o.renewal_n) o.renewal_n = cfg.renewal_n;
    }
}

std::string toml_number(double x) {
    const std::string s = fmt17(x);
    return s.find_first_of(".en") == std::string::npos ? s + ".0" : s;
}

// TOML section that replays the run through --config.
std::string manifest_text(const std::string& name, const Options& o, const LevyModel& model) {
    std::ostringstream m;
    m << "# " << name << ", build " << BOXDIM_BUILD_ID << "\n";
    m << "# resolved model: " << model.description() << "\n";
    if (!o.model_file.empty()) m << "# model file: " << o.model_file << "\n";
    m << "[" << name << "]\n";
    const auto mj = model_to_json(model);
    m << "model = \"" << mj.at("family").get<std::string>() << "\"\n";
    for (const char* key : {"alpha", "rate", "shape", "cut", "drift"}) {
        if (mj.contains(key)) m << key << " = " << toml_number(mj.at(key).get<double>()) << "\n";
    }
    if (mj.contains("tail")) m << "tail = \"" << mj.at("tail").get<std::string>() << "\"\n";
    if (name == "condition2") {
        m << "k-lo = " << o.k_lo << "\nk-hi = " << o.k_hi << "\ngrowth = \"" << o.growth << "\"\n";
        return m.str();
    }
    m << "t = " << toml_number(o.t) << "\n";
    m << "deltas = [";
    for (std::size_t i = 0; i < o.deltas.size(); ++i) m << (i ? ", " : "") << toml_number(o.deltas[i]);
    m << "]\n";
    if (o.n) m << "n = " << o.n << "\n";
    m << "seed = " << o.seed << "\n";
    m << "threads = " << o.threads << "\n";
    if (o.eps) {
        m << "eps = " << toml_number(*o.eps) << "\n";
    } else {
        m << "# eps: auto rule from the smallest delta\n";
    }
    m << "eps-scale = " << toml_number(o.eps_scale) << "\n";
    if (name == "simulate") m << "replica = " << o.replica << "\n";
    if (name == "count" && !o.skeleton_file.empty()) m << "skeleton = \"" << o.skeleton_file << "\"\n";
    if (name == "diagnose") {
        m << "alpha-param = " << toml_number(o.alpha_param) << "\nc-const = " << toml_number(o.c_const)
          << "\njp-delta = " << toml_number(o.jp_delta) << "\nmc-n = " << o.mc_n << "\nrenewal-n = " << o.renewal_n
          << "\ngrowth = \"" << o.growth << "\"\n";
    }
    if (experiment_kinds().count(name)) m << "renewal-n = " << o.renewal_n << "\n";
    if (name == "lln-l") m << "r = " << toml_number(o.r) << "\n";
    if (name == "clt-n") m << "no-escalate = " << (o.no_escalate ? "true" : "false") << "\n";
    if (name == "ratio") m << "no-auto-horizon = " << (o.no_auto_horizon ? "true" : "false") << "\n";
    return m.str();
}

ExperimentConfig experiment_config(ExperimentKind kind, const Options& o) {
    ExperimentConfig cfg = default_config(kind);
    cfg.model = build_model(o);
    cfg.t = o.t;
    if (!o.deltas.empty()) cfg.deltas = o.deltas;
    if (o.n) cfg.n_paths = o.n;
    cfg.seed = o.seed;
    cfg.threads = o.threads;
    cfg.cutoff = o.eps;
    cfg.cutoff_scale = o.eps_scale;
    if (o.renewal_n) cfg.renewal_n = o.renewal_n;
    cfg.subsequence_r = o.r;
    if (o.no_escalate) cfg.escalation_deltas.clear();
    cfg.auto_horizon = !o.no_auto_horizon;
    return cfg;
}

ExperimentReport run_simulate(const Options& o, const fs::path& dir) {
    const LevyModel model = build_model(o);
    SimConfig cfg;
    cfg.horizon = o.t;
    cfg.cutoff = o.eps;
    if (!o.deltas.empty()) cfg.delta_min = *std::min_element(o.deltas.begin(), o.deltas.end());
    cfg.cutoff_scale = o.eps_scale;
    cfg.seed = o.seed;
    cfg.replica = o.replica;
    const auto skel = sample_skeleton(model, cfg);
    write_skeleton_csv(skel, dir / "skeleton.csv");
    ExperimentReport rep;
    rep.name = "simulate";
    rep.seed = o.seed;
    const double expected = model.has_jumps() ? o.t * tail(model, skel.cutoff) : 0.0;
    rep.rows.push_back({"simulate", skel.cutoff, "event_count", static_cast<double>(skel.events.size()), expected,
                        0.0, std::sqrt(expected), "INFO"});
    rep.rows.push_back({"simulate", skel.cutoff, "effective_drift", skel.effective_drift, NAN, 0.0, 0.0, "INFO"});
    rep.rows.push_back({"simulate", skel.cutoff, "value_at_t", value_at(skel, skel.horizon), NAN, 0.0, 0.0, "INFO"});
    return rep;
}

ExperimentReport run_count(const Options& o) {
    const std::vector<double>& deltas = o.deltas;
    Campaign c;
    if (!o.skeleton_file.empty()) {
        const auto skel = read_skeleton_csv(o.skeleton_file);
        c.cutoff = skel.cutoff;
        c.horizon = skel.horizon;
        c.deltas = deltas;
        c.paths.emplace_back();
        for (double d : deltas) c.paths[0].push_back(cover_all(skel, d, true));
    } else {
        c = run_campaign(build_model(o), o.t, deltas, o.n, o.seed, o.threads, o.eps, o.eps_scale, true);
    }
    ExperimentReport rep;
    rep.name = "count";
    rep.seed = o.seed;
    for (std::size_t k = 0; k < deltas.size(); ++k) {
        const double d = deltas[k];
        double sN = 0, sM = 0, sL = 0, sY = 0, sMG = 0, sNG = 0;
        std::size_t bad_order = 0, bad_mesh = 0;
        for (const auto& p : c.paths) {
            const auto& r = p[k];
            sN += r.N, sM += r.M, sL += r.L, sY += r.Y, sMG += r.MG, sNG += r.NG;
            bad_order += !(r.N <= r.M && r.M <= 2 * r.N);
            bad_mesh += r.MG != static_cast<std::int64_t>(std::floor(c.horizon / d)) + r.M;
        }
        const double n = static_cast<double>(c.paths.size());
        for (auto [name, sum] : std::vector<std::pair<std::string, double>>{
                 {"mean_N", sN}, {"mean_M", sM}, {"mean_L", sL}, {"mean_Y", sY}, {"mean_MG", sMG}, {"mean_NG", sNG}}) {
            rep.rows.push_back({"count", d, name, sum / n, NAN, 0.0, 0.0, "INFO"});
        }
        rep.rows.push_back({"count", d, "N_le_M_le_2N_violations", static_cast<double>(bad_order), 0.0, 0.0, 0.0,
                            bad_order == 0 ? "PASS" : "FAIL"});
        rep.rows.push_back({"count", d, "mesh_identity_violations", static_cast<double>(bad_mesh), 0.0, 0.0, 0.0,
                            bad_mesh == 0 ? "PASS" : "FAIL"});
    }
    rep.tables.emplace_back("counts.csv", cover_rows_csv(c));
    return rep;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Box-counting laboratory for subordinator ranges"};
    app.set_config("--config", "", "TOML/INI file supplying any of the flags");
    app.require_subcommand(1);
    Options o;

    std::map<std::string, CLI::App*> subs;
    auto sub = [&](const std::string& name, const std::string& help) {
        auto* s = app.add_subcommand(name, help);
        add_model_options(s, o);
        subs[name] = s;
        return s;
    };
    auto* simulate = sub("simulate", "sample one skeleton and dump it as CSV");
    add_run_options(simulate, o);
    simulate->add_option("--replica", o.replica, "replica index");
    auto* count = sub("count", "all counts on simulated or dumped skeletons");
    add_run_options(count, o);
    count->add_option("--skeleton", o.skeleton_file, "skeleton CSV written by simulate");
    auto* renewal = sub("renewal", "renewal function estimates");
    add_run_options(renewal, o);
    auto* diagnose = sub("diagnose", "Jain-Pruitt objects and renewal probes");
    add_run_options(diagnose, o);
    diagnose->add_option("--alpha-param", o.alpha_param, "the alpha in t = (1+alpha)U");
    diagnose->add_option("--c-const", o.c_const, "constant in the concentration bound");
    diagnose->add_option("--jp-delta", o.jp_delta, "delta for the bound check");
    diagnose->add_option("--mc-n", o.mc_n, "Monte Carlo paths for the empirical probability");
    diagnose->add_option("--renewal-n", o.renewal_n, "samples per delta for renewal probes");
    diagnose->add_option("--growth", o.growth, "I (integrated tail) or H (truncated mean)");
    for (const char* name : {"lln-n", "lln-l", "clt-n", "clt-l", "ratio", "graph"}) {
        auto* s = sub(name, std::string("experiment ") + name);
        add_run_options(s, o);
        s->add_option("--renewal-n", o.renewal_n, "renewal-stage samples");
        if (std::string(name) == "lln-l") s->add_option("--r", o.r, "subsequence ratio r");
        if (std::string(name) == "clt-n") s->add_flag("--no-escalate", o.no_escalate, "skip smaller-delta reruns");
        if (std::string(name) == "ratio") s->add_flag("--no-auto-horizon", o.no_auto_horizon, "keep t as given");
    }
    auto* cond2 = sub("condition2", "probe liminf F(2d)/F(d) on d = 2^-k");
    cond2->add_option("--k-lo", o.k_lo, "first exponent");
    cond2->add_option("--k-hi", o.k_hi, "last exponent");
    cond2->add_option("--growth", o.growth, "I or H");
    cond2->add_option("--out", o.out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    std::string name;
    for (const auto& [n, s] : subs) {
        if (s->parsed()) name = n;
    }
    try {
        resolve_defaults(o, name);
        const LevyModel model = build_model(o);  // fail before creating the run directory
        const fs::path dir = make_run_dir(o, name);
        const std::string manifest = manifest_text(name, o, model);

        ExperimentReport rep;
        if (name == "simulate") {
            rep = run_simulate(o, dir);
        } else if (name == "count") {
            rep = run_count(o);
        } else if (name == "renewal") {
            rep = run_renewal_table(model, o.deltas, o.n, o.seed, o.threads, o.eps_scale);
        } else if (name == "diagnose") {
            DiagnoseConfig dc;
            dc.model = model;
            dc.deltas = o.deltas;
            dc.alpha_param = o.alpha_param;
            dc.c_const = o.c_const;
            dc.jp_delta = o.jp_delta;
            dc.mc_n = o.mc_n;
            dc.renewal_n = o.renewal_n;
            dc.seed = o.seed;
            dc.threads = o.threads;
            dc.cutoff_scale = o.eps_scale;
            dc.growth = growth_of(o.growth);
            rep = run_diagnostics(dc);
        } else if (name == "condition2") {
            rep = run_condition2(model, o.k_lo, o.k_hi, growth_of(o.growth));
        } else {
            const auto kind = experiment_kinds().at(name);
            rep = run_experiment(kind, experiment_config(kind, o));
        }
        return finish(rep, dir, manifest);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
