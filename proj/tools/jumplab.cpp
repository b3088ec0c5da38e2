// jumplab: sequential jump detection on price series, the simulation study
// around it, staggered-window feature pipelines with binary classifiers, and
// the two-subordinator stochastic volatility model's analytics.
//
// Every subcommand resolves its full configuration (file + flags + defaults)
// and echoes it into each artifact it writes, so any output can be reproduced
// from the artifact alone. Exit codes: 0 success, 2 configuration/validation
// error, 1 runtime failure.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "jumplab/bns/correlation.hpp"
#include "jumplab/bns/laplace.hpp"
#include "jumplab/bns/simulate.hpp"
#include "jumplab/io/artifacts.hpp"
#include "jumplab/ml/classifier.hpp"
#include "jumplab/pipeline/rebalance.hpp"
#include "jumplab/study/study.hpp"

namespace jl = jumplab;
using nlohmann::json;

namespace {

struct ToolConfig {
    // Shared detector / study knobs.
    std::uint64_t seed = 1;
    std::string out_dir = ".";
    std::size_t n = 30;
    std::size_t p_star = 8;
    std::size_t n_sims = 10;
    double alpha0 = 0.1;
    double t_max = 10.0;
    double dt = 1e-3;
    double a_max = 50.0;
    double l = -1.0;
    std::string gamma_variant = "squared";  // or "2log"
    double nu_mean = 1.0;
    double nu_scale = 1.0;
    bool fit_nu = false;
    std::string date_column = "date";
    std::string close_column = "close";

    // simulate
    std::string sim_class = "control";
    std::size_t n_processes = 0;  // 0 = class default
    std::size_t n_periods = 0;    // 0 = class default
    double start_value = 100.0;

    // detect / pipeline input
    std::string input;

    // pipeline
    std::string features = "both";  // percent | ref | both
    std::string split = "T1";       // T1 | T2 | custom
    std::int64_t train_lo = 0, train_hi = 0, test_lo = 0, test_hi = 0;
    double rebalance_ratio = 1.0;
    bool no_rebalance = false;
    bool emit_frames = false;
    std::vector<std::string> classifiers{"logistic", "decision-tree", "random-forest",
                                         "feedforward-net"};
    double logistic_rate = 0.5;
    std::size_t logistic_epochs = 500;
    double logistic_l2 = 0.0;
    std::size_t tree_depth = 6;
    std::size_t forest_trees = 100;
    std::size_t net_hidden = 32;
    std::size_t net_epochs = 200;
    double net_rate = 0.5;

    // bns
    std::string bns_mode = "path";  // path | correlation | laplace
    double mu = 0.0, beta = 0.0, rho = 0.0, lambda = 1.0, theta = 0.5,
           sigma0_sq = 0.04;
    double z_mean = 1.0, z_scale = 1.0, z_rate = 1.0;
    double zb_mean = 2.0, zb_scale = 1.0, zb_rate = 1.0;
    double t1 = 1.0;
    std::size_t steps = 1000;
    std::size_t n_paths = 100;
    double corr_s = 0.5, corr_t = 1.0;
    double z_arg = 0.1;
    double x_t = 0.0;
    double sigma_t_sq = -1.0;  // < 0: use sigma0_sq
};

jl::GammaVariant gamma_variant_of(const ToolConfig& c) {
    if (c.gamma_variant == "squared") return jl::GammaVariant::log1p_squared;
    if (c.gamma_variant == "2log") return jl::GammaVariant::two_log1p;
    throw std::invalid_argument("gamma-variant must be 'squared' or '2log'");
}

void validate_common(const ToolConfig& c) {
    if (c.n < 2) throw std::invalid_argument("n must be >= 2");
    if (!(c.alpha0 > 0.0 && c.alpha0 < 1.0))
        throw std::invalid_argument("alpha0 must lie in (0,1)");
    if (c.p_star < 1 || c.p_star > c.n_sims)
        throw std::invalid_argument("need 1 <= p_star <= n_sims");
    if (!(c.t_max > 0.0) || !(c.dt > 0.0))
        throw std::invalid_argument("t_max and dt must be > 0");
    if (!(c.a_max > 0.0)) throw std::invalid_argument("a_max must be > 0");
    if (!(c.l < 0.0)) throw std::invalid_argument("l must be < 0");
    jl::InverseGaussianParams{c.nu_mean, c.nu_scale}.validate();
    gamma_variant_of(c);
}

jl::DetectorConfig detector_config(const ToolConfig& c) {
    jl::DetectorConfig cfg;
    cfg.alpha0 = c.alpha0;
    cfg.p_star = c.p_star;
    cfg.n_sims = c.n_sims;
    cfg.l = c.l;
    cfg.a_max = c.a_max;
    cfg.sim.t_max = c.t_max;
    cfg.sim.dt = c.dt;
    cfg.gamma_variant = gamma_variant_of(c);
    return cfg;
}

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

jl::ConfigEcho common_echo(const ToolConfig& c, const std::string& command) {
    return {
        {"command", command},
        {"seed", std::to_string(c.seed)},
        {"n", std::to_string(c.n)},
        {"p_star", std::to_string(c.p_star)},
        {"n_sims", std::to_string(c.n_sims)},
        {"alpha0", fmt(c.alpha0)},
        {"t_max", fmt(c.t_max)},
        {"dt", fmt(c.dt)},
        {"a_max", fmt(c.a_max)},
        {"l", fmt(c.l)},
        {"gamma_variant", c.gamma_variant},
        {"nu_mean", fmt(c.nu_mean)},
        {"nu_scale", fmt(c.nu_scale)},
    };
}

std::filesystem::path out_path(const ToolConfig& c, const std::string& name) {
    std::filesystem::create_directories(c.out_dir);
    return std::filesystem::path(c.out_dir) / name;
}

void write_json_artifact(const ToolConfig& c, const std::string& name, json j) {
    const auto path = out_path(c, name);
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open '" + path.string() + "'");
    os << j.dump(2) << "\n";
    std::cout << "wrote " << path.string() << "\n";
}

jl::InverseGaussianParams resolve_nu(const ToolConfig& c, const jl::PriceSeries& s) {
    if (!c.fit_nu) return {c.nu_mean, c.nu_scale};
    std::vector<double> neg;
    for (double p : jl::percent_changes(s.closes))
        if (p < 0.0) neg.push_back(-p);
    return jl::ig_fit(neg);
}

// ---------------------------------------------------------------------------
// simulate

int run_simulate(const ToolConfig& c) {
    validate_common(c);
    jl::StudySpec spec;
    spec.start_value = c.start_value;
    if (c.sim_class == "training") {
        spec.n_processes = 1;
        spec.n_periods_each = 500;
    } else if (c.sim_class == "control") {
        // class defaults already match
    } else if (c.sim_class == "obvious") {
        spec.tilt = 1.0;
    } else if (c.sim_class == "subtle") {
        spec.tilt = 1.0;
        spec.drift = 3.0;
    } else {
        throw std::invalid_argument(
            "class must be training, control, obvious, or subtle");
    }
    if (c.n_processes > 0) spec.n_processes = c.n_processes;
    if (c.n_periods > 0) spec.n_periods_each = c.n_periods;

    auto echo = common_echo(c, "simulate");
    echo.emplace_back("class", c.sim_class);
    echo.emplace_back("drift", fmt(spec.drift));
    echo.emplace_back("diffusion", fmt(spec.diffusion));
    echo.emplace_back("tilt", fmt(spec.tilt));
    echo.emplace_back("n_processes", std::to_string(spec.n_processes));
    echo.emplace_back("n_periods", std::to_string(spec.n_periods_each));
    echo.emplace_back("start_value", fmt(spec.start_value));

    const auto paths = jl::generate_class(spec, jl::Seed{c.seed});
    for (std::size_t i = 0; i < paths.size(); ++i) {
        std::ostringstream name;
        if (paths.size() == 1) {
            name << c.sim_class << ".csv";
        } else {
            name << c.sim_class << "_" << std::setw(3) << std::setfill('0') << i
                 << ".csv";
        }
        const auto path = out_path(c, name.str());
        std::ofstream os(path);
        if (!os) throw std::runtime_error("cannot open '" + path.string() + "'");
        auto file_echo = echo;
        file_echo.emplace_back("process_index", std::to_string(i));
        jl::write_path_csv(os, paths[i], file_echo);
    }
    std::cout << "wrote " << paths.size() << " path file(s) to " << c.out_dir << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// study

int run_study_cmd(const ToolConfig& c) {
    validate_common(c);
    const std::size_t n_proc = c.n_processes > 0 ? c.n_processes : 100;
    const jl::StudyResult result =
        jl::run_study(jl::Seed{c.seed}, detector_config(c), n_proc);

    auto echo = common_echo(c, "study");
    echo.emplace_back("n_processes", std::to_string(n_proc));
    echo.emplace_back("fitted_nu_mean", fmt(result.fitted_nu.mean));
    echo.emplace_back("fitted_nu_scale", fmt(result.fitted_nu.scale));

    json report;
    report["config"] = jl::config_to_json(echo);
    report["rows"] = jl::to_json(result);
    write_json_artifact(c, "study_report.json", report);

    const auto csv_path = out_path(c, "study_report.csv");
    std::ofstream os(csv_path);
    if (!os) throw std::runtime_error("cannot open '" + csv_path.string() + "'");
    jl::write_config_comments(os, echo);
    os << "class,method,correct,total,seed\n";
    for (const jl::ClassScore& s : result.scores) {
        os << s.class_name << ",detector," << s.detector_correct << "," << s.total
           << "," << result.seed << "\n";
        os << s.class_name << ",naive," << s.naive_correct << "," << s.total << ","
           << result.seed << "\n";
    }
    std::cout << "wrote " << csv_path.string() << "\n";

    for (const jl::ClassScore& s : result.scores)
        std::cout << s.class_name << ": detector " << s.detector_correct << "/"
                  << s.total << ", naive " << s.naive_correct << "/" << s.total
                  << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// detect

int run_detect(const ToolConfig& c) {
    validate_common(c);
    if (c.input.empty()) throw std::invalid_argument("detect requires --input");
    const jl::PriceSeries series =
        jl::ingest_csv_file(c.input, {c.date_column, c.close_column});
    if (series.size() < c.n + 1)
        throw std::invalid_argument("series shorter than n + 1 prices");
    const jl::InverseGaussianParams nu = resolve_nu(c, series);
    const jl::DetectorConfig cfg = detector_config(c);

    const std::size_t n_windows = series.size() - c.n;
    std::vector<jl::DetectionRecord> records(n_windows);
    jl::parallel_for(n_windows, [&](std::size_t j) {
        const std::vector<double> window(
            series.closes.begin() + static_cast<std::ptrdiff_t>(j),
            series.closes.begin() + static_cast<std::ptrdiff_t>(j + c.n + 1));
        records[j] = jl::detect(window, nu, cfg,
                                jl::window_seed(jl::Seed{c.seed},
                                                static_cast<std::ptrdiff_t>(j)),
                                static_cast<std::ptrdiff_t>(j));
    });

    auto echo = common_echo(c, "detect");
    echo.emplace_back("input", c.input);
    echo.emplace_back("fit_nu", c.fit_nu ? "true" : "false");
    echo.emplace_back("resolved_nu_mean", fmt(nu.mean));
    echo.emplace_back("resolved_nu_scale", fmt(nu.scale));
    echo.emplace_back("n_windows", std::to_string(n_windows));

    json out;
    out["config"] = jl::config_to_json(echo);
    out["records"] = json::array();
    for (const auto& rec : records) out["records"].push_back(jl::to_json(rec));
    write_json_artifact(c, "detect_records.json", out);

    std::vector<std::size_t> hist(c.n_sims + 1, 0);
    for (const auto& rec : records) ++hist[rec.right_exits];
    const auto hist_path = out_path(c, "exit_frequency_histogram.csv");
    std::ofstream os(hist_path);
    if (!os) throw std::runtime_error("cannot open '" + hist_path.string() + "'");
    jl::write_histogram_csv(os, hist, echo);
    std::cout << "wrote " << hist_path.string() << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// pipeline

jl::SplitSpec resolve_split(const ToolConfig& c) {
    if (c.split == "T1") return {100, 1000, 2000, 2500};
    if (c.split == "T2") return {50, 1500, 1600, 2450};
    if (c.split == "custom") {
        return {static_cast<std::ptrdiff_t>(c.train_lo),
                static_cast<std::ptrdiff_t>(c.train_hi),
                static_cast<std::ptrdiff_t>(c.test_lo),
                static_cast<std::ptrdiff_t>(c.test_hi)};
    }
    throw std::invalid_argument("split must be T1, T2, or custom");
}

jl::ClassifierSpec classifier_spec(const ToolConfig& c, const std::string& kind,
                                   std::uint64_t seed_offset) {
    jl::ClassifierSpec spec;
    spec.kind = jl::classifier_kind_from(kind);
    spec.logistic = {c.logistic_rate, c.logistic_epochs, c.logistic_l2};
    spec.tree.max_depth = c.tree_depth;
    spec.forest.n_trees = c.forest_trees;
    spec.forest.tree.max_depth = c.tree_depth;
    spec.neural = {c.net_hidden, c.net_epochs, c.net_rate};
    spec.seed = jl::Seed{c.seed + seed_offset};
    return spec;
}

int run_pipeline(const ToolConfig& c) {
    validate_common(c);
    if (c.input.empty()) throw std::invalid_argument("pipeline requires --input");
    if (!(c.rebalance_ratio >= 1.0))
        throw std::invalid_argument("rebalance-ratio must be >= 1");
    const jl::SplitSpec split_spec = resolve_split(c);
    const jl::PriceSeries series =
        jl::ingest_csv_file(c.input, {c.date_column, c.close_column});
    const jl::InverseGaussianParams nu = resolve_nu(c, series);
    const jl::DetectorConfig cfg = detector_config(c);

    std::vector<std::string> kinds;
    if (c.features == "percent" || c.features == "both") kinds.push_back("percent");
    if (c.features == "ref" || c.features == "both") kinds.push_back("ref");
    if (kinds.empty())
        throw std::invalid_argument("features must be percent, ref, or both");
    for (const auto& name : c.classifiers) jl::classifier_kind_from(name);

    auto echo = common_echo(c, "pipeline");
    echo.emplace_back("input", c.input);
    echo.emplace_back("fit_nu", c.fit_nu ? "true" : "false");
    echo.emplace_back("resolved_nu_mean", fmt(nu.mean));
    echo.emplace_back("resolved_nu_scale", fmt(nu.scale));
    echo.emplace_back("features", c.features);
    echo.emplace_back("split", c.split);
    echo.emplace_back("train_lo", std::to_string(split_spec.train_lo));
    echo.emplace_back("train_hi", std::to_string(split_spec.train_hi));
    echo.emplace_back("test_lo", std::to_string(split_spec.test_lo));
    echo.emplace_back("test_hi", std::to_string(split_spec.test_hi));
    echo.emplace_back("rebalance", c.no_rebalance ? "off" : "on");
    echo.emplace_back("rebalance_ratio", fmt(c.rebalance_ratio));
    echo.emplace_back("logistic_rate", fmt(c.logistic_rate));
    echo.emplace_back("logistic_epochs", std::to_string(c.logistic_epochs));
    echo.emplace_back("logistic_l2", fmt(c.logistic_l2));
    echo.emplace_back("tree_depth", std::to_string(c.tree_depth));
    echo.emplace_back("forest_trees", std::to_string(c.forest_trees));
    echo.emplace_back("net_hidden", std::to_string(c.net_hidden));
    echo.emplace_back("net_epochs", std::to_string(c.net_epochs));
    echo.emplace_back("net_rate", fmt(c.net_rate));

    json entries = json::array();
    for (const std::string& kind : kinds) {
        const jl::WindowFrame frame =
            kind == "percent"
                ? jl::build_percent_frame(series, c.n, nu, cfg, jl::Seed{c.seed})
                : jl::build_ref_frame(series, c.n, nu, cfg, jl::Seed{c.seed});
        jl::FrameSplit parts = jl::split(frame, split_spec);
        if (parts.train.rows.empty() || parts.test.rows.empty())
            throw std::runtime_error("split produced an empty train or test frame");
        jl::WindowFrame train_frame = parts.train;
        if (!c.no_rebalance)
            train_frame =
                jl::rebalance(parts.train, c.rebalance_ratio, jl::Seed{c.seed + 17});

        if (c.emit_frames) {
            for (const auto& [tag, f] :
                 {std::pair<const char*, const jl::WindowFrame&>{"train", train_frame},
                  {"test", parts.test}}) {
                const auto path = out_path(c, kind + "_frame_" + tag + ".csv");
                std::ofstream os(path);
                if (!os)
                    throw std::runtime_error("cannot open '" + path.string() + "'");
                jl::write_frame_csv(os, f, echo);
                std::cout << "wrote " << path.string() << "\n";
            }
        }

        for (std::size_t ci = 0; ci < c.classifiers.size(); ++ci) {
            const std::string& name = c.classifiers[ci];
            const auto spec = classifier_spec(c, name, 1000 + ci);
            const auto model = jl::train(spec, train_frame);
            const jl::ClassificationReport rep = jl::evaluate(*model, parts.test);
            std::cout << "\n[" << kind << " features / " << name << "]\n"
                      << jl::report_to_text(rep);
            json entry;
            entry["features"] = kind;
            entry["classifier"] = name;
            entry["train_rows"] = train_frame.rows.size();
            entry["test_rows"] = parts.test.rows.size();
            entry["report"] = jl::to_json(rep);
            entries.push_back(entry);
        }
    }

    json out;
    out["config"] = jl::config_to_json(echo);
    out["entries"] = entries;
    write_json_artifact(c, "pipeline_report.json", out);
    return 0;
}

// ---------------------------------------------------------------------------
// stats

int run_stats(const ToolConfig& c) {
    if (c.input.empty()) throw std::invalid_argument("stats requires --input");
    const jl::PriceSeries series =
        jl::ingest_csv_file(c.input, {c.date_column, c.close_column});
    const jl::SummaryStats s = jl::summary_stats(series);

    auto echo = common_echo(c, "stats");
    echo.emplace_back("input", c.input);
    echo.emplace_back("rows", std::to_string(series.size()));

    json out;
    out["config"] = jl::config_to_json(echo);
    out["daily_change"] = {{"mean", s.mean_change},
                           {"median", s.median_change},
                           {"max", s.max_change},
                           {"min", s.min_change}};
    out["daily_percent_change"] = {{"mean", s.mean_pct_change},
                                   {"median", s.median_pct_change},
                                   {"max", s.max_pct_change},
                                   {"min", s.min_pct_change}};
    write_json_artifact(c, "stats.json", out);

    std::cout << std::setprecision(6) << "              change   percent\n"
              << "mean    " << std::setw(12) << s.mean_change << std::setw(10)
              << s.mean_pct_change << "\n"
              << "median  " << std::setw(12) << s.median_change << std::setw(10)
              << s.median_pct_change << "\n"
              << "max     " << std::setw(12) << s.max_change << std::setw(10)
              << s.max_pct_change << "\n"
              << "min     " << std::setw(12) << s.min_change << std::setw(10)
              << s.min_pct_change << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// bns

int run_bns(const ToolConfig& c) {
    const jl::BnsParams p{c.mu, c.beta, c.rho, c.lambda, c.theta, c.sigma0_sq};
    p.validate();
    const jl::SubordinatorSpec z{{c.z_mean, c.z_scale}, c.z_rate};
    const jl::SubordinatorSpec zb{{c.zb_mean, c.zb_scale}, c.zb_rate};
    jl::validate_subordinator_pair(z, zb);
    if (c.steps < 1 || c.n_paths < 1)
        throw std::invalid_argument("steps and n-paths must be >= 1");

    auto echo = common_echo(c, "bns");
    echo.emplace_back("mode", c.bns_mode);
    for (const auto& [k, v] : std::initializer_list<std::pair<const char*, double>>{
             {"mu", c.mu},
             {"beta", c.beta},
             {"rho", c.rho},
             {"lambda", c.lambda},
             {"theta", c.theta},
             {"sigma0_sq", c.sigma0_sq},
             {"z_mean", c.z_mean},
             {"z_scale", c.z_scale},
             {"z_rate", c.z_rate},
             {"zb_mean", c.zb_mean},
             {"zb_scale", c.zb_scale},
             {"zb_rate", c.zb_rate},
             {"t1", c.t1}})
        echo.emplace_back(k, fmt(v));
    echo.emplace_back("steps", std::to_string(c.steps));
    echo.emplace_back("n_paths", std::to_string(c.n_paths));

    if (c.bns_mode == "path") {
        const jl::PathGrid grid{0.0, c.t1, c.steps};
        const auto paths = jl::simulate_paths(p, z, zb, grid, c.n_paths, jl::Seed{c.seed});
        for (std::size_t i = 0; i < paths.size(); ++i) {
            std::ostringstream name;
            name << "bns_path_" << std::setw(3) << std::setfill('0') << i << ".csv";
            const auto path = out_path(c, name.str());
            std::ofstream os(path);
            if (!os) throw std::runtime_error("cannot open '" + path.string() + "'");
            jl::write_config_comments(os, echo);
            os << "t,x,sigma_sq\n" << std::setprecision(17);
            for (std::size_t k = 0; k < paths[i].t.size(); ++k)
                os << paths[i].t[k] << "," << paths[i].x[k] << ","
                   << paths[i].sigma_sq[k] << "\n";
        }
        std::cout << "wrote " << paths.size() << " path file(s) to " << c.out_dir
                  << "\n";
        return 0;
    }

    if (c.bns_mode == "correlation") {
        if (!(0.0 < c.corr_s && c.corr_s < c.corr_t))
            throw std::invalid_argument("need 0 < s < t");
        echo.emplace_back("s", fmt(c.corr_s));
        echo.emplace_back("t", fmt(c.corr_t));
        const jl::PathGrid grid{0.0, c.corr_t, c.steps};
        jl::Rng master{jl::Seed{c.seed}};
        double formula_sum = 0.0;
        for (std::size_t i = 0; i < c.n_paths; ++i) {
            jl::Rng rng = master.derive(i);
            const jl::BnsPath path = jl::simulate_path(p, z, zb, grid, rng);
            formula_sum += jl::correlation_formula(p, z, zb, c.corr_s, c.corr_t,
                                                   path.z_jumps, path.zb_jumps);
        }
        const double mc = jl::correlation_mc(p, z, zb, c.corr_s, c.corr_t, c.n_paths,
                                             c.steps, jl::Seed{c.seed + 1});
        json out;
        out["config"] = jl::config_to_json(echo);
        out["formula_mean"] = formula_sum / static_cast<double>(c.n_paths);
        out["monte_carlo"] = mc;
        write_json_artifact(c, "bns_correlation.json", out);
        return 0;
    }

    if (c.bns_mode == "laplace") {
        echo.emplace_back("z_arg", fmt(c.z_arg));
        echo.emplace_back("x_t", fmt(c.x_t));
        const double sig_t = c.sigma_t_sq < 0.0 ? c.sigma0_sq : c.sigma_t_sq;
        echo.emplace_back("sigma_t_sq", fmt(sig_t));
        const jl::TransformStrip strip = jl::strip_bounds(p, z, zb, 0.0, c.t1);
        if (!strip.contains(c.z_arg))
            throw std::invalid_argument("z-arg lies outside the transform strip [" +
                                        fmt(strip.theta_minus) + ", " +
                                        fmt(strip.theta_plus) + "]");
        const std::complex<double> value = jl::laplace_transform(
            p, z, zb, jl::TransformState{c.x_t, sig_t}, 0.0, c.t1, {c.z_arg, 0.0});
        json out;
        out["config"] = jl::config_to_json(echo);
        out["strip"] = {{"theta_minus", strip.theta_minus},
                        {"theta_plus", strip.theta_plus}};
        out["value"] = {{"real", value.real()}, {"imag", value.imag()}};
        write_json_artifact(c, "bns_laplace.json", out);
        std::cout << "phi(" << c.z_arg << ") = " << value.real() << "\n";
        return 0;
    }

    throw std::invalid_argument("bns mode must be path, correlation, or laplace");
}

}  // namespace

int main(int argc, char** argv) {
    ToolConfig c;
    CLI::App app{"Sequential jump detection and classification toolkit"};
    app.set_config("--config", "", "Configuration file (key=value; sections per subcommand)");
    app.require_subcommand(1);

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--seed", c.seed, "Master seed");
        cmd->add_option("--out", c.out_dir, "Output directory");
        cmd->add_option("--n", c.n, "Window length (days)");
        cmd->add_option("--p-star", c.p_star, "Right-exit count threshold");
        cmd->add_option("--n-sims", c.n_sims, "Simulated paths per window");
        cmd->add_option("--alpha0", c.alpha0, "Test level in (0,1)");
        cmd->add_option("--t-max", c.t_max, "Path horizon");
        cmd->add_option("--dt", c.dt, "Path time step");
        cmd->add_option("--a-max", c.a_max, "Tilt estimator cap");
        cmd->add_option("--l", c.l, "Left decision boundary (< 0)");
        cmd->add_option("--gamma-variant", c.gamma_variant,
                        "Small-jump drift term: 'squared' or '2log'");
        cmd->add_option("--nu-mean", c.nu_mean, "Base jump density mean");
        cmd->add_option("--nu-scale", c.nu_scale, "Base jump density scale");
        cmd->add_option("--date-column", c.date_column, "Input date column name");
        cmd->add_option("--close-column", c.close_column, "Input close column name");
    };

    CLI::App* sim = app.add_subcommand("simulate", "Generate study-class price paths");
    add_common(sim);
    sim->add_option("--class", c.sim_class, "training | control | obvious | subtle");
    sim->add_option("--n-processes", c.n_processes, "Override process count");
    sim->add_option("--n-periods", c.n_periods, "Override periods per process");
    sim->add_option("--start-value", c.start_value, "Initial price");

    CLI::App* study = app.add_subcommand("study", "Run the detector-vs-naive study");
    add_common(study);
    study->add_option("--n-processes", c.n_processes, "Processes per class");

    CLI::App* detect = app.add_subcommand("detect", "Detect jumps over every window");
    add_common(detect);
    detect->add_option("--input", c.input, "Price CSV");
    detect->add_flag("--fit-nu", c.fit_nu,
                     "Fit the base density from the input's negative changes");

    CLI::App* pipeline =
        app.add_subcommand("pipeline", "Feature frames, classifiers, reports");
    add_common(pipeline);
    pipeline->add_option("--input", c.input, "Price CSV");
    pipeline->add_flag("--fit-nu", c.fit_nu,
                       "Fit the base density from the input's negative changes");
    pipeline->add_option("--features", c.features, "percent | ref | both");
    pipeline->add_option("--split", c.split, "T1 | T2 | custom");
    pipeline->add_option("--train-lo", c.train_lo, "Custom split: train start");
    pipeline->add_option("--train-hi", c.train_hi, "Custom split: train end");
    pipeline->add_option("--test-lo", c.test_lo, "Custom split: test start");
    pipeline->add_option("--test-hi", c.test_hi, "Custom split: test end");
    pipeline->add_option("--rebalance-ratio", c.rebalance_ratio,
                         "Majority:minority cap after rebalancing");
    pipeline->add_flag("--no-rebalance", c.no_rebalance, "Skip training rebalance");
    pipeline->add_flag("--emit-frames", c.emit_frames, "Write frame CSVs");
    pipeline
        ->add_option("--classifiers", c.classifiers,
                     "Subset of: logistic decision-tree random-forest feedforward-net")
        ->delimiter(',');
    pipeline->add_option("--logistic-rate", c.logistic_rate, "Logistic learning rate");
    pipeline->add_option("--logistic-epochs", c.logistic_epochs, "Logistic epochs");
    pipeline->add_option("--logistic-l2", c.logistic_l2, "Logistic ridge penalty");
    pipeline->add_option("--tree-depth", c.tree_depth, "Tree max depth");
    pipeline->add_option("--forest-trees", c.forest_trees, "Forest size");
    pipeline->add_option("--net-hidden", c.net_hidden, "Hidden width");
    pipeline->add_option("--net-epochs", c.net_epochs, "Net epochs");
    pipeline->add_option("--net-rate", c.net_rate, "Net learning rate");

    CLI::App* stats = app.add_subcommand("stats", "Summary statistics of a price CSV");
    add_common(stats);
    stats->add_option("--input", c.input, "Price CSV");

    CLI::App* bns = app.add_subcommand("bns", "Stochastic volatility model tools");
    add_common(bns);
    bns->add_option("--mode", c.bns_mode, "path | correlation | laplace");
    bns->add_option("--mu", c.mu, "Drift");
    bns->add_option("--beta", c.beta, "Variance loading in the drift");
    bns->add_option("--rho", c.rho, "Jump leverage (<= 0)");
    bns->add_option("--lambda", c.lambda, "Variance decay rate (> 0)");
    bns->add_option("--theta", c.theta, "Subordinator mixing weight in [0,1]");
    bns->add_option("--sigma0-sq", c.sigma0_sq, "Initial variance (> 0)");
    bns->add_option("--z-mean", c.z_mean, "Base subordinator mark mean");
    bns->add_option("--z-scale", c.z_scale, "Base subordinator mark scale");
    bns->add_option("--z-rate", c.z_rate, "Base subordinator arrival rate");
    bns->add_option("--zb-mean", c.zb_mean, "Large subordinator mark mean");
    bns->add_option("--zb-scale", c.zb_scale, "Large subordinator mark scale");
    bns->add_option("--zb-rate", c.zb_rate, "Large subordinator arrival rate");
    bns->add_option("--t1", c.t1, "Horizon");
    bns->add_option("--steps", c.steps, "Grid steps");
    bns->add_option("--n-paths", c.n_paths, "Path count");
    bns->add_option("--s", c.corr_s, "Correlation: earlier time");
    bns->add_option("--t", c.corr_t, "Correlation: later time");
    bns->add_option("--z-arg", c.z_arg, "Laplace: real argument");
    bns->add_option("--x-t", c.x_t, "Laplace: conditioning log price");
    bns->add_option("--sigma-t-sq", c.sigma_t_sq,
                    "Laplace: conditioning variance (default sigma0-sq)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (sim->parsed()) return run_simulate(c);
        if (study->parsed()) return run_study_cmd(c);
        if (detect->parsed()) return run_detect(c);
        if (pipeline->parsed()) return run_pipeline(c);
        if (stats->parsed()) return run_stats(c);
        if (bns->parsed()) return run_bns(c);
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
