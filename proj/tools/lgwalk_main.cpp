// lgwalk: simulate Leggett-Garg tests on discrete-time quantum walks and
// analyze the resulting event logs.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lgwalk/classical.hpp"
#include "lgwalk/event_log.hpp"
#include "lgwalk/experiment.hpp"

namespace fs = std::filesystem;
using namespace lgwalk;

namespace {

std::string fmt12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

struct CommonOpts {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> shots;
    std::optional<double> theta;
    std::optional<double> dephasing;
    std::string format = "csv";
    std::string out_dir;
    bool exact = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "JSON config file (flat ProtocolConfig document)");
    cmd->add_option("--seed", opts.seed, "Random seed (overrides config)");
    cmd->add_option("--shots", opts.shots, "Shots per arm (overrides config)");
    cmd->add_option("--theta", opts.theta, "Coin angle in radians (overrides config)");
    cmd->add_option("--dephasing", opts.dephasing, "Dephasing per step (overrides config)");
    cmd->add_option("--format", opts.format, "Output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--out", opts.out_dir, "Directory for output artifacts");
    cmd->add_flag("--exact", opts.exact, "Bypass sampling; exact pipeline values");
}

ProtocolConfig resolve_config(const CommonOpts& opts) {
    ProtocolConfig cfg;
    if (!opts.config_path.empty())
        cfg = load_config_file(opts.config_path);
    if (opts.seed)
        cfg.seed = *opts.seed;
    if (opts.shots)
        cfg.shots_per_arm = *opts.shots;
    if (opts.theta)
        cfg.theta = *opts.theta;
    if (opts.dephasing)
        cfg.dephasing = *opts.dephasing;
    cfg.validate();
    return cfg;
}

fs::path ensure_out_dir(const std::string& dir) {
    fs::path p(dir);
    fs::create_directories(p);
    return p;
}

void write_text_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open for writing: " + path.string());
    out << text;
}

// Every artifact carries the resolved config for provenance: '#'-prefixed in
// CSV, a "config" field in JSON.
std::string csv_provenance(const ProtocolConfig& cfg) {
    return "# config " + config_to_json(cfg).dump() + "\n";
}

int cmd_walk(const CommonOpts& opts) {
    ProtocolConfig cfg = resolve_config(opts);
    WalkTrace trace = run_walk(cfg.walk_spec(), new_localized(0, Spin::up, default_window(cfg.steps, 0)));

    std::string text;
    if (opts.format == "csv") {
        text += csv_provenance(cfg);
        text += "step,x,probability\n";
        for (std::size_t step = 0; step < trace.size(); ++step) {
            PositionDistribution d = trace.distribution_after(step);
            int reach = static_cast<int>(step);
            for (int x = -reach; x <= reach; ++x) {
                if ((x + reach) % 2 != 0)
                    continue;
                text += std::to_string(step) + "," + std::to_string(x) + "," + fmt12(d.at(x)) + "\n";
            }
        }
    } else {
        nlohmann::ordered_json j;
        j["config"] = config_to_json(cfg);
        nlohmann::ordered_json steps = nlohmann::ordered_json::array();
        for (std::size_t step = 0; step < trace.size(); ++step) {
            PositionDistribution d = trace.distribution_after(step);
            nlohmann::ordered_json row;
            row["step"] = step;
            nlohmann::ordered_json sites = nlohmann::ordered_json::array();
            int reach = static_cast<int>(step);
            for (int x = -reach; x <= reach; ++x) {
                if ((x + reach) % 2 != 0)
                    continue;
                sites.push_back({{"x", x}, {"p", d.at(x)}});
            }
            row["distribution"] = sites;
            steps.push_back(row);
        }
        j["steps"] = steps;
        text = j.dump(2) + "\n";
    }

    if (!opts.out_dir.empty())
        write_text_file(ensure_out_dir(opts.out_dir) / (opts.format == "csv" ? "walk.csv" : "walk.json"),
                        text);
    else
        std::cout << text;
    return 0;
}

int cmd_lg_test(const CommonOpts& opts) {
    ProtocolConfig cfg = resolve_config(opts);
    LgTestOutput out = run_lg_test(cfg, opts.exact);

    nlohmann::ordered_json doc;
    doc["config"] = config_to_json(cfg);
    doc["report"] = report_to_json(out.report);

    if (!opts.out_dir.empty()) {
        fs::path dir = ensure_out_dir(opts.out_dir);
        if (!opts.exact) {
            write_event_log_file(dir / "events_none.jsonl", cfg, out.events.none);
            write_event_log_file(dir / "events_left.jsonl", cfg, out.events.left);
            write_event_log_file(dir / "events_right.jsonl", cfg, out.events.right);
        }
        write_text_file(dir / "report.json", doc.dump(2) + "\n");
    }
    std::cout << doc.dump(2) << "\n";
    return 0;
}

int cmd_theta_scan(const CommonOpts& opts, int points) {
    ProtocolConfig cfg = resolve_config(opts);
    if (points < 2)
        throw ValidationError("theta-scan: need at least 2 grid points");

    std::string text = csv_provenance(cfg);
    text += "theta,k_sim,k_eq3,k_eq4,k_dephased\n";
    QScheme scheme = cfg.scheme();
    for (int i = 0; i < points; ++i) {
        double theta = std::numbers::pi * i / (points - 1);
        double k_sim = exact_lg_pipeline(WalkSpec{cfg.steps, CoinParams(theta), 0.0}, scheme).k;
        double k_deph =
            cfg.dephasing > 0
                ? exact_lg_pipeline(WalkSpec{cfg.steps, CoinParams(theta), cfg.dephasing}, scheme).k
                : k_sim;
        text += fmt12(theta) + "," + fmt12(k_sim) + "," + fmt12(analytic_k_constant(theta)) + "," +
                fmt12(analytic_k_dichotomic(theta)) + "," + fmt12(k_deph) + "\n";
    }
    if (!opts.out_dir.empty())
        write_text_file(ensure_out_dir(opts.out_dir) / "theta_scan.csv", text);
    else
        std::cout << text;
    return 0;
}

EventLog read_log_or_stdin(const std::string& path) {
    if (path == "-")
        return read_event_log(std::cin, "<stdin>");
    return read_event_log_file(path);
}

int cmd_analyze(const CommonOpts& opts, const std::vector<std::string>& paths) {
    if (paths.empty())
        throw ValidationError("analyze: no event logs given");
    EventGroups groups;
    std::optional<nlohmann::ordered_json> config_json;
    ProtocolConfig cfg;
    for (const std::string& path : paths) {
        EventLog log = read_log_or_stdin(path);
        nlohmann::ordered_json this_config = config_to_json(log.config);
        if (!config_json) {
            config_json = this_config;
            cfg = log.config;
        } else if (*config_json != this_config) {
            throw ValidationError("analyze: event logs carry different configs (" + path + ")");
        }
        for (EventRecord& ev : log.events) {
            if (ev.arm == Arm::none)
                groups.none.push_back(ev);
            else if (ev.arm == Arm::condition_on_left)
                groups.left.push_back(ev);
            else
                groups.right.push_back(ev);
        }
    }
    CorrelationReport report = analyze_events(groups, cfg);
    nlohmann::ordered_json doc;
    doc["config"] = *config_json;
    doc["report"] = report_to_json(report);
    if (!opts.out_dir.empty())
        write_text_file(ensure_out_dir(opts.out_dir) / "report.json", doc.dump(2) + "\n");
    std::cout << doc.dump(2) << "\n";
    return 0;
}

int cmd_classical(const CommonOpts& opts, std::optional<double> p_opt, bool invasive) {
    ProtocolConfig cfg = resolve_config(opts);
    double half = cfg.theta / 2;
    double p = p_opt.value_or(std::cos(half) * std::cos(half));
    if (!(p >= 0.0 && p <= 1.0))
        throw ValidationError("classical: p must lie in [0, 1]");

    EventGroups groups = run_classical_arms(cfg, p, invasive);
    if (!opts.out_dir.empty()) {
        fs::path dir = ensure_out_dir(opts.out_dir);
        write_event_log_file(dir / "classical_none.jsonl", cfg, groups.none);
        write_event_log_file(dir / "classical_left.jsonl", cfg, groups.left);
        write_event_log_file(dir / "classical_right.jsonl", cfg, groups.right);
    } else {
        std::vector<EventRecord> all;
        all.insert(all.end(), groups.none.begin(), groups.none.end());
        all.insert(all.end(), groups.left.begin(), groups.left.end());
        all.insert(all.end(), groups.right.begin(), groups.right.end());
        write_event_log(std::cout, cfg, all);
    }
    return 0;
}

int cmd_oracle(const CommonOpts& opts) {
    double theta = opts.theta.value_or(std::numbers::pi / 2);
    ThetaMax mx = max_analytic_k_dichotomic();
    if (opts.format == "json") {
        nlohmann::ordered_json j;
        j["theta"] = theta;
        j["k_constant"] = analytic_k_constant(theta);
        j["k_dichotomic"] = analytic_k_dichotomic(theta);
        j["max_dichotomic"] = {{"theta", mx.theta}, {"k", mx.k}};
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "theta,k_constant,k_dichotomic,max_dichotomic_theta,max_dichotomic_k\n"
                  << fmt12(theta) << "," << fmt12(analytic_k_constant(theta)) << ","
                  << fmt12(analytic_k_dichotomic(theta)) << "," << fmt12(mx.theta) << ","
                  << fmt12(mx.k) << "\n";
    }
    return 0;
}

int cmd_fit_dephasing(const std::vector<std::string>& paths) {
    if (paths.empty())
        throw ValidationError("fit-dephasing: no event logs given");
    std::vector<ThetaHistogram> data;
    std::optional<int> steps;
    for (const std::string& path : paths) {
        EventLog log = read_log_or_stdin(path);
        if (!steps)
            steps = log.config.steps;
        else if (*steps != log.config.steps)
            throw ValidationError("fit-dephasing: logs disagree on step count (" + path + ")");
        ThetaHistogram h;
        h.theta = log.config.theta;
        for (const EventRecord& ev : log.events)
            if (ev.arm == Arm::none)
                ++h.counts[ev.reported_x3];
        if (h.counts.empty())
            throw ValidationError("fit-dephasing: no unconditioned events in " + path);
        data.push_back(std::move(h));
    }
    DephasingFit fit = fit_dephasing(data, *steps);
    nlohmann::ordered_json j;
    j["p_d"] = fit.p_d;
    j["chi_squared"] = fit.chi_squared;
    j["reduced_chi_squared"] = fit.reduced_chi_squared;
    j["dof"] = fit.dof;
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_macroscopicity(const CommonOpts& opts, std::optional<double> ell_um) {
    ProtocolConfig cfg = resolve_config(opts);
    std::optional<double> ell_m;
    if (ell_um)
        ell_m = *ell_um * 1e-6;
    double mu = macroscopicity(cfg.total_duration_s(), ell_m);
    nlohmann::ordered_json j;
    j["duration_s"] = cfg.total_duration_s();
    if (ell_um)
        j["ell_um"] = *ell_um;
    j["mu"] = mu;
    std::cout << j.dump(2) << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Leggett-Garg tests on one-dimensional discrete-time quantum walks"};
    app.require_subcommand(1);

    CommonOpts walk_opts, lg_opts, scan_opts, analyze_opts, classical_opts, oracle_opts, fit_opts,
        macro_opts;
    int scan_points = 17;
    std::vector<std::string> analyze_paths, fit_paths;
    std::optional<double> classical_p;
    bool classical_invasive = false;
    std::optional<double> ell_um;

    auto* walk = app.add_subcommand("walk", "Per-step position distributions of the walk");
    add_common(walk, walk_opts);

    auto* lg = app.add_subcommand("lg-test", "Run the three-arm LG test and report K");
    add_common(lg, lg_opts);

    auto* scan = app.add_subcommand("theta-scan", "K versus coin angle with analytic overlays");
    add_common(scan, scan_opts);
    scan->add_option("--points", scan_points, "Grid points over [0, pi]")->default_val(17);

    auto* analyze = app.add_subcommand("analyze", "Recompute the report from event logs");
    add_common(analyze, analyze_opts);
    analyze->add_option("paths", analyze_paths, "JSONL event logs ('-' for stdin)");

    auto* classical = app.add_subcommand("classical", "Sample macrorealist baseline events");
    add_common(classical, classical_opts);
    classical->add_option("--p", classical_p, "Leftward step probability (default cos^2(theta/2))");
    classical->add_flag("--invasive", classical_invasive,
                        "Scramble the coin after the t2 measurement (clumsiness demo)");

    auto* oracle = app.add_subcommand("oracle", "Closed-form K(theta) for both Q(t2) schemes");
    add_common(oracle, oracle_opts);

    auto* fit = app.add_subcommand("fit-dephasing", "Fit the per-step dephasing rate to logs");
    add_common(fit, fit_opts);
    fit->add_option("paths", fit_paths, "JSONL event logs ('-' for stdin)");

    auto* macro = app.add_subcommand("macroscopicity", "Macroscopicity measure of the walk");
    add_common(macro, macro_opts);
    macro->add_option("--ell", ell_um, "Classicalization length scale in micrometers");

    try {
        app.parse(argc, argv);
        if (walk->parsed())
            return cmd_walk(walk_opts);
        if (lg->parsed())
            return cmd_lg_test(lg_opts);
        if (scan->parsed())
            return cmd_theta_scan(scan_opts, scan_points);
        if (analyze->parsed())
            return cmd_analyze(analyze_opts, analyze_paths);
        if (classical->parsed())
            return cmd_classical(classical_opts, classical_p, classical_invasive);
        if (oracle->parsed())
            return cmd_oracle(oracle_opts);
        if (fit->parsed())
            return cmd_fit_dephasing(fit_paths);
        if (macro->parsed())
            return cmd_macroscopicity(macro_opts, ell_um);
        return 2;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
