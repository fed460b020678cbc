#include "sagin/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "sagin/config.hpp"
#include "sagin/metrics.hpp"
#include "sagin/oracle.hpp"
#include "sagin/rollout.hpp"
#include "sagin/server.hpp"

namespace sagin::cli {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream ss(s);
    while (std::getline(ss, cur, sep)) {
        if (!cur.empty()) out.push_back(cur);
    }
    return out;
}

std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    const auto e = s.find_last_not_of(" \t\r\n");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

std::filesystem::path summary_path(const std::filesystem::path& trace) {
    std::filesystem::path p = trace;
    p.replace_extension();
    p += ".summary.csv";
    return p;
}

struct Aggregate {
    MeanStd f1, f2, reward;
};

Aggregate aggregate(const std::vector<EpisodeSummary>& rows) {
    std::vector<double> f1, f2, rw;
    for (const auto& r : rows) {
        f1.push_back(r.f1);
        f2.push_back(static_cast<double>(r.f2));
        rw.push_back(r.total_reward);
    }
    return {mean_std(f1), mean_std(f2), mean_std(rw)};
}

void print_aggregate(std::ostream& out, const Aggregate& a, std::size_t episodes) {
    out << "episodes: " << episodes << "\n"
        << "f1 (time-average AoI): " << format_float(a.f1.mean) << " +- " << format_float(a.f1.std) << "\n"
        << "f2 (handovers):        " << format_float(a.f2.mean) << " +- " << format_float(a.f2.std) << "\n"
        << "episode reward:        " << format_float(a.reward.mean) << " +- " << format_float(a.reward.std) << "\n";
}

void write_outputs(const RunConfig& cfg, const std::vector<TraceRecord>& records,
                   const std::vector<EpisodeSummary>& rows, std::ostream& out) {
    const std::filesystem::path trace = cfg.run.out;
    write_metrics(records, trace, cfg.sim.num_satellites, cfg.sim.num_users);
    write_summaries(rows, summary_path(trace));
    out << "trace:   " << trace.string() << "\nsummary: " << summary_path(trace).string() << "\n";
    print_aggregate(out, aggregate(rows), rows.size());
}

int cmd_run(const RunConfig& cfg, std::ostream& out) {
    Environment env(cfg.sim);
    auto policy = make_policy(cfg.run.policy, cfg.ewg);
    std::vector<TraceRecord> records;
    std::vector<EpisodeSummary> rows;
    for (int e = 0; e < cfg.run.episodes; ++e) {
        auto res = run_episode(env, *policy, episode_seed(cfg.run.seed, e), e);
        records.insert(records.end(), res.records.begin(), res.records.end());
        rows.push_back(res.summary);
    }
    out << "policy: " << to_string(cfg.run.policy) << ", scheduling: " << to_string(cfg.sim.scheduling) << "\n";
    write_outputs(cfg, records, rows, out);
    return 0;
}

int cmd_eval(const RunConfig& cfg, const std::string& actions_path, std::ostream& out) {
    Environment env(cfg.sim);
    std::vector<TraceRecord> records;
    std::vector<EpisodeSummary> rows;
    for (const auto& [episode, actions] : read_action_file(actions_path)) {
        auto res = replay_episode(env, actions, episode_seed(cfg.run.seed, episode), episode);
        records.insert(records.end(), res.records.begin(), res.records.end());
        rows.push_back(res.summary);
    }
    write_outputs(cfg, records, rows, out);
    return 0;
}

int cmd_sweep(RunConfig cfg, const std::string& spec_text, std::ostream& out) {
    SweepSpec spec = parse_sweep_spec(spec_text);
    if (spec.users.empty()) spec.users.push_back(cfg.sim.num_users);
    if (spec.scheduling.empty()) spec.scheduling.emplace_back(to_string(cfg.sim.scheduling));
    if (spec.tags.empty()) spec.tags.emplace_back("-");

    const std::filesystem::path path = cfg.run.out;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
    f << "num_users,scheduling,tag,policy,episodes,f1_mean,f1_std,f2_mean,f2_std,reward_mean,reward_std\n";
    for (int nu : spec.users) {
        for (const auto& sched : spec.scheduling) {
            for (const auto& tag : spec.tags) {
                RunConfig c = cfg;
                c.sim.num_users = nu;
                c.sim.scheduling = parse_scheduling_policy(sched);
                Environment env(c.sim);
                auto policy = make_policy(c.run.policy, c.ewg);
                std::vector<EpisodeSummary> rows;
                for (int e = 0; e < c.run.episodes; ++e) {
                    rows.push_back(run_episode(env, *policy, episode_seed(c.run.seed, e), e).summary);
                }
                const Aggregate a = aggregate(rows);
                f << nu << ',' << to_string(c.sim.scheduling) << ',' << tag << ',' << to_string(c.run.policy)
                  << ',' << rows.size() << ',' << format_float(a.f1.mean) << ',' << format_float(a.f1.std) << ','
                  << format_float(a.f2.mean) << ',' << format_float(a.f2.std) << ','
                  << format_float(a.reward.mean) << ',' << format_float(a.reward.std) << '\n';
            }
        }
    }
    if (!f) throw std::runtime_error("write failed for " + path.string());
    out << "sweep: " << path.string() << "\n";
    return 0;
}

int cmd_oracle(const RunConfig& cfg, std::ostream& out) {
    const std::vector<oracle::CheckResult> checks = {
        oracle::check_power_allocation(cfg.run.seed),
        oracle::check_aoi_resimulation(cfg.sim, cfg.run.seed),
    };
    bool ok = true;
    for (const auto& c : checks) {
        out << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
        ok = ok && c.passed;
    }
    return ok ? 0 : 1;
}

}  // namespace

SweepSpec parse_sweep_spec(const std::string& spec) {
    SweepSpec s;
    for (const auto& item : split(spec, ';')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("sweep: expected key=values in '" + item + "'");
        const std::string key = trim(item.substr(0, eq));
        const std::string values = trim(item.substr(eq + 1));
        if (key == "users") {
            for (const auto& v : split(values, ',')) {
                const auto colon = v.find(':');
                if (colon == std::string::npos) {
                    s.users.push_back(std::stoi(v));
                } else {
                    const int lo = std::stoi(v.substr(0, colon)), hi = std::stoi(v.substr(colon + 1));
                    if (lo > hi) throw std::invalid_argument("sweep: empty users range " + v);
                    for (int u = lo; u <= hi; ++u) s.users.push_back(u);
                }
            }
        } else if (key == "sched") {
            for (const auto& v : split(values, ',')) {
                parse_scheduling_policy(v);
                s.scheduling.push_back(trim(v));
            }
        } else if (key == "tag") {
            for (const auto& v : split(values, ',')) s.tags.push_back(trim(v));
        } else {
            throw std::invalid_argument("sweep: unknown key '" + key + "' (expected users, sched, tag)");
        }
    }
    for (int u : s.users) {
        if (u < 1) throw std::invalid_argument("sweep: users must be >= 1");
    }
    return s;
}

std::vector<std::pair<int, std::vector<int>>> read_action_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open action file " + path);
    std::string first;
    std::getline(f, first);
    std::map<int, std::vector<int>> by_episode;

    const auto header = split(trim(first), ',');
    const auto col = [&](const std::string& name) -> int {
        for (std::size_t k = 0; k < header.size(); ++k) {
            if (header[k] == name) return static_cast<int>(k);
        }
        return -1;
    };
    const int action_col = col("action");
    if (action_col >= 0) {
        const int episode_col = col("episode");
        std::string line;
        while (std::getline(f, line)) {
            line = trim(line);
            if (line.empty()) continue;
            std::vector<std::string> cells;
            std::string cell;
            std::istringstream ss(line);
            while (std::getline(ss, cell, ',')) cells.push_back(cell);
            if (static_cast<int>(cells.size()) <= action_col) throw std::runtime_error(path + ": short row");
            const int ep = episode_col >= 0 ? std::stoi(cells[episode_col]) : 0;
            by_episode[ep].push_back(std::stoi(cells[action_col]));
        }
    } else {
        std::stringstream all;
        all << first << '\n' << f.rdbuf();
        int a;
        while (all >> a) by_episode[0].push_back(a);
        if (!all.eof()) throw std::runtime_error(path + ": expected integers or a CSV with an action column");
    }
    return {by_episode.begin(), by_episode.end()};
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"AoI-aware HAP-relayed LEO downlink simulator"};
    app.require_subcommand(1);

    std::string config_path, policy, out_path, bind, sweep_spec, actions_path;
    int episodes = 0;
    std::uint64_t seed = 0;
    app.add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
    app.add_option("--policy", policy, "selection policy: random | rr | ewg");
    app.add_option("--episodes", episodes, "number of episodes")->check(CLI::PositiveNumber);
    app.add_option("--seed", seed, "base seed (episode e uses seed + e)");
    app.add_option("--out", out_path, "output CSV path");
    app.add_option("--bind", bind, "serve endpoint: host:port or stdio");
    app.add_option("--sweep", sweep_spec, "sweep grid, e.g. users=1:10;sched=fifo,ldf;tag=M4");

    auto* run = app.add_subcommand("run", "roll out a heuristic policy and write trace + summary CSVs");
    auto* serve_cmd = app.add_subcommand("serve", "serve the environment over the line protocol");
    auto* eval = app.add_subcommand("eval", "replay an action file through the environment");
    eval->add_option("actions", actions_path, "action file (CSV with an action column, or integers)")
        ->required()
        ->check(CLI::ExistingFile);
    auto* sweep = app.add_subcommand("sweep", "grid over users x scheduling x tag, one summary row per cell");
    auto* oracle_cmd = app.add_subcommand("oracle", "solver-vs-grid and AoI re-simulation checks");
    for (auto* s : {run, serve_cmd, eval, sweep, oracle_cmd}) s->fallthrough();

    std::vector<std::string> argv(args.rbegin(), args.rend());
    try {
        app.parse(argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        RunConfig cfg = config_path.empty() ? RunConfig{} : load_run_config(config_path);
        if (!policy.empty()) cfg.run.policy = parse_policy_kind(policy);
        if (episodes > 0) cfg.run.episodes = episodes;
        if (app.count("--seed")) cfg.run.seed = seed;
        if (!bind.empty()) cfg.run.bind = bind;
        if (!out_path.empty()) {
            cfg.run.out = out_path;
        } else if (*sweep) {
            cfg.run.out = "sweep.csv";
        }

        if (*run) return cmd_run(cfg, out);
        if (*eval) return cmd_eval(cfg, actions_path, out);
        if (*sweep) return cmd_sweep(cfg, sweep_spec, out);
        if (*oracle_cmd) return cmd_oracle(cfg, out);
        if (*serve_cmd) {
            serve(cfg.sim, cfg.run.bind);
            return 0;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

}  // namespace sagin::cli
