#include "sagin/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sagin {

TraceRecord make_trace_record(int episode, const StepOutcome& out) {
    const StepInfo& in = out.info;
    const EnvState& s = out.next_state;
    TraceRecord r;
    r.episode = episode;
    r.t = s.t;
    r.action = in.requested_action;
    r.selection = in.selection.value_or(-1);
    r.action_valid = in.action_valid;
    r.handover_count = in.handover_count;
    r.z_hap = in.z_hap;
    r.queue_length = static_cast<std::int64_t>(in.queue_length);
    r.dropped = static_cast<std::int64_t>(in.dropped);
    r.delivered = static_cast<std::int64_t>(in.delivered);
    r.aoi_sum = in.aoi_sum;
    r.rate_sum = in.rate_sum;
    r.min_rate = in.min_rate;
    r.reward_aoi = out.components.aoi;
    r.reward_handover = out.components.handover;
    r.reward_rate = out.components.rate;
    r.reward = out.reward;
    r.rates = in.rates;
    r.powers = in.powers;
    r.theta.assign(s.theta.begin(), s.theta.end());
    r.delta.assign(s.delta.begin(), s.delta.end());
    const std::size_t ns = s.theta.size();
    const std::size_t nu = ns ? s.user_aoi.size() / ns : 0;
    r.user_aoi_mean.assign(ns, 0.0);
    for (std::size_t i = 0; i < ns; ++i) {
        Age sum = 0;
        for (std::size_t j = 0; j < nu; ++j) sum += s.user_aoi[i * nu + j];
        r.user_aoi_mean[i] = nu ? static_cast<double>(sum) / static_cast<double>(nu) : 0.0;
    }
    return r;
}

std::string format_float(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::vector<std::string> trace_columns(int ns, int nu) {
    std::vector<std::string> c = {"episode",  "t",          "action",     "l_t",         "action_valid",
                                  "n_t",      "z_hap",      "queue_len",  "dropped",     "delivered",
                                  "aoi_sum",  "rate_sum",   "min_rate",   "reward_aoi",  "reward_handover",
                                  "reward_rate", "reward"};
    for (int j = 0; j < nu; ++j) c.push_back("R_" + std::to_string(j));
    for (int j = 0; j < nu; ++j) c.push_back("P_" + std::to_string(j));
    for (int i = 0; i < ns; ++i) c.push_back("theta_" + std::to_string(i));
    for (int i = 0; i < ns; ++i) c.push_back("delta_" + std::to_string(i));
    for (int i = 0; i < ns; ++i) c.push_back("Delta_" + std::to_string(i));
    return c;
}

void write_trace_csv(std::ostream& os, std::span<const TraceRecord> records, int ns, int nu) {
    const auto cols = trace_columns(ns, nu);
    for (std::size_t k = 0; k < cols.size(); ++k) os << (k ? "," : "") << cols[k];
    os << '\n';
    for (const auto& r : records) {
        if (static_cast<int>(r.rates.size()) != nu || static_cast<int>(r.powers.size()) != nu ||
            static_cast<int>(r.theta.size()) != ns || static_cast<int>(r.delta.size()) != ns ||
            static_cast<int>(r.user_aoi_mean.size()) != ns) {
            throw std::invalid_argument("write_trace_csv: record dimensions do not match the header");
        }
        os << r.episode << ',' << r.t << ',' << r.action << ',' << r.selection << ',' << (r.action_valid ? 1 : 0)
           << ',' << r.handover_count << ',' << (r.z_hap ? 1 : 0) << ',' << r.queue_length << ',' << r.dropped
           << ',' << r.delivered << ',' << format_float(r.aoi_sum) << ',' << format_float(r.rate_sum) << ','
           << format_float(r.min_rate) << ',' << format_float(r.reward_aoi) << ','
           << format_float(r.reward_handover) << ',' << format_float(r.reward_rate) << ','
           << format_float(r.reward);
        for (double v : r.rates) os << ',' << format_float(v);
        for (double v : r.powers) os << ',' << format_float(v);
        for (auto v : r.theta) os << ',' << v;
        for (auto v : r.delta) os << ',' << v;
        for (double v : r.user_aoi_mean) os << ',' << format_float(v);
        os << '\n';
    }
}

void write_metrics(std::span<const TraceRecord> records, const std::filesystem::path& path, int ns, int nu) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
    write_trace_csv(f, records, ns, nu);
    f.flush();
    if (!f) throw std::runtime_error("write failed for " + path.string());
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream ss(line);
    while (std::getline(ss, cur, sep)) out.push_back(cur);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

}  // namespace

std::vector<TraceRecord> read_trace_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("trace csv: missing header");
    const auto header = split(line, ',');
    int nu = 0, ns = 0;
    for (const auto& h : header) {
        if (h.rfind("R_", 0) == 0) ++nu;
        if (h.rfind("theta_", 0) == 0) ++ns;
    }
    if (header != trace_columns(ns, nu)) throw std::runtime_error("trace csv: unexpected header");

    std::vector<TraceRecord> out;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto f = split(line, ',');
        if (f.size() != header.size()) throw std::runtime_error("trace csv: ragged row");
        std::size_t k = 0;
        auto i64 = [&] { return std::stoll(f[k++]); };
        auto dbl = [&] { return std::stod(f[k++]); };
        TraceRecord r;
        r.episode = static_cast<int>(i64());
        r.t = i64();
        r.action = static_cast<int>(i64());
        r.selection = static_cast<int>(i64());
        r.action_valid = i64() != 0;
        r.handover_count = i64();
        r.z_hap = i64() != 0;
        r.queue_length = i64();
        r.dropped = i64();
        r.delivered = i64();
        r.aoi_sum = dbl();
        r.rate_sum = dbl();
        r.min_rate = dbl();
        r.reward_aoi = dbl();
        r.reward_handover = dbl();
        r.reward_rate = dbl();
        r.reward = dbl();
        for (int j = 0; j < nu; ++j) r.rates.push_back(dbl());
        for (int j = 0; j < nu; ++j) r.powers.push_back(dbl());
        for (int i = 0; i < ns; ++i) r.theta.push_back(i64());
        for (int i = 0; i < ns; ++i) r.delta.push_back(i64());
        for (int i = 0; i < ns; ++i) r.user_aoi_mean.push_back(dbl());
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<TraceRecord> read_metrics(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path.string());
    try {
        return read_trace_csv(f);
    } catch (const std::exception& e) {
        throw std::runtime_error(path.string() + ": " + e.what());
    }
}

ObjectiveFromTrace objective_report(std::span<const TraceRecord> recs) {
    if (recs.empty()) throw std::invalid_argument("objective_report: empty trace");
    std::vector<double> sums;
    sums.reserve(recs.size());
    for (const auto& r : recs) sums.push_back(r.aoi_sum);
    return {objective_f1(sums), recs.back().handover_count};
}

void write_summary_csv(std::ostream& os, std::span<const EpisodeSummary> rows) {
    os << "episode,seed,f1,f2,total_reward,dropped,delivered\n";
    for (const auto& r : rows) {
        os << r.episode << ',' << r.seed << ',' << format_float(r.f1) << ',' << r.f2 << ','
           << format_float(r.total_reward) << ',' << r.dropped << ',' << r.delivered << '\n';
    }
}

void write_summaries(std::span<const EpisodeSummary> rows, const std::filesystem::path& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
    write_summary_csv(f, rows);
    if (!f) throw std::runtime_error("write failed for " + path.string());
}

MeanStd mean_std(std::span<const double> xs) {
    MeanStd m;
    if (xs.empty()) return m;
    for (double x : xs) m.mean += x;
    m.mean /= static_cast<double>(xs.size());
    if (xs.size() > 1) {
        double ss = 0.0;
        for (double x : xs) ss += (x - m.mean) * (x - m.mean);
        m.std = std::sqrt(ss / static_cast<double>(xs.size() - 1));
    }
    return m;
}

}  // namespace sagin
