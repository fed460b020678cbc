#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "sagin/env.hpp"

namespace sagin {

/// One row of the per-slot trace.
struct TraceRecord {
    int episode = 0;
    std::int64_t t = 0;
    int action = -1;
    int selection = -1;  // l_t, -1 when nothing is selected
    bool action_valid = true;
    std::int64_t handover_count = 0;
    bool z_hap = false;
    std::int64_t queue_length = 0;
    std::int64_t dropped = 0;
    std::int64_t delivered = 0;
    double aoi_sum = 0.0;
    double rate_sum = 0.0;
    double min_rate = 0.0;
    double reward_aoi = 0.0;
    double reward_handover = 0.0;
    double reward_rate = 0.0;
    double reward = 0.0;
    std::vector<double> rates;
    std::vector<double> powers;
    std::vector<std::int64_t> theta;
    std::vector<std::int64_t> delta;
    std::vector<double> user_aoi_mean;  // mean over users, per satellite

    bool operator==(const TraceRecord&) const = default;
};

TraceRecord make_trace_record(int episode, const StepOutcome& out);

/// Formats a double with 9 significant digits ("%.9g").
std::string format_float(double v);

/// Header for `num_satellites` x `num_users` traces; column order is stable.
std::vector<std::string> trace_columns(int num_satellites, int num_users);

void write_trace_csv(std::ostream& os, std::span<const TraceRecord> records, int num_satellites, int num_users);
/// Throws std::runtime_error naming `path` on I/O failure.
void write_metrics(std::span<const TraceRecord> records, const std::filesystem::path& path, int num_satellites,
                   int num_users);
std::vector<TraceRecord> read_metrics(const std::filesystem::path& path);
std::vector<TraceRecord> read_trace_csv(std::istream& is);

struct EpisodeSummary {
    int episode = 0;
    std::uint64_t seed = 0;
    double f1 = 0.0;
    std::int64_t f2 = 0;
    double total_reward = 0.0;
    std::uint64_t dropped = 0;
    std::uint64_t delivered = 0;
};

struct ObjectiveFromTrace {
    double f1 = 0.0;
    std::int64_t f2 = 0;
};

/// f1 as the mean aoi_sum column, f2 as the last handover count.
ObjectiveFromTrace objective_report(std::span<const TraceRecord> episode_records);

void write_summary_csv(std::ostream& os, std::span<const EpisodeSummary> rows);
void write_summaries(std::span<const EpisodeSummary> rows, const std::filesystem::path& path);

struct MeanStd {
    double mean = 0.0;
    double std = 0.0;  // sample standard deviation (n - 1)
};
MeanStd mean_std(std::span<const double> xs);

}  // namespace sagin
