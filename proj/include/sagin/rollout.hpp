#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sagin/env.hpp"
#include "sagin/metrics.hpp"
#include "sagin/policies.hpp"

namespace sagin {

struct EpisodeResult {
    EpisodeSummary summary;
    std::vector<TraceRecord> records;
    std::vector<int> actions;
};

/// Seed used for episode `episode` of a run seeded with `base_seed`.
inline std::uint64_t episode_seed(std::uint64_t base_seed, int episode) {
    return base_seed + static_cast<std::uint64_t>(episode);
}

/// Full episode driven by a heuristic policy. A hold signal from the policy
/// becomes kHoldAction.
EpisodeResult run_episode(Environment& env, SelectionPolicy& policy, std::uint64_t seed, int episode);

/// Full episode replaying `actions`; slots past the end of the list hold.
EpisodeResult replay_episode(Environment& env, std::span<const int> actions, std::uint64_t seed, int episode);

}  // namespace sagin
