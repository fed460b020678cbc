#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sagin/aoi.hpp"
#include "sagin/env.hpp"
#include "sagin/power_alloc.hpp"
#include "sagin/rng.hpp"

namespace sagin::oracle {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Random 3-user P2 instance with box and budget constraints satisfied.
PowerAllocProblem random_instance(Rng& rng, int num_users = 3);

/// AoI histories recomputed slot by slot from an event log with plain scalar
/// recursions; [t][i], [t][i], [t][i * nu + j], index 0 = initial zeros.
struct AoiHistory {
    std::vector<std::vector<Age>> theta, delta, user;
};
AoiHistory resimulate_aoi(const std::vector<SlotEvents>& log, int num_satellites, int num_users);

/// True iff every history entry of `ledger` equals `h`.
bool ledger_matches(const AoiLedger& ledger, const AoiHistory& h);

CheckResult check_power_allocation(std::uint64_t seed, int instances = 50, int grid_points = 101);
CheckResult check_aoi_resimulation(const SimConfig& config, std::uint64_t seed, std::int64_t slots = 1000);

}  // namespace sagin::oracle
