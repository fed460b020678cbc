#pragma once

#include <vector>

namespace sagin {

/// One slot's max-min rate instance. effective_gain[j] = |h_j|^2 / sigma_j^2 (1/W).
struct PowerAllocProblem {
    std::vector<double> effective_gain;
    std::vector<double> bandwidth;  // Hz
    double p_min = 0.0;
    double p_max = 0.0;
    double p_total = 0.0;

    int num_users() const { return static_cast<int>(effective_gain.size()); }
};

struct PowerAllocation {
    std::vector<double> powers;
    std::vector<double> rates;
    double min_rate = 0.0;
};

/// Throws std::invalid_argument when the instance violates its invariants.
void validate(const PowerAllocProblem& p);

double user_rate(double bandwidth, double effective_gain, double power);

/// Rates and min rate for an arbitrary power vector (no feasibility check).
PowerAllocation evaluate_allocation(const PowerAllocProblem& p, std::vector<double> powers);

/// Max-min power allocation by bisection on the common rate. The returned
/// min rate is within `rate_tolerance` (bits/s) of the optimum; a non-positive
/// tolerance selects 1e-6 of the upper bracket. Residual power after the
/// max-min optimum is spread equally over users not yet at p_max.
PowerAllocation solve_max_min(const PowerAllocProblem& p, double rate_tolerance = 0.0);

/// Exhaustive grid search over [p_min, p_max]^N filtered by the sum
/// constraint. Refuses instances with more than four users.
PowerAllocation brute_force_oracle(const PowerAllocProblem& p, int grid_points_per_dim);

/// Upper bound on how far the best grid point's min rate can sit below the
/// continuous optimum for the given grid resolution.
double grid_rate_slack(const PowerAllocProblem& p, int grid_points_per_dim);

}  // namespace sagin
