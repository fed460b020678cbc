#include "sagin/power_alloc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace sagin {

namespace {

double sum_in_order(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
}

// Power needed by a user to reach `rate`; +inf for a dead channel.
double required_power(double bandwidth, double gain, double rate) {
    if (rate <= 0.0) return 0.0;
    if (!(gain > 0.0)) return std::numeric_limits<double>::infinity();
    return std::expm1(rate / bandwidth * std::log(2.0)) / gain;
}

bool feasible(const PowerAllocProblem& p, double rate) {
    double total = 0.0;
    for (int j = 0; j < p.num_users(); ++j) {
        const double need = required_power(p.bandwidth[j], p.effective_gain[j], rate);
        if (need > p.p_max) return false;
        total += std::max(need, p.p_min);
    }
    return total <= p.p_total;
}

}  // namespace

void validate(const PowerAllocProblem& p) {
    if (p.effective_gain.empty()) throw std::invalid_argument("power allocation: no users");
    if (p.bandwidth.size() != p.effective_gain.size()) {
        throw std::invalid_argument("power allocation: gain and bandwidth sizes differ");
    }
    for (std::size_t j = 0; j < p.effective_gain.size(); ++j) {
        if (!(p.effective_gain[j] >= 0.0) || !std::isfinite(p.effective_gain[j])) {
            throw std::invalid_argument("power allocation: effective gains must be finite and >= 0");
        }
        if (!(p.bandwidth[j] > 0.0)) throw std::invalid_argument("power allocation: bandwidth must be positive");
    }
    if (!(p.p_min >= 0.0) || !(p.p_min <= p.p_max)) {
        throw std::invalid_argument("power allocation: need 0 <= p_min <= p_max");
    }
    if (p.num_users() * p.p_min > p.p_total) {
        throw std::invalid_argument("power allocation: num_users * p_min exceeds p_total");
    }
}

double user_rate(double bandwidth, double effective_gain, double power) {
    return bandwidth * std::log2(1.0 + effective_gain * power);
}

PowerAllocation evaluate_allocation(const PowerAllocProblem& p, std::vector<double> powers) {
    PowerAllocation out;
    out.rates.resize(powers.size());
    out.min_rate = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < powers.size(); ++j) {
        out.rates[j] = user_rate(p.bandwidth[j], p.effective_gain[j], powers[j]);
        out.min_rate = std::min(out.min_rate, out.rates[j]);
    }
    out.powers = std::move(powers);
    return out;
}

PowerAllocation solve_max_min(const PowerAllocProblem& p, double rate_tolerance) {
    validate(p);
    const int n = p.num_users();

    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (int j = 0; j < n; ++j) {
        lo = std::min(lo, user_rate(p.bandwidth[j], p.effective_gain[j], p.p_min));
        hi = std::max(hi, user_rate(p.bandwidth[j], p.effective_gain[j], p.p_max));
    }
    const double tol = rate_tolerance > 0.0 ? rate_tolerance : 1e-6 * hi;
    if (feasible(p, hi)) {
        lo = hi;
    } else {
        while (hi - lo > tol) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            (feasible(p, mid) ? lo : hi) = mid;
        }
    }

    std::vector<double> powers(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        const double need = required_power(p.bandwidth[j], p.effective_gain[j], lo);
        powers[j] = std::clamp(std::max(need, p.p_min), p.p_min, p.p_max);
    }

    // Spread what the bottleneck left over, equally, capped at p_max.
    for (int round = 0; round < n + 1; ++round) {
        const double residual = p.p_total - sum_in_order(powers);
        int open = 0;
        for (double x : powers) open += x < p.p_max ? 1 : 0;
        if (residual <= 0.0 || open == 0) break;
        const double share = residual / open;
        for (auto& x : powers) {
            if (x < p.p_max) x = std::min(p.p_max, x + share);
        }
    }
    // Rounding in the additions can overshoot the budget by a few ulps.
    for (int guard = 0; guard < 64; ++guard) {
        const double excess = sum_in_order(powers) - p.p_total;
        if (excess <= 0.0) break;
        auto it = std::max_element(powers.begin(), powers.end());
        *it = std::max(p.p_min, std::nextafter(*it - excess, 0.0));
    }
    return evaluate_allocation(p, std::move(powers));
}

PowerAllocation brute_force_oracle(const PowerAllocProblem& p, int grid_points_per_dim) {
    validate(p);
    const int n = p.num_users();
    if (n > 4) throw std::invalid_argument("brute_force_oracle: at most 4 users");
    if (grid_points_per_dim < 2) throw std::invalid_argument("brute_force_oracle: need >= 2 grid points");

    const auto g = static_cast<std::size_t>(grid_points_per_dim);
    const double step = (p.p_max - p.p_min) / static_cast<double>(g - 1);
    std::vector<double> grid(g);
    for (std::size_t k = 0; k < g; ++k) grid[k] = k + 1 == g ? p.p_max : p.p_min + step * static_cast<double>(k);

    std::vector<std::vector<double>> rate_table(static_cast<std::size_t>(n), std::vector<double>(g));
    for (int j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < g; ++k) {
            rate_table[j][k] = user_rate(p.bandwidth[j], p.effective_gain[j], grid[k]);
        }
    }

    std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0), best;
    double best_min = -1.0;
    for (;;) {
        double total = 0.0;
        double mr = std::numeric_limits<double>::infinity();
        for (int j = 0; j < n; ++j) {
            total += grid[idx[j]];
            mr = std::min(mr, rate_table[j][idx[j]]);
        }
        if (total <= p.p_total && mr > best_min) {
            best_min = mr;
            best = idx;
        }
        int d = n - 1;
        while (d >= 0 && ++idx[d] == g) idx[d--] = 0;
        if (d < 0) break;
    }

    std::vector<double> powers(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) powers[j] = grid[best[j]];
    return evaluate_allocation(p, std::move(powers));
}

double grid_rate_slack(const PowerAllocProblem& p, int grid_points_per_dim) {
    const double step = (p.p_max - p.p_min) / std::max(grid_points_per_dim - 1, 1);
    double slack = 0.0;
    for (int j = 0; j < p.num_users(); ++j) {
        const double a = p.effective_gain[j];
        slack = std::max(slack, p.bandwidth[j] * a / (std::log(2.0) * (1.0 + a * p.p_min)) * step);
    }
    return slack;
}

}  // namespace sagin
