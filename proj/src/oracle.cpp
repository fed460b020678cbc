#include "sagin/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sagin/policies.hpp"
#include "sagin/rollout.hpp"

namespace sagin::oracle {

PowerAllocProblem random_instance(Rng& rng, int num_users) {
    PowerAllocProblem p;
    for (int j = 0; j < num_users; ++j) {
        p.effective_gain.push_back(std::exp(rng.uniform(std::log(0.05), std::log(20.0))));
        p.bandwidth.push_back(rng.uniform(0.5e6, 2.0e6));
    }
    p.p_min = rng.uniform(0.0, 0.3);
    p.p_max = rng.uniform(1.0, 5.0);
    p.p_total = rng.uniform(num_users * p.p_min + 0.1, num_users * p.p_max * 1.1);
    return p;
}

AoiHistory resimulate_aoi(const std::vector<SlotEvents>& log, int ns, int nu) {
    AoiHistory h;
    h.theta.push_back(std::vector<Age>(ns, 0));
    h.delta.push_back(std::vector<Age>(ns, 0));
    h.user.push_back(std::vector<Age>(static_cast<std::size_t>(ns) * nu, 0));
    auto at = [](const std::vector<std::vector<Age>>& hist, std::int64_t t) -> const std::vector<Age>& {
        return hist[static_cast<std::size_t>(std::max<std::int64_t>(t, 0))];
    };
    for (std::size_t k = 0; k < log.size(); ++k) {
        const SlotEvents& e = log[k];
        const auto t = static_cast<std::int64_t>(k) + 1;
        std::vector<Age> th = h.theta.back();
        for (int i = 0; i < ns; ++i) th[i] = e.generated[i] ? 0 : th[i] + 1;
        h.theta.push_back(th);

        std::vector<Age> de = h.delta.back();
        for (int i = 0; i < ns; ++i) {
            if (e.served && *e.served == i) {
                de[i] = at(h.theta, t - e.hap_delay)[i] + e.hap_delay;
            } else {
                de[i] = de[i] + 1;
            }
        }
        h.delta.push_back(de);

        std::vector<Age> us = h.user.back();
        for (int i = 0; i < ns; ++i) {
            for (int j = 0; j < nu; ++j) {
                const auto& srcs = e.delivered[j];
                const bool got = std::find(srcs.begin(), srcs.end(), i) != srcs.end();
                Age& cell = us[static_cast<std::size_t>(i) * nu + j];
                cell = got ? at(h.delta, t - e.user_delay[j])[i] + e.user_delay[j] : cell + 1;
            }
        }
        h.user.push_back(us);
    }
    return h;
}

bool ledger_matches(const AoiLedger& ledger, const AoiHistory& h) {
    const int ns = ledger.num_satellites(), nu = ledger.num_users();
    if (static_cast<std::int64_t>(h.theta.size()) != ledger.slots() + 1) return false;
    for (std::int64_t t = 0; t <= ledger.slots(); ++t) {
        for (int i = 0; i < ns; ++i) {
            if (ledger.theta(t, i) != h.theta[t][i] || ledger.delta(t, i) != h.delta[t][i]) return false;
            for (int j = 0; j < nu; ++j) {
                if (ledger.user(t, i, j) != h.user[t][static_cast<std::size_t>(i) * nu + j]) return false;
            }
        }
    }
    return true;
}

CheckResult check_power_allocation(std::uint64_t seed, int instances, int grid_points) {
    CheckResult r{"power allocation: bisection vs grid oracle", true, {}};
    Rng rng = Rng::derive(seed, 0x90a1ULL);
    int failures = 0;
    double worst_gap = 0.0;
    for (int k = 0; k < instances; ++k) {
        const PowerAllocProblem p = random_instance(rng);
        const PowerAllocation s = solve_max_min(p);
        const PowerAllocation o = brute_force_oracle(p, grid_points);
        const double slack = grid_rate_slack(p, grid_points);
        double total = 0.0;
        bool box = true;
        for (double x : s.powers) {
            total += x;
            box = box && x >= p.p_min && x <= p.p_max;
        }
        const double tol = 1e-6 * o.min_rate + 1e-9;
        const bool ok = box && total <= p.p_total && s.min_rate >= o.min_rate - tol &&
                        s.min_rate <= o.min_rate + slack + tol;
        worst_gap = std::max(worst_gap, (s.min_rate - o.min_rate) / std::max(o.min_rate, 1e-300));
        if (!ok) ++failures;
    }
    std::ostringstream os;
    os << instances - failures << "/" << instances << " instances ok, max relative solver-oracle gap " << worst_gap;
    r.passed = failures == 0;
    r.detail = os.str();
    return r;
}

CheckResult check_aoi_resimulation(const SimConfig& config, std::uint64_t seed, std::int64_t slots) {
    CheckResult r{"aoi ledger vs scalar re-simulation", false, {}};
    SimConfig c = config;
    c.episode_length = slots;
    Environment env(c);
    auto policy = make_policy(PolicyKind::Random);
    run_episode(env, *policy, seed, 0);
    const AoiHistory h = resimulate_aoi(env.event_log(), c.num_satellites, c.num_users);
    r.passed = ledger_matches(env.aoi(), h);
    r.detail = std::to_string(slots) + " slots, " + (r.passed ? "exact match" : "MISMATCH");
    return r;
}

}  // namespace sagin::oracle
