#include "sagin/rollout.hpp"

namespace sagin {

namespace {

template <typename NextAction>
EpisodeResult drive(Environment& env, std::uint64_t seed, int episode, NextAction&& next) {
    EpisodeResult res;
    env.reset(seed);
    while (!env.done()) {
        const int a = next();
        res.actions.push_back(a);
        const StepOutcome out = env.step(a);
        res.summary.total_reward += out.reward;
        res.records.push_back(make_trace_record(episode, out));
    }
    const ObjectiveReport rep = objective_report(env);
    res.summary.episode = episode;
    res.summary.seed = seed;
    res.summary.f1 = rep.f1;
    res.summary.f2 = rep.f2;
    res.summary.dropped = env.queue().dropped_total();
    res.summary.delivered = env.queue().delivered_total();
    return res;
}

}  // namespace

EpisodeResult run_episode(Environment& env, SelectionPolicy& policy, std::uint64_t seed, int episode) {
    policy.reset(seed);
    return drive(env, seed, episode, [&] { return policy.select(env.policy_view()).value_or(kHoldAction); });
}

EpisodeResult replay_episode(Environment& env, std::span<const int> actions, std::uint64_t seed, int episode) {
    std::size_t k = 0;
    return drive(env, seed, episode, [&] { return k < actions.size() ? actions[k++] : kHoldAction; });
}

}  // namespace sagin
