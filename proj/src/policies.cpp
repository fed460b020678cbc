#include "sagin/policies.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <stdexcept>
#include <string>

namespace sagin {

std::optional<int> random_select(std::span<const int> visible, Rng& rng) {
    if (visible.empty()) return std::nullopt;
    return visible[rng.uniform_index(visible.size())];
}

std::optional<int> rr_select(std::span<const int> visible, std::optional<int> last) {
    if (visible.empty()) return std::nullopt;
    const int after = last.value_or(-1);
    std::optional<int> wrap, next;
    for (int i : visible) {
        if (!wrap || i < *wrap) wrap = i;
        if (i > after && (!next || i < *next)) next = i;
    }
    return next ? next : wrap;
}

double ewg_score(const PolicyView& view, const EwgWeights& w, int candidate) {
    // Serving the candidate pulls its HAP-side AoI down to roughly the
    // satellite-side AoI plus one slot of transfer; everyone else ages by one.
    double projected_aoi = 0.0;
    for (std::size_t i = 0; i < view.delta.size(); ++i) {
        const auto d = static_cast<double>(view.delta[i]) + 1.0;
        if (static_cast<int>(i) == candidate) {
            projected_aoi += std::min(d, static_cast<double>(view.theta[i]) + 1.0);
        } else {
            projected_aoi += d;
        }
    }
    const bool has_batch = candidate >= 0 && static_cast<std::size_t>(candidate) < view.pending.size() &&
                           view.pending[candidate];
    const double projected_buffer =
        static_cast<double>(view.queue_length) + (has_batch ? static_cast<double>(view.num_users) : 0.0);
    const double switching = view.current && *view.current != candidate ? 1.0 : 0.0;
    return w.aoi * projected_aoi + w.buffer * projected_buffer + w.handover * switching;
}

std::optional<int> ewg_select(const PolicyView& view, const EwgWeights& w) {
    std::optional<int> best;
    double best_score = std::numeric_limits<double>::infinity();
    std::vector<int> order(view.visible.begin(), view.visible.end());
    std::sort(order.begin(), order.end());
    for (int i : order) {
        const double s = ewg_score(view, w, i);
        if (!best || s < best_score) {
            best = i;
            best_score = s;
        }
    }
    return best;
}

std::string_view to_string(PolicyKind k) {
    switch (k) {
        case PolicyKind::Random: return "random";
        case PolicyKind::RoundRobin: return "rr";
        case PolicyKind::Ewg: return "ewg";
    }
    return "unknown";
}

PolicyKind parse_policy_kind(std::string_view name) {
    std::string s(name);
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (s == "random") return PolicyKind::Random;
    if (s == "rr" || s == "round-robin" || s == "roundrobin") return PolicyKind::RoundRobin;
    if (s == "ewg") return PolicyKind::Ewg;
    throw std::invalid_argument("unknown selection policy: " + std::string(name));
}

namespace {

class RandomPolicy final : public SelectionPolicy {
public:
    void reset(std::uint64_t seed) override { rng_ = Rng::derive(seed, 0x5e1ec7ULL); }
    std::optional<int> select(const PolicyView& v) override { return random_select(v.visible, rng_); }

private:
    Rng rng_;
};

class RoundRobinPolicy final : public SelectionPolicy {
public:
    void reset(std::uint64_t) override { last_.reset(); }
    std::optional<int> select(const PolicyView& v) override {
        auto pick = rr_select(v.visible, last_);
        if (pick) last_ = pick;
        return pick;
    }

private:
    std::optional<int> last_;
};

class EwgPolicy final : public SelectionPolicy {
public:
    explicit EwgPolicy(EwgWeights w) : w_(w) {}
    void reset(std::uint64_t) override {}
    std::optional<int> select(const PolicyView& v) override { return ewg_select(v, w_); }

private:
    EwgWeights w_;
};

}  // namespace

std::unique_ptr<SelectionPolicy> make_policy(PolicyKind kind, const EwgWeights& weights) {
    switch (kind) {
        case PolicyKind::Random: return std::make_unique<RandomPolicy>();
        case PolicyKind::RoundRobin: return std::make_unique<RoundRobinPolicy>();
        case PolicyKind::Ewg: return std::make_unique<EwgPolicy>(weights);
    }
    throw std::invalid_argument("unknown policy kind");
}

}  // namespace sagin
