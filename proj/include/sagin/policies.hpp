#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "sagin/env.hpp"
#include "sagin/rng.hpp"

namespace sagin {

struct EwgWeights {
    double aoi = 1.0;
    double buffer = 0.05;
    double handover = 2.0;
};

// Selectors return nullopt (the hold signal) when nothing is visible.

std::optional<int> random_select(std::span<const int> visible, Rng& rng);

/// Smallest visible index strictly greater than `last`, wrapping to the smallest.
std::optional<int> rr_select(std::span<const int> visible, std::optional<int> last);

/// Per-candidate EWG score. The AoI term is the HAP-side AoI sum projected one
/// slot ahead if the candidate is served; the buffer term is the projected
/// queue length after its pending batch arrives; the handover term is the
/// switch indicator.
double ewg_score(const PolicyView& view, const EwgWeights& w, int candidate);

/// Argmin of ewg_score over the visible set; ties go to the lowest index.
std::optional<int> ewg_select(const PolicyView& view, const EwgWeights& w);

enum class PolicyKind { Random, RoundRobin, Ewg };

std::string_view to_string(PolicyKind k);
/// Accepts "random", "rr"/"round-robin", "ewg". Throws std::invalid_argument.
PolicyKind parse_policy_kind(std::string_view name);

/// Stateful satellite-selection baseline for rollouts.
class SelectionPolicy {
public:
    virtual ~SelectionPolicy() = default;
    virtual void reset(std::uint64_t seed) = 0;
    virtual std::optional<int> select(const PolicyView& view) = 0;
};

std::unique_ptr<SelectionPolicy> make_policy(PolicyKind kind, const EwgWeights& weights = {});

}  // namespace sagin
