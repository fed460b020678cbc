#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sagin/rng.hpp"

namespace sagin {

struct Packet {
    std::uint64_t id = 0;
    int source_satellite = 0;
    int dest_user = 0;
    std::int64_t gen_time = 0;
    double size_bits = 0.0;
    std::int64_t deadline = 0;
    std::optional<std::int64_t> hap_arrival_time;

    bool operator==(const Packet&) const = default;
};

enum class SchedulingPolicy { Random, Fifo, Edf, Ldf, Sjf };

std::string_view to_string(SchedulingPolicy p);
/// Case-insensitive; throws std::invalid_argument on unknown names.
SchedulingPolicy parse_scheduling_policy(std::string_view name);

/// Finite ordered buffer shared by all users. Head is the oldest entry.
class BufferQueue {
public:
    explicit BufferQueue(std::size_t capacity);

    /// Appends `batch` at the tail, stamping hap_arrival_time = t, then drops
    /// from the head until the capacity holds. Returns the dropped packets.
    std::vector<Packet> enqueue_batch(std::vector<Packet> batch, std::int64_t t);

    /// Greedy policy-ordered selection of user `user`'s packets while the
    /// policy's top candidate fits the remaining `capacity_bits`. Selected
    /// packets leave the queue. `rng` is only consulted by the Random policy.
    /// With `arrived_before`, packets stamped at or after that slot are not
    /// candidates yet.
    std::vector<Packet> schedule_for_user(int user, SchedulingPolicy policy, double capacity_bits,
                                          Rng& rng,
                                          std::optional<std::int64_t> arrived_before = std::nullopt);

    /// Buffered packet count per destination user.
    std::vector<std::size_t> virtual_queue_lengths(int num_users) const;

    std::size_t size() const { return entries_.size(); }
    std::size_t capacity() const { return capacity_; }
    const std::deque<Packet>& entries() const { return entries_; }

    std::uint64_t enqueued_total() const { return enqueued_; }
    std::uint64_t dropped_total() const { return dropped_; }
    std::uint64_t delivered_total() const { return delivered_; }

private:
    std::size_t capacity_;
    std::deque<Packet> entries_;
    std::uint64_t enqueued_ = 0;
    std::uint64_t dropped_ = 0;
    std::uint64_t delivered_ = 0;
};

}  // namespace sagin
