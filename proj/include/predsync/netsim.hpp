#pragma once

#include "predsync/graph.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <deque>
#include <optional>
#include <vector>

namespace predsync {

/// What one node ships over one edge in one step: the base predictor and the
/// s = 1..w forecasts that follow it.
struct MessageBundle {
    NodeId sender = 0;
    long send_step = 0;
    Eigen::VectorXd base;
    std::vector<Eigen::VectorXd> horizon_values;

    // Index 0 is the base value. Throws HorizonInsufficient past the end.
    const Eigen::VectorXd& value(int index) const;
};

/// Fixed-delay FIFO for one edge.
class Channel {
public:
    Channel(NodeId sender, NodeId receiver, int delay);

    // Throws DuplicateSend when a bundle for step k was already queued.
    void send(MessageBundle bundle, long k);

    // The bundle whose arrival step is exactly k, if any. Bundles whose
    // arrival step has passed without being collected are discarded.
    std::optional<MessageBundle> receive(long k);

    NodeId sender() const noexcept { return sender_; }
    NodeId receiver() const noexcept { return receiver_; }
    int delay() const noexcept { return delay_; }

    std::size_t sent_count() const noexcept { return sent_; }
    std::size_t received_count() const noexcept { return received_; }
    std::size_t dropped_count() const noexcept { return dropped_; }
    std::size_t in_flight() const noexcept { return queue_.size(); }

private:
    struct Pending {
        long arrival_step;
        MessageBundle bundle;
    };

    NodeId sender_;
    NodeId receiver_;
    int delay_;
    std::deque<Pending> queue_;
    std::optional<long> last_send_;
    std::size_t sent_ = 0;
    std::size_t received_ = 0;
    std::size_t dropped_ = 0;
};

}  // namespace predsync
