#include "predsync/netsim.hpp"

#include "predsync/error.hpp"

#include <string>
#include <utility>

namespace predsync {

const Eigen::VectorXd& MessageBundle::value(int index) const {
    if (index == 0) return base;
    if (index < 0 || static_cast<std::size_t>(index) > horizon_values.size()) {
        fail(ErrorCode::HorizonInsufficient,
             "forecast index " + std::to_string(index) + " requested from node " +
                 std::to_string(sender) + ", bundle carries " +
                 std::to_string(horizon_values.size()));
    }
    return horizon_values[static_cast<std::size_t>(index) - 1];
}

Channel::Channel(NodeId sender, NodeId receiver, int delay)
    : sender_(sender), receiver_(receiver), delay_(delay) {
    if (delay < 1) fail(ErrorCode::InvalidArgument, "channel delay must be >= 1");
}

void Channel::send(MessageBundle bundle, long k) {
    if (bundle.send_step != k) {
        fail(ErrorCode::InvalidArgument, "bundle stamped for step " +
                                             std::to_string(bundle.send_step) + " sent at " +
                                             std::to_string(k));
    }
    if (last_send_ && *last_send_ >= k) {
        fail(ErrorCode::DuplicateSend, "edge " + std::to_string(sender_) + "->" +
                                           std::to_string(receiver_) + " already sent at step " +
                                           std::to_string(*last_send_));
    }
    last_send_ = k;
    queue_.push_back(Pending{k + delay_, std::move(bundle)});
    ++sent_;
}

std::optional<MessageBundle> Channel::receive(long k) {
    while (!queue_.empty() && queue_.front().arrival_step < k) {
        queue_.pop_front();
        ++dropped_;
    }
    if (queue_.empty() || queue_.front().arrival_step != k) return std::nullopt;
    MessageBundle out = std::move(queue_.front().bundle);
    queue_.pop_front();
    ++received_;
    return out;
}

}  // namespace predsync
