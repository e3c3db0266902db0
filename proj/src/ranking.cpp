#include "rmab/ranking.hpp"

#include <limits>
#include <stdexcept>
#include <string>

namespace rmab {

Ranking::Ranking(std::vector<ArmId> order) : order_(std::move(order)) {
    if (order_.empty()) return;

    ArmId lo = order_.front();
    ArmId hi = order_.front();
    for (ArmId id : order_) {
        if (id < lo) lo = id;
        if (id > hi) hi = id;
    }
    min_id_ = lo;

    const auto n = order_.size();
    const auto span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo);
    if (span < 4 * n + 4) {
        dense_.assign(static_cast<std::size_t>(span) + 1, 0);
        for (std::size_t pos = 0; pos < n; ++pos) {
            auto& slot = dense_[static_cast<std::size_t>(order_[pos] - lo)];
            if (slot != 0)
                throw std::invalid_argument("duplicate arm id in ranking: " +
                                            std::to_string(order_[pos]));
            slot = static_cast<std::int32_t>(pos) + 1;
        }
    } else {
        sparse_.reserve(n);
        for (std::size_t pos = 0; pos < n; ++pos) {
            auto [it, inserted] = sparse_.emplace(order_[pos], static_cast<std::int32_t>(pos));
            if (!inserted)
                throw std::invalid_argument("duplicate arm id in ranking: " +
                                            std::to_string(order_[pos]));
        }
    }
}

std::int64_t Ranking::find_pos(ArmId id) const {
    if (!dense_.empty()) {
        if (id < min_id_) return -1;
        const auto offset = static_cast<std::uint64_t>(id - min_id_);
        if (offset >= dense_.size()) return -1;
        return dense_[static_cast<std::size_t>(offset)] - 1;
    }
    const auto it = sparse_.find(id);
    return it == sparse_.end() ? -1 : it->second;
}

std::int64_t Ranking::rank(ArmId id) const {
    const std::int64_t pos = find_pos(id);
    if (pos < 0)
        throw std::invalid_argument("arm id not present in ranking: " + std::to_string(id));
    return pos + 1;
}

} // namespace rmab
