#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "rmab/types.hpp"

namespace rmab {

/**
 * A permutation of arm identifiers in descending Whittle-index order.
 * rank(id) is the 1-based position of an arm in the ordering.
 *
 * The inverse lookup is built once at construction: a direct-index table when
 * the id range is dense, a hash map otherwise.
 */
class Ranking {
  public:
    Ranking() = default;

    /// Takes ownership of the ordering. Throws invalid_argument on duplicates.
    explicit Ranking(std::vector<ArmId> order);

    const std::vector<ArmId>& order() const { return order_; }
    std::size_t size() const { return order_.size(); }
    bool empty() const { return order_.empty(); }

    /// 1-based rank; throws invalid_argument if the arm is absent.
    std::int64_t rank(ArmId id) const;

    bool contains(ArmId id) const { return find_pos(id) >= 0; }

  private:
    // 0-based position, or -1 when absent.
    std::int64_t find_pos(ArmId id) const;

    std::vector<ArmId> order_;
    ArmId min_id_ = 0;
    std::vector<std::int32_t> dense_; // pos + 1, 0 means absent
    std::unordered_map<ArmId, std::int32_t> sparse_;
};

} // namespace rmab
