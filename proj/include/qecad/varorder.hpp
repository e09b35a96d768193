#ifndef QECAD_VARORDER_HPP
#define QECAD_VARORDER_HPP

#include <memory>
#include <string>
#include <vector>

#include "qecad/rational.hpp"

namespace qecad {

// Fixed global variable order. CAD level i (1-based) corresponds to
// variable index i-1. All polynomials sharing a computation must carry
// the same order.
class VarOrder {
  public:
    VarOrder() = default;
    explicit VarOrder(std::vector<std::string> names) : names_(std::move(names)) {}

    std::size_t size() const { return names_.size(); }
    const std::string& name(std::size_t i) const { return names_.at(i); }
    const std::vector<std::string>& names() const { return names_; }

    // -1 when absent.
    int index_of(const std::string& name) const {
        for (std::size_t i = 0; i < names_.size(); ++i)
            if (names_[i] == name) return static_cast<int>(i);
        return -1;
    }

    bool operator==(const VarOrder& o) const { return names_ == o.names_; }

  private:
    std::vector<std::string> names_;
};

using VarOrderPtr = std::shared_ptr<const VarOrder>;

inline VarOrderPtr make_order(std::vector<std::string> names) {
    return std::make_shared<const VarOrder>(std::move(names));
}

inline bool same_order(const VarOrderPtr& a, const VarOrderPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    return *a == *b;
}

}  // namespace qecad

#endif  // QECAD_VARORDER_HPP
