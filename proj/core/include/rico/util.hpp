#ifndef RICO_UTIL_HPP
#define RICO_UTIL_HPP

#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>

namespace rico {

// Orders identifiers so that embedded numbers compare by value:
// c2 < c10, n9 < n12. Plain lexicographic order would interleave them.
bool natural_less(std::string_view a, std::string_view b);

struct NaturalLess {
    using is_transparent = void;
    bool operator()(std::string_view a, std::string_view b) const {
        return natural_less(a, b);
    }
};

template <typename T>
using IdMap = std::map<std::string, T, NaturalLess>;
using IdSet = std::set<std::string, NaturalLess>;

std::uint64_t fnv1a64(std::string_view data);

// Cooperative cancellation handle. A default-constructed token is never
// cancelled; tokens copied from the same source share one flag.
class CancelToken {
public:
    CancelToken() = default;

    static CancelToken cancellable() {
        CancelToken t;
        t.flag_ = std::make_shared<std::atomic<bool>>(false);
        return t;
    }

    void request_cancel() const {
        if (flag_) flag_->store(true, std::memory_order_relaxed);
    }

    bool cancelled() const {
        return flag_ && flag_->load(std::memory_order_relaxed);
    }

private:
    std::shared_ptr<std::atomic<bool>> flag_;
};

} // namespace rico

#endif
