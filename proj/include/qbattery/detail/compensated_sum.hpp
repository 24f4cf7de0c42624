#pragma once

#include <cmath>

namespace qbattery::detail {

// Neumaier variant of Kahan summation; order-dependent only through the
// final rounding, so fixed-order accumulation is reproducible.
template <typename T>
class CompensatedSum {
public:
    void add(T x) {
        const T t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }

    T value() const { return sum_ + comp_; }

private:
    T sum_{};
    T comp_{};
};

}  // namespace qbattery::detail
