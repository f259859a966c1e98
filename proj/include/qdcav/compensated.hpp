// compensated.hpp — Neumaier (improved Kahan) summation

#pragma once

#ifdef __FAST_MATH__
#error fast math enabled, this would negate the compensation
#endif

namespace qdcav {

template <class Real>
class NeumaierSum {
public:
    void add(const Real& value) {
        using std::abs;
        const Real total = sum_ + value;
        if (abs(sum_) >= abs(value)) {
            carry_ += (sum_ - total) + value;
        } else {
            carry_ += (value - total) + sum_;
        }
        sum_ = total;
        abs_sum_ += abs(value);
    }

    Real value() const { return sum_ + carry_; }
    // Sum of |terms|; the ratio abs_total()/|value()| measures cancellation.
    const Real& abs_total() const { return abs_sum_; }

private:
    Real sum_{0};
    Real carry_{0};
    Real abs_sum_{0};
};

}  // namespace qdcav
