// precision.hpp — floating-point widths used by the recurrence and the characteristic function

#pragma once

#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace qdcav {

using Float128 = boost::multiprecision::number<
    boost::multiprecision::cpp_bin_float<128, boost::multiprecision::digit_base_2>,
    boost::multiprecision::et_off>;
using Float256 = boost::multiprecision::number<
    boost::multiprecision::cpp_bin_float<256, boost::multiprecision::digit_base_2>,
    boost::multiprecision::et_off>;

// `automatic` starts in double and escalates when cancellation demands it.
enum class Precision { automatic, bits64, bits128, bits256 };

inline Precision parse_precision(std::string_view text) {
    if (text == "auto") return Precision::automatic;
    if (text == "64") return Precision::bits64;
    if (text == "128") return Precision::bits128;
    if (text == "256") return Precision::bits256;
    throw std::invalid_argument("precision must be one of auto, 64, 128, 256; got '" + std::string(text) + "'");
}

inline std::string_view to_string(Precision precision) {
    switch (precision) {
        case Precision::automatic: return "auto";
        case Precision::bits64: return "64";
        case Precision::bits128: return "128";
        case Precision::bits256: return "256";
    }
    return "?";
}

template <class Real>
constexpr int significand_bits() {
    return std::numeric_limits<Real>::digits;
}

template <class Real>
Real machine_epsilon() {
    return std::numeric_limits<Real>::epsilon();
}

template <class Real>
double to_double(const Real& value) {
    if constexpr (std::is_floating_point_v<Real>) {
        return static_cast<double>(value);
    } else {
        return value.template convert_to<double>();
    }
}

// Calls fn.template operator()<Real>() with the Real type matching the
// requested width. `automatic` resolves to double here; callers that escalate
// do so themselves.
template <class Fn>
decltype(auto) dispatch_precision(Precision precision, Fn&& fn) {
    switch (precision) {
        case Precision::bits128: return fn.template operator()<Float128>();
        case Precision::bits256: return fn.template operator()<Float256>();
        case Precision::automatic:
        case Precision::bits64: break;
    }
    return fn.template operator()<double>();
}

}  // namespace qdcav
