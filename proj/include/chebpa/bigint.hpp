#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>

namespace chebpa {

// Exact nonnegative counts (ball sizes, factorials, code cardinalities).
// Counts never pass through floating point.
using BigCount = boost::multiprecision::cpp_int;

inline BigCount factorial(int n) {
    if (n < 0) throw std::invalid_argument("factorial: negative argument");
    BigCount r = 1;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

inline BigCount ceil_div(const BigCount& a, const BigCount& b) {
    if (b <= 0) throw std::invalid_argument("ceil_div: nonpositive divisor");
    return (a + b - 1) / b;
}

inline BigCount pow_count(const BigCount& base, unsigned exp) {
    BigCount r = 1;
    for (unsigned i = 0; i < exp; ++i) r *= base;
    return r;
}

inline double count_to_double(const BigCount& x) { return x.convert_to<double>(); }

inline std::string to_decimal(const BigCount& x) { return x.str(); }

}  // namespace chebpa
