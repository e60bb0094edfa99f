#pragma once

#include <complex>

namespace wgscat {

using cdouble = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846264338327950288;

using namespace std::complex_literals;

}  // namespace wgscat
