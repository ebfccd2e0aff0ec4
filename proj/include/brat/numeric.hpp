#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace brat {

// All counting is exact. Path counts overflow 64 bits quickly once
// capacity-sized multiplicities appear, so arbitrary precision throughout.
using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

} // namespace brat
