#pragma once

// Exact scalar for the zero-tolerance identity checks of the rational
// calculus.  cpp_rational keeps every +,-,* of integer inputs exact; monic
// synthetic divisions stay division-free, so integer data never leaves Q.

#include <boost/multiprecision/cpp_int.hpp>

#include "sreg/quaternion.hpp"

namespace sreg {

using Rational = boost::multiprecision::cpp_rational;

using QuatQ = Quat<Rational>;

}  // namespace sreg
