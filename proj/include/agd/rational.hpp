#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace agd {

// Exact coefficient arithmetic. Every identity in the workbench is decided
// over Q; nothing in the verification path touches floating point.
using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline std::string rational_str(const Rational& q) { return q.str(); }

} // namespace agd
