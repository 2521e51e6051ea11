#pragma once

#include "bootperc/geometry.hpp"
#include "doctest.h"

namespace doctest {
template <>
struct StringMaker<bootperc::ArcSet> {
  static String convert(const bootperc::ArcSet& s) { return bootperc::to_string(s).c_str(); }
};
template <>
struct StringMaker<bootperc::Arc> {
  static String convert(const bootperc::Arc& a) { return bootperc::to_string(a).c_str(); }
};
template <>
struct StringMaker<bootperc::Direction> {
  static String convert(const bootperc::Direction& d) { return bootperc::to_string(d).c_str(); }
};
}  // namespace doctest
