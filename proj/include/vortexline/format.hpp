#pragma once

#include <charconv>
#include <stdexcept>
#include <string>
#include <system_error>

namespace vortexline {

// Shortest decimal representation that round-trips to the same double;
// locale-independent.
inline std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc())
    throw std::runtime_error("format_double: conversion failed");
  return std::string(buf, ptr);
}

inline double parse_double_exact(const std::string& s, const char* context) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw std::runtime_error(std::string(context) + ": '" + s +
                             "' is not a number");
  return out;
}

}  // namespace vortexline
