#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace propreward {

// A search or enumeration would exceed its configured budget of nodes.
// Callers refuse instead of returning a truncated answer.
class CapExceeded : public std::runtime_error
{
public:
  CapExceeded(const std::string& what, unsigned long long cap)
    : std::runtime_error(what + " (cap " + std::to_string(cap) + ")")
    , cap_(cap)
  {}

  unsigned long long cap() const noexcept { return cap_; }

private:
  unsigned long long cap_;
};

// Raised when an internal guarantee fails, e.g. potential dynamics that do not
// terminate. Seeing one of these means the model or the code is wrong.
class DefectError : public std::logic_error
{
public:
  using std::logic_error::logic_error;
};

class ParseError : public std::runtime_error
{
public:
  ParseError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what)
    , line_(line)
  {}

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

inline constexpr unsigned long long kDefaultCap = 10'000'000ULL;

}  // namespace propreward
