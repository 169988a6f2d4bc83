#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace permreg {

struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed textual input.
struct parse_error : error {
  using error::error;
};

// Argument outside an operation's precondition.
struct parameter_error : error {
  using error::error;
};

// Density of a pair with an empty side.
struct undefined_density : parameter_error {
  using parameter_error::parameter_error;
};

struct resource_error : error {
  resource_error(const std::string& what, std::size_t bytes)
      : error(what), required_bytes(bytes) {}
  std::size_t required_bytes;
};

// A caller broke an operation contract, or an internal postcondition failed.
struct contract_error : error {
  using error::error;
};

// Re-chunking cannot continue (block would be smaller than the floor).
struct refinement_exhausted : error {
  using error::error;
};

}  // namespace permreg
