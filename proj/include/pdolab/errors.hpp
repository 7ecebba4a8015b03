#pragma once
#include <stdexcept>
#include <string>

namespace pdolab {

// Thrown when an arithmetic frequency sum leaves the represented lattice.
// Periodization would silently fold such a sum back; every code path that
// could do so raises instead.
struct aliasing_error : std::runtime_error {
  explicit aliasing_error(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when a requested dense computation would exceed the guard limits
// (e.g. materializing an operator matrix on a grid that is too fine).
struct resource_error : std::runtime_error {
  explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace pdolab
