#pragma once

#include <cstdint>

#include "sfbox/diagnostic.hpp"

namespace sfbox {

struct Fuel {
  std::uint64_t left;
  explicit Fuel(std::uint64_t n) : left(n) {}
  void step() {
    if (left == 0) fail(Code::FuelExhausted, "evaluation ran out of fuel");
    --left;
  }
};

}  // namespace sfbox
