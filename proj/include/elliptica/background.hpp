#pragma once

#include <cmath>
#include <string>

#include "elliptica/error.hpp"

namespace elliptica {

/// Step height of the initial data: q0(x) -> c as x -> -inf, -> 0 as x -> +inf.
struct Background {
  double c = 1.0;

  Background() = default;
  explicit Background(double height) : c(height) {
    if (!(c > 0.0) || !std::isfinite(c))
      throw Error(Errc::out_of_domain, "step height c must be positive and finite");
  }
};

}  // namespace elliptica
