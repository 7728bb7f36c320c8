#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace elliptica {

enum class Errc {
  invalid_spec,
  non_convergent,
  out_of_domain,
  modulus_out_of_range,
  slow_convergence,
  overflow,
  invalid_h0,
  window_empty,
  evaluation_failure,
};

std::string_view to_string(Errc code) noexcept;

/// Every failure in the library is reported through this type; `code()`
/// carries the kind so callers can branch (e.g. dualize on slow_convergence).
class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

private:
  Errc code_;
};

}  // namespace elliptica
