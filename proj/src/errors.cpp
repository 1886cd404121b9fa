#include "soilrf/errors.hpp"

#include <cmath>

namespace soilrf {

namespace detail {
void throw_domain(const std::string& what) { throw DomainError(what); }
}  // namespace detail

void require_positive(double value, const char* name) {
  if (!std::isfinite(value) || value <= 0.0) {
    detail::throw_domain(std::string(name) + " must be finite and positive");
  }
}

void require_non_negative(double value, const char* name) {
  if (!std::isfinite(value) || value < 0.0) {
    detail::throw_domain(std::string(name) + " must be finite and non-negative");
  }
}

}  // namespace soilrf
