#include "hmlab/error.hpp"

namespace hmlab {

UnderResolved::UnderResolved(const std::string& what, double requested, double minimum)
    : Error(what + " (requested " + std::to_string(requested) + ", minimum " +
            std::to_string(minimum) + ")"),
      requested_(requested),
      minimum_(minimum) {}

ConfigError::ConfigError(const std::string& field, const std::string& message)
    : Error(field + ": " + message), field_(field) {}

}  // namespace hmlab
