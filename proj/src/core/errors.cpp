#include "affeig/errors.hpp"

#include <string>
#include <utility>

namespace affeig {

DegenerateDirection::DegenerateDirection(int index, double value, double threshold)
    : Error("degenerate direction: directional norm " + std::to_string(value) + " at direction " +
            std::to_string(index) + " is below " + std::to_string(threshold)),
      index_(index) {}

ParseError::ParseError(std::string field, const std::string& what)
    : Error("invalid field '" + field + "': " + what), field_(std::move(field)) {}

}  // namespace affeig
