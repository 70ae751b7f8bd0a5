#include "locnoise/errors.hpp"

#include <fmt/format.h>

namespace locnoise {

ValidationError::ValidationError(std::size_t layer_index, const std::string& what)
    : std::runtime_error(fmt::format("layer {}: {}", layer_index, what)),
      layer_index_(layer_index) {}

}  // namespace locnoise
