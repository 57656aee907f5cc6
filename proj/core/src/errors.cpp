#include "lrce/errors.hpp"

#include <utility>

namespace lrce {

ConfigError::ConfigError(std::string pointer, const std::string& what)
    : Error(ErrorCode::config, pointer.empty() ? what : pointer + ": " + what),
      pointer_(std::move(pointer)) {}

ValidationError::ValidationError(std::string check, const std::string& what)
    : Error(ErrorCode::validation, "[" + check + "] " + what), check_(std::move(check)) {}

} // namespace lrce
