#include "mvlabel/errors.hpp"

#include <utility>

namespace mvlabel {

SchemaError::SchemaError(std::string column, const std::string& message)
    : Error(message), column_(std::move(column)) {}

ParseError::ParseError(const std::string& message, std::string raw)
    : Error(message), raw_(std::move(raw)) {}

namespace {

std::string stage_message(const std::string& stage, const std::string& view,
                          const std::string& message) {
  std::string out = "stage '" + stage + "'";
  if (!view.empty()) out += ", view '" + view + "'";
  return out + ": " + message;
}

}  // namespace

StageError::StageError(std::string stage, std::string view, const std::string& message,
                       ExitCode code)
    : Error(stage_message(stage, view, message)),
      stage_(std::move(stage)),
      view_(std::move(view)),
      code_(code) {}

}  // namespace mvlabel
