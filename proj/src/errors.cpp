#include "qgraph/errors.hpp"

#include <fmt/format.h>

namespace qg {

namespace {

std::string join_messages(const std::vector<std::string>& messages) {
  std::string out = "graph spec invalid";
  for (const auto& m : messages) out += "\n  " + m;
  return out;
}

}  // namespace

SchemaError::SchemaError(std::vector<std::string> messages)
    : DomainError(join_messages(messages)), messages_(std::move(messages)) {}

PoleError::PoleError(std::string where, double magnitude)
    : Error(fmt::format("energy inside Dirichlet guard at {} (|s| = {:.3e})", where, magnitude)),
      where_(std::move(where)),
      magnitude_(magnitude) {}

}  // namespace qg
