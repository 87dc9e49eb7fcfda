#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "blockspec/block_model.hpp"
#include "blockspec/error.hpp"
#include "blockspec/stieltjes_solver.hpp"

namespace blockspec {

struct RunConfig {
  BlockStructure structure;
  std::size_t n = 1000;
  std::size_t trials = 20;
  std::uint64_t seed = 1;
  int grid_points = 513;
  SolverParams solver;
  std::string output_path;  // empty: standard output

  // Checks every field; throws ValidationError (kValidationError) naming it.
  void validate() const;
};

// Thrown for malformed JSON. line and column are 1-based.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error(ErrorCode::kParseError, what), line_(line), column_(column) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& what)
      : Error(ErrorCode::kValidationError, field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Strict parse: unknown keys and wrongly typed values are errors; missing
/// keys other than alpha and g take the defaults above.
RunConfig parse_config(std::string_view text);

RunConfig load_config(const std::string& path);

}  // namespace blockspec
