// JSON encodings of polynomials, boxes, pattern families and instances.
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "prelax/patterns.hpp"
#include "prelax/poly.hpp"

namespace prelax {

using Json = nlohmann::json;

/// Malformed JSON or a schema violation; the message carries the position
/// (line/column for syntax errors, a JSON pointer for schema errors).
class JsonError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Instance {
  std::string id;
  std::string tag;
  std::uint64_t seed = 0;
  Polynomial f;
  Box box;
  std::optional<PatternFamily> family;  // custom family shipped with the instance

  bool operator==(const Instance&) const = default;
};

Json parse_json(const std::string& text);
Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

Json to_json(const Exponent& e);
Json to_json(const Polynomial& f);
Json to_json(const Box& box);
Json to_json(const PatternFamily& fam, const std::string& kind = "custom");
Json to_json(const Instance& inst);

/// `where` is the JSON pointer of `j`, used in error messages.
Exponent exponent_from_json(const Json& j, std::size_t n, const std::string& where = "");
Polynomial polynomial_from_json(const Json& j, const std::string& where = "");
Box box_from_json(const Json& j, std::size_t n, const std::string& where = "");
PatternFamily family_from_json(const Json& j, const std::string& where = "");
Instance instance_from_json(const Json& j);

/// Field access with positioned errors.
const Json& require_field(const Json& j, const char* key, const std::string& where);

}  // namespace prelax
