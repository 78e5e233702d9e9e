#pragma once

// Input side of the command-line tool: ring tags and the two presentation
// formats (line-oriented text, JSON object). docs/formats.md has the grammar.

#include "fpmod/fpmod.hpp"

#include <json.hpp>

#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace fpmod::cli {

/// Malformed input; the tool exits with status 2.
class ParseError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

using AnyEngine = std::variant<IntegerEngine, PolyEngine, ModEngine>;

/// int | mod(n) | poly(p)
AnyEngine parse_engine(const std::string &tag);
std::string engine_tag(const AnyEngine &eng);

/// Entries still in JSON form; converted once the engine is known.
struct RawPresentation {
  std::size_t generators = 0;
  nlohmann::json rows = nlohmann::json::array(); // generators x relations
};

struct RawDocument {
  std::string ring;
  std::vector<RawPresentation> modules;
};

RawDocument parse_text(const std::string &text);
RawDocument parse_json(const nlohmann::json &doc);
/// JSON if the first non-blank character is '{', text otherwise.
RawDocument parse_document(const std::string &text);

/// A JSON matrix (array of rows) with an optional explicit generator count.
RawPresentation raw_from_matrix(const std::string &matrix_json, std::optional<std::size_t> generators);

template <class E>
Presentation<E> to_presentation(const E &eng, const RawPresentation &raw);

} // namespace fpmod::cli
