#include "cli_io.hpp"

#include <regex>
#include <sstream>

namespace fpmod::cli {

using nlohmann::json;

namespace {

unsigned long parse_count(const std::string &s, const std::string &what) {
  if (s.empty() || s.size() > 9 || s.find_first_not_of("0123456789") != std::string::npos)
    throw ParseError(what + ": expected a non-negative integer, got '" + s + "'");
  return std::stoul(s);
}

mpz_class to_integer(const json &v) {
  if (v.is_number_integer()) return mpz_class(std::to_string(v.get<long long>()));
  if (v.is_string()) {
    const auto &s = v.get_ref<const std::string &>();
    static const std::regex integer("-?[0-9]+");
    if (std::regex_match(s, integer)) return mpz_class(s);
  }
  throw ParseError("expected an integer entry, got " + v.dump());
}

template <class E>
typename E::Elem to_element(const E &eng, const json &v) {
  if constexpr (std::is_same_v<E, PolyEngine>) {
    if (v.is_number_integer()) return eng.from_coeffs({v.get<long>()});
    if (!v.is_array()) throw ParseError("expected a coefficient list, got " + v.dump());
    std::vector<long> c;
    for (const auto &x : v) {
      if (!x.is_number_integer()) throw ParseError("expected an integer coefficient, got " + x.dump());
      c.push_back(x.get<long>());
    }
    return eng.from_coeffs(c);
  } else if constexpr (std::is_same_v<E, ModEngine>) {
    return eng.reduce(to_integer(v));
  } else {
    (void)eng;
    return to_integer(v);
  }
}

/// Splits a row line into entries: integers or bracketed lists.
json scan_entries(const std::string &line, std::size_t lineno) {
  json out = json::array();
  std::size_t i = 0;
  auto fail = [&](const std::string &msg) { throw ParseError("line " + std::to_string(lineno) + ": " + msg); };
  while (i < line.size()) {
    if (std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    std::size_t j = i;
    if (line[i] == '[') {
      j = line.find(']', i);
      if (j == std::string::npos) fail("unterminated '['");
      ++j;
    } else {
      while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    }
    std::string tok = line.substr(i, j - i);
    static const std::regex integer("-?[0-9]+");
    if (std::regex_match(tok, integer)) {
      out.push_back(tok.size() < 18 ? json(std::stoll(tok)) : json(tok));
    } else {
      json parsed;
      try {
        parsed = json::parse(tok);
      } catch (const json::parse_error &) {
        fail("bad entry '" + tok + "'");
      }
      if (!parsed.is_array()) fail("bad entry '" + tok + "'");
      out.push_back(parsed);
    }
    i = j;
  }
  return out;
}

void check_shape(const RawPresentation &p, std::optional<std::size_t> relations, const std::string &where) {
  if (p.rows.size() != p.generators && !(p.rows.empty() && relations.value_or(0) == 0))
    throw ParseError(where + ": " + std::to_string(p.generators) + " generators but " + std::to_string(p.rows.size()) +
                     " rows");
  std::size_t width = relations.value_or(p.rows.empty() ? 0 : p.rows[0].size());
  for (const auto &row : p.rows)
    if (!row.is_array() || row.size() != width) throw ParseError(where + ": rows must all have " + std::to_string(width) + " entries");
}

} // namespace

AnyEngine parse_engine(const std::string &tag) {
  static const std::regex form(R"((int)|(mod|poly)\(([0-9]{1,9})\))");
  std::smatch m;
  if (!std::regex_match(tag, m, form)) throw ParseError("unknown ring '" + tag + "' (expected int, mod(n) or poly(p))");
  if (m[1].matched) return IntegerEngine{};
  const unsigned long n = std::stoul(m[3]);
  if (m[2] == "mod") {
    if (n < 2) throw ParseError("mod(n) needs n >= 2");
    return ModEngine(mpz_class(n));
  }
  try {
    return PolyEngine(static_cast<std::uint32_t>(n));
  } catch (const DomainError &e) {
    throw ParseError(e.what());
  }
}

std::string engine_tag(const AnyEngine &eng) {
  return std::visit([](const auto &e) { return e.tag(); }, eng);
}

RawDocument parse_text(const std::string &text) {
  RawDocument doc;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  enum { Top, Header, Rows } state = Top;
  RawPresentation cur;
  std::optional<std::size_t> relations;
  bool have_gens = false;
  auto fail = [&](const std::string &msg) { throw ParseError("line " + std::to_string(lineno) + ": " + msg); };

  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream words(line);
    std::string key;
    if (!(words >> key)) continue;
    std::string rest;
    std::getline(words, rest);
    auto arg = [&] {
      std::istringstream r(rest);
      std::string a, extra;
      if (!(r >> a) || (r >> extra)) fail("'" + key + "' takes exactly one argument");
      return a;
    };

    if (key == "ring") {
      if (state != Top || !doc.ring.empty()) fail("'ring' must appear once, before any module");
      doc.ring = arg();
    } else if (key == "module") {
      if (state != Top) fail("'module' inside an unfinished module");
      if (doc.ring.empty()) fail("'ring' must come before the first module");
      cur = RawPresentation{};
      relations.reset();
      have_gens = false;
      state = Header;
    } else if (key == "generators") {
      if (state != Header || have_gens) fail("'generators' must open a module header");
      cur.generators = parse_count(arg(), "generators");
      have_gens = true;
    } else if (key == "relations") {
      if (state != Header || !have_gens || relations) fail("'relations' must follow 'generators'");
      relations = parse_count(arg(), "relations");
      state = Rows;
    } else if (key == "row") {
      if (state != Rows) fail("'row' before the module header is complete");
      json row = scan_entries(rest, lineno);
      if (row.size() != *relations)
        fail("row has " + std::to_string(row.size()) + " entries, expected " + std::to_string(*relations));
      cur.rows.push_back(row);
    } else if (key == "end") {
      if (state != Rows) fail("'end' without a complete module header");
      check_shape(cur, relations, "line " + std::to_string(lineno));
      doc.modules.push_back(cur);
      state = Top;
    } else {
      fail("unknown keyword '" + key + "'");
    }
  }
  if (state != Top) throw ParseError("unterminated module block (missing 'end')");
  if (doc.ring.empty()) throw ParseError("missing 'ring' line");
  if (doc.modules.empty()) throw ParseError("no module blocks");
  return doc;
}

namespace {

RawPresentation raw_from_json(const json &obj, const std::string &where) {
  if (!obj.is_object() || !obj.contains("relations")) throw ParseError(where + ": expected an object with 'relations'");
  RawPresentation p;
  p.rows = obj.at("relations");
  if (!p.rows.is_array()) throw ParseError(where + ": 'relations' must be an array of rows");
  if (obj.contains("generators")) {
    if (!obj["generators"].is_number_unsigned()) throw ParseError(where + ": 'generators' must be a count");
    p.generators = obj["generators"].get<std::size_t>();
  } else {
    p.generators = p.rows.size();
  }
  check_shape(p, std::nullopt, where);
  return p;
}

} // namespace

RawDocument parse_json(const json &doc) {
  if (!doc.is_object() || !doc.contains("ring") || !doc["ring"].is_string())
    throw ParseError("expected a JSON object with a string 'ring'");
  RawDocument out;
  out.ring = doc["ring"].get<std::string>();
  if (doc.contains("modules")) {
    if (!doc["modules"].is_array()) throw ParseError("'modules' must be an array");
    for (std::size_t i = 0; i < doc["modules"].size(); ++i)
      out.modules.push_back(raw_from_json(doc["modules"][i], "modules[" + std::to_string(i) + "]"));
  } else {
    out.modules.push_back(raw_from_json(doc, "presentation"));
  }
  if (out.modules.empty()) throw ParseError("no modules");
  return out;
}

RawDocument parse_document(const std::string &text) {
  auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    json doc;
    try {
      doc = json::parse(text);
    } catch (const json::parse_error &e) {
      throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    return parse_json(doc);
  }
  return parse_text(text);
}

RawPresentation raw_from_matrix(const std::string &matrix_json, std::optional<std::size_t> generators) {
  json rows;
  try {
    rows = json::parse(matrix_json);
  } catch (const json::parse_error &e) {
    throw ParseError(std::string("--relations: invalid JSON: ") + e.what());
  }
  json obj{{"relations", rows}};
  if (generators) obj["generators"] = *generators;
  return raw_from_json(obj, "--relations");
}

template <class E>
Presentation<E> to_presentation(const E &eng, const RawPresentation &raw) {
  const std::size_t rels = raw.rows.empty() ? 0 : raw.rows[0].size();
  MatrixOf<E> F(raw.generators, rels);
  for (std::size_t i = 0; i < raw.rows.size(); ++i)
    for (std::size_t j = 0; j < rels; ++j) F(i, j) = to_element(eng, raw.rows[i][j]);
  return Presentation<E>(eng, raw.generators, std::move(F));
}

template Presentation<IntegerEngine> to_presentation(const IntegerEngine &, const RawPresentation &);
template Presentation<PolyEngine> to_presentation(const PolyEngine &, const RawPresentation &);
template Presentation<ModEngine> to_presentation(const ModEngine &, const RawPresentation &);

} // namespace fpmod::cli
