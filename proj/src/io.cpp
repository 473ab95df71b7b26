#include "gjulia/io.hpp"

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "gjulia/errors.hpp"

namespace gjulia {

using nlohmann::json;

std::string input_digest(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

namespace {

// Locates a JSON pointer in the source text to report a line number.
// Keys are matched textually; array indices by counting elements.
class Locator {
 public:
  explicit Locator(std::string_view text) : text_(text) {}

  int line_of(const std::vector<std::string>& path) const {
    std::size_t pos = 0;
    for (const auto& token : path) {
      if (!token.empty() && token.front() == '#') {
        pos = skip_elements(pos, std::stoi(token.substr(1)));
      } else {
        const auto found = text_.find('"' + token + '"', pos);
        if (found == std::string_view::npos) break;
        pos = found;
      }
    }
    int line = 1;
    for (std::size_t i = 0; i < pos && i < text_.size(); ++i)
      if (text_[i] == '\n') ++line;
    return line;
  }

 private:
  std::size_t skip_elements(std::size_t pos, int count) const {
    pos = text_.find('[', pos);
    if (pos == std::string_view::npos) return text_.size();
    int depth = 1;
    bool in_string = false;
    for (std::size_t i = pos + 1; i < text_.size(); ++i) {
      const char c = text_[i];
      if (in_string) {
        if (c == '\\') ++i;
        else if (c == '"') in_string = false;
        continue;
      }
      if (count == 0 && !std::isspace(static_cast<unsigned char>(c))) return i;
      if (c == '"') in_string = true;
      else if (c == '[' || c == '{') ++depth;
      else if ((c == ']' || c == '}') && --depth == 0) return i;
      else if (c == ',' && depth == 1) --count;
    }
    return text_.size();
  }

  std::string_view text_;
};

class Reader {
 public:
  explicit Reader(std::string_view text) : locator_(text) {}

  [[noreturn]] void fail(const std::vector<std::string>& path,
                         const std::string& message) const {
    std::string pointer;
    for (const auto& t : path)
      pointer += "/" + (t.front() == '#' ? t.substr(1) : t);
    if (pointer.empty()) pointer = "/";
    throw InputError("line " + std::to_string(locator_.line_of(path)) +
                     ", field " + pointer + ": " + message);
  }

  void only_keys(const json& object, const std::vector<std::string>& path,
                 std::initializer_list<const char*> allowed) const {
    if (!object.is_object()) fail(path, "expected an object");
    for (const auto& [key, value] : object.items()) {
      bool ok = false;
      for (const char* a : allowed) ok = ok || key == a;
      if (!ok) {
        auto p = path;
        p.push_back(key);
        fail(p, "unknown field");
      }
    }
  }

  const json& require(const json& object, std::vector<std::string> path,
                      const char* key) const {
    if (!object.contains(key)) fail(path, std::string("missing field \"") + key + "\"");
    return object.at(key);
  }

  Rational rational(const json& value, const std::vector<std::string>& path) const {
    if (value.is_number_integer()) return Rational(value.get<long long>());
    if (!value.is_string())
      fail(path, "expected a decimal or \"p/q\" string");
    try {
      return parse_rational(value.get<std::string>());
    } catch (const std::exception& e) {
      fail(path, e.what());
    }
  }

  ComplexRational coefficient(const json& value,
                              const std::vector<std::string>& path) const {
    if (value.is_array()) {
      if (value.size() != 2) fail(path, "complex coefficients are [re, im]");
      return {rational(value[0], child(path, std::size_t{0})), rational(value[1], child(path, std::size_t{1}))};
    }
    return {rational(value, path), Rational(0)};
  }

  std::vector<ComplexRational> coefficients(const json& value,
                                            const std::vector<std::string>& path) const {
    if (!value.is_array() || value.empty())
      fail(path, "expected a non-empty array of coefficients");
    std::vector<ComplexRational> c;
    for (std::size_t j = 0; j < value.size(); ++j)
      c.push_back(coefficient(value[j], child(path, j)));
    while (c.size() > 1 && c.back().re == 0 && c.back().im == 0) c.pop_back();
    if (c.size() < 3) fail(path, "polynomials must have degree at least 2");
    return c;
  }

  TailRule tail(const json& object, const std::vector<std::string>& path) const {
    if (!object.contains("tail")) return TailRule::kRepeatLast;
    const json& t = object.at("tail");
    auto p = path;
    p.push_back("tail");
    if (t == "repeat-last") return TailRule::kRepeatLast;
    if (t == "repeat-cycle") return TailRule::kRepeatCycle;
    if (t == "finite") return TailRule::kFinite;
    fail(p, "expected \"repeat-last\", \"repeat-cycle\" or \"finite\"");
  }

  std::optional<RegularityConstants> constants(const json& object,
                                                const std::vector<std::string>& path) const {
    if (!object.contains("constants")) return std::nullopt;
    auto p = path;
    p.push_back("constants");
    const json& c = object.at("constants");
    only_keys(c, p, {"A1", "A2", "A3"});
    RegularityConstants out;
    auto get = [&](const char* key) {
      auto q = p;
      q.push_back(key);
      const json& v = require(c, p, key);
      const double x = v.is_number() ? v.get<double>() : to_double(rational(v, q));
      if (!(x > 0)) fail(q, "must be positive");
      return x;
    };
    out.A1 = get("A1");
    out.A2 = get("A2");
    out.A3 = get("A3");
    return out;
  }

  static std::vector<std::string> child(std::vector<std::string> path, std::size_t i) {
    path.push_back("#" + std::to_string(i));
    return path;
  }
  static std::vector<std::string> child(std::vector<std::string> path, const char* key) {
    path.push_back(key);
    return path;
  }

 private:
  Locator locator_;
};

GammaSequence parse_gamma(const Reader& r, const json& doc) {
  const std::vector<std::string> root;
  if (doc.contains("gamma") == doc.contains("epsilon"))
    r.fail(root, "k1_gamma needs exactly one of \"gamma\" and \"epsilon\"");
  try {
    if (doc.contains("gamma")) {
      r.only_keys(doc, root, {"family", "gamma", "tail"});
      const json& g = doc.at("gamma");
      const auto p = Reader::child(root, "gamma");
      if (!g.is_array() || g.empty()) r.fail(p, "expected a non-empty array");
      std::vector<Rational> values;
      for (std::size_t j = 0; j < g.size(); ++j)
        values.push_back(r.rational(g[j], Reader::child(p, j)));
      const TailRule tail = r.tail(doc, root);
      const GammaTail gt = tail == TailRule::kRepeatCycle ? GammaTail::kRepeatCycle
                           : tail == TailRule::kFinite    ? GammaTail::kFinite
                                                          : GammaTail::kRepeatLast;
      return GammaSequence::from_list(values, gt);
    }
    r.only_keys(doc, root, {"family", "epsilon"});
    const json& e = doc.at("epsilon");
    const auto p = Reader::child(root, "epsilon");
    if (!e.is_object()) r.fail(p, "expected an object");
    const json& kind = r.require(e, p, "kind");
    if (kind == "geometric") {
      r.only_keys(e, p, {"kind", "scale", "ratio"});
      return GammaSequence::epsilon_geometric(
          r.rational(r.require(e, p, "scale"), Reader::child(p, "scale")),
          r.rational(r.require(e, p, "ratio"), Reader::child(p, "ratio")));
    }
    if (kind == "power") {
      r.only_keys(e, p, {"kind", "scale", "power", "offset"});
      int offset = 0;
      if (e.contains("offset")) {
        if (!e.at("offset").is_number_integer() || e.at("offset").get<long long>() < 0)
          r.fail(Reader::child(p, "offset"), "expected a non-negative integer");
        offset = e.at("offset").get<int>();
      }
      return GammaSequence::epsilon_power(
          r.rational(r.require(e, p, "scale"), Reader::child(p, "scale")),
          to_double(r.rational(r.require(e, p, "power"), Reader::child(p, "power"))),
          offset);
    }
    r.fail(Reader::child(p, "kind"), "expected \"geometric\" or \"power\"");
  } catch (const InputError& e) {
    const std::string what = e.what();
    if (what.rfind("line ", 0) == 0) throw;
    r.fail(root, what);
  }
}

}  // namespace

SequenceInput parse_sequence(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
  const Reader r(text);
  const std::vector<std::string> root;
  if (!doc.is_object()) r.fail(root, "expected an object");
  const json& family = r.require(doc, root, "family");
  const auto fp = Reader::child(root, "family");

  std::optional<SequenceSpec> spec;
  std::optional<GammaSequence> gamma;
  if (family == "explicit") {
    r.only_keys(doc, root, {"family", "polynomials", "tail", "constants"});
    const json& list = r.require(doc, root, "polynomials");
    const auto p = Reader::child(root, "polynomials");
    if (!list.is_array() || list.empty()) r.fail(p, "expected a non-empty array");
    std::vector<Generator> gens;
    for (std::size_t n = 0; n < list.size(); ++n)
      gens.push_back(Generator::from_coefficients(r.coefficients(list[n], Reader::child(p, n))));
    spec = SequenceSpec::from_list(std::move(gens), r.tail(doc, root), r.constants(doc, root));
  } else if (family == "quadratic_c") {
    r.only_keys(doc, root, {"family", "c", "tail", "constants"});
    const json& list = r.require(doc, root, "c");
    const auto p = Reader::child(root, "c");
    if (!list.is_array() || list.empty()) r.fail(p, "expected a non-empty array");
    std::vector<ComplexRational> c;
    for (std::size_t n = 0; n < list.size(); ++n)
      c.push_back(r.coefficient(list[n], Reader::child(p, n)));
    spec = SequenceSpec::quadratic_c(c, r.tail(doc, root), r.constants(doc, root));
  } else if (family == "autonomous") {
    r.only_keys(doc, root, {"family", "polynomial", "constants"});
    const auto c = r.coefficients(r.require(doc, root, "polynomial"),
                                  Reader::child(root, "polynomial"));
    spec = SequenceSpec::autonomous(Generator::from_coefficients(c), r.constants(doc, root));
  } else if (family == "k1_gamma") {
    gamma = parse_gamma(r, doc);
    spec = gamma->to_spec();
  } else {
    r.fail(fp, "expected \"explicit\", \"quadratic_c\", \"k1_gamma\" or \"autonomous\"");
  }
  return SequenceInput{*spec, gamma, doc, input_digest(text)};
}

SequenceInput parse_sequence_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_sequence(buf.str());
}

json to_json(const Rational& value) { return to_string(value); }

json to_json(Complex value) { return json::array({value.real(), value.imag()}); }

json to_json(const ComplexRational& value) {
  if (value.im == 0) return to_string(value.re);
  return json::array({to_string(value.re), to_string(value.im)});
}

json to_json(const Polynomial<Rational>& p) {
  json out = json::array();
  for (int j = 0; j <= p.degree(); ++j) out.push_back(to_string(p[j]));
  return out;
}

json to_json(const Polynomial<Complex>& p) {
  json out = json::array();
  for (int j = 0; j <= p.degree(); ++j) out.push_back(to_json(p[j]));
  return out;
}

std::string csv_document(const std::vector<std::string>& metadata,
                         const std::vector<std::string>& header,
                         const std::vector<std::vector<double>>& rows) {
  std::string out;
  for (const auto& m : metadata) out += "# " + m + "\n";
  for (std::size_t i = 0; i < header.size(); ++i)
    out += (i ? "," : "") + header[i];
  out += "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out += (i ? "," : "") + format_double(row[i]);
    out += "\n";
  }
  return out;
}

}  // namespace gjulia
