#ifndef GJULIA_IO_HPP_
#define GJULIA_IO_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "gjulia/k1_gamma.hpp"
#include "gjulia/scalar.hpp"
#include "gjulia/sequence.hpp"

namespace gjulia {

// "fnv1a64:" followed by 16 hex digits.
std::string input_digest(std::string_view bytes);

// A parsed sequence file. `document` is the validated input object, so it
// re-parses under the same schema.
struct SequenceInput {
  SequenceSpec spec;
  std::optional<GammaSequence> gamma;  // k1_gamma files only
  nlohmann::json document;
  std::string digest;
};

// Schema (unknown fields are rejected):
//   {"family": "explicit", "polynomials": [[coeff, ...], ...], "tail": T}
//   {"family": "quadratic_c", "c": [coeff, ...], "tail": T}
//   {"family": "autonomous", "polynomial": [coeff, ...]}
//   {"family": "k1_gamma", "gamma": [rational, ...], "tail": T}
//   {"family": "k1_gamma", "epsilon": {"kind": "geometric", "scale": q, "ratio": q}}
//   {"family": "k1_gamma", "epsilon": {"kind": "power", "scale": q, "power": q, "offset": n}}
// T is "repeat-last" (default), "repeat-cycle" or "finite". Coefficients are
// ascending; each is a decimal or "p/q" string, or a [re, im] pair of such.
// Every family except k1_gamma accepts "constants": {"A1": q, "A2": q, "A3": q}.
// Errors are InputError naming the line and the field.
SequenceInput parse_sequence(std::string_view text);
SequenceInput parse_sequence_file(const std::string& path);

nlohmann::json to_json(const Rational& value);
nlohmann::json to_json(Complex value);  // [re, im]
nlohmann::json to_json(const ComplexRational& value);

// Coefficients low to high; exact entries as strings.
nlohmann::json to_json(const Polynomial<Rational>& p);
nlohmann::json to_json(const Polynomial<Complex>& p);

// '#'-prefixed metadata lines, a header row, then rows formatted with
// format_double.
std::string csv_document(const std::vector<std::string>& metadata,
                         const std::vector<std::string>& header,
                         const std::vector<std::vector<double>>& rows);

}  // namespace gjulia

#endif  // GJULIA_IO_HPP_
