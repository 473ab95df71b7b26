#include "gjulia/scalar.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <string>

#include "gjulia/errors.hpp"

namespace gjulia {

namespace {

unsigned bits_to_digits10(unsigned bits) {
  return static_cast<unsigned>(std::ceil(bits * std::log10(2.0))) + 1;
}

BigInt pow10(long exponent) {
  BigInt result = 1;
  for (long i = 0; i < exponent; ++i) result *= 10;
  return result;
}

std::string trim(std::string_view text) {
  std::size_t begin = 0;
  std::size_t end = text.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(text[begin])))
    ++begin;
  while (end > begin &&
         std::isspace(static_cast<unsigned char>(text[end - 1])))
    --end;
  return std::string(text.substr(begin, end - begin));
}

Rational parse_decimal(const std::string& text) {
  std::size_t pos = 0;
  bool negative = false;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    negative = text[pos] == '-';
    ++pos;
  }
  std::string digits;
  long fraction_digits = 0;
  bool seen_point = false;
  bool seen_digit = false;
  for (; pos < text.size(); ++pos) {
    const char c = text[pos];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      seen_digit = true;
      if (seen_point) ++fraction_digits;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!seen_digit) throw InputError("not a number: \"" + text + "\"");
  long exponent = 0;
  if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
    ++pos;
    std::size_t used = 0;
    try {
      exponent = std::stol(text.substr(pos), &used);
    } catch (const std::exception&) {
      throw InputError("bad exponent in \"" + text + "\"");
    }
    pos += used;
  }
  if (pos != text.size()) throw InputError("not a number: \"" + text + "\"");
  if (std::labs(exponent) > 4000)
    throw InputError("exponent out of range in \"" + text + "\"");

  BigInt numerator(digits);
  const long shift = exponent - fraction_digits;
  Rational value = shift >= 0 ? Rational(numerator * pow10(shift))
                              : Rational(numerator, pow10(-shift));
  return negative ? Rational(-value) : value;
}

}  // namespace

Precision Precision::parse(std::string_view text) {
  Precision p;
  if (text == "f64") return p;
  if (text == "rational") {
    p.mode = ScalarMode::kExactRational;
    p.bits = 0;
    return p;
  }
  if (text.substr(0, 4) == "ext:") {
    const std::string bits(text.substr(4));
    int value = 0;
    try {
      value = std::stoi(bits);
    } catch (const std::exception&) {
      throw InputError("bad precision \"" + std::string(text) + "\"");
    }
    if (value < 64 || value > 65536)
      throw InputError("extended precision must be 64..65536 bits");
    p.mode = ScalarMode::kExtended;
    p.bits = static_cast<unsigned>(value);
    return p;
  }
  throw InputError("unknown precision \"" + std::string(text) +
                   "\" (expected f64, ext:<bits> or rational)");
}

std::string Precision::to_string() const {
  switch (mode) {
    case ScalarMode::kFloat64:
      return "f64";
    case ScalarMode::kExtended:
      return "ext:" + std::to_string(bits);
    case ScalarMode::kExactRational:
      return "rational";
  }
  return "f64";
}

ExtendedPrecisionScope::ExtendedPrecisionScope(unsigned bits)
    : previous_digits10_(ExtFloat::default_precision()) {
  ExtFloat::default_precision(bits_to_digits10(bits));
}

ExtendedPrecisionScope::~ExtendedPrecisionScope() {
  ExtFloat::default_precision(previous_digits10_);
}

Rational parse_rational(std::string_view raw) {
  const std::string text = trim(raw);
  if (text.empty()) throw InputError("empty number");
  const auto slash = text.find('/');
  if (slash == std::string::npos) return parse_decimal(text);
  const Rational num = parse_decimal(trim(text.substr(0, slash)));
  const Rational den = parse_decimal(trim(text.substr(slash + 1)));
  if (den == 0) throw InputError("zero denominator in \"" + text + "\"");
  return num / den;
}

std::string to_string(const Rational& value) {
  const BigInt num = boost::multiprecision::numerator(value);
  const BigInt den = boost::multiprecision::denominator(value);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

}  // namespace gjulia
