#ifndef GJULIA_SCALAR_HPP_
#define GJULIA_SCALAR_HPP_

#include <cmath>
#include <complex>
#include <string>
#include <string_view>
#include <type_traits>

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>
#include <boost/multiprecision/eigen.hpp>

namespace gjulia {

using Complex = std::complex<double>;
using Rational = boost::multiprecision::mpq_rational;
using BigInt = boost::multiprecision::mpz_int;
// Runtime-precision binary float; precision is set per thread through
// ExtendedPrecisionScope.
using ExtFloat = boost::multiprecision::mpfr_float;

enum class ScalarMode { kFloat64, kExtended, kExactRational };

// A parsed --precision flag: "f64", "ext:<bits>" or "rational".
struct Precision {
  ScalarMode mode = ScalarMode::kFloat64;
  unsigned bits = 53;

  static Precision parse(std::string_view text);
  std::string to_string() const;
};

// Sets the MPFR working precision (in bits) for the current thread and
// restores the previous value on destruction.
class ExtendedPrecisionScope {
 public:
  explicit ExtendedPrecisionScope(unsigned bits);
  ~ExtendedPrecisionScope();
  ExtendedPrecisionScope(const ExtendedPrecisionScope&) = delete;
  ExtendedPrecisionScope& operator=(const ExtendedPrecisionScope&) = delete;

 private:
  unsigned previous_digits10_;
};

// Accepts integers, "p/q" fractions and decimal literals with optional
// exponent ("-0.25", "1e-3"). Decimals are converted exactly.
Rational parse_rational(std::string_view text);

// "p/q", or "p" when the denominator is one.
std::string to_string(const Rational& value);

// %.17g formatting used by every CSV/text emitter.
std::string format_double(double value);

inline double to_double(const Rational& value) {
  return value.convert_to<double>();
}
inline double to_double(const ExtFloat& value) {
  return value.convert_to<double>();
}
inline double to_double(double value) { return value; }
inline double to_double(long double value) {
  return static_cast<double>(value);
}

template <class T>
struct is_complex : std::false_type {};
template <class T>
struct is_complex<std::complex<T>> : std::true_type {};
template <class T>
inline constexpr bool is_complex_v = is_complex<T>::value;

template <class T>
inline constexpr bool is_exact_v = std::is_same_v<T, Rational>;

// Magnitude as a double for any supported scalar.
template <class T>
double magnitude(const T& value) {
  if constexpr (is_complex_v<T>) {
    return std::abs(Complex(to_double(value.real()), to_double(value.imag())));
  } else {
    return std::abs(to_double(value));
  }
}

template <class T>
bool is_zero(const T& value) {
  if constexpr (is_complex_v<T>) {
    return value.real() == 0 && value.imag() == 0;
  } else {
    return value == 0;
  }
}

// Converts between the supported scalar types. Exact-to-float goes through
// the target precision; complex-to-real requires a zero imaginary part and
// is the caller's responsibility.
template <class To, class From>
To scalar_cast(const From& value) {
  if constexpr (std::is_same_v<To, From>) {
    return value;
  } else if constexpr (is_complex_v<To> && is_complex_v<From>) {
    using R = typename To::value_type;
    return To(scalar_cast<R>(value.real()), scalar_cast<R>(value.imag()));
  } else if constexpr (is_complex_v<To>) {
    using R = typename To::value_type;
    return To(scalar_cast<R>(value), R(0));
  } else if constexpr (is_complex_v<From>) {
    return scalar_cast<To>(value.real());
  } else if constexpr (std::is_floating_point_v<To>) {
    if constexpr (std::is_floating_point_v<From>) {
      return static_cast<To>(value);
    } else {
      return value.template convert_to<To>();
    }
  } else if constexpr (std::is_same_v<To, ExtFloat> &&
                       std::is_same_v<From, Rational>) {
    return ExtFloat(value);
  } else {
    return To(value);
  }
}

}  // namespace gjulia

#endif  // GJULIA_SCALAR_HPP_
