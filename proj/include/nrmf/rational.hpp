#pragma once
//------------------------------------------------------------------------------
//
//   Copyright 2026 The NRMF Authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------

// Exact rational numbers and their decimal text forms.
//
// Every quantity inside a mechanism (valuations, payments, shares, the PRST
// coefficients) is an exact rational. Conversion to decimal text happens only
// at the output boundary.

#include <gmpxx.h>

#include <cctype>
#include <string>
#include <string_view>

#include "nrmf/error.hpp"

namespace nrmf {

using Rational = mpq_class;

/// Amounts of money. Same unit throughout a run.
using Money = Rational;

inline constexpr int kDefaultPrecision = 6;

namespace detail {

inline bool all_digits(std::string_view s)
{
  if (s.empty())
  {
    return false;
  }
  for (char c : s)
  {
    if (std::isdigit(static_cast<unsigned char>(c)) == 0)
    {
      return false;
    }
  }
  return true;
}

inline mpz_class pow10(unsigned long exponent)
{
  mpz_class result;
  mpz_ui_pow_ui(result.get_mpz_t(), 10, exponent);
  return result;
}

}  // namespace detail

/// Parses `[-]digits[.digits]` into an exact rational.
inline Rational parse_decimal(std::string_view text)
{
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && body.front() == '-')
  {
    negative = true;
    body.remove_prefix(1);
  }
  auto const dot = body.find('.');
  std::string_view int_part = body.substr(0, dot);
  std::string_view frac_part = dot == std::string_view::npos ? std::string_view{} : body.substr(dot + 1);
  if (!detail::all_digits(int_part) || (dot != std::string_view::npos && !detail::all_digits(frac_part)))
  {
    throw ParseError("not a decimal number: \"" + std::string(text) + "\"");
  }
  mpz_class numerator(std::string(int_part) + std::string(frac_part), 10);
  Rational result(numerator, detail::pow10(frac_part.size()));
  result.canonicalize();
  return negative ? Rational(-result) : result;
}

/// Parses either a decimal (`0.8`) or a fraction (`4/5`).
inline Rational parse_rational(std::string_view text)
{
  auto const slash = text.find('/');
  if (slash == std::string_view::npos)
  {
    return parse_decimal(text);
  }
  std::string_view num = text.substr(0, slash);
  std::string_view den = text.substr(slash + 1);
  std::string_view num_digits = (!num.empty() && num.front() == '-') ? num.substr(1) : num;
  if (!detail::all_digits(num_digits) || !detail::all_digits(den))
  {
    throw ParseError("not a rational number: \"" + std::string(text) + "\"");
  }
  mpz_class d(std::string(den), 10);
  if (d == 0)
  {
    throw ParseError("zero denominator: \"" + std::string(text) + "\"");
  }
  Rational result(mpz_class(std::string(num), 10), d);
  result.canonicalize();
  return result;
}

/// Renders `value` with exactly `digits` fractional digits, rounding half to even.
inline std::string to_decimal(Rational const &value, int digits = kDefaultPrecision)
{
  if (digits < 0)
  {
    throw ValidationError("precision must be non-negative");
  }
  mpz_class const scale = detail::pow10(static_cast<unsigned long>(digits));
  mpz_class numerator = abs(value.get_num()) * scale;
  mpz_class const &denominator = value.get_den();
  mpz_class quotient;
  mpz_class remainder;
  mpz_tdiv_qr(quotient.get_mpz_t(), remainder.get_mpz_t(), numerator.get_mpz_t(), denominator.get_mpz_t());
  int const cmp_half = cmp(mpz_class(remainder * 2), denominator);
  if (cmp_half > 0 || (cmp_half == 0 && mpz_odd_p(quotient.get_mpz_t()) != 0))
  {
    ++quotient;
  }

  std::string magnitude = quotient.get_str();
  if (digits > 0)
  {
    auto const width = static_cast<std::size_t>(digits) + 1;
    if (magnitude.size() < width)
    {
      magnitude.insert(0, width - magnitude.size(), '0');
    }
    magnitude.insert(magnitude.size() - static_cast<std::size_t>(digits), ".");
  }
  bool const negative = sgn(value) < 0 && quotient != 0;
  return negative ? "-" + magnitude : magnitude;
}

/// Exact `p/q` (or `p` for integers) form.
inline std::string to_exact(Rational const &value)
{
  return value.get_str();
}

/// True when the decimal expansion of `value` terminates.
inline bool is_terminating_decimal(Rational const &value)
{
  mpz_class den = value.get_den();
  while (mpz_divisible_ui_p(den.get_mpz_t(), 2) != 0)
  {
    den /= 2;
  }
  while (mpz_divisible_ui_p(den.get_mpz_t(), 5) != 0)
  {
    den /= 5;
  }
  return den == 1;
}

/// Shortest exact decimal string; throws if the expansion does not terminate.
inline std::string to_exact_decimal(Rational const &value)
{
  if (!is_terminating_decimal(value))
  {
    throw ValidationError("value " + to_exact(value) + " has no finite decimal expansion");
  }
  int digits = 0;
  Rational scaled = value;
  while (scaled.get_den() != 1)
  {
    scaled *= 10;
    ++digits;
  }
  return to_decimal(value, digits);
}

inline double to_double(Rational const &value)
{
  return value.get_d();
}

}  // namespace nrmf
