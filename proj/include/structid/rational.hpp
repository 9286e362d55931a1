#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

namespace structid {

using BigInt = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>, boost::multiprecision::et_off>;
using Rational =
    boost::multiprecision::number<boost::multiprecision::cpp_rational_backend, boost::multiprecision::et_off>;

/// Parses an unsigned decimal literal (`3`, `0.25`, `1.5e-3`) into an exact
/// rational. Returns false when `text` is not a well-formed literal.
bool parse_decimal(std::string_view text, Rational& out);

/// `p/q` in lowest terms, or `p` when q == 1.
std::string to_string(const Rational& r);

double to_double(const Rational& r);

}  // namespace structid
