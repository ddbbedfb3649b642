#ifndef CACHELP_RATIONAL_HPP
#define CACHELP_RATIONAL_HPP

#include <gmpxx.h>

#include <string>

namespace cachelp {

using Rat = mpq_class;

// Accepts "p/q", "p", with optional leading '-'. Throws std::invalid_argument on
// malformed input or zero denominator.
Rat parse_rat(const std::string& text);

// "3/2", "-1/8", or "2" for integers.
std::string rat_string(const Rat& q);

// Decimal form with the given number of significant digits, round half away
// from zero. Exact when the denominator divides a power of 10 and fits.
std::string rat_decimal(const Rat& q, int significant_digits = 12);

}  // namespace cachelp

#endif
