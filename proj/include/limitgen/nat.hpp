#ifndef LIMITGEN_NAT_HPP
#define LIMITGEN_NAT_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace limitgen {

/// The universal domain is the naturals 0, 1, 2, ... under numeric order.
/// Canonical position p (1-based) holds the value p-1.
using Nat = boost::multiprecision::cpp_int;

/// Exact rational, used for densities and minimax values.
using Ratio = boost::multiprecision::cpp_rational;

inline Nat nat_from(std::uint64_t v) { return Nat(v); }

/// floor(sqrt(n)) for n >= 0.
inline Nat isqrt(const Nat& n) { return boost::multiprecision::sqrt(n); }

inline std::string nat_str(const Nat& n) { return n.str(); }

inline std::string ratio_str(const Ratio& r) {
  if (boost::multiprecision::denominator(r) == 1)
    return boost::multiprecision::numerator(r).str();
  return boost::multiprecision::numerator(r).str() + "/" +
         boost::multiprecision::denominator(r).str();
}

}  // namespace limitgen

#endif
