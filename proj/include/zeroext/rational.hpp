#pragma once

// Exact rational scalars. Everything numeric in this library runs on these;
// no floating point is used anywhere in the computational paths.

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace zeroext {

using Rat = mpq_class;

// Parses "num", "num/den" or "-num/den". Whitespace is not tolerated; den > 0
// after canonicalization.
inline Rat parse_rat(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  for (char ch : s) {
    if (ch != '-' && ch != '/' && !(ch >= '0' && ch <= '9'))
      throw std::invalid_argument("bad rational literal: " + s);
  }
  Rat q;
  if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational literal: " + s);
  if (q.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
  q.canonicalize();
  return q;
}

// "num/den" with den omitted when 1. Lowest terms by mpq canonicalization.
inline std::string rat_str(const Rat& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline bool is_integer(const Rat& q) { return q.get_den() == 1; }

// Rational extended with a single +infinity, used for crisp (forbidden)
// entries in cost tables. Arithmetic follows inf + x = inf and the
// convention inf * 0 = 0 so that zero-coefficient terms never poison sums.
struct ExtRat {
  bool inf = false;
  Rat v = 0;

  ExtRat() = default;
  ExtRat(Rat q) : inf(false), v(std::move(q)) {}  // NOLINT: implicit by design
  ExtRat(int n) : inf(false), v(n) {}             // NOLINT

  static ExtRat infinity() {
    ExtRat e;
    e.inf = true;
    return e;
  }
  bool finite() const { return !inf; }
};

inline ExtRat operator+(const ExtRat& a, const ExtRat& b) {
  if (a.inf || b.inf) return ExtRat::infinity();
  return ExtRat(a.v + b.v);
}

inline ExtRat& operator+=(ExtRat& a, const ExtRat& b) {
  a = a + b;
  return a;
}

// Scaling by an exact rational coefficient; c = 0 annihilates infinity.
inline ExtRat scale(const Rat& c, const ExtRat& a) {
  if (c == 0) return ExtRat(Rat(0));
  if (a.inf) return ExtRat::infinity();
  return ExtRat(c * a.v);
}

// inf compares greater than every finite value and equal to itself.
inline bool operator<(const ExtRat& a, const ExtRat& b) {
  if (a.inf) return false;
  if (b.inf) return true;
  return a.v < b.v;
}
inline bool operator==(const ExtRat& a, const ExtRat& b) {
  if (a.inf || b.inf) return a.inf == b.inf;
  return a.v == b.v;
}
inline bool operator<=(const ExtRat& a, const ExtRat& b) { return a < b || a == b; }
inline bool operator>=(const ExtRat& a, const ExtRat& b) { return b <= a; }
inline bool operator>(const ExtRat& a, const ExtRat& b) { return b < a; }
inline bool operator!=(const ExtRat& a, const ExtRat& b) { return !(a == b); }

inline std::string ext_str(const ExtRat& a) { return a.inf ? "inf" : rat_str(a.v); }

}  // namespace zeroext
