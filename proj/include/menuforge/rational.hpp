#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace menuforge {

// Exact scalar type for all menu/geometry computation. mpq_rational is kept
// in lowest terms with positive denominator by GMP itself.
using Rational = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;

using RatVec = Eigen::Matrix<Rational, Eigen::Dynamic, 1>;
using RatMat = Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic>;

class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

inline double to_double(const Rational& r) {
  return r.convert_to<double>();
}

// Parses "p/q", "p", or "-p/q". Result is in lowest terms.
inline Rational parse_rational(const std::string& s) {
  if (s.empty()) throw InputError("empty rational literal");
  try {
    Rational r(s);
    return r;
  } catch (const std::exception&) {
    throw InputError("bad rational literal: " + s);
  }
}

// Serializes in lowest terms, "p" when the denominator is 1, else "p/q".
inline std::string format_rational(const Rational& r) {
  return r.str();
}

inline RatVec rat_vec(std::initializer_list<Rational> vals) {
  RatVec v(static_cast<Eigen::Index>(vals.size()));
  Eigen::Index i = 0;
  for (const auto& x : vals) v(i++) = x;
  return v;
}

inline bool vec_equal(const RatVec& a, const RatVec& b) {
  if (a.size() != b.size()) return false;
  for (Eigen::Index i = 0; i < a.size(); ++i)
    if (a(i) != b(i)) return false;
  return true;
}

// Lexicographic order, used to dedupe exact points.
struct VecLess {
  bool operator()(const RatVec& a, const RatVec& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      if (a(i) != b(i)) return a(i) < b(i);
    }
    return false;
  }
};

inline bool is_distribution(const RatVec& x) {
  Rational s = 0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x(i) < 0) return false;
    s += x(i);
  }
  return s == 1;
}

inline Eigen::VectorXd to_double_vec(const RatVec& v) {
  Eigen::VectorXd out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out(i) = to_double(v(i));
  return out;
}

// Nearest rational with the given denominator (used only where the spec
// allows float-backed values to surface as rationals).
inline RatVec round_to_denominator(const Eigen::VectorXd& v, std::int64_t den) {
  RatVec out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    double scaled = v(i) * static_cast<double>(den);
    Integer num(static_cast<long long>(scaled >= 0 ? scaled + 0.5 : scaled - 0.5));
    out(i) = Rational(num, Integer(den));
  }
  return out;
}

}  // namespace menuforge
