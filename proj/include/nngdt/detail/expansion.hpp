#pragma once

// Exact floating-point expansion arithmetic.
//
// An expansion is a sum of doubles, nonoverlapping and ordered by increasing
// magnitude, whose exact value equals the represented real. Only sums,
// differences and products of doubles are needed by the predicates, so that
// is all that is provided. Requires IEEE round-to-nearest without extended
// intermediate precision (do not build with -ffast-math).

#include <cmath>
#include <utility>
#include <vector>

namespace nngdt::detail {

inline std::pair<double, double> two_sum(double a, double b) {
  const double x = a + b;
  const double bv = x - a;
  const double av = x - bv;
  const double br = b - bv;
  const double ar = a - av;
  return {x, ar + br};
}

inline std::pair<double, double> two_product(double a, double b) {
  const double x = a * b;
  return {x, std::fma(a, b, -x)};
}

class Expansion {
 public:
  Expansion() = default;
  explicit Expansion(double v) {
    if (v != 0.0) terms_.push_back(v);
  }

  static Expansion difference(double a, double b) {
    auto [x, y] = two_sum(a, -b);
    Expansion e;
    if (y != 0.0) e.terms_.push_back(y);
    if (x != 0.0) e.terms_.push_back(x);
    return e;
  }

  Expansion operator-() const {
    Expansion e = *this;
    for (double& t : e.terms_) t = -t;
    return e;
  }

  friend Expansion operator+(const Expansion& a, const Expansion& b) {
    Expansion out = a;
    for (double t : b.terms_) out.grow(t);
    return out;
  }

  friend Expansion operator-(const Expansion& a, const Expansion& b) { return a + (-b); }

  friend Expansion operator*(const Expansion& a, const Expansion& b) {
    Expansion out;
    for (double t : b.terms_) out = out + a.scaled(t);
    return out;
  }

  /// Sign of the exact value: -1, 0 or +1.
  int sign() const {
    if (terms_.empty()) return 0;
    return terms_.back() > 0.0 ? 1 : -1;
  }

  double estimate() const {
    double s = 0.0;
    for (double t : terms_) s += t;
    return s;
  }

  const std::vector<double>& terms() const { return terms_; }

 private:
  // grow_expansion with zero elimination
  void grow(double b) {
    std::vector<double> h;
    h.reserve(terms_.size() + 1);
    double q = b;
    for (double e : terms_) {
      auto [sum, err] = two_sum(q, e);
      if (err != 0.0) h.push_back(err);
      q = sum;
    }
    if (q != 0.0) h.push_back(q);
    terms_ = std::move(h);
  }

  // scale_expansion with zero elimination
  Expansion scaled(double b) const {
    Expansion out;
    if (terms_.empty() || b == 0.0) return out;
    auto& h = out.terms_;
    h.reserve(2 * terms_.size());
    auto [q, err] = two_product(terms_[0], b);
    if (err != 0.0) h.push_back(err);
    for (std::size_t i = 1; i < terms_.size(); ++i) {
      auto [p1, p0] = two_product(terms_[i], b);
      auto [sum, e1] = two_sum(q, p0);
      if (e1 != 0.0) h.push_back(e1);
      auto [nq, e2] = two_sum(p1, sum);
      if (e2 != 0.0) h.push_back(e2);
      q = nq;
    }
    if (q != 0.0) h.push_back(q);
    return out;
  }

  std::vector<double> terms_;
};

}  // namespace nngdt::detail
