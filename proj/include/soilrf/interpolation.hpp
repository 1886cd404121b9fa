#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <string>

#include "soilrf/errors.hpp"

namespace soilrf {

/// Piecewise-linear map over strictly increasing knots. Queries outside
/// [x.front(), x.back()] throw ExtrapolationError.
class PiecewiseLinear {
 public:
  PiecewiseLinear() = default;
  PiecewiseLinear(Eigen::ArrayXd x, Eigen::ArrayXd y) : x_(std::move(x)), y_(std::move(y)) {
    if (x_.size() != y_.size()) throw DomainError("knot arrays differ in length");
    if (x_.size() < 2) throw DomainError("need at least two knots");
    for (Eigen::Index i = 1; i < x_.size(); ++i) {
      if (!(x_[i] > x_[i - 1])) throw DomainError("knots must be strictly increasing");
    }
  }

  const Eigen::ArrayXd& x() const { return x_; }
  const Eigen::ArrayXd& y() const { return y_; }

  double operator()(double q) const { return eval(x_, y_, q); }

  /// Strictly monotone in y (either direction).
  bool invertible() const {
    bool up = true, down = true;
    for (Eigen::Index i = 1; i < y_.size(); ++i) {
      up = up && y_[i] > y_[i - 1];
      down = down && y_[i] < y_[i - 1];
    }
    return up || down;
  }

  /// x such that f(x) = target. Requires invertible().
  double inverse(double target) const {
    if (!invertible()) throw DomainError("map is not strictly monotone");
    if (y_[0] < y_[y_.size() - 1]) return eval(y_, x_, target);
    // Decreasing: walk the reversed knots so the abscissa increases.
    const Eigen::ArrayXd ry = y_.reverse();
    const Eigen::ArrayXd rx = x_.reverse();
    return eval(ry, rx, target);
  }

 private:
  static double eval(const Eigen::ArrayXd& xs, const Eigen::ArrayXd& ys, double q) {
    const Eigen::Index n = xs.size();
    if (!(q >= xs[0] && q <= xs[n - 1])) {
      throw ExtrapolationError("query " + std::to_string(q) + " outside [" +
                               std::to_string(xs[0]) + ", " + std::to_string(xs[n - 1]) + "]");
    }
    const double* begin = xs.data();
    const double* hi = std::lower_bound(begin, begin + n, q);
    Eigen::Index j = hi - begin;
    if (xs[j] == q) return ys[j];
    const Eigen::Index i = j - 1;
    const double t = (q - xs[i]) / (xs[j] - xs[i]);
    return ys[i] + t * (ys[j] - ys[i]);
  }

  Eigen::ArrayXd x_;
  Eigen::ArrayXd y_;
};

}  // namespace soilrf
