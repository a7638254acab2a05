#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace shearspec {

enum class DeficitShape { indicator, raised_cosine, gaussian, tabulated, custom };

std::string to_string(DeficitShape shape);
DeficitShape deficit_shape_from_string(const std::string& name);

/// One compactly supported building block of a deficit function eps(s).
///
///  - indicator:     amplitude * 1_[lo,hi]; with `width > 0` the two jumps are
///                   replaced by quintic smoothstep ramps of that width centred
///                   on lo and hi (integral is unchanged).
///  - raised_cosine: flat top `amplitude` on [lo+width, hi-width] with cosine
///                   tapers of length `width`; width = (hi-lo)/2 is the classic
///                   (1-cos)/2 bump.
///  - gaussian:      amplitude * exp(-(s-m)^2 / (2 width^2)), m = (lo+hi)/2,
///                   truncated to [lo, hi].
///  - tabulated:     piecewise-linear interpolation of samples, zero outside.
///  - custom:        caller-supplied value/derivative restricted to [lo, hi].
class DeficitTerm {
 public:
  static DeficitTerm indicator(double amplitude, double lo, double hi,
                               double mollify = 0.0);
  static DeficitTerm raised_cosine(double amplitude, double lo, double hi,
                                   double taper);
  static DeficitTerm gaussian(double amplitude, double lo, double hi,
                              double sigma);
  static DeficitTerm tabulated(std::vector<double> s, std::vector<double> values);
  static DeficitTerm custom(std::function<double(double)> value,
                            std::function<double(double)> derivative,
                            double lo, double hi, std::vector<double> knots = {});

  DeficitShape shape() const noexcept { return shape_; }
  double amplitude() const noexcept { return amplitude_; }
  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  double width() const noexcept { return width_; }
  const std::vector<double>& table_s() const noexcept { return table_s_; }
  const std::vector<double>& table_values() const noexcept { return table_v_; }

  double value(double s) const;
  double derivative(double s) const;

  /// True when eps' exists as a locally integrable function (no jumps).
  bool differentiable() const;
  /// Closed interval outside of which the term vanishes.
  std::pair<double, double> support() const;
  /// Points where the term or its derivative may fail to be smooth.
  std::vector<double> knots() const;

  /// Integral over [a, b] in closed form for indicator (sharp) and tabulated
  /// terms; std::nullopt otherwise.
  std::optional<double> closed_form_integral(double a, double b) const;

 private:
  DeficitShape shape_ = DeficitShape::indicator;
  double amplitude_ = 0.0;
  double lo_ = 0.0;
  double hi_ = 0.0;
  double width_ = 0.0;
  std::vector<double> table_s_;
  std::vector<double> table_v_;
  std::shared_ptr<const std::function<double(double)>> custom_value_;
  std::shared_ptr<const std::function<double(double)>> custom_derivative_;
  std::vector<double> custom_knots_;
};

/// Sum of deficit terms; the empty sum is eps == 0.
class Deficit {
 public:
  Deficit() = default;
  explicit Deficit(std::vector<DeficitTerm> terms) : terms_(std::move(terms)) {}
  Deficit(std::initializer_list<DeficitTerm> terms) : terms_(terms) {}

  const std::vector<DeficitTerm>& terms() const noexcept { return terms_; }
  bool empty() const noexcept { return terms_.empty(); }

  double value(double s) const;
  double derivative(double s) const;
  bool differentiable() const;
  std::optional<std::pair<double, double>> support() const;
  std::vector<double> knots() const;

 private:
  std::vector<DeficitTerm> terms_;
};

/// Quintic smoothstep 6x^5 - 15x^4 + 10x^3 clamped to [0, 1], and its slope.
double smoothstep5(double x);
double smoothstep5_derivative(double x);

}  // namespace shearspec
