#include "shearspec/deficit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "shearspec/error.hpp"

namespace shearspec {

std::string to_string(DeficitShape shape) {
  switch (shape) {
    case DeficitShape::indicator: return "indicator";
    case DeficitShape::raised_cosine: return "raised-cosine";
    case DeficitShape::gaussian: return "gaussian";
    case DeficitShape::tabulated: return "tabulated";
    case DeficitShape::custom: return "custom";
  }
  return "unknown";
}

DeficitShape deficit_shape_from_string(const std::string& name) {
  if (name == "indicator") return DeficitShape::indicator;
  if (name == "raised-cosine" || name == "cosine") return DeficitShape::raised_cosine;
  if (name == "gaussian") return DeficitShape::gaussian;
  if (name == "tabulated") return DeficitShape::tabulated;
  throw PreconditionError("unknown deficit shape '" + name + "'");
}

double smoothstep5(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return x * x * x * (x * (6.0 * x - 15.0) + 10.0);
}

double smoothstep5_derivative(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return 30.0 * x * x * (x - 1.0) * (x - 1.0);
}

DeficitTerm DeficitTerm::indicator(double amplitude, double lo, double hi,
                                   double mollify) {
  if (!(hi > lo)) throw PreconditionError("indicator deficit needs lo < hi");
  if (mollify < 0.0) throw PreconditionError("mollification width must be >= 0");
  DeficitTerm t;
  t.shape_ = DeficitShape::indicator;
  t.amplitude_ = amplitude;
  t.lo_ = lo;
  t.hi_ = hi;
  t.width_ = mollify;
  return t;
}

DeficitTerm DeficitTerm::raised_cosine(double amplitude, double lo, double hi,
                                       double taper) {
  if (!(hi > lo)) throw PreconditionError("raised-cosine deficit needs lo < hi");
  if (!(taper > 0.0) || taper > 0.5 * (hi - lo))
    throw PreconditionError("raised-cosine taper must lie in (0, (hi-lo)/2]");
  DeficitTerm t;
  t.shape_ = DeficitShape::raised_cosine;
  t.amplitude_ = amplitude;
  t.lo_ = lo;
  t.hi_ = hi;
  t.width_ = taper;
  return t;
}

DeficitTerm DeficitTerm::gaussian(double amplitude, double lo, double hi,
                                  double sigma) {
  if (!(hi > lo) || !(sigma > 0.0))
    throw PreconditionError("gaussian deficit needs lo < hi and sigma > 0");
  DeficitTerm t;
  t.shape_ = DeficitShape::gaussian;
  t.amplitude_ = amplitude;
  t.lo_ = lo;
  t.hi_ = hi;
  t.width_ = sigma;
  return t;
}

DeficitTerm DeficitTerm::tabulated(std::vector<double> s, std::vector<double> values) {
  if (s.size() < 2 || s.size() != values.size())
    throw PreconditionError("tabulated deficit needs >= 2 samples of matching size");
  if (!std::is_sorted(s.begin(), s.end()) ||
      std::adjacent_find(s.begin(), s.end()) != s.end())
    throw PreconditionError("tabulated deficit abscissae must be strictly increasing");
  DeficitTerm t;
  t.shape_ = DeficitShape::tabulated;
  t.amplitude_ = 1.0;
  t.lo_ = s.front();
  t.hi_ = s.back();
  t.table_s_ = std::move(s);
  t.table_v_ = std::move(values);
  return t;
}

DeficitTerm DeficitTerm::custom(std::function<double(double)> value,
                                std::function<double(double)> derivative,
                                double lo, double hi, std::vector<double> knots) {
  if (!(hi > lo)) throw PreconditionError("custom deficit needs lo < hi");
  DeficitTerm t;
  t.shape_ = DeficitShape::custom;
  t.amplitude_ = 1.0;
  t.lo_ = lo;
  t.hi_ = hi;
  t.custom_value_ = std::make_shared<const std::function<double(double)>>(std::move(value));
  if (derivative)
    t.custom_derivative_ =
        std::make_shared<const std::function<double(double)>>(std::move(derivative));
  t.custom_knots_ = std::move(knots);
  return t;
}

double DeficitTerm::value(double s) const {
  switch (shape_) {
    case DeficitShape::indicator: {
      if (width_ == 0.0) return (s >= lo_ && s <= hi_) ? amplitude_ : 0.0;
      const double up = smoothstep5((s - lo_) / width_ + 0.5);
      const double down = smoothstep5((s - hi_) / width_ + 0.5);
      return amplitude_ * (up - down);
    }
    case DeficitShape::raised_cosine: {
      if (s <= lo_ || s >= hi_) return 0.0;
      const double x = std::min(s - lo_, hi_ - s);
      if (x >= width_) return amplitude_;
      return amplitude_ * 0.5 * (1.0 - std::cos(std::numbers::pi * x / width_));
    }
    case DeficitShape::gaussian: {
      if (s < lo_ || s > hi_) return 0.0;
      const double z = (s - 0.5 * (lo_ + hi_)) / width_;
      return amplitude_ * std::exp(-0.5 * z * z);
    }
    case DeficitShape::tabulated: {
      if (s < lo_ || s > hi_) return 0.0;
      auto it = std::upper_bound(table_s_.begin(), table_s_.end(), s);
      if (it == table_s_.end()) return table_v_.back();
      const auto i = static_cast<std::size_t>(it - table_s_.begin());
      const double w = (s - table_s_[i - 1]) / (table_s_[i] - table_s_[i - 1]);
      return (1.0 - w) * table_v_[i - 1] + w * table_v_[i];
    }
    case DeficitShape::custom:
      if (s < lo_ || s > hi_) return 0.0;
      return (*custom_value_)(s);
  }
  return 0.0;
}

double DeficitTerm::derivative(double s) const {
  switch (shape_) {
    case DeficitShape::indicator: {
      if (width_ == 0.0) return 0.0;
      const double up = smoothstep5_derivative((s - lo_) / width_ + 0.5);
      const double down = smoothstep5_derivative((s - hi_) / width_ + 0.5);
      return amplitude_ * (up - down) / width_;
    }
    case DeficitShape::raised_cosine: {
      if (s <= lo_ || s >= hi_) return 0.0;
      const double left = s - lo_;
      const double right = hi_ - s;
      const double k = std::numbers::pi / width_;
      if (left < width_ && left <= right)
        return amplitude_ * 0.5 * k * std::sin(k * left);
      if (right < width_)
        return -amplitude_ * 0.5 * k * std::sin(k * right);
      return 0.0;
    }
    case DeficitShape::gaussian: {
      if (s < lo_ || s > hi_) return 0.0;
      const double z = (s - 0.5 * (lo_ + hi_)) / width_;
      return -amplitude_ * z / width_ * std::exp(-0.5 * z * z);
    }
    case DeficitShape::tabulated: {
      if (s < lo_ || s >= hi_) return 0.0;
      auto it = std::upper_bound(table_s_.begin(), table_s_.end(), s);
      const auto i = static_cast<std::size_t>(it - table_s_.begin());
      return (table_v_[i] - table_v_[i - 1]) / (table_s_[i] - table_s_[i - 1]);
    }
    case DeficitShape::custom:
      if (s < lo_ || s > hi_ || !custom_derivative_) return 0.0;
      return (*custom_derivative_)(s);
  }
  return 0.0;
}

bool DeficitTerm::differentiable() const {
  switch (shape_) {
    case DeficitShape::indicator: return width_ > 0.0;
    case DeficitShape::raised_cosine: return true;
    case DeficitShape::gaussian: return false;
    case DeficitShape::tabulated:
      return table_v_.front() == 0.0 && table_v_.back() == 0.0;
    case DeficitShape::custom: return static_cast<bool>(custom_derivative_);
  }
  return false;
}

std::pair<double, double> DeficitTerm::support() const {
  if (shape_ == DeficitShape::indicator && width_ > 0.0)
    return {lo_ - 0.5 * width_, hi_ + 0.5 * width_};
  return {lo_, hi_};
}

std::vector<double> DeficitTerm::knots() const {
  switch (shape_) {
    case DeficitShape::indicator:
      if (width_ == 0.0) return {lo_, hi_};
      return {lo_ - 0.5 * width_, lo_ + 0.5 * width_, hi_ - 0.5 * width_,
              hi_ + 0.5 * width_};
    case DeficitShape::raised_cosine:
      return {lo_, lo_ + width_, hi_ - width_, hi_};
    case DeficitShape::gaussian: return {lo_, hi_};
    case DeficitShape::tabulated: return table_s_;
    case DeficitShape::custom: {
      std::vector<double> k = custom_knots_;
      k.push_back(lo_);
      k.push_back(hi_);
      return k;
    }
  }
  return {};
}

std::optional<double> DeficitTerm::closed_form_integral(double a, double b) const {
  const double sign = a <= b ? 1.0 : -1.0;
  const double lo = std::min(a, b);
  const double hi = std::max(a, b);
  if (shape_ == DeficitShape::indicator && width_ == 0.0) {
    const double overlap = std::max(0.0, std::min(hi, hi_) - std::max(lo, lo_));
    return sign * amplitude_ * overlap;
  }
  if (shape_ == DeficitShape::tabulated) {
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < table_s_.size(); ++i) {
      const double x0 = std::max(lo, table_s_[i]);
      const double x1 = std::min(hi, table_s_[i + 1]);
      if (x1 <= x0) continue;
      sum += 0.5 * (value(x0) + value(x1)) * (x1 - x0);
    }
    return sign * sum;
  }
  return std::nullopt;
}

double Deficit::value(double s) const {
  double v = 0.0;
  for (const auto& t : terms_) v += t.value(s);
  return v;
}

double Deficit::derivative(double s) const {
  double v = 0.0;
  for (const auto& t : terms_) v += t.derivative(s);
  return v;
}

bool Deficit::differentiable() const {
  return std::all_of(terms_.begin(), terms_.end(),
                     [](const DeficitTerm& t) { return t.differentiable(); });
}

std::optional<std::pair<double, double>> Deficit::support() const {
  if (terms_.empty()) return std::nullopt;
  auto [lo, hi] = terms_.front().support();
  for (const auto& t : terms_) {
    lo = std::min(lo, t.support().first);
    hi = std::max(hi, t.support().second);
  }
  return std::make_pair(lo, hi);
}

std::vector<double> Deficit::knots() const {
  std::vector<double> k;
  for (const auto& t : terms_) {
    auto tk = t.knots();
    k.insert(k.end(), tk.begin(), tk.end());
  }
  std::sort(k.begin(), k.end());
  k.erase(std::unique(k.begin(), k.end()), k.end());
  return k;
}

}  // namespace shearspec
