#include "boussinesq/fit.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "boussinesq/error.hpp"

namespace boussinesq {

namespace {

double abscissa(double t, FitScale scale) {
  switch (scale) {
    case FitScale::LogLog: return std::log(t);
    case FitScale::LogLinear: return t;
    case FitScale::LogOnePlusT: return std::log1p(t);
  }
  return t;
}

}  // namespace

DecayFit fit_line(std::span<const double> times, std::span<const double> values, FitScale scale,
                  std::size_t min_samples) {
  if (times.size() != values.size()) {
    throw LabError(ErrorKind::SizeMismatch, "times and values differ in length");
  }
  const std::size_t m = times.size();
  if (m < std::max<std::size_t>(min_samples, 2)) {
    throw LabError(ErrorKind::InvalidArgument,
                   "fit needs at least " + std::to_string(min_samples) + " samples");
  }

  std::vector<double> x(m);
  std::vector<double> y(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (!(values[i] > 0.0) || !std::isfinite(values[i])) {
      throw LabError(ErrorKind::InvalidArgument, "decay fit needs positive finite values");
    }
    if (scale == FitScale::LogLog && !(times[i] > 0.0)) {
      throw LabError(ErrorKind::InvalidArgument, "log-log fit needs positive times");
    }
    x[i] = abscissa(times[i], scale);
    y[i] = std::log(values[i]);
  }

  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw LabError(ErrorKind::InvalidArgument, "fit abscissae are all equal");

  DecayFit fit;
  fit.exponent = sxy / sxx;
  fit.intercept = my - fit.exponent * mx;
  fit.r_squared = syy == 0.0 ? 1.0 : std::min(1.0, sxy * sxy / (sxx * syy));
  fit.t_min = times.front();
  fit.t_max = times.back();
  for (double t : times) {
    fit.t_min = std::min(fit.t_min, t);
    fit.t_max = std::max(fit.t_max, t);
  }
  fit.sample_count = m;
  return fit;
}

DecayFit fit_decay(std::span<const double> times, std::span<const double> values, FitScale scale,
                   double min_r_squared) {
  DecayFit fit = fit_line(times, values, scale);
  if (fit.r_squared < min_r_squared) {
    throw LabError(ErrorKind::FitUnreliable,
                   "r^2 = " + std::to_string(fit.r_squared) + " below " +
                       std::to_string(min_r_squared) + " (slope " +
                       std::to_string(fit.exponent) + ")");
  }
  return fit;
}

std::vector<double> log_spaced(double a, double b, std::size_t count) {
  if (!(a > 0.0 && b > a) || count < 2) {
    throw LabError(ErrorKind::InvalidArgument, "log_spaced needs 0 < a < b and count >= 2");
  }
  std::vector<double> out(count);
  const double la = std::log(a);
  const double lb = std::log(b);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = std::exp(la + (lb - la) * i / (count - 1));
  }
  out.front() = a;
  out.back() = b;
  return out;
}

std::vector<double> linear_spaced(double a, double b, std::size_t count) {
  if (!(b > a) || count < 2) {
    throw LabError(ErrorKind::InvalidArgument, "linear_spaced needs a < b and count >= 2");
  }
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = a + (b - a) * i / (count - 1);
  out.back() = b;
  return out;
}

double bracket(double x, Bracket convention) {
  return convention == Bracket::Floor ? std::floor(x) : std::trunc(x);
}

std::string_view to_string(Bracket convention) {
  return convention == Bracket::Floor ? "floor" : "trunc";
}

BoundCheck calibrated_bound_check(std::span<const double> times, std::span<const double> values,
                                  double exponent, double slack) {
  if (times.size() != values.size() || times.empty()) {
    throw LabError(ErrorKind::SizeMismatch, "bound check needs matching non-empty series");
  }
  BoundCheck best;
  bool first = true;
  for (bool one_plus_t : {false, true}) {
    auto weight = [&](double t) { return std::pow(one_plus_t ? 1.0 + t : t, exponent); };
    BoundCheck check;
    check.one_plus_t = one_plus_t;
    check.constant = values[0] / weight(times[0]);
    for (std::size_t i = 0; i < times.size(); ++i) {
      check.worst_ratio = std::max(check.worst_ratio, values[i] / (check.constant * weight(times[i])));
    }
    check.holds = check.worst_ratio <= 1.0 + slack;
    if (first || check.worst_ratio < best.worst_ratio) best = check;
    first = false;
  }
  return best;
}

}  // namespace boussinesq
