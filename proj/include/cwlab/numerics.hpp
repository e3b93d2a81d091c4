#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace cwlab {

struct LineFit {
  double slope;
  double intercept;
};

/// Least-squares y = slope * x + intercept. Needs at least two distinct x.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Largest c >= 0 such that max_i q_i exp(c r_i) <= cap * max_i q_i, i.e. the
/// steepest envelope q <= K exp(-c r) with K = cap * max q. Points with
/// q_i < floor are ignored (they sit at the double-precision floor).
double fit_envelope_rate(std::span<const double> r, std::span<const double> q, double cap,
                         double floor);

/// Fourth-order central difference of f at x with step h.
double central_derivative(const std::function<double(double)>& f, double x, double h);

/// Trapezoidal rule on uniform spacing dx.
double trapezoid(std::span<const double> f, double dx);

/// n log-spaced samples in [a, b], a > 0.
std::vector<double> log_space(double a, double b, std::size_t n);

}  // namespace cwlab
