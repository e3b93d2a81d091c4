#include "cwlab/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cwlab {

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("fit_line: need matching spans with >= 2 points");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_line: x values are all equal");
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

double fit_envelope_rate(std::span<const double> r, std::span<const double> q, double cap,
                         double floor) {
  if (r.size() != q.size()) throw std::invalid_argument("fit_envelope_rate: size mismatch");
  double qmax = 0.0;
  double rmax = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (q[i] < floor) continue;
    qmax = std::max(qmax, q[i]);
    rmax = std::max(rmax, r[i]);
  }
  if (qmax <= 0.0 || rmax <= 0.0) return 0.0;
  const double limit = std::log(cap * qmax);
  auto admissible = [&](double c) {
    for (std::size_t i = 0; i < q.size(); ++i) {
      if (q[i] < floor) continue;
      if (std::log(q[i]) + c * r[i] > limit) return false;
    }
    return true;
  };
  double lo = 0.0;
  double hi = 1.0;
  while (admissible(hi)) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e12) return hi;
  }
  for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (admissible(mid) ? lo : hi) = mid;
  }
  return lo;
}

double central_derivative(const std::function<double(double)>& f, double x, double h) {
  return (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h);
}

double trapezoid(std::span<const double> f, double dx) {
  if (f.size() < 2) return 0.0;
  double s = 0.5 * (f.front() + f.back());
  for (std::size_t i = 1; i + 1 < f.size(); ++i) s += f[i];
  return s * dx;
}

std::vector<double> log_space(double a, double b, std::size_t n) {
  if (!(a > 0.0 && b > 0.0) || n < 2) throw std::invalid_argument("log_space: bad range");
  std::vector<double> out(n);
  const double la = std::log(a);
  const double lb = std::log(b);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = std::exp(la + (lb - la) * static_cast<double>(i) / static_cast<double>(n - 1));
  }
  out.front() = a;
  out.back() = b;
  return out;
}

}  // namespace cwlab
