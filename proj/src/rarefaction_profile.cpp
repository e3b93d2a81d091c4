#include "cwlab/rarefaction_profile.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "cwlab/errors.hpp"
#include "cwlab/numerics.hpp"
#include "cwlab/riemann_waves.hpp"

namespace cwlab {

namespace {

// Logistic 1/(1+e^{-z}); (1 + tanh x)/2 = logistic(2x).
double logistic(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

}  // namespace

BurgersWave::BurgersWave(double w_l, double w_r) : w_l_(w_l), w_r_(w_r) {
  if (!std::isfinite(w_l) || !std::isfinite(w_r) || w_l > w_r) {
    throw std::invalid_argument("BurgersWave: need finite w_l <= w_r");
  }
}

BurgersSample burgers_eval(const BurgersWave& b, double x, double t, double tol) {
  if (t < 0.0) throw std::invalid_argument("burgers_eval: t must be >= 0");
  if (!(tol > 0.0)) throw std::invalid_argument("burgers_eval: tol must be positive");
  const double wl = b.w_l();
  const double wh = b.strength();
  if (wh == 0.0) return {wl, 0.0, 0.0, 0.0, x - wl * t};

  // w0(y) - w_l = wh * logistic(2y), w0'(y) = 2 wh logistic(2y) logistic(-2y)
  auto w0_parts = [&](double y, double& above, double& below, double& slope) {
    above = wh * logistic(2.0 * y);
    below = wh * logistic(-2.0 * y);
    slope = 2.0 * wh * logistic(2.0 * y) * logistic(-2.0 * y);
  };
  auto residual = [&](double y, double& deriv) {
    double above, below, slope;
    w0_parts(y, above, below, slope);
    deriv = 1.0 + slope * t;
    // x0 + w0(x0) t - x, splitting w0 to keep the large terms exact
    return (y - x + wl * t) + above * t;
  };

  double lo = x - b.w_r() * t;
  double hi = x - wl * t;
  double y = std::clamp(x - 0.5 * (wl + b.w_r()) * t, lo, hi);
  const double scale = std::max({1.0, std::abs(x), std::abs(wl * t), std::abs(b.w_r() * t)});
  double deriv = 1.0;
  double f = residual(y, deriv);
  for (int it = 0; it < 200 && std::abs(f) > tol * scale; ++it) {
    if (f > 0.0) {
      hi = y;
    } else {
      lo = y;
    }
    double next = y - f / deriv;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == y) break;
    y = next;
    f = residual(y, deriv);
  }
  if (!(std::abs(f) <= tol * scale)) {
    // Final pass of plain bisection to the resolution of the bracket.
    for (int it = 0; it < 200 && hi > lo; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      f = residual(mid, deriv);
      y = mid;
      (f > 0.0 ? hi : lo) = mid;
    }
    if (!(std::abs(f) <= tol * scale)) {
      throw Error(ErrorCode::ConvergenceFailure,
                  "burgers_eval: characteristic residual " + std::to_string(f));
    }
  }
  double above, below, slope;
  w0_parts(y, above, below, slope);
  const double w = (above <= below) ? wl + above : b.w_r() - below;
  return {w, slope / (1.0 + slope * t), above, below, y};
}

double burgers_fan(const BurgersWave& b, double xi) { return std::clamp(xi, b.w_l(), b.w_r()); }

RarefactionWave::RarefactionWave(GasParams gas, Family family, ThermoState anchor,
                                 double target_vm)
    : gas_(gas),
      family_(family),
      anchor_(anchor),
      target_vm_(target_vm),
      s_(entropy(gas, anchor)),
      burgers_(0.0, 0.0) {
  if (!(target_vm >= anchor.v())) {
    throw std::invalid_argument("RarefactionWave: target volume must be >= anchor volume");
  }
  const double lam_anchor = lambda(gas_, family_, anchor_.v(), s_);
  const double lam_middle = lambda(gas_, family_, target_vm_, s_);
  if (family_ == Family::minus) {
    burgers_ = BurgersWave(lam_anchor, lam_middle);
    v_left_ = anchor_.v();
    v_right_ = target_vm_;
  } else {
    burgers_ = BurgersWave(lam_middle, lam_anchor);
    v_left_ = target_vm_;
    v_right_ = anchor_.v();
  }
  if (burgers_.w_l() < 0.0 && burgers_.w_r() > 0.0) {
    throw std::invalid_argument("RarefactionWave: characteristic speed changes sign");
  }
}

RarefactionSample RarefactionWave::evaluate_full(double x, double t) const {
  if (degenerate()) {
    return {anchor_.v(), anchor_.u(), anchor_.theta(), 0.0, 0.0, 0.0, burgers_.w_l()};
  }
  const BurgersSample bs = burgers_eval(burgers_, x, t);
  const double gm = gas_.gamma();
  const double expo = -2.0 / (gm + 1.0);
  // V = v_end (w / w_end)^{-2/(gamma+1)}, taken from the nearer end of the wave.
  double V;
  if (bs.above_left <= bs.below_right) {
    V = v_left_ * std::exp(expo * std::log1p(bs.above_left / burgers_.w_l()));
  } else {
    V = v_right_ * std::exp(expo * std::log1p(-bs.below_right / burgers_.w_r()));
  }
  const double U = rarefaction_u_along_curve(gas_, family_, anchor_, V);
  const double Theta = anchor_.theta() * std::pow(anchor_.v() / V, gm - 1.0);
  const double V_x = expo * V / bs.w * bs.w_x;
  const double U_x = -bs.w * V_x;
  const double Theta_x = (1.0 - gm) * Theta / V * V_x;
  return {V, U, Theta, V_x, U_x, Theta_x, bs.w};
}

AnsatzSample RarefactionWave::evaluate(double x, double t) const {
  const RarefactionSample r = evaluate_full(x, t);
  return {r.V, r.U, r.Theta, r.V_x, r.U_x, r.Theta_x};
}

double burgers_wx_norm(const BurgersWave& b, double p, double t) {
  if (!(p >= 1.0)) throw std::invalid_argument("burgers_wx_norm: p must be >= 1");
  if (b.strength() == 0.0) return 0.0;
  if (std::isinf(p)) {
    auto wx = [&](double x) { return burgers_eval(b, x, t).w_x; };
    const double left_edge = b.w_l() * t;
    const double right_edge = b.w_r() * t;
    constexpr int bits = std::numeric_limits<double>::digits / 2;
    const auto [xmax, neg] = boost::math::tools::brent_find_minima(
        [&](double x) { return -wx(x); }, left_edge - 5.0, right_edge + 5.0, bits);
    (void)xmax;
    return -neg;
  }

  // Integrate in the foot variable y of the characteristic through x:
  // dx = (1 + w0'(y) t) dy and w_x = w0' / (1 + w0' t), so no root solves are needed.
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  const double wh = b.strength();
  auto integrand = [&](double y) {
    const double slope = 2.0 * wh * logistic(2.0 * y) * logistic(-2.0 * y);
    return std::pow(slope, p) * std::pow(1.0 + slope * t, 1.0 - p);
  };
  double total = 0.0;
  double total_err = 0.0;
  // w0' ~ 2 wh e^{-2|y|}; beyond |y| = 40 the integrand is below 1e-34 wh^p.
  for (auto [a, c] : {std::pair{-40.0, -4.0}, std::pair{-4.0, 4.0}, std::pair{4.0, 40.0}}) {
    double err = 0.0;
    total += GK::integrate(integrand, a, c, 15, 1e-14, &err);
    total_err += err;
  }
  if (!(total_err <= 1e-10 * std::max(total, 1e-300))) {
    throw Error(ErrorCode::QuadratureFailure,
                "burgers_wx_norm: error estimate " + std::to_string(total_err));
  }
  return std::pow(total, 1.0 / p);
}

LpRateTable lp_rate_report(const BurgersWave& b, std::span<const double> p_exponents,
                           std::span<const double> t_samples) {
  if (!(b.strength() > 0.0)) throw std::invalid_argument("lp_rate_report: need w_r > w_l");
  LpRateTable table;
  for (double p : p_exponents) {
    std::vector<double> lt, ln;
    for (double t : t_samples) {
      const double norm = burgers_wx_norm(b, p, t);
      table.rows.push_back({p, t, norm});
      if (t > 0.0) {
        lt.push_back(std::log(t));
        ln.push_back(std::log(norm));
      }
    }
    table.exponents.push_back(p);
    table.slopes.push_back(lt.size() >= 2 ? fit_line(lt, ln).slope
                                          : std::numeric_limits<double>::quiet_NaN());
  }
  return table;
}

}  // namespace cwlab
