#include "cwlab/contact_profile.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "cwlab/errors.hpp"
#include "cwlab/numerics.hpp"

namespace cwlab {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Vec = Eigen::VectorXd;

double heat_coefficient(const GasParams& g, double p_plus) {
  return g.kappa() * p_plus * (g.gamma() - 1.0) / (g.gamma() * g.R() * g.R());
}

// Discrete operator F_i = b D2 y + (xi/2) e^y D1 y on interior nodes of a
// uniform grid, fourth order away from the ends and second order on the
// nodes next to the Dirichlet boundaries.
class ProfileOperator {
 public:
  ProfileOperator(std::vector<double> xi, double b) : xi_(std::move(xi)), b_(b) {
    h_ = xi_[1] - xi_[0];
  }

  std::size_t size() const { return xi_.size(); }

  bool second_order_row(std::size_t i) const { return i == 1 || i + 2 == xi_.size(); }

  double d1(const std::vector<double>& y, std::size_t i) const {
    if (second_order_row(i)) return (y[i + 1] - y[i - 1]) / (2.0 * h_);
    return (-y[i + 2] + 8.0 * y[i + 1] - 8.0 * y[i - 1] + y[i - 2]) / (12.0 * h_);
  }

  double d2(const std::vector<double>& y, std::size_t i) const {
    if (second_order_row(i)) return (y[i + 1] - 2.0 * y[i] + y[i - 1]) / (h_ * h_);
    return (-y[i + 2] + 16.0 * y[i + 1] - 30.0 * y[i] + 16.0 * y[i - 1] - y[i - 2]) /
           (12.0 * h_ * h_);
  }

  // Residual on interior nodes 1..N-2, stored at index i-1.
  Vec residual(const std::vector<double>& y) const {
    const std::size_t n = size();
    Vec f(static_cast<Eigen::Index>(n - 2));
    for (std::size_t i = 1; i + 1 < n; ++i) {
      f[static_cast<Eigen::Index>(i - 1)] = b_ * d2(y, i) + 0.5 * xi_[i] * std::exp(y[i]) * d1(y, i);
    }
    return f;
  }

  SpMat jacobian(const std::vector<double>& y, double diag_shift_scale = 0.0) const {
    const std::size_t n = size();
    const auto m = static_cast<Eigen::Index>(n - 2);
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(5 * (n - 2));
    auto add = [&](std::size_t row, std::size_t col, double value) {
      if (col == 0 || col + 1 == n) return;  // Dirichlet nodes are not unknowns
      trip.emplace_back(static_cast<Eigen::Index>(row - 1), static_cast<Eigen::Index>(col - 1),
                        value);
    };
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double a = 0.5 * xi_[i] * std::exp(y[i]);
      if (second_order_row(i)) {
        const double c2 = b_ / (h_ * h_);
        const double c1 = a / (2.0 * h_);
        add(i, i - 1, c2 - c1);
        add(i, i, -2.0 * c2 + a * d1(y, i) - diag_shift_scale * std::exp(y[i]));
        add(i, i + 1, c2 + c1);
      } else {
        const double c2 = b_ / (12.0 * h_ * h_);
        const double c1 = a / (12.0 * h_);
        add(i, i - 2, -c2 + c1);
        add(i, i - 1, 16.0 * c2 - 8.0 * c1);
        add(i, i, -30.0 * c2 + a * d1(y, i) - diag_shift_scale * std::exp(y[i]));
        add(i, i + 1, 16.0 * c2 + 8.0 * c1);
        add(i, i + 2, -c2 - c1);
      }
    }
    SpMat J(m, m);
    J.setFromTriplets(trip.begin(), trip.end());
    return J;
  }

 private:
  std::vector<double> xi_;
  double b_;
  double h_;
};

double max_abs(const Vec& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

void apply_update(std::vector<double>& y, const Vec& dy, double step) {
  for (Eigen::Index k = 0; k < dy.size(); ++k) y[static_cast<std::size_t>(k + 1)] += step * dy[k];
}

// Returns the iteration count on success, -1 on failure.
int damped_newton(const ProfileOperator& op, std::vector<double>& y, double tol) {
  Eigen::SparseLU<SpMat> lu;
  Vec f = op.residual(y);
  double fnorm = max_abs(f);
  for (int it = 0; it < 100; ++it) {
    if (fnorm <= tol) return it;
    SpMat J = op.jacobian(y);
    lu.compute(J);
    if (lu.info() != Eigen::Success) return -1;
    const Vec dy = lu.solve(-f);
    double step = 1.0;
    bool accepted = false;
    while (step > 1e-4) {
      std::vector<double> trial = y;
      apply_update(trial, dy, step);
      const Vec ft = op.residual(trial);
      const double tn = max_abs(ft);
      if (std::isfinite(tn) && tn < fnorm) {
        y = std::move(trial);
        f = ft;
        fnorm = tn;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) return fnorm <= tol ? it : -1;
  }
  return fnorm <= tol ? 100 : -1;
}

// Pseudo-time marching of e^y y_tau = F(y) with linearized backward Euler and
// switched-evolution-relaxation step growth.
int pseudo_transient(const ProfileOperator& op, std::vector<double>& y, double tol) {
  Eigen::SparseLU<SpMat> lu;
  Vec f = op.residual(y);
  double fnorm = max_abs(f);
  double dtau = 0.05;
  for (int it = 0; it < 2000; ++it) {
    if (fnorm <= tol) return it;
    SpMat M = op.jacobian(y, 1.0 / dtau);
    lu.compute(M);
    if (lu.info() != Eigen::Success) return -1;
    const Vec dy = lu.solve(-f);
    std::vector<double> trial = y;
    apply_update(trial, dy, 1.0);
    const Vec ft = op.residual(trial);
    const double tn = max_abs(ft);
    if (!std::isfinite(tn)) {
      dtau *= 0.25;
      continue;
    }
    y = std::move(trial);
    dtau = std::min(dtau * std::clamp(fnorm / tn, 0.5, 4.0), 1e12);
    f = ft;
    fnorm = tn;
  }
  return fnorm <= tol ? 2000 : -1;
}

}  // namespace

SelfSimilarProfile solve_self_similar(const GasParams& g, double theta_minus, double theta_plus,
                                      double p_plus, const ProfileOptions& opts) {
  if (!(theta_minus > 0.0 && theta_plus > 0.0 && p_plus > 0.0)) {
    throw std::invalid_argument("solve_self_similar: theta_+-, p_+ must be positive");
  }
  if (!(opts.Xi > 0.0) || opts.n_points < 1001 || !(opts.tol > 0.0)) {
    throw std::invalid_argument("solve_self_similar: need Xi > 0, n_points >= 1001, tol > 0");
  }
  const auto n = static_cast<std::size_t>(opts.n_points);
  const double h = 2.0 * opts.Xi / static_cast<double>(n - 1);
  std::vector<double> xi(n);
  for (std::size_t i = 0; i < n; ++i) xi[i] = -opts.Xi + h * static_cast<double>(i);
  xi.back() = opts.Xi;

  const double b = heat_coefficient(g, p_plus);
  const double jump = theta_plus - theta_minus;
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = std::log(theta_minus + jump * 0.5 * (1.0 + std::tanh(xi[i])));
  }
  y.front() = std::log(theta_minus);
  y.back() = std::log(theta_plus);

  ProfileOperator op(xi, b);
  int iterations = 0;
  if (jump != 0.0) {
    std::vector<double> y0 = y;
    iterations = damped_newton(op, y, opts.tol);
    if (iterations < 0) {
      y = std::move(y0);
      iterations = pseudo_transient(op, y, opts.tol);
      if (iterations >= 0) iterations = damped_newton(op, y, opts.tol);
    }
    if (iterations < 0) {
      throw Error(ErrorCode::ConvergenceFailure,
                  "self-similar profile: residual " + std::to_string(max_abs(op.residual(y))) +
                      " above tol " + std::to_string(opts.tol));
    }
  }

  SelfSimilarProfile prof;
  prof.xi = xi;
  prof.theta.resize(n);
  prof.dtheta.resize(n);
  for (std::size_t i = 0; i < n; ++i) prof.theta[i] = std::exp(y[i]);
  prof.theta.front() = theta_minus;
  prof.theta.back() = theta_plus;
  for (std::size_t i = 1; i + 1 < n; ++i) prof.dtheta[i] = prof.theta[i] * op.d1(y, i);
  prof.dtheta.front() = prof.theta.front() * (-3.0 * y[0] + 4.0 * y[1] - y[2]) / (2.0 * h);
  prof.dtheta.back() =
      prof.theta.back() * (3.0 * y[n - 1] - 4.0 * y[n - 2] + y[n - 3]) / (2.0 * h);

  prof.theta_minus = theta_minus;
  prof.theta_plus = theta_plus;
  prof.p_plus = p_plus;
  prof.b_coeff = b;
  prof.Xi = opts.Xi;
  prof.ode_residual = max_abs(op.residual(y));
  prof.boundary_error = std::max(std::abs(std::exp(y.front()) - theta_minus),
                                 std::abs(std::exp(y.back()) - theta_plus));
  prof.iterations = iterations;

  const double edge_slope = std::max(std::abs(prof.dtheta.front()), std::abs(prof.dtheta.back()));
  if (edge_slope > 1e-10) {
    throw Error(ErrorCode::TruncationTooSmall,
                "|Theta'(+-Xi)| = " + std::to_string(edge_slope) + " exceeds 1e-10; enlarge Xi");
  }
  return prof;
}

ContactWave::ContactWave(GasParams gas, SelfSimilarProfile profile)
    : gas_(gas), profile_(std::move(profile)) {
  if (profile_.xi.size() < 4 || profile_.theta.size() != profile_.xi.size() ||
      profile_.dtheta.size() != profile_.xi.size()) {
    throw std::invalid_argument("ContactWave: malformed profile");
  }
  u_coeff_ = gas_.kappa() * (gas_.gamma() - 1.0) / (gas_.gamma() * gas_.R());
}

ContactWave ContactWave::from_ends(const GasParams& g, const EndStates& ends,
                                   const ProfileOptions& opts) {
  if (!is_contact_compatible(g, ends, 1e-10)) {
    throw std::invalid_argument("ContactWave::from_ends: end states are not contact-compatible");
  }
  ContactWave w(g, solve_self_similar(g, ends.left.theta(), ends.right.theta(),
                                      pressure(g, ends.right), opts));
  w.u_offset_ = ends.left.u();
  return w;
}

ContactWave::XiSample ContactWave::at_xi(double xi) const {
  const auto& p = profile_;
  if (xi <= -p.Xi) return {p.theta_minus, 0.0, 0.0, 0.0};
  if (xi >= p.Xi) return {p.theta_plus, 0.0, 0.0, 0.0};
  const double h = p.spacing();
  const double pos = (xi + p.Xi) / h;
  auto k = static_cast<std::size_t>(pos);
  if (k + 1 >= p.xi.size()) k = p.xi.size() - 2;
  const double s = pos - static_cast<double>(k);
  const double s2 = s * s;
  const double s3 = s2 * s;
  const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
  const double h10 = s3 - 2.0 * s2 + s;
  const double h01 = -2.0 * s3 + 3.0 * s2;
  const double h11 = s3 - s2;
  const double dh00 = 6.0 * s2 - 6.0 * s;
  const double dh10 = 3.0 * s2 - 4.0 * s + 1.0;
  const double dh01 = -6.0 * s2 + 6.0 * s;
  const double dh11 = 3.0 * s2 - 2.0 * s;
  const double t0 = p.theta[k], t1 = p.theta[k + 1];
  const double m0 = p.dtheta[k] * h, m1 = p.dtheta[k + 1] * h;

  const double th = h00 * t0 + h10 * m0 + h01 * t1 + h11 * m1;
  const double d1 = (dh00 * t0 + dh10 * m0 + dh01 * t1 + dh11 * m1) / h;
  // Higher derivatives from the ODE: Theta'' = Theta'^2/Theta - xi Theta Theta' / (2b).
  const double b = p.b_coeff;
  const double d2 = d1 * d1 / th - xi * th * d1 / (2.0 * b);
  const double d3 = 2.0 * d1 * d2 / th - d1 * d1 * d1 / (th * th) -
                    (th * d1 + xi * d1 * d1 + xi * th * d2) / (2.0 * b);
  return {th, d1, d2, d3};
}

ContactSample ContactWave::evaluate_full(double x, double t) const {
  if (t < 0.0) throw std::invalid_argument("ContactWave: t must be >= 0");
  const double s = std::sqrt(1.0 + t);
  const double xi = x / s;
  const XiSample z = at_xi(xi);
  const double R = gas_.R();
  const double pp = profile_.p_plus;

  ContactSample c{};
  c.Theta = z.theta;
  c.Theta_x = z.d1 / s;
  c.Theta_xx = z.d2 / (s * s);
  c.Theta_xxx = z.d3 / (s * s * s);
  c.Theta_t = -0.5 * xi * z.d1 / (s * s);
  c.V = R * c.Theta / pp;
  c.V_x = R * c.Theta_x / pp;
  c.V_t = R * c.Theta_t / pp;

  const double th = c.Theta;
  const double q = c.Theta_x / th;
  c.U = u_offset_ + u_coeff_ * q;
  c.U_x = u_coeff_ * (c.Theta_xx / th - q * q);
  c.U_xx = u_coeff_ * (c.Theta_xxx / th - 3.0 * c.Theta_x * c.Theta_xx / (th * th) + 2.0 * q * q * q);
  const double qxi = z.d1 / th;
  c.U_t = -u_coeff_ / (2.0 * s * s * s) * (xi * (z.d2 / th - qxi * qxi) + qxi);
  return c;
}

AnsatzSample ContactWave::evaluate(double x, double t) const {
  const ContactSample c = evaluate_full(x, t);
  return {c.V, c.U, c.Theta, c.V_x, c.U_x, c.Theta_x};
}

ContactResiduals ContactWave::residuals(double x, double t) const {
  const ContactSample c = evaluate_full(x, t);
  const double mu = gas_.mu();
  const double visc_x = c.U_xx / c.V - c.U_x * c.V_x / (c.V * c.V);
  return {c.U_t - mu * visc_x, -mu * c.U_x * c.U_x / c.V};
}

DecayConstants fit_decay_constants(const ContactWave& w, std::span<const double> t_samples,
                                   std::span<const double> x_samples) {
  const double delta = w.delta();
  if (delta == 0.0) throw Error(ErrorCode::DegenerateWave, "fit_decay_constants: delta == 0");
  const auto& p = w.profile();
  std::vector<double> r, q;
  r.reserve(t_samples.size() * x_samples.size());
  q.reserve(r.capacity());
  for (double t : t_samples) {
    for (double x : x_samples) {
      const ContactSample c = w.evaluate_full(x, t);
      const double far = x < 0.0 ? p.theta_minus : p.theta_plus;
      const double value = (1.0 + t) * std::abs(c.Theta_xx) +
                           std::sqrt(1.0 + t) * std::abs(c.Theta_x) + std::abs(c.Theta - far);
      r.push_back(x * x / (1.0 + t));
      q.push_back(value / delta);
    }
  }
  constexpr double kCap = 4.0;
  // Points more than nine decades below the peak sit at rounding level.
  const double floor_q = 1e-9 * *std::max_element(q.begin(), q.end());
  const double c1 = fit_envelope_rate(r, q, kCap, floor_q);
  double bound = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (q[i] >= floor_q) bound = std::max(bound, q[i] * std::exp(c1 * r[i]));
  }
  return {c1, c1 / 4.0, std::nullopt, bound};
}

}  // namespace cwlab
