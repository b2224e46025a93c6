#include "chromapraise/mixed_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <numbers>
#include <sstream>

#include <boost/math/distributions/chi_squared.hpp>

#include "chromapraise/errors.hpp"

namespace chromapraise {

namespace {

constexpr double kLog2Pi = 1.8378770664093453;

// Rows sorted by group, then by content, so every sum is accumulated in an
// order that does not depend on how the input rows were arranged.
std::vector<int> canonical_order(const DesignData& d) {
  std::vector<int> order(static_cast<std::size_t>(d.n_obs()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const int ga = d.groups[static_cast<std::size_t>(a)];
    const int gb = d.groups[static_cast<std::size_t>(b)];
    if (ga != gb) return ga < gb;
    if (d.y[a] != d.y[b]) return d.y[a] < d.y[b];
    for (Eigen::Index c = 0; c < d.X.cols(); ++c) {
      if (d.X(a, c) != d.X(b, c)) return d.X(a, c) < d.X(b, c);
    }
    return false;
  });
  return order;
}

DesignData reordered(const DesignData& d) {
  const auto order = canonical_order(d);
  DesignData out;
  out.y.resize(d.n_obs());
  out.X.resize(d.n_obs(), d.n_coef());
  out.groups.resize(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    const int k = order[i];
    out.y[static_cast<Eigen::Index>(i)] = d.y[k];
    out.X.row(static_cast<Eigen::Index>(i)) = d.X.row(k);
    out.groups[i] = d.groups[static_cast<std::size_t>(k)];
  }
  out.names = d.names;
  out.group_names = d.group_names;
  return out;
}

// Sufficient statistics of the standardized augmented matrix [X~ y~]:
// within-group cross products plus group means and sizes, so that
//   [X~ y~]' V^-1 [X~ y~] = W + sum_g n_g / (1 + lambda n_g) abar_g abar_g'.
class Problem {
 public:
  explicit Problem(const DesignData& data) : Problem(reordered(data), 0) {}

 private:
  Problem(const DesignData& d, int) : n_(d.n_obs()), p_(d.n_coef()), j_(d.n_groups()) {
    intercept_ = -1;
    for (int c = 0; c < p_; ++c) {
      if ((d.X.col(c).array() == 1.0).all()) {
        intercept_ = c;
        break;
      }
    }
    center_.setZero(p_);
    scale_.setOnes(p_);
    for (int c = 0; c < p_; ++c) {
      if (c == intercept_) continue;
      const Eigen::VectorXd col = d.X.col(c);
      double m = intercept_ >= 0 ? col.mean() : 0.0;
      double s = std::sqrt((col.array() - m).square().mean());
      center_[c] = m;
      scale_[c] = s > 0.0 ? s : 1.0;
    }
    ymean_ = intercept_ >= 0 ? d.y.mean() : 0.0;
    const double ys = std::sqrt((d.y.array() - ymean_).square().mean());
    yscale_ = ys > 0.0 ? ys : 1.0;

    const int q = p_ + 1;
    Eigen::MatrixXd a(n_, q);
    for (int c = 0; c < p_; ++c) a.col(c) = (d.X.col(c).array() - center_[c]) / scale_[c];
    a.col(p_) = (d.y.array() - ymean_) / yscale_;

    counts_.setZero(j_);
    means_.setZero(j_, q);
    for (int i = 0; i < n_; ++i) {
      counts_[d.groups[i]] += 1.0;
      means_.row(d.groups[i]) += a.row(i);
    }
    for (int g = 0; g < j_; ++g) means_.row(g) /= counts_[g];
    Eigen::MatrixXd centered = a;
    for (int i = 0; i < n_; ++i) centered.row(i) -= means_.row(d.groups[i]);
    within_ = centered.transpose() * centered;

    log_det_r_ = 0.0;
    for (int c = 0; c < p_; ++c) log_det_r_ += std::log(scale_[c]);
  }


 public:
  struct Eval {
    bool ok = false;
    Eigen::VectorXd beta;      // original scale
    Eigen::MatrixXd xvx_inv;   // (X' V^-1 X)^-1, original scale
    double q = 0.0;            // GLS residual sum of squares, original scale
    double log_det_v = 0.0;
    double log_det_xvx = 0.0;  // log|X' V^-1 X|, original scale
  };

  Eval evaluate(double lambda) const {
    const int q = p_ + 1;
    Eigen::MatrixXd m = within_;
    Eval e;
    for (int g = 0; g < j_; ++g) {
      const double w = counts_[g] / (1.0 + lambda * counts_[g]);
      m.noalias() += w * means_.row(g).transpose() * means_.row(g);
      e.log_det_v += std::log1p(lambda * counts_[g]);
    }
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() != Eigen::Success) return e;
    const Eigen::MatrixXd l = llt.matrixL();
    const double lyy = l(q - 1, q - 1);
    if (!(lyy > 0.0)) return e;
    // Triangular solve of the leading block gives beta~ without forming an inverse.
    const Eigen::MatrixXd lxx = l.topLeftCorner(p_, p_);
    const Eigen::VectorXd lyx = l.row(q - 1).head(p_).transpose();
    const Eigen::VectorXd bt = lxx.transpose().triangularView<Eigen::Upper>().solve(lyx);
    Eigen::MatrixXd lxx_inv = lxx.triangularView<Eigen::Lower>().solve(Eigen::MatrixXd::Identity(p_, p_));
    const Eigen::MatrixXd mxx_inv = lxx_inv.transpose() * lxx_inv;

    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(p_, p_);
    for (int c = 0; c < p_; ++c) {
      if (c == intercept_) {
        t(c, c) = 1.0;
      } else {
        t(c, c) = 1.0 / scale_[c];
        if (intercept_ >= 0) t(intercept_, c) = -center_[c] / scale_[c];
      }
    }
    e.beta = yscale_ * (t * bt);
    if (intercept_ >= 0) e.beta[intercept_] += ymean_;
    e.xvx_inv = t * mxx_inv * t.transpose();
    e.q = yscale_ * yscale_ * lyy * lyy;
    double ld = 0.0;
    for (int c = 0; c < p_; ++c) ld += 2.0 * std::log(l(c, c));
    e.log_det_xvx = ld + 2.0 * log_det_r_;
    e.ok = true;
    return e;
  }

  double deviance(const Eval& e, Estimation method, double extra_q = 0.0) const {
    const double qq = e.q + extra_q;
    if (method == Estimation::ML) {
      const double n = n_;
      return n * (kLog2Pi + std::log(qq / n)) + e.log_det_v + n;
    }
    const double r = n_ - p_;
    return r * (kLog2Pi + std::log(qq / r)) + e.log_det_v + e.log_det_xvx + r;
  }

  [[nodiscard]] int n() const { return n_; }
  [[nodiscard]] int p() const { return p_; }

 private:
  int n_, p_, j_;
  int intercept_ = -1;
  Eigen::VectorXd center_, scale_;
  double ymean_ = 0.0, yscale_ = 1.0;
  Eigen::VectorXd counts_;
  Eigen::MatrixXd means_;
  Eigen::MatrixXd within_;
  double log_det_r_ = 0.0;
};

// Piecewise map: linear on [0, 1], exponential above, so the golden-section
// search runs on a log scale for large ratios.
double to_lambda(double u) { return u <= 1.0 ? u : std::exp(u - 1.0); }
double from_lambda(double l) { return l <= 1.0 ? l : 1.0 + std::log(l); }

struct Minimum {
  double lambda = 0.0;
  double value = std::numeric_limits<double>::infinity();
  int evaluations = 0;
};

template <typename F>
Minimum minimize_lambda(F&& f, std::vector<std::pair<double, double>>* trace) {
  Minimum best;
  auto eval = [&](double lambda) {
    const double v = f(lambda);
    ++best.evaluations;
    if (trace) trace->emplace_back(lambda, v);
    if (v < best.value) {
      best.value = v;
      best.lambda = lambda;
    }
    return v;
  };

  std::vector<double> grid{0.0};
  for (int k = -32; k <= 16; ++k) grid.push_back(std::pow(10.0, k * 0.25));
  std::vector<double> values;
  values.reserve(grid.size());
  for (double l : grid) values.push_back(eval(l));
  std::size_t i_min = 0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (values[i] < values[i_min]) i_min = i;
  }
  if (!std::isfinite(values[i_min])) throw ConvergenceError("deviance is not finite on the variance-ratio grid");

  double a = from_lambda(grid[i_min == 0 ? 0 : i_min - 1]);
  double b = from_lambda(grid[std::min(i_min + 1, grid.size() - 1)]);
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - phi * (b - a);
  double d = a + phi * (b - a);
  double fc = eval(to_lambda(c));
  double fd = eval(to_lambda(d));
  int iter = 0;
  while (to_lambda(b) - to_lambda(a) > kLambdaTol) {
    if (++iter > 500) {
      std::ostringstream msg;
      msg << "variance ratio search did not converge; last bracket [" << to_lambda(a) << ", " << to_lambda(b)
          << "]";
      throw ConvergenceError(msg.str());
    }
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = eval(to_lambda(c));
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = eval(to_lambda(d));
    }
  }
  return best;
}

void check_rank(const DesignData& data) {
  const auto bad = rank_deficient_columns(data);
  if (bad.empty()) return;
  std::string msg = "fixed-effects design is rank deficient; dependent columns:";
  for (const auto& name : bad) msg += " " + name;
  throw SingularityError(msg);
}

}  // namespace

void DesignData::validate() const {
  const auto n = y.size();
  if (X.rows() != n) throw ArgumentError("design matrix and response have different row counts");
  if (static_cast<Eigen::Index>(groups.size()) != n) throw ArgumentError("group vector length does not match response");
  if (static_cast<Eigen::Index>(names.size()) != X.cols()) throw ArgumentError("column names do not match design width");
  if (n_groups() < 1) throw ArgumentError("no groups");
  if (n <= X.cols()) {
    std::ostringstream msg;
    msg << "N = " << n << " observations but p = " << X.cols() << " coefficients; select fewer predictors";
    throw ArgumentError(msg.str());
  }
  std::vector<int> sizes(group_names.size(), 0);
  for (int g : groups) {
    if (g < 0 || g >= n_groups()) throw ArgumentError("group id out of range");
    ++sizes[static_cast<std::size_t>(g)];
  }
  for (std::size_t g = 0; g < sizes.size(); ++g) {
    if (sizes[g] == 0) throw ArgumentError("group '" + group_names[g] + "' has no observations");
  }
  if (!y.allFinite() || !X.allFinite()) throw ArgumentError("design contains non-finite values");
}

DesignData make_design(Eigen::VectorXd y, Eigen::MatrixXd X, const std::vector<std::string>& group_labels,
                       std::vector<std::string> names) {
  DesignData d;
  d.y = std::move(y);
  d.X = std::move(X);
  d.names = std::move(names);
  std::map<std::string, int> ids;
  for (const auto& g : group_labels) ids.emplace(g, 0);
  int next = 0;
  for (auto& [name, id] : ids) {
    id = next++;
    d.group_names.push_back(name);
  }
  d.groups.reserve(group_labels.size());
  for (const auto& g : group_labels) d.groups.push_back(ids.at(g));
  return d;
}

std::vector<std::string> rank_deficient_columns(const DesignData& data) {
  const Eigen::Index p = data.X.cols();
  Eigen::MatrixXd xs = data.X;
  for (Eigen::Index c = 0; c < p; ++c) {
    const double norm = xs.col(c).norm();
    if (norm > 0.0) xs.col(c) /= norm;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(xs);
  qr.setThreshold(1e-10);
  if (qr.rank() == p) return {};
  // Columns outside the pivoted leading rank are the dependent ones.
  std::vector<std::string> out;
  const auto& perm = qr.colsPermutation().indices();
  std::vector<Eigen::Index> idx;
  for (Eigen::Index k = qr.rank(); k < p; ++k) idx.push_back(perm[k]);
  std::sort(idx.begin(), idx.end());
  for (Eigen::Index c : idx) out.push_back(data.names[static_cast<std::size_t>(c)]);
  return out;
}

ProfiledDeviance profiled_deviance(const DesignData& data, double lambda, Estimation method) {
  data.validate();
  if (!(lambda >= 0.0)) throw ArgumentError("variance ratio must be nonnegative");
  check_rank(data);
  const Problem prob(data);
  const auto e = prob.evaluate(lambda);
  if (!e.ok) throw SingularityError("cross-product matrix is not positive definite");
  ProfiledDeviance out;
  out.deviance = prob.deviance(e, method);
  out.beta = e.beta;
  out.sigma_e2 = e.q / (method == Estimation::ML ? data.n_obs() : data.n_obs() - data.n_coef());
  return out;
}

std::pair<double, double> r_squared(double sigma_f2, double sigma_u2, double sigma_e2) {
  const double total = sigma_f2 + sigma_u2 + sigma_e2;
  if (!(total > 0.0)) throw ArgumentError("variance components sum to zero");
  return {sigma_f2 / total, (sigma_f2 + sigma_u2) / total};
}

ModelFit fit(const DesignData& input, Estimation method) {
  input.validate();
  if (input.n_groups() < 2) throw ArgumentError("need >= 2 groups for a random-intercept model");
  check_rank(input);
  const DesignData data = reordered(input);
  const Problem prob(data);
  ModelFit out;
  out.method = method;
  auto objective = [&](double lambda) {
    const auto e = prob.evaluate(lambda);
    return e.ok ? prob.deviance(e, method) : std::numeric_limits<double>::infinity();
  };
  const Minimum m = minimize_lambda(objective, &out.trace);
  out.evaluations = m.evaluations;
  out.lambda = m.lambda;
  out.deviance = m.value;
  out.loglik = -0.5 * m.value;

  const auto e = prob.evaluate(m.lambda);
  if (!e.ok) throw SingularityError("cross-product matrix is not positive definite at the optimum");
  const int n = data.n_obs();
  const int p = data.n_coef();
  out.beta = e.beta;
  out.sigma_e2 = e.q / (method == Estimation::ML ? n : n - p);
  out.sigma_u2 = out.lambda * out.sigma_e2;
  out.cov = out.sigma_e2 * e.xvx_inv;
  out.se = out.cov.diagonal().cwiseMax(0.0).cwiseSqrt();

  const Eigen::VectorXd fitted = data.X * out.beta;
  out.sigma_f2 = (fitted.array() - fitted.mean()).square().mean();
  std::tie(out.r2_marginal, out.r2_conditional) = r_squared(out.sigma_f2, out.sigma_u2, out.sigma_e2);

  const int jn = data.n_groups();
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(jn);
  Eigen::VectorXd resid_sum = Eigen::VectorXd::Zero(jn);
  for (int i = 0; i < n; ++i) {
    counts[data.groups[i]] += 1.0;
    resid_sum[data.groups[i]] += data.y[i] - fitted[i];
  }
  out.group_effects.resize(jn);
  for (int g = 0; g < jn; ++g) {
    out.group_effects[g] = out.lambda / (1.0 + out.lambda * counts[g]) * resid_sum[g];
  }

  // Expected information for (sigma_u2, sigma_e2): each group covariance has
  // eigenvalue sigma_e2 + n_g sigma_u2 once and sigma_e2 with multiplicity n_g - 1.
  double iuu = 0.0, iue = 0.0, iee = 0.0;
  const double se2 = out.sigma_e2;
  for (int g = 0; g < jn; ++g) {
    const double tau = se2 + counts[g] * out.sigma_u2;
    iuu += 0.5 * counts[g] * counts[g] / (tau * tau);
    iue += 0.5 * counts[g] / (tau * tau);
    iee += 0.5 * ((counts[g] - 1.0) / (se2 * se2) + 1.0 / (tau * tau));
  }
  const double det = iuu * iee - iue * iue;
  out.group_var_se = det > 0.0 ? std::sqrt(iee / det) : std::numeric_limits<double>::quiet_NaN();
  return out;
}

double profile_deviance(const DesignData& data, int j, double value) {
  data.validate();
  if (j < 0 || j >= data.n_coef()) throw ArgumentError("coefficient index out of range");
  check_rank(data);
  const Problem prob(data);
  auto objective = [&](double lambda) {
    const auto e = prob.evaluate(lambda);
    if (!e.ok) return std::numeric_limits<double>::infinity();
    const double diff = e.beta[j] - value;
    return prob.deviance(e, Estimation::ML, diff * diff / e.xvx_inv(j, j));
  };
  return minimize_lambda(objective, nullptr).value;
}

ProfileInterval profile_ci(const DesignData& data, const ModelFit& fit, int j, double level) {
  if (!(level > 0.0 && level < 1.0)) throw ArgumentError("confidence level must be in (0, 1)");
  data.validate();
  if (j < 0 || j >= data.n_coef()) throw ArgumentError("coefficient index out of range");
  check_rank(data);
  const Problem prob(data);
  auto profile = [&](double value) {
    auto objective = [&](double lambda) {
      const auto e = prob.evaluate(lambda);
      if (!e.ok) return std::numeric_limits<double>::infinity();
      const double diff = e.beta[j] - value;
      return prob.deviance(e, Estimation::ML, diff * diff / e.xvx_inv(j, j));
    };
    return minimize_lambda(objective, nullptr).value;
  };

  // The ML optimum, even when the fit itself used REML.
  const double center = fit.method == Estimation::ML ? fit.beta[j] : [&] {
    auto objective = [&](double lambda) {
      const auto e = prob.evaluate(lambda);
      return e.ok ? prob.deviance(e, Estimation::ML) : std::numeric_limits<double>::infinity();
    };
    const Minimum m = minimize_lambda(objective, nullptr);
    return prob.evaluate(m.lambda).beta[j];
  }();
  const double base = profile(center);
  const boost::math::chi_squared chi(1.0);
  const double target = base + boost::math::quantile(chi, level);
  double step = fit.se[j];
  if (!(step > 0.0) || !std::isfinite(step)) step = std::max(1.0, std::abs(center)) * 1e-3;

  auto search = [&](double dir, bool& open) {
    double inside = center;
    double outside = center;
    bool found = false;
    for (int k = 0; k <= 60; ++k) {
      const double t = center + dir * step * std::ldexp(1.0, k);
      if (profile(t) > target) {
        outside = t;
        found = true;
        break;
      }
      inside = t;
    }
    if (!found) {
      open = true;
      return inside;
    }
    while (std::abs(outside - inside) > 1e-6 * std::max({std::abs(inside), std::abs(outside), step})) {
      const double mid = 0.5 * (inside + outside);
      if (profile(mid) > target) {
        outside = mid;
      } else {
        inside = mid;
      }
    }
    return 0.5 * (inside + outside);
  };
  ProfileInterval ci;
  ci.low = search(-1.0, ci.open_low);
  ci.high = search(1.0, ci.open_high);
  return ci;
}

}  // namespace chromapraise
