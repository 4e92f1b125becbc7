#include "ghz/bayesopt.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "ghz/errors.hpp"
#include "ghz/rng.hpp"

namespace ghz {

void SearchSpace::validate() const {
  if (lower.size() != upper.size() || lower.size() == 0)
    throw DomainError("search space: bound vectors must match and be nonempty");
  for (Eigen::Index i = 0; i < lower.size(); ++i)
    if (!(lower[i] < upper[i]))
      throw DomainError("search space: lower must be < upper in dimension " +
                        std::to_string(i));
}

Eigen::VectorXd SearchSpace::to_unit(const Eigen::VectorXd& raw) const {
  return (raw - lower).cwiseQuotient(upper - lower);
}

Eigen::VectorXd SearchSpace::from_unit(const Eigen::VectorXd& unit) const {
  return lower + unit.cwiseProduct(upper - lower);
}

SearchSpace pulse_search_space(double v0_rad_per_us, double delta_star_rad_per_us) {
  SearchSpace space;
  space.lower.resize(6);
  space.upper.resize(6);
  const double dmag = 1.5 * std::abs(delta_star_rad_per_us);
  for (int i = 0; i < 3; ++i) {
    space.lower[i] = 0.0;
    space.upper[i] = 2.0 * v0_rad_per_us;
    space.lower[3 + i] = -dmag;
    space.upper[3 + i] = dmag;
  }
  space.validate();
  return space;
}

Eigen::MatrixXd latin_hypercube(int n, int d, std::uint64_t seed) {
  if (n < 1 || d < 1) throw DomainError("latin_hypercube: n and d must be >= 1");
  Rng rng(seed);
  Eigen::MatrixXd x(n, d);
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int dim = 0; dim < d; ++dim) {
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = n - 1; i > 0; --i) {
      const auto j = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(i + 1)));
      std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
    }
    for (int i = 0; i < n; ++i)
      x(i, dim) = (perm[static_cast<std::size_t>(i)] + rng.uniform01()) / n;
  }
  return x;
}

Eigen::MatrixXd init_design(const SearchSpace& space, int n, std::uint64_t seed) {
  space.validate();
  Eigen::MatrixXd unit = latin_hypercube(n, space.dim(), seed);
  for (int i = 0; i < n; ++i)
    unit.row(i) = space.from_unit(unit.row(i).transpose()).transpose();
  return unit;
}

Eigen::MatrixXd halton_candidates(int n, int d, std::uint64_t seed) {
  static constexpr int primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29};
  if (d < 1 || d > static_cast<int>(std::size(primes)))
    throw DomainError("halton_candidates: unsupported dimension");
  Rng rng(seed);
  Eigen::VectorXd shift(d);
  for (int dim = 0; dim < d; ++dim) shift[dim] = rng.uniform01();
  Eigen::MatrixXd x(n, d);
  for (int dim = 0; dim < d; ++dim) {
    const int base = primes[dim];
    for (int i = 0; i < n; ++i) {
      double value = 0.0, f = 1.0 / base;
      for (int k = i + 1; k > 0; k /= base) {
        value += f * (k % base);
        f /= base;
      }
      value += shift[dim];
      x(i, dim) = value - std::floor(value);
    }
  }
  return x;
}

namespace {

constexpr double kNoiseFloor = 1e-8;
constexpr double kLogSf2Lo = -13.8155105579642740;  // log 1e-6
constexpr double kLogSf2Hi = 6.9077552789821368;    // log 1e3
constexpr double kLogEllLo = -3.5065578973199817;   // log 0.03
constexpr double kLogEllHi = 3.4011973816621555;    // log 30
constexpr double kLogSn2Lo = -18.4206807439523654;  // log 1e-8
constexpr double kLogSn2Hi = 0.0;

struct ThetaView {
  double sf2;
  Eigen::VectorXd ell;
  double sn2;
};

ThetaView unpack(const Eigen::VectorXd& log_theta) {
  const int d = static_cast<int>(log_theta.size()) - 2;
  ThetaView t;
  t.sf2 = std::exp(log_theta[0]);
  t.ell = log_theta.segment(1, d).array().exp();
  t.sn2 = std::exp(log_theta[d + 1]);
  return t;
}

void clamp_theta(Eigen::VectorXd& log_theta) {
  const int d = static_cast<int>(log_theta.size()) - 2;
  log_theta[0] = std::clamp(log_theta[0], kLogSf2Lo, kLogSf2Hi);
  for (int i = 0; i < d; ++i)
    log_theta[1 + i] = std::clamp(log_theta[1 + i], kLogEllLo, kLogEllHi);
  log_theta[d + 1] = std::clamp(log_theta[d + 1], kLogSn2Lo, kLogSn2Hi);
}

// Matern-5/2 with ARD: k(r) = sf2 (1 + sqrt5 r + 5 r^2/3) exp(-sqrt5 r),
// r^2 = sum_d (dx_d / ell_d)^2.
double kernel_value(const ThetaView& t, const Eigen::VectorXd& a,
                    const Eigen::VectorXd& b) {
  double r2 = 0.0;
  for (Eigen::Index d = 0; d < a.size(); ++d) {
    const double u = (a[d] - b[d]) / t.ell[d];
    r2 += u * u;
  }
  const double r = std::sqrt(r2);
  const double sr = 2.2360679774997896964091736687747 * r;  // sqrt(5) r
  return t.sf2 * (1.0 + sr + sr * sr / 3.0) * std::exp(-sr);
}

void build_kernel(const ThetaView& t, const Eigen::MatrixXd& x, double jitter,
                  Eigen::MatrixXd& k) {
  const int n = static_cast<int>(x.rows());
  k.resize(n, n);
  for (int i = 0; i < n; ++i) {
    k(i, i) = t.sf2 + t.sn2 + jitter;
    for (int j = i + 1; j < n; ++j) {
      const double v = kernel_value(t, x.row(i).transpose(), x.row(j).transpose());
      k(i, j) = v;
      k(j, i) = v;
    }
  }
}

struct LmlResult {
  bool ok = false;
  double lml = -std::numeric_limits<double>::infinity();
  Eigen::VectorXd grad;
  Eigen::MatrixXd chol;   // lower factor
  Eigen::VectorXd alpha;
};

// Log marginal likelihood with its gradient wrt the log hyperparameters:
// d lml / d theta_j = tr((alpha alpha^T - K^{-1}) dK/dtheta_j) / 2.
LmlResult lml_with_grad(const Eigen::VectorXd& log_theta, const Eigen::MatrixXd& x,
                        const Eigen::VectorXd& y, double jitter, bool want_grad) {
  const int n = static_cast<int>(x.rows());
  const int d = static_cast<int>(x.cols());
  const ThetaView t = unpack(log_theta);

  LmlResult res;
  Eigen::MatrixXd k;
  build_kernel(t, x, jitter * (t.sf2 + t.sn2), k);
  Eigen::LLT<Eigen::MatrixXd> llt(k);
  if (llt.info() != Eigen::Success) return res;

  res.chol = llt.matrixL();
  res.alpha = llt.solve(y);
  double logdet = 0.0;
  for (int i = 0; i < n; ++i) logdet += std::log(res.chol(i, i));
  res.lml = -0.5 * y.dot(res.alpha) - logdet -
            0.5 * n * 1.8378770664093454835606594728112;  // log(2 pi)
  res.ok = true;
  if (!want_grad) return res;

  // A = alpha alpha^T - K^{-1}
  Eigen::MatrixXd a = res.alpha * res.alpha.transpose();
  a -= llt.solve(Eigen::MatrixXd::Identity(n, n));

  res.grad.setZero(d + 2);
  const double sqrt5 = 2.2360679774997896964091736687747;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double r2 = 0.0;
      for (int dd = 0; dd < d; ++dd) {
        const double u = (x(i, dd) - x(j, dd)) / t.ell[dd];
        r2 += u * u;
      }
      const double r = std::sqrt(r2);
      const double e = std::exp(-sqrt5 * r);
      const double kf = t.sf2 * (1.0 + sqrt5 * r + 5.0 * r2 / 3.0) * e;
      const double aij = a(i, j);
      res.grad[0] += 0.5 * aij * kf;  // d/d log sf2: the kernel itself
      const double common = t.sf2 * e * (5.0 / 3.0) * (1.0 + sqrt5 * r);
      for (int dd = 0; dd < d; ++dd) {
        const double u = (x(i, dd) - x(j, dd)) / t.ell[dd];
        res.grad[1 + dd] += 0.5 * aij * common * u * u;
      }
    }
  }
  // d/d log sn2: dK = sn2 * I, so the trace contracts to tr(A)
  res.grad[d + 1] = 0.5 * t.sn2 * a.trace();
  return res;
}

// Factorizes at the chosen hyperparameters, escalating jitter by decades.
void final_factorization(Surrogate& model) {
  const ThetaView t = unpack(model.log_theta);
  for (double jitter = 1e-10; jitter <= 1.1e-4; jitter *= 10.0) {
    Eigen::MatrixXd k;
    build_kernel(t, model.x, jitter * (t.sf2 + t.sn2), k);
    Eigen::LLT<Eigen::MatrixXd> llt(k);
    if (llt.info() == Eigen::Success) {
      model.chol = llt.matrixL();
      model.alpha = llt.solve(model.y);
      model.jitter = jitter;
      double logdet = 0.0;
      for (int i = 0; i < model.n(); ++i) logdet += std::log(model.chol(i, i));
      model.lml = -0.5 * model.y.dot(model.alpha) - logdet -
                  0.5 * model.n() * 1.8378770664093454835606594728112;
      return;
    }
  }
  throw FitError("gp_fit: kernel not positive definite even at jitter 1e-4");
}

}  // namespace

Surrogate gp_fit(const Eigen::MatrixXd& x_unit, const Eigen::VectorXd& y_raw,
                 std::uint64_t seed, int n_restarts) {
  const int n = static_cast<int>(x_unit.rows());
  const int d = static_cast<int>(x_unit.cols());
  if (n < 2 || y_raw.size() != n)
    throw DomainError("gp_fit: need at least 2 observations");
  bool distinct = false;
  for (int i = 1; i < n && !distinct; ++i)
    if ((x_unit.row(i) - x_unit.row(0)).cwiseAbs().maxCoeff() > 0.0) distinct = true;
  if (!distinct) throw DomainError("gp_fit: all inputs identical");
  if (n_restarts < 1) throw DomainError("gp_fit: need at least 1 restart");

  Surrogate model;
  model.x = x_unit;
  model.y_mean = y_raw.mean();
  const double var = (y_raw.array() - model.y_mean).square().sum() / n;
  model.y_scale = std::sqrt(var);
  if (model.y_scale < 1e-12) model.y_scale = 1.0;
  model.y = (y_raw.array() - model.y_mean) / model.y_scale;

  Rng rng(derive_seed(seed, 0xf17));
  Eigen::VectorXd best_theta;
  double best_lml = -std::numeric_limits<double>::infinity();

  for (int restart = 0; restart < n_restarts; ++restart) {
    Eigen::VectorXd theta(d + 2);
    if (restart == 0) {
      theta[0] = 0.0;  // sf2 = 1
      for (int i = 0; i < d; ++i) theta[1 + i] = std::log(0.5);
      theta[d + 1] = std::log(1e-6);
    } else {
      theta[0] = rng.uniform(std::log(0.05), std::log(5.0));
      for (int i = 0; i < d; ++i) theta[1 + i] = rng.uniform(std::log(0.05), std::log(2.0));
      theta[d + 1] = rng.uniform(std::log(kNoiseFloor), std::log(1e-2));
    }
    clamp_theta(theta);

    LmlResult cur = lml_with_grad(theta, model.x, model.y, 1e-10, true);
    if (!cur.ok) continue;
    double step = 0.1;
    for (int iter = 0; iter < 120 && step >= 1e-4; ++iter) {
      const double gmax = cur.grad.cwiseAbs().maxCoeff();
      if (gmax < 1e-9) break;
      Eigen::VectorXd trial = theta + (step / gmax) * cur.grad;
      clamp_theta(trial);
      LmlResult next = lml_with_grad(trial, model.x, model.y, 1e-10, true);
      if (next.ok && next.lml > cur.lml) {
        theta = trial;
        cur = std::move(next);
        step = std::min(step * 1.3, 1.0);
      } else {
        step *= 0.5;
      }
    }
    if (cur.lml > best_lml) {
      best_lml = cur.lml;
      best_theta = theta;
    }
  }
  if (!best_theta.size())
    throw FitError("gp_fit: no restart produced a usable kernel");

  // The log-noise gradient scales with sn2 itself, so plain ascent crawls
  // toward the floor and stalls around its starting decade. Probe each decade
  // down to the floor explicitly and re-ascend briefly from the winner; this
  // is what lets noise-free data interpolate at the jitter limit.
  {
    const int noise_slot = d + 1;
    for (double sn2 = kNoiseFloor; sn2 < 1.0; sn2 *= 10.0) {
      Eigen::VectorXd probe = best_theta;
      probe[noise_slot] = std::log(sn2);
      const LmlResult res = lml_with_grad(probe, model.x, model.y, 1e-10, false);
      if (res.ok && res.lml > best_lml) {
        best_lml = res.lml;
        best_theta = probe;
      }
    }
    LmlResult cur = lml_with_grad(best_theta, model.x, model.y, 1e-10, true);
    double step = 0.1;
    for (int iter = 0; cur.ok && iter < 40 && step >= 1e-4; ++iter) {
      const double gmax = cur.grad.cwiseAbs().maxCoeff();
      if (gmax < 1e-9) break;
      Eigen::VectorXd trial = best_theta + (step / gmax) * cur.grad;
      clamp_theta(trial);
      LmlResult next = lml_with_grad(trial, model.x, model.y, 1e-10, true);
      if (next.ok && next.lml > cur.lml) {
        best_theta = trial;
        cur = std::move(next);
        step = std::min(step * 1.3, 1.0);
      } else {
        step *= 0.5;
      }
    }
  }

  model.log_theta = best_theta;
  final_factorization(model);
  return model;
}

void gp_append(Surrogate& model, const Eigen::VectorXd& x_unit, double y_raw) {
  const int n = model.n();
  const ThetaView t = unpack(model.log_theta);
  Eigen::VectorXd k_new(n);
  for (int i = 0; i < n; ++i)
    k_new[i] = kernel_value(t, model.x.row(i).transpose(), x_unit);
  const double kappa = t.sf2 + t.sn2 + model.jitter * (t.sf2 + t.sn2);

  Eigen::VectorXd l =
      model.chol.triangularView<Eigen::Lower>().solve(k_new);
  double lam2 = kappa - l.squaredNorm();

  model.x.conservativeResize(n + 1, Eigen::NoChange);
  model.x.row(n) = x_unit.transpose();
  model.y.conservativeResize(n + 1);
  model.y[n] = (y_raw - model.y_mean) / model.y_scale;

  if (lam2 <= 1e-12 * kappa) {
    // Appended point nearly duplicates the span; refactorize with more jitter
    // rather than emitting a spurious tiny pivot.
    for (double jitter = std::max(model.jitter, 1e-10) * 10.0; jitter <= 1.1e-4;
         jitter *= 10.0) {
      Eigen::MatrixXd k;
      build_kernel(t, model.x, jitter * (t.sf2 + t.sn2), k);
      Eigen::LLT<Eigen::MatrixXd> llt(k);
      if (llt.info() == Eigen::Success) {
        model.chol = llt.matrixL();
        model.alpha = llt.solve(model.y);
        model.jitter = jitter;
        return;
      }
    }
    throw FitError("gp_append: kernel not positive definite even at jitter 1e-4");
  }

  model.chol.conservativeResize(n + 1, n + 1);
  model.chol.row(n).head(n) = l.transpose();
  model.chol.col(n).head(n).setZero();
  model.chol(n, n) = std::sqrt(lam2);
  // alpha via the extended factor
  Eigen::VectorXd z = model.chol.triangularView<Eigen::Lower>().solve(model.y);
  model.alpha =
      model.chol.transpose().triangularView<Eigen::Upper>().solve(z);
}

void gp_posterior(const Surrogate& model, const Eigen::VectorXd& x_unit,
                  double& mean, double& variance) {
  const ThetaView t = unpack(model.log_theta);
  const int n = model.n();
  Eigen::VectorXd k_star(n);
  for (int i = 0; i < n; ++i)
    k_star[i] = kernel_value(t, model.x.row(i).transpose(), x_unit);
  const double mu_std = k_star.dot(model.alpha);
  const Eigen::VectorXd v =
      model.chol.triangularView<Eigen::Lower>().solve(k_star);
  double var_std = t.sf2 - v.squaredNorm();
  if (var_std < 0.0) var_std = 0.0;  // small negatives are rounding residue
  mean = model.y_mean + model.y_scale * mu_std;
  variance = model.y_scale * model.y_scale * var_std;
}

void gp_posterior_batch(const Surrogate& model, const Eigen::MatrixXd& x_unit,
                        Eigen::VectorXd& means, Eigen::VectorXd& variances) {
  const ThetaView t = unpack(model.log_theta);
  const int n = model.n();
  const int m = static_cast<int>(x_unit.rows());
  Eigen::MatrixXd k_star(n, m);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < n; ++i)
      k_star(i, j) =
          kernel_value(t, model.x.row(i).transpose(), x_unit.row(j).transpose());
  means = (model.y_mean +
           model.y_scale * (k_star.transpose() * model.alpha).array())
              .matrix();
  Eigen::MatrixXd v = model.chol.triangularView<Eigen::Lower>().solve(k_star);
  variances.resize(m);
  for (int j = 0; j < m; ++j) {
    double var_std = t.sf2 - v.col(j).squaredNorm();
    if (var_std < 0.0) var_std = 0.0;
    variances[j] = model.y_scale * model.y_scale * var_std;
  }
}

namespace {

double normal_pdf(double z) {
  return std::exp(-0.5 * z * z) * 0.3989422804014326779399460599344;
}

double normal_cdf(double z) {
  return 0.5 * std::erfc(-z * 0.7071067811865475244008443621048);
}

double ei_from_moments(double mean, double variance, double best, double xi_raw) {
  const double improve = mean - best - xi_raw;
  if (variance <= 0.0) return improve > 0.0 ? improve : 0.0;
  const double sigma = std::sqrt(variance);
  const double z = improve / sigma;
  const double ei = sigma * (z * normal_cdf(z) + normal_pdf(z));
  return ei > 0.0 ? ei : 0.0;
}

}  // namespace

double expected_improvement(const Surrogate& model, const Eigen::VectorXd& x_unit,
                            double best, double xi_std) {
  double mean = 0.0, variance = 0.0;
  gp_posterior(model, x_unit, mean, variance);
  return ei_from_moments(mean, variance, best, xi_std * model.y_scale);
}

Eigen::VectorXd propose_next(const Surrogate& model, const SearchSpace& space,
                             double best, std::uint64_t seed) {
  space.validate();
  const int d = model.dim();
  constexpr int kCandidates = 4096;
  constexpr int kStarts = 4;
  constexpr int kSweeps = 20;

  const Eigen::MatrixXd cands = halton_candidates(kCandidates, d, seed);
  Eigen::VectorXd means, variances;
  gp_posterior_batch(model, cands, means, variances);
  const double xi_raw = 0.01 * model.y_scale;
  Eigen::VectorXd ei(kCandidates);
  for (int i = 0; i < kCandidates; ++i)
    ei[i] = ei_from_moments(means[i], variances[i], best, xi_raw);

  std::vector<int> order(kCandidates);
  std::iota(order.begin(), order.end(), 0);
  std::partial_sort(order.begin(), order.begin() + kStarts, order.end(),
                    [&](int a, int b) { return ei[a] > ei[b]; });

  Eigen::VectorXd best_x = cands.row(order[0]).transpose();
  double best_ei = ei[order[0]];

  for (int s = 0; s < kStarts; ++s) {
    Eigen::VectorXd x = cands.row(order[s]).transpose();
    double cur = ei[order[s]];
    double step = 0.05;
    for (int sweep = 0; sweep < kSweeps && step >= 1e-5; ++sweep) {
      bool improved = false;
      for (int dim = 0; dim < d; ++dim) {
        for (double sign : {+1.0, -1.0}) {
          Eigen::VectorXd trial = x;
          trial[dim] = std::clamp(trial[dim] + sign * step, 0.0, 1.0);
          const double e = expected_improvement(model, trial, best);
          if (e > cur) {
            cur = e;
            x = trial;
            improved = true;
          }
        }
      }
      if (!improved) step *= 0.5;
    }
    if (cur > best_ei) {
      best_ei = cur;
      best_x = x;
    }
  }
  return space.from_unit(best_x);
}

OptimizationTrace run_bo(const Objective& objective, const SearchSpace& space,
                         std::uint64_t seed, const BoOptions& options,
                         const std::vector<TraceRow>& resume) {
  space.validate();
  if (options.budget < options.n_init)
    throw DomainError("run_bo: budget must be at least n_init");
  if (options.n_init < 2) throw DomainError("run_bo: need at least 2 init points");
  if (static_cast<int>(resume.size()) > options.budget)
    throw DomainError("run_bo: resume trace longer than the budget");
  const int d = space.dim();

  const Eigen::MatrixXd design =
      latin_hypercube(options.n_init, d, derive_seed(seed, 0));

  OptimizationTrace trace;
  trace.best_value = -std::numeric_limits<double>::infinity();

  Eigen::MatrixXd x_unit(options.budget, d);
  Eigen::VectorXd y(options.budget);
  int n_done = 0;

  Surrogate model;
  bool model_valid = false;
  int model_rows = 0;

  // Raw parameters are canonical everywhere (trace rows, resume files, the
  // objective); the unit-cube image is derived from them identically on the
  // fresh and the resumed path, so a resumed run replays bit-for-bit.
  auto record = [&](int iteration, const Eigen::VectorXd& raw, double value,
                    double wall_time_s, bool from_resume) {
    Eigen::VectorXd unit = space.to_unit(raw);
    for (int dd = 0; dd < d; ++dd) unit[dd] = std::clamp(unit[dd], 0.0, 1.0);
    x_unit.row(n_done) = unit.transpose();
    y[n_done] = value;
    ++n_done;
    TraceRow row;
    row.iteration = iteration;
    row.params = raw;
    row.value = value;
    row.wall_time_s = wall_time_s;
    row.init_phase = iteration < options.n_init;
    if (value > trace.best_value) {
      trace.best_value = value;
      trace.best_params = raw;
    }
    row.best_so_far = trace.best_value;
    trace.rows.push_back(row);
    if (options.on_row && !from_resume) options.on_row(row);
  };

  for (std::size_t i = 0; i < resume.size(); ++i) {
    const auto& row = resume[i];
    if (row.params.size() != d)
      throw DomainError("run_bo: resume row dimension mismatch");
    record(static_cast<int>(i), row.params, row.value, 0.0, true);
  }

  auto evaluate = [&](const Eigen::VectorXd& raw) {
    try {
      return objective(raw);
    } catch (const Error&) {
      return 0.0;  // failed evaluations score worst-case and the run goes on
    }
  };

  for (int i = n_done; i < options.budget; ++i) {
    Eigen::VectorXd raw;
    if (i < options.n_init) {
      raw = space.from_unit(design.row(i).transpose());
    } else {
      // The surrogate state at iteration i is a pure function of (data,
      // iteration): hyperparameters from the most recent checkpoint fit, then
      // rank-1 appends. A resumed run lands in the identical state.
      const int checkpoint =
          options.n_init +
          options.fit_every * ((i - options.n_init) / options.fit_every);
      if (!model_valid || i == checkpoint) {
        model = gp_fit(x_unit.topRows(checkpoint), y.head(checkpoint),
                       derive_seed(seed, 2, static_cast<std::uint64_t>(checkpoint)),
                       options.fit_restarts);
        model_valid = true;
        model_rows = checkpoint;
      }
      while (model_rows < i) {
        gp_append(model, x_unit.row(model_rows).transpose(), y[model_rows]);
        ++model_rows;
      }
      raw = propose_next(model, space, trace.best_value,
                         derive_seed(seed, 3, static_cast<std::uint64_t>(i)));
    }
    const auto t0 = std::chrono::steady_clock::now();
    const double value = evaluate(raw);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    record(i, raw, value, elapsed, false);
  }
  return trace;
}

}  // namespace ghz
