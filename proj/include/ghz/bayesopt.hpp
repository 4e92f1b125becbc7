#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

namespace ghz {

// Box bounds for the six pulse parameters (three drive knots, three detuning
// knots), all in rad/us.
struct SearchSpace {
  Eigen::VectorXd lower, upper;

  int dim() const { return static_cast<int>(lower.size()); }
  void validate() const;  // throws DomainError
  Eigen::VectorXd to_unit(const Eigen::VectorXd& raw) const;
  Eigen::VectorXd from_unit(const Eigen::VectorXd& unit) const;
};

// Default bounds: drive knots in [0, 2 v0], detuning knots within 1.5x the
// all-down/all-up crossing detuning on either side.
SearchSpace pulse_search_space(double v0_rad_per_us, double delta_star_rad_per_us);

// n rows in the d-cube, one point per axis stratum (Latin hypercube).
Eigen::MatrixXd latin_hypercube(int n, int d, std::uint64_t seed);

// Latin hypercube design mapped to the raw bounds.
Eigen::MatrixXd init_design(const SearchSpace& space, int n, std::uint64_t seed);

// Halton sequence (first d prime bases) with a seeded Cranley-Patterson
// rotation; rows in the unit cube.
Eigen::MatrixXd halton_candidates(int n, int d, std::uint64_t seed);

// Gaussian process with a Matern-5/2 ARD kernel on unit-cube inputs and
// standardized observations. Hyperparameters are held as logs:
// [log signal variance, log length scale per dimension, log noise variance].
struct Surrogate {
  Eigen::MatrixXd x;         // n x d, unit cube
  Eigen::VectorXd y;         // standardized observations
  double y_mean = 0.0;       // raw-unit standardization
  double y_scale = 1.0;
  Eigen::VectorXd log_theta;
  Eigen::MatrixXd chol;      // lower-triangular factor of K
  Eigen::VectorXd alpha;     // K^{-1} y
  double jitter = 0.0;
  double lml = 0.0;          // log marginal likelihood at the fit

  int n() const { return static_cast<int>(x.rows()); }
  int dim() const { return static_cast<int>(x.cols()); }
};

// Maximizes the log marginal likelihood by multistart projected gradient
// ascent. Throws DomainError for fewer than 2 distinct points, FitError if
// the kernel cannot be factorized even at the maximum jitter.
Surrogate gp_fit(const Eigen::MatrixXd& x_unit, const Eigen::VectorXd& y_raw,
                 std::uint64_t seed, int n_restarts = 8);

// Adds one observation, keeping hyperparameters and standardization fixed;
// the Cholesky factor is extended in O(n^2).
void gp_append(Surrogate& model, const Eigen::VectorXd& x_unit, double y_raw);

// Predictive mean and (latent, noise-free) variance in raw units.
void gp_posterior(const Surrogate& model, const Eigen::VectorXd& x_unit,
                  double& mean, double& variance);
void gp_posterior_batch(const Surrogate& model, const Eigen::MatrixXd& x_unit,
                        Eigen::VectorXd& means, Eigen::VectorXd& variances);

// Closed-form expected improvement over `best` (maximization), with an
// exploration offset xi expressed in standardized units.
double expected_improvement(const Surrogate& model, const Eigen::VectorXd& x_unit,
                            double best, double xi_std = 0.01);

// EI argmax over 4096 quasi-random candidates plus coordinate refinement
// from the best 4; deterministic in seed; returns a raw parameter vector.
Eigen::VectorXd propose_next(const Surrogate& model, const SearchSpace& space,
                             double best, std::uint64_t seed);

struct TraceRow {
  int iteration = 0;
  Eigen::VectorXd params;  // raw units
  double value = 0.0;
  double best_so_far = 0.0;
  bool init_phase = false;
  // Measured evaluation time. Diagnostic only: persisted artifacts omit it so
  // that identical (config, seed) runs stay byte-identical.
  double wall_time_s = 0.0;
};

struct OptimizationTrace {
  std::vector<TraceRow> rows;
  Eigen::VectorXd best_params;
  double best_value = 0.0;
};

struct BoOptions {
  int budget = 300;
  int n_init = 24;
  // The surrogate is refit (with fit_restarts restarts) every fit_every
  // evaluations; in between, new data enters through gp_append at fixed
  // hyperparameters. Checkpoints are a pure function of the iteration index,
  // which is what makes interrupted runs resumable bit-for-bit.
  int fit_every = 5;
  int fit_restarts = 3;
  std::function<void(const TraceRow&)> on_row;  // incremental persistence hook
};

using Objective = std::function<double(const Eigen::VectorXd&)>;

// Evaluates the init design, then iterates fit/propose/evaluate to the
// budget. Objective failures (exceptions) score 0 and the run continues.
// `resume` replays already-evaluated rows instead of calling the objective.
OptimizationTrace run_bo(const Objective& objective, const SearchSpace& space,
                         std::uint64_t seed, const BoOptions& options = {},
                         const std::vector<TraceRow>& resume = {});

}  // namespace ghz
