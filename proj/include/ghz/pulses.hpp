#pragma once

#include <array>
#include <functional>

namespace ghz {

// ħ = 1 everywhere; energies and drive amplitudes are angular frequencies in
// rad/us, times in us. Couplings arrive from the lattice module in Hz and are
// converted exactly once (hz_to_rad_per_us) when the Hamiltonian is built.
inline constexpr double hz_to_rad_per_us = 2.0 * 3.141592653589793238462643383279502884 * 1e-6;

// The six optimization parameters plus the pulse duration. The knots are the
// waveform values at T/4, T/2 and 3T/4.
struct PulseParams {
  std::array<double, 3> omega_knots{};  // rad/us, must be >= 0
  std::array<double, 3> delta_knots{};  // rad/us
  double duration_us = 0.0;

  void validate() const;  // throws DomainError
};

// Continuous control waveforms on [0, T].
class PulseShape {
 public:
  PulseShape() = default;
  PulseShape(std::function<double(double)> omega, std::function<double(double)> delta,
             double duration_us)
      : omega_(std::move(omega)), delta_(std::move(delta)), duration_(duration_us) {}

  double omega(double t_us) const { return omega_(t_us); }
  double delta(double t_us) const { return delta_(t_us); }
  double duration() const { return duration_; }

 private:
  std::function<double(double)> omega_, delta_;
  double duration_ = 0.0;
};

// Rabi amplitude: piecewise-quadratic C1 spline on knots {0,T/4,T/2,3T/4,T}
// through (0, w1, w2, w3, 0), closed with zero initial slope.
// Throws DomainError for t outside [0, T].
double omega_waveform(const PulseParams& params, double t_us);

// Detuning: the unique parabola through (T/4, d1), (T/2, d2), (3T/4, d3),
// evaluated on all of [0, T].
double delta_waveform(const PulseParams& params, double t_us);

// Bundles both waveforms; validates params once.
PulseShape spline_pulse(const PulseParams& params);

// Three-stage drive of the quench analysis: jump to omega1 at t=0+, linear
// ramp to omega2 across the interior window, jump to zero at T.
struct QuenchProfile {
  double omega1 = 0.0;      // rad/us
  double omega2 = 0.0;      // rad/us
  double duration_us = 0.0;
  double ramp_start = 0.0;  // fraction of T where the ramp begins
  double ramp_end = 1.0;    // fraction of T where the ramp ends
};

// Value of the quench drive at t; exactly 0 at t = 0 and t = T.
double quench_waveform(const QuenchProfile& profile, double t_us);

// Quench parameter g = (omega1+omega2) / (2 v0), with v0 in rad/us.
double quench_g(const QuenchProfile& profile, double v0_rad_per_us);

// Quench drive with a constant detuning.
PulseShape quench_pulse(const QuenchProfile& profile, double delta_rad_per_us);

}  // namespace ghz
