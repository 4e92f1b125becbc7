#include "ghz/pulses.hpp"

#include <string>

#include "ghz/errors.hpp"

namespace ghz {

void PulseParams::validate() const {
  if (!(duration_us > 0.0)) throw DomainError("pulse: duration must be positive");
  for (double w : omega_knots)
    if (w < 0.0) throw DomainError("pulse: Rabi knots must be non-negative");
}

namespace {

void check_domain(double t, double T, const char* what) {
  if (t < 0.0 || t > T)
    throw DomainError(std::string(what) + ": t outside [0, T], t=" + std::to_string(t));
}

}  // namespace

double omega_waveform(const PulseParams& params, double t_us) {
  params.validate();
  const double T = params.duration_us;
  check_domain(t_us, T, "omega_waveform");
  const double h = T / 4.0;
  const double y[5] = {0.0, params.omega_knots[0], params.omega_knots[1],
                       params.omega_knots[2], 0.0};
  // One quadratic per knot interval; the left slope of each piece follows from
  // C1 continuity, starting from slope 0 at t = 0.
  double s = 0.0;
  int seg = static_cast<int>(t_us / h);
  if (seg > 3) seg = 3;
  for (int j = 0; j < seg; ++j) s = 2.0 * (y[j + 1] - y[j]) / h - s;
  const double u = t_us - seg * h;
  const double c = (y[seg + 1] - y[seg] - s * h) / (h * h);
  return y[seg] + s * u + c * u * u;
}

double delta_waveform(const PulseParams& params, double t_us) {
  params.validate();
  const double T = params.duration_us;
  check_domain(t_us, T, "delta_waveform");
  const double t1 = T / 4.0, t2 = T / 2.0, t3 = 3.0 * T / 4.0;
  const double d1 = params.delta_knots[0], d2 = params.delta_knots[1],
               d3 = params.delta_knots[2];
  // Lagrange form of the interpolating parabola.
  const double l1 = (t_us - t2) * (t_us - t3) / ((t1 - t2) * (t1 - t3));
  const double l2 = (t_us - t1) * (t_us - t3) / ((t2 - t1) * (t2 - t3));
  const double l3 = (t_us - t1) * (t_us - t2) / ((t3 - t1) * (t3 - t2));
  return d1 * l1 + d2 * l2 + d3 * l3;
}

PulseShape spline_pulse(const PulseParams& params) {
  params.validate();
  return PulseShape([params](double t) { return omega_waveform(params, t); },
                    [params](double t) { return delta_waveform(params, t); },
                    params.duration_us);
}

double quench_waveform(const QuenchProfile& profile, double t_us) {
  const double T = profile.duration_us;
  check_domain(t_us, T, "quench_waveform");
  if (t_us == 0.0 || t_us == T) return 0.0;
  const double ta = profile.ramp_start * T;
  const double tb = profile.ramp_end * T;
  if (t_us <= ta) return profile.omega1;
  if (t_us >= tb) return profile.omega2;
  const double f = (t_us - ta) / (tb - ta);
  return profile.omega1 + (profile.omega2 - profile.omega1) * f;
}

double quench_g(const QuenchProfile& profile, double v0_rad_per_us) {
  return (profile.omega1 + profile.omega2) / (2.0 * v0_rad_per_us);
}

PulseShape quench_pulse(const QuenchProfile& profile, double delta_rad_per_us) {
  return PulseShape([profile](double t) { return quench_waveform(profile, t); },
                    [delta_rad_per_us](double) { return delta_rad_per_us; },
                    profile.duration_us);
}

}  // namespace ghz
