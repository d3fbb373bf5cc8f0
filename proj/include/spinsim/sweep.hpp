#ifndef SPINSIM_SWEEP_HPP
#define SPINSIM_SWEEP_HPP

#include <vector>

#include <Eigen/Dense>

#include "spinsim/bdg.hpp"
#include "spinsim/lanczos.hpp"

namespace spinsim {

/// One resolved local extremum of Lambda(q): strict over a 3-sample window,
/// refined by the parabola through the extremal sample and its neighbors.
struct Resonance {
  double q_hz = 0.0;
  double lambda_hz = 0.0;
};

struct SweepResult {
  std::vector<double> q_hz;        // strictly monotone
  std::vector<double> lambda_hz;   // >= 0
  std::vector<int> unstable_count;
  std::vector<Resonance> maxima;   // ascending q
  std::vector<Resonance> minima;   // ascending q
  double lambda_max_hz = 0.0;
  double q_at_max_hz = 0.0;
  bool has_q_tilde_cr = false;
  double q_tilde_cr_hz = 0.0;
};

/// Evaluates Lambda over the q samples. Basis and coupling matrix do not
/// depend on q (q only shifts the diagonal), so one prepared pair serves the
/// whole sweep. Requires >= 16 monotone samples.
SweepResult sweep_lambda(const ModeBasis& basis, const Eigen::MatrixXd& a_hz,
                         const std::vector<double>& q_samples_hz);

std::vector<double> linspace(double lo, double hi, int count);

/// Effective critical q from the instability lobe adjacent to q = 0: a
/// least-squares fit of the circular arc Lambda^2 = 2 q_tilde q - q^2 over
/// the lobe samples (between q = 0 and the first minimum). Seeded by the
/// closed-form linear solution in Lambda^2, refined on Lambda residuals.
/// Throws DomainError when the lobe holds no unstable samples.
double fit_q_tilde_cr(const std::vector<double>& q_hz,
                      const std::vector<double>& lambda_hz);

/// Power law |q_res| ~ N^gamma for the resonance nearest q = 0, fitted by
/// least squares in log-log space.
struct ScalingFit {
  std::vector<double> atom_numbers;
  std::vector<double> q_res_hz; // magnitudes
  double gamma = 0.0;
  double gamma_stderr = 0.0;
  double log_prefactor = 0.0;
  std::vector<double> residuals; // log|q_res| - fit, per point
};

ScalingFit scaling_fit(const std::vector<double>& atom_numbers,
                       const std::vector<double>& q_res_hz);

/// Qualitative pair population after time t from n_seed seed atoms plus
/// vacuum fluctuations: 2 (n_seed + 1/2) sinh^2(2 pi Lambda t). Linear-regime
/// estimate for the dominant mode pair only; no absolute calibration.
double growth_estimate(double lambda_hz, double time_s, double n_seed);

} // namespace spinsim

#endif
