#include "spinsim/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "spinsim/errors.hpp"
#include "spinsim/kernels.hpp"

namespace spinsim {

namespace {

// Vertex of the parabola through three samples; falls back to the middle
// sample when the points are collinear.
Resonance refine_parabola(double q0, double l0, double q1, double l1, double q2,
                          double l2) {
  const double d01 = q1 - q0, d21 = q1 - q2;
  const double num = d01 * d01 * (l1 - l2) - d21 * d21 * (l1 - l0);
  const double den = d01 * (l1 - l2) - d21 * (l1 - l0);
  Resonance r{q1, l1};
  if (std::abs(den) > 1e-300) {
    double qv = q1 - 0.5 * num / den;
    qv = std::clamp(qv, std::min(q0, q2), std::max(q0, q2));
    // Lagrange evaluation at the vertex.
    const double w0 = (qv - q1) * (qv - q2) / ((q0 - q1) * (q0 - q2));
    const double w1 = (qv - q0) * (qv - q2) / ((q1 - q0) * (q1 - q2));
    const double w2 = (qv - q0) * (qv - q1) / ((q2 - q0) * (q2 - q1));
    r.q_hz = qv;
    r.lambda_hz = w0 * l0 + w1 * l1 + w2 * l2;
  }
  return r;
}

double lobe_sample_tol() { return kImagTol; }

} // namespace

std::vector<double> linspace(double lo, double hi, int count) {
  if (count < 1) throw ValidationError("linspace needs at least one sample");
  std::vector<double> out(static_cast<std::size_t>(count));
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  const double step = (hi - lo) / static_cast<double>(count - 1);
  for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = lo + step * i;
  out.back() = hi;
  return out;
}

SweepResult sweep_lambda(const ModeBasis& basis, const Eigen::MatrixXd& a_hz,
                         const std::vector<double>& q_samples_hz) {
  if (q_samples_hz.size() < 16)
    throw ValidationError("sweep needs at least 16 q samples");
  for (std::size_t i = 1; i < q_samples_hz.size(); ++i)
    if (!(q_samples_hz[i] > q_samples_hz[i - 1]))
      throw ValidationError("sweep q samples must be strictly increasing");

  const int nq = static_cast<int>(q_samples_hz.size());
  SweepResult out;
  out.q_hz = q_samples_hz;
  out.lambda_hz.assign(q_samples_hz.size(), 0.0);
  out.unstable_count.assign(q_samples_hz.size(), 0);

  std::string first_error;
  double first_error_q = 0.0;
  const bool par = kernels::parallel();
  (void)par;

#ifdef SPINSIM_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic) if (par)
#endif
  for (int i = 0; i < nq; ++i) {
    try {
      BdgSpectrum s = bdg_eigen_product(basis, a_hz, q_samples_hz[static_cast<std::size_t>(i)]);
      out.lambda_hz[static_cast<std::size_t>(i)] = s.lambda_hz;
      out.unstable_count[static_cast<std::size_t>(i)] = s.unstable_count;
    } catch (const std::exception& e) {
#ifdef SPINSIM_HAVE_OPENMP
#pragma omp critical(spinsim_sweep_error)
#endif
      {
        if (first_error.empty() ||
            q_samples_hz[static_cast<std::size_t>(i)] < first_error_q) {
          first_error = e.what();
          first_error_q = q_samples_hz[static_cast<std::size_t>(i)];
        }
      }
    }
  }
  if (!first_error.empty()) {
    std::ostringstream msg;
    msg << "sweep failed at q = " << first_error_q << " Hz: " << first_error;
    throw SolverError(msg.str());
  }

  // Strict three-sample extrema, refined through the local parabola.
  for (std::size_t i = 1; i + 1 < out.lambda_hz.size(); ++i) {
    const double l0 = out.lambda_hz[i - 1], l1 = out.lambda_hz[i],
                 l2 = out.lambda_hz[i + 1];
    if (l1 > l0 && l1 > l2)
      out.maxima.push_back(refine_parabola(out.q_hz[i - 1], l0, out.q_hz[i], l1,
                                           out.q_hz[i + 1], l2));
    else if (l1 < l0 && l1 < l2)
      out.minima.push_back(refine_parabola(out.q_hz[i - 1], l0, out.q_hz[i], l1,
                                           out.q_hz[i + 1], l2));
  }

  std::size_t arg = 0;
  for (std::size_t i = 1; i < out.lambda_hz.size(); ++i)
    if (out.lambda_hz[i] > out.lambda_hz[arg]) arg = i;
  out.lambda_max_hz = out.lambda_hz[arg];
  out.q_at_max_hz = out.q_hz[arg];
  for (const Resonance& r : out.maxima) {
    if (r.lambda_hz > out.lambda_max_hz) {
      out.lambda_max_hz = r.lambda_hz;
      out.q_at_max_hz = r.q_hz;
    }
  }

  try {
    out.q_tilde_cr_hz = fit_q_tilde_cr(out.q_hz, out.lambda_hz);
    out.has_q_tilde_cr = true;
  } catch (const DomainError&) {
    out.has_q_tilde_cr = false;
  }
  return out;
}

double fit_q_tilde_cr(const std::vector<double>& q_hz,
                      const std::vector<double>& lambda_hz) {
  if (q_hz.size() != lambda_hz.size() || q_hz.size() < 3)
    throw ValidationError("critical-q fit needs matching q and rate arrays");

  const double tol = lobe_sample_tol();

  // Lobe adjacent to q = 0: the contiguous unstable run containing the
  // unstable sample closest to zero.
  std::size_t seed_idx = q_hz.size();
  for (std::size_t i = 0; i < q_hz.size(); ++i) {
    if (lambda_hz[i] > tol &&
        (seed_idx == q_hz.size() || std::abs(q_hz[i]) < std::abs(q_hz[seed_idx])))
      seed_idx = i;
  }
  if (seed_idx == q_hz.size())
    throw DomainError("no unstable samples: cannot fit the critical q");

  std::size_t lo = seed_idx, hi = seed_idx;
  while (lo > 0 && lambda_hz[lo - 1] > tol) --lo;
  while (hi + 1 < q_hz.size() && lambda_hz[hi + 1] > tol) ++hi;

  std::vector<double> qs, ls;
  for (std::size_t i = lo; i <= hi; ++i) {
    if (q_hz[i] == 0.0) continue; // arc passes through the origin exactly
    qs.push_back(q_hz[i]);
    ls.push_back(lambda_hz[i]);
  }
  if (qs.empty())
    throw DomainError("instability lobe holds no usable samples");

  // Linear seed: least squares of Lambda^2 = 2 qt q - q^2 in qt.
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < qs.size(); ++i) {
    num += qs[i] * (ls[i] * ls[i] + qs[i] * qs[i]);
    den += 2.0 * qs[i] * qs[i];
  }
  if (den == 0.0) throw DomainError("degenerate lobe: cannot seed the fit");
  double qt = num / den;

  // Golden-section refinement on the rate residuals.
  auto cost = [&](double c) {
    double s = 0.0;
    for (std::size_t i = 0; i < qs.size(); ++i) {
      const double arg = 2.0 * c * qs[i] - qs[i] * qs[i];
      const double model = arg > 0.0 ? std::sqrt(arg) : 0.0;
      const double r = ls[i] - model;
      s += r * r;
    }
    return s;
  };
  const double half = std::max(std::abs(qt) * 0.75, 1e-9);
  double a = qt - half, b = qt + half;
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = cost(x1), f2 = cost(x2);
  for (int it = 0; it < 200 && (b - a) > 1e-13 * std::max(1.0, std::abs(qt)); ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = cost(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = cost(x2);
    }
  }
  return 0.5 * (a + b);
}

ScalingFit scaling_fit(const std::vector<double>& atom_numbers,
                       const std::vector<double>& q_res_hz) {
  if (atom_numbers.size() != q_res_hz.size())
    throw ValidationError("scaling fit needs one resonance per atom number");
  if (atom_numbers.size() < 2)
    throw ValidationError("scaling fit needs at least two atom numbers");
  for (double n : atom_numbers)
    if (!(n > 0.0)) throw ValidationError("atom numbers must be positive");
  for (double q : q_res_hz)
    if (!(std::abs(q) > 0.0))
      throw ValidationError("resonance positions must be nonzero");

  ScalingFit fit;
  fit.atom_numbers = atom_numbers;
  fit.q_res_hz.reserve(q_res_hz.size());
  for (double q : q_res_hz) fit.q_res_hz.push_back(std::abs(q));

  const std::size_t n = atom_numbers.size();
  std::vector<double> x(n), y(n);
  double xm = 0.0, ym = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = std::log(atom_numbers[i]);
    y[i] = std::log(fit.q_res_hz[i]);
    xm += x[i];
    ym += y[i];
  }
  xm /= static_cast<double>(n);
  ym /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - xm) * (x[i] - xm);
    sxy += (x[i] - xm) * (y[i] - ym);
  }
  if (sxx == 0.0)
    throw ValidationError("scaling fit needs at least two distinct atom numbers");
  fit.gamma = sxy / sxx;
  fit.log_prefactor = ym - fit.gamma * xm;
  fit.residuals.resize(n);
  double ssr = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    fit.residuals[i] = y[i] - (fit.log_prefactor + fit.gamma * x[i]);
    ssr += fit.residuals[i] * fit.residuals[i];
  }
  fit.gamma_stderr = n > 2 ? std::sqrt(ssr / static_cast<double>(n - 2) / sxx) : 0.0;
  return fit;
}

double growth_estimate(double lambda_hz, double time_s, double n_seed) {
  if (!(lambda_hz >= 0.0)) throw ValidationError("growth rate must be nonnegative");
  if (!(time_s >= 0.0)) throw ValidationError("growth time must be nonnegative");
  if (!(n_seed >= 0.0)) throw ValidationError("seed population must be nonnegative");
  const double s = std::sinh(2.0 * std::numbers::pi * lambda_hz * time_s);
  return 2.0 * (n_seed + 0.5) * s * s;
}

} // namespace spinsim
