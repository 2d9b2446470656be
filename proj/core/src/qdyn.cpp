#include "nhjj/qdyn.hpp"

#include <cmath>
#include <iostream>

namespace nhjj {

std::vector<double> linspace(double t0, double t1, std::size_t n_intervals) {
  std::vector<double> out(n_intervals + 1);
  for (std::size_t k = 0; k <= n_intervals; ++k)
    out[k] = t0 + (t1 - t0) * static_cast<double>(k) / n_intervals;
  out.back() = t1;
  return out;
}

QuantumState coherent_state(const Eigen::VectorXcd& x, const FockBasis& basis) {
  if (x.size() != basis.modes())
    throw std::invalid_argument("coherent_state: amplitude count != modes");
  if (x.squaredNorm() <= 0)
    throw std::invalid_argument("coherent_state: |x|^2 must be positive");
  const int n = basis.particles();
  const double lg_n = std::lgamma(n + 1.0);
  QuantumState psi;
  psi.amplitudes.resize(basis.size());
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const Occupation& s = basis.state(k);
    double lg = lg_n;
    Complex prod(1, 0);
    for (int m = 0; m < basis.modes(); ++m) {
      lg -= std::lgamma(s[m] + 1.0);
      for (int p = 0; p < s[m]; ++p) prod *= x[m];
    }
    psi.amplitudes[k] = std::exp(0.5 * lg) * prod;
  }
  return psi;
}

namespace {

// Spectral propagation with an underflow guard: when the overall decay factor
// would push norm^2 below 1e-300, the common exponential is pulled out and
// logged into QuantumState::log_rescale.
std::vector<QuantumState> evolve_spectral(const ManyBodyMatrix& h,
                                          const QuantumState& psi0,
                                          const std::vector<double>& t_grid) {
  EigenOptions opts;
  opts.vectors = true;
  const SpectrumResult spec = eigendecompose(h, opts);
  if (spec.defective_warning)
    throw solver_error(
        "evolve_quantum: matrix flagged defective (eigenvector condition number "
        "too high, possible exceptional point); use the rk_adaptive method");
  const Eigen::VectorXcd coeff =
      Eigen::PartialPivLU<Eigen::MatrixXcd>(spec.right).solve(psi0.amplitudes);
  const double im_max = spec.max_imag();

  std::vector<QuantumState> out;
  out.reserve(t_grid.size());
  bool warned = false;
  for (double t : t_grid) {
    const double dt = t - psi0.time;
    double shift = 0.0;  // ln of the factor divided out
    if (2 * im_max * dt < -690.0) {
      shift = im_max * dt;
      if (!warned) {
        std::cerr << "nhjj: survival underflow at t = " << t
                  << ", rescaling state (log factor " << shift << ")\n";
        warned = true;
      }
    }
    Eigen::VectorXcd phases(spec.eigenvalues.size());
    for (Eigen::Index k = 0; k < spec.eigenvalues.size(); ++k)
      phases[k] = std::exp(Complex(0, -1) * spec.eigenvalues[k] * dt - shift);
    QuantumState state;
    state.time = t;
    state.log_rescale = psi0.log_rescale + shift;
    state.amplitudes = spec.right * phases.cwiseProduct(coeff).matrix();
    out.push_back(std::move(state));
  }
  return out;
}

std::vector<QuantumState> evolve_rk(const ManyBodyMatrix& h, const QuantumState& psi0,
                                    const std::vector<double>& t_grid,
                                    OdeTolerances tol) {
  auto rhs = [&](double, const Eigen::VectorXcd& y) {
    return Eigen::VectorXcd(Complex(0, -1) * h.apply(y));
  };
  const auto states = integrate_to_grid(rhs, psi0.amplitudes, t_grid, tol);
  std::vector<QuantumState> out;
  out.reserve(states.size());
  for (std::size_t k = 0; k < states.size(); ++k)
    out.push_back(QuantumState{states[k], t_grid[k], psi0.log_rescale});
  return out;
}

}  // namespace

std::vector<QuantumState> evolve_quantum(const ManyBodyMatrix& hamiltonian,
                                         const QuantumState& psi0,
                                         const std::vector<double>& t_grid,
                                         PropagationMethod method,
                                         OdeTolerances rk_tol) {
  if (t_grid.empty()) return {};
  if (std::abs(t_grid.front() - psi0.time) > 1e-12)
    throw std::invalid_argument("evolve_quantum: t_grid must start at psi0.time");
  if (static_cast<std::size_t>(psi0.amplitudes.size()) != hamiltonian.dimension())
    throw std::invalid_argument("evolve_quantum: state/matrix dimension mismatch");
  return method == PropagationMethod::Spectral
             ? evolve_spectral(hamiltonian, psi0, t_grid)
             : evolve_rk(hamiltonian, psi0, t_grid, rk_tol);
}

ObservableRecord observables(const QuantumState& psi, const FockBasis& basis) {
  const double norm2 = psi.norm2();
  if (!(norm2 > 0)) throw std::invalid_argument("observables: degenerate norm");
  const int n = basis.particles();
  std::array<double, 4> pop{};
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const double w = std::norm(psi.amplitudes[k]);
    const Occupation& s = basis.state(k);
    for (int m = 0; m < 4; ++m) pop[m] += w * s[m];
  }
  for (auto& p : pop) p /= norm2 * n;

  ObservableRecord rec;
  rec.time = psi.time;
  rec.survival = norm2;
  rec.mode_populations = pop;
  rec.z = pop[0] + pop[1] - pop[2] - pop[3];
  rec.i_up = pop[0] - pop[2];
  rec.i_down = pop[1] - pop[3];
  rec.i_spin = rec.i_up - rec.i_down;
  return rec;
}

SteadyStateProjection steady_state_projection(const SpectrumResult& spectrum,
                                              const QuantumState& psi0,
                                              const FockBasis& basis,
                                              const std::vector<double>& t_grid) {
  if (spectrum.right.size() == 0 || spectrum.left.size() == 0)
    throw std::invalid_argument(
        "steady_state_projection: spectrum must carry left and right eigenvectors");
  if (spectrum.degeneracy_groups.empty())
    throw std::invalid_argument("steady_state_projection: empty spectrum");

  const auto n = spectrum.eigenvalues.size();
  Eigen::VectorXcd coeff(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Complex denom = spectrum.left.col(k).dot(spectrum.right.col(k));
    if (std::abs(denom) < 1e-12)
      throw biorthogonality_error(
          "steady_state_projection: vanishing left/right pairing for eigenstate " +
          std::to_string(k));
    coeff[k] = spectrum.left.col(k).dot(psi0.amplitudes) / denom;
  }
  // Expansion must reconstruct the initial state.
  const double resid =
      (spectrum.right * coeff - psi0.amplitudes).norm() / psi0.amplitudes.norm();
  if (resid > 1e-6)
    throw biorthogonality_error(
        "steady_state_projection: biorthogonal expansion residual " +
        std::to_string(resid));

  SteadyStateProjection out;
  out.member_indices = spectrum.degeneracy_groups.front();
  out.times = t_grid;
  out.z_s.reserve(t_grid.size());
  out.i_s.reserve(t_grid.size());
  for (double t : t_grid) {
    QuantumState surv;
    surv.time = t;
    surv.amplitudes = Eigen::VectorXcd::Zero(n);
    for (int k : out.member_indices) {
      const Complex ph = std::exp(Complex(0, -1) * spectrum.eigenvalues[k] * t);
      surv.amplitudes += ph * coeff[k] * spectrum.right.col(k);
    }
    const auto rec = observables(surv, basis);
    out.z_s.push_back(rec.z);
    out.i_s.push_back(rec.i_spin);
  }
  return out;
}

TimeAverageResult time_averaged_z(const ManyBodyMatrix& hamiltonian,
                                  const QuantumState& psi0, double horizon,
                                  double burn_in, double dt) {
  if (!(horizon > burn_in) || burn_in < 0)
    throw std::invalid_argument("time_averaged_z: need horizon > burn_in >= 0");
  const auto n_steps = static_cast<std::size_t>(std::ceil(horizon / dt));
  const auto t_grid = linspace(psi0.time, psi0.time + horizon, n_steps);
  const auto states = evolve_quantum(hamiltonian, psi0, t_grid,
                                     PropagationMethod::Spectral);
  std::vector<double> z(states.size());
  for (std::size_t k = 0; k < states.size(); ++k)
    z[k] = observables(states[k], hamiltonian.basis()).z;

  auto window_average = [&](double t1) {
    double acc = 0, span = 0;
    for (std::size_t k = 1; k < t_grid.size(); ++k) {
      if (t_grid[k - 1] < burn_in || t_grid[k] > t1 + 1e-12) continue;
      const double h = t_grid[k] - t_grid[k - 1];
      acc += 0.5 * (z[k] + z[k - 1]) * h;
      span += h;
    }
    return span > 0 ? acc / span : 0.0;
  };
  const double full = window_average(psi0.time + horizon);
  const double half = window_average(psi0.time + burn_in + (horizon - burn_in) / 2);
  TimeAverageResult out;
  out.zbar = full;
  out.converged = std::abs(full - half) <=
                  std::max(0.02 * std::max(std::abs(full), std::abs(half)), 1e-3);
  return out;
}

}  // namespace nhjj
