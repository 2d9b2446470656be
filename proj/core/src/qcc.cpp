#include "nhjj/qcc.hpp"

#include <algorithm>
#include <cmath>

namespace nhjj {

namespace {

double windowed_variance(const std::vector<double>& times,
                         const std::vector<double>& values, double t1, double t2) {
  double sum = 0, sum2 = 0;
  std::size_t count = 0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (times[k] < t1 || times[k] > t2) continue;
    sum += values[k];
    sum2 += values[k] * values[k];
    ++count;
  }
  if (count < 2) throw std::invalid_argument("windowed_variance: window holds < 2 samples");
  const double mean = sum / count;
  return std::max(0.0, sum2 / count - mean * mean);
}

}  // namespace

ComparisonRun run_comparison(const ModelParams& params, const Amplitudes& x0,
                             const std::vector<double>& t_grid) {
  if (std::abs(x0.squaredNorm() - 1.0) > 1e-9)
    throw std::invalid_argument("run_comparison: initial coherent state must have unit norm");

  ComparisonRun run;
  run.params = params;
  run.x0 = x0;
  run.t_grid = t_grid;

  const FockBasis basis(params.n_particles, params.n_modes);
  const auto hamiltonian = build_many_body(params, basis);
  const auto psi0 = coherent_state(x0, basis);
  const auto qstates = evolve_quantum(hamiltonian, psi0, t_grid,
                                      PropagationMethod::Spectral);
  run.quantum.reserve(qstates.size());
  for (const auto& s : qstates) run.quantum.push_back(observables(s, basis));

  const auto traj = evolve_meanfield(x0, params, t_grid, GpeForm::Gauged);
  run.meanfield.reserve(traj.states.size());
  for (std::size_t k = 0; k < traj.states.size(); ++k)
    run.meanfield.push_back(meanfield_observables(traj.times[k], traj.states[k]));

  run.deviation.reserve(t_grid.size());
  const double inv_n = 1.0 / params.n_particles;
  for (std::size_t k = 0; k < t_grid.size(); ++k) {
    DeviationRecord d;
    d.time = t_grid[k];
    // Coherent-state norm is n^N; <Psi|Psi>^{1/N} is the commensurate scale.
    const double s_q = std::pow(run.quantum[k].survival, inv_n);
    d.eps_n = std::abs(run.meanfield[k].n - s_q) / s_q;
    d.dz = std::abs(run.quantum[k].z - run.meanfield[k].z);
    d.di = std::abs(run.quantum[k].i_spin - run.meanfield[k].i_spin);
    run.deviation.push_back(d);
  }
  return run;
}

BreakdownReport breakdown_detector(const ComparisonRun& run, double t1, double t2,
                                   BreakdownThresholds thresholds) {
  if (!(t2 > t1)) throw std::invalid_argument("breakdown_detector: need t2 > t1");
  std::vector<double> zq(run.quantum.size()), zm(run.meanfield.size());
  for (std::size_t k = 0; k < run.quantum.size(); ++k) zq[k] = run.quantum[k].z;
  for (std::size_t k = 0; k < run.meanfield.size(); ++k) zm[k] = run.meanfield[k].z;

  BreakdownReport rep;
  rep.quantum_variance = windowed_variance(run.t_grid, zq, t1, t2);
  rep.meanfield_variance = windowed_variance(run.t_grid, zm, t1, t2);
  rep.quantum_oscillates = rep.quantum_variance > thresholds.oscillating_variance;
  rep.meanfield_oscillates = rep.meanfield_variance > thresholds.oscillating_variance;
  const bool q_settled = rep.quantum_variance < thresholds.settled_variance;
  const bool m_settled = rep.meanfield_variance < thresholds.settled_variance;
  rep.breakdown = (rep.quantum_oscillates && m_settled) ||
                  (rep.meanfield_oscillates && q_settled);
  return rep;
}

SynchronizationReport synchronization_metrics(const std::vector<double>& times,
                                              const std::vector<double>& i_up,
                                              const std::vector<double>& i_down,
                                              double t1, double t2,
                                              SynchronizationThresholds thresholds) {
  double up_lo = 1e300, up_hi = -1e300, dn_lo = 1e300, dn_hi = -1e300;
  double su = 0, sd = 0;
  std::size_t count = 0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (times[k] < t1 || times[k] > t2) continue;
    up_lo = std::min(up_lo, i_up[k]);
    up_hi = std::max(up_hi, i_up[k]);
    dn_lo = std::min(dn_lo, i_down[k]);
    dn_hi = std::max(dn_hi, i_down[k]);
    su += i_up[k];
    sd += i_down[k];
    ++count;
  }
  if (count < 2)
    throw std::invalid_argument("synchronization_metrics: window holds < 2 samples");

  SynchronizationReport rep;
  const double amp_up = (up_hi - up_lo) / 2, amp_dn = (dn_hi - dn_lo) / 2;
  rep.amplitude_ratio = amp_dn > 0 ? amp_up / amp_dn
                                   : (amp_up > 0 ? 1e300 : 1.0);
  const double shared = std::min(up_hi, dn_hi) - std::max(up_lo, dn_lo);
  const double widest = std::max({up_hi - up_lo, dn_hi - dn_lo, 1e-300});
  rep.range_overlap = std::max(0.0, shared) / widest;

  const double mu = su / count, md = sd / count;
  double num = 0, den_u = 0, den_d = 0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (times[k] < t1 || times[k] > t2) continue;
    const double cu = i_up[k] - mu;
    const double cd = -(i_down[k] - md);
    num += cu * cd;
    den_u += cu * cu;
    den_d += cd * cd;
  }
  rep.antiphase_corr = num / std::max(std::sqrt(den_u * den_d), 1e-300);

  rep.synchronized = rep.amplitude_ratio >= thresholds.ratio_lo &&
                     rep.amplitude_ratio <= thresholds.ratio_hi &&
                     rep.range_overlap >= thresholds.min_overlap;
  return rep;
}

SynchronizationReport synchronization_metrics(const std::vector<ObservableRecord>& records,
                                              double t1, double t2,
                                              SynchronizationThresholds thresholds) {
  std::vector<double> t(records.size()), up(records.size()), dn(records.size());
  for (std::size_t k = 0; k < records.size(); ++k) {
    t[k] = records[k].time;
    up[k] = records[k].i_up;
    dn[k] = records[k].i_down;
  }
  return synchronization_metrics(t, up, dn, t1, t2, thresholds);
}

SynchronizationReport synchronization_metrics(const std::vector<MeanFieldRecord>& records,
                                              double t1, double t2,
                                              SynchronizationThresholds thresholds) {
  std::vector<double> t(records.size()), up(records.size()), dn(records.size());
  for (std::size_t k = 0; k < records.size(); ++k) {
    t[k] = records[k].time;
    up[k] = records[k].i_up;
    dn[k] = records[k].i_down;
  }
  return synchronization_metrics(t, up, dn, t1, t2, thresholds);
}

}  // namespace nhjj
