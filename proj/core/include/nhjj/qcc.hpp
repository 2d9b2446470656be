#pragma once

#include <vector>

#include "nhjj/meanfield.hpp"
#include "nhjj/qdyn.hpp"

namespace nhjj {

struct DeviationRecord {
  double time = 0;
  double eps_n = 0;  // |n_mf - s_q| / s_q with s_q = <Psi|Psi>^{1/N}
  double dz = 0;     // |z_q - z_mf|
  double di = 0;     // |i_q - i_mf|
};

/// Matched quantum / mean-field run from equivalent initial conditions: the
/// mean-field state x0 also seeds the quantum coherent state.
struct ComparisonRun {
  ModelParams params;
  Amplitudes x0;
  std::vector<double> t_grid;
  std::vector<ObservableRecord> quantum;
  std::vector<MeanFieldRecord> meanfield;
  std::vector<DeviationRecord> deviation;
};

ComparisonRun run_comparison(const ModelParams& params, const Amplitudes& x0,
                             const std::vector<double>& t_grid);

struct BreakdownThresholds {
  double oscillating_variance = 0.01;
  double settled_variance = 1e-4;
};

struct BreakdownReport {
  double quantum_variance = 0;
  double meanfield_variance = 0;
  bool quantum_oscillates = false;
  bool meanfield_oscillates = false;
  bool breakdown = false;  // one side oscillates while the other has settled
};

BreakdownReport breakdown_detector(const ComparisonRun& run, double t1, double t2,
                                   BreakdownThresholds thresholds = {});

struct SynchronizationThresholds {
  double ratio_lo = 0.9;
  double ratio_hi = 1.1;
  double min_overlap = 0.9;
};

struct SynchronizationReport {
  double amplitude_ratio = 0;   // i_up vs i_down oscillation amplitudes
  double range_overlap = 0;     // shared fraction of the visited intervals
  double antiphase_corr = 0;    // corr(i_up, -i_down)
  bool synchronized = false;
};

SynchronizationReport synchronization_metrics(const std::vector<double>& times,
                                              const std::vector<double>& i_up,
                                              const std::vector<double>& i_down,
                                              double t1, double t2,
                                              SynchronizationThresholds thresholds = {});

SynchronizationReport synchronization_metrics(const std::vector<ObservableRecord>& records,
                                              double t1, double t2,
                                              SynchronizationThresholds thresholds = {});

SynchronizationReport synchronization_metrics(const std::vector<MeanFieldRecord>& records,
                                              double t1, double t2,
                                              SynchronizationThresholds thresholds = {});

}  // namespace nhjj
