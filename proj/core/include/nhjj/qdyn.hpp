#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "nhjj/fock_basis.hpp"
#include "nhjj/model.hpp"
#include "nhjj/ode.hpp"
#include "nhjj/spectra.hpp"

namespace nhjj {

/// Many-particle state over a FockBasis. Evolution under a non-Hermitian
/// Hamiltonian is non-unitary; the amplitudes are not renormalized unless
/// the norm underflows (log_rescale then records the applied log factor).
struct QuantumState {
  Eigen::VectorXcd amplitudes;
  double time = 0.0;
  double log_rescale = 0.0;  // ln of the factor the amplitudes were divided by

  double norm2() const { return amplitudes.squaredNorm(); }
};

/// SU(M) coherent state (1/sqrt(N!)) (sum_i x_i a_i^dag)^N |0>.
/// Resulting norm^2 equals (|x|^2)^N.
QuantumState coherent_state(const Eigen::VectorXcd& x, const FockBasis& basis);

enum class PropagationMethod { Spectral, RkAdaptive };

/// Propagates psi0 through the (time-independent) Hamiltonian to every time
/// in t_grid; t_grid starts at psi0.time. Norm decay is physical and is not
/// removed.
std::vector<QuantumState> evolve_quantum(const ManyBodyMatrix& hamiltonian,
                                         const QuantumState& psi0,
                                         const std::vector<double>& t_grid,
                                         PropagationMethod method,
                                         OdeTolerances rk_tol = {1e-10, 1e-12});

/// Normalized per-particle observables. Sign conventions: modes are
/// (L-up, L-down, R-up, R-down); z = (pL_up + pL_dn) - (pR_up + pR_dn);
/// i_up = pL_up - pR_up; i_down = pL_dn - pR_dn; i_spin = i_up - i_down.
struct ObservableRecord {
  double time = 0;
  double survival = 0;  // <Psi|Psi>, after any underflow rescale
  double z = 0;
  double i_spin = 0;
  double i_up = 0;
  double i_down = 0;
  std::array<double, 4> mode_populations{};  // normalized, sum to 1
};

ObservableRecord observables(const QuantumState& psi, const FockBasis& basis);

/// Projection onto the steady-state subspace: the eigenstates in the
/// top degeneracy group of Im(E). Expansion coefficients come from the
/// biorthogonal (left) eigenbasis.
struct SteadyStateProjection {
  std::vector<int> member_indices;
  std::vector<double> times;
  std::vector<double> z_s;
  std::vector<double> i_s;
};

struct biorthogonality_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

SteadyStateProjection steady_state_projection(const SpectrumResult& spectrum,
                                              const QuantumState& psi0,
                                              const FockBasis& basis,
                                              const std::vector<double>& t_grid);

struct TimeAverageResult {
  double zbar = 0;
  bool converged = false;  // half-horizon and full-horizon averages agree
};

/// Trapezoidal average of z(t) over [burn_in, horizon], sampled every `dt`.
/// The convergence flag compares the averages over [burn_in, horizon/2] and
/// [burn_in, horizon] (2% relative, small absolute floor).
TimeAverageResult time_averaged_z(const ManyBodyMatrix& hamiltonian,
                                  const QuantumState& psi0, double horizon,
                                  double burn_in, double dt = 0.25);

/// Convenience: n+1 equally spaced times spanning [t0, t1].
std::vector<double> linspace(double t0, double t1, std::size_t n_intervals);

}  // namespace nhjj
