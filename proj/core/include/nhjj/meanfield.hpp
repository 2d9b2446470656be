#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "nhjj/model.hpp"
#include "nhjj/ode.hpp"

namespace nhjj {

/// Coherent-state parameters x in C^4 with norm n = |x|^2. The same vector is
/// both the mean-field state and the SU(4) coherent-state parameter.
using Amplitudes = Eigen::Vector4cd;

enum class GpeForm { Ungauged, Gauged };

/// Classical Hamiltonian function of the 4-mode model, including the
/// -i*beta*(|x3|^2 + |x4|^2) loss term.
Complex classical_hamiltonian(const Amplitudes& x, const ModelParams& params);

/// General-coefficient variant: the macroscopic limit of n<H>/N,
/// sum_ij (h^h + h^a)_ij x_i^* x_j + (1/n) sum_ij h_ij |x_i|^2 |x_j|^2.
Complex classical_hamiltonian(const Eigen::VectorXcd& x, const CoefficientMatrices& coeffs);

/// Nonlinear diagonal matrix h^n(x) of the general mean-field equation.
Eigen::MatrixXcd nonlinear_matrix(const Eigen::VectorXcd& x,
                                  const CoefficientMatrices& coeffs);

/// dx/dt = -i * Htilde(x) * x. The gauged form drops the common
/// -g/2 * [(nL/n)^2 + (nR/n)^2] diagonal (a pure global phase rotation).
Amplitudes gpe_rhs(const Amplitudes& x, const ModelParams& params, GpeForm form);

/// Rate of the accumulated gauge phase theta for the gauged form.
double gauge_phase_rate(const Amplitudes& x, const ModelParams& params);

struct MeanFieldTrajectory {
  std::vector<double> times;
  std::vector<Amplitudes> states;
  std::vector<double> gauge_phase;  // theta(t); all zero for the ungauged form
};

/// Adaptive Runge-Kutta integration of the GPE; the norm n(t) is not
/// renormalized (decay is physical).
MeanFieldTrajectory evolve_meanfield(const Amplitudes& x0, const ModelParams& params,
                                     const std::vector<double>& t_grid, GpeForm form,
                                     OdeTolerances tol = {1e-10, 1e-13});

/// Right-hand side -i * d sigma / dt ... concretely: returns d(sigma)/dt of
/// the two-point-function evolution for arbitrary mode count.
Eigen::MatrixXcd sigma_rhs(const Eigen::MatrixXcd& sigma,
                           const CoefficientMatrices& coeffs);

/// Extra generalized force Q^(e)_i = -2i dH_a/dx_i from the anti-Hermitian part.
Amplitudes generalized_force(const Amplitudes& x, const ModelParams& params);

struct MeanFieldRecord {
  double time = 0;
  double n = 0;  // |x|^2
  double z = 0;
  double i_spin = 0;
  double i_up = 0;
  double i_down = 0;
  std::array<double, 4> populations{};  // |x_i|^2 / n
};

MeanFieldRecord meanfield_observables(double time, const Amplitudes& x);

}  // namespace nhjj
