#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

#include "nhjj/model.hpp"

namespace nhjj {

struct solver_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EigenOptions {
  bool vectors = false;
  bool left_vectors = false;     // implies vectors
  bool check_residual = true;    // only meaningful with vectors
  double group_tol_scale = 1e-8;
  double group_tol_floor = 1e-12;
  double defective_cond = 1e8;
};

/// Complex spectrum sorted stably in descending order of the imaginary part.
struct SpectrumResult {
  Eigen::VectorXcd eigenvalues;
  Eigen::MatrixXcd right;  // columns, unit norm; empty unless requested
  Eigen::MatrixXcd left;   // matched columns: left.col(k)^H * A = E_k * left.col(k)^H
  std::vector<std::vector<int>> degeneracy_groups;  // grouped by Im within tolerance
  bool defective_warning = false;  // eigenvector condition number > defective_cond

  double max_imag() const { return eigenvalues.size() ? eigenvalues[0].imag() : 0.0; }
};

SpectrumResult eigendecompose(const Eigen::MatrixXcd& matrix, const EigenOptions& opts = {});
SpectrumResult eigendecompose(const ManyBodyMatrix& matrix, const EigenOptions& opts = {});

/// Default imaginary-part tolerance for PT-breaking detection.
double default_imag_tol(const ModelParams& params);

/// True iff the PT-shifted Hamiltonian has an eigenvalue with |Im E| above
/// `imag_tol` (pass 0 for the default tolerance).
bool is_pt_broken(const ModelParams& params, const FockBasis& basis, double imag_tol = 0);

struct ThresholdResult {
  double beta_c = 0;
  double bracket_lo = 0;
  double bracket_hi = 0;
  bool broken_at_min = false;  // spectrum already complex at the smallest probed beta
};

struct bracket_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Bisection for the PT-breaking threshold over beta in [tol, beta_max].
/// `params.loss` is ignored. Throws bracket_error when still unbroken at
/// beta_max ("beta_c > beta_max").
ThresholdResult breaking_threshold(ModelParams params, const FockBasis& basis,
                                   double beta_max, double tol);

/// 4x4 PT-symmetric single-particle matrix h^h + h^a + i*beta/2.
Eigen::Matrix4cd single_particle_pt_matrix(const ModelParams& params);

/// max Im(eps) of the single-particle PT matrix on a (gamma, beta) grid;
/// result(i, j) corresponds to (gamma_grid[i], beta_grid[j]).
Eigen::MatrixXd single_particle_phase_diagram(const std::vector<double>& gamma_grid,
                                              const std::vector<double>& beta_grid,
                                              double raman, double hopping);

}  // namespace nhjj
