#pragma once

#include <Eigen/Dense>
#include <complex>
#include <iosfwd>
#include <stdexcept>
#include <vector>

#include "nhjj/fock_basis.hpp"

namespace nhjj {

using Complex = std::complex<double>;

/// Physical parameters in dimensionless units, J = 1 convention.
/// `interaction` is the total strength g; the per-pair scale g/N is applied
/// internally at assembly time.
struct ModelParams {
  double hopping = 1.0;      // J
  double raman = 1.0;        // Omega
  double soc = 0.0;          // gamma, enters through e^{+-i pi gamma}
  double interaction = 0.0;  // g
  double loss = 0.0;         // beta >= 0
  int n_particles = 1;       // N
  int n_modes = 4;           // M (the named model is fixed at 4)

  void validate() const;
};

/// The triple (h^h, h^a, h) defining the extended model: Hermitian and
/// anti-Hermitian single-particle coefficient matrices plus the real
/// symmetric interaction matrix.
struct CoefficientMatrices {
  Eigen::MatrixXcd hermitian;       // h^h, (h^h)^dag = h^h
  Eigen::MatrixXcd anti_hermitian;  // h^a, (h^a)^dag = -h^a
  Eigen::MatrixXd interaction;      // h, h^T = h

  int modes() const { return static_cast<int>(hermitian.rows()); }
  Eigen::MatrixXcd single_particle() const { return hermitian + anti_hermitian; }
};

struct property_violation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Explicit coefficient matrices of the 4-mode spin-orbit coupled junction.
/// Throws std::invalid_argument unless params.n_modes == 4.
CoefficientMatrices build_coefficients(const ModelParams& params);

/// Wraps arbitrary square matrices of equal size after validating the
/// structural properties ((h^h)^dag = h^h, (h^a)^dag = -h^a, h symmetric) to
/// `tol`. Throws property_violation naming the failed identity.
CoefficientMatrices build_general_coefficients(const Eigen::MatrixXcd& hermitian,
                                               const Eigen::MatrixXcd& anti_hermitian,
                                               const Eigen::MatrixXd& interaction,
                                               double tol = 1e-12);

struct Triplet {
  std::size_t row;
  std::size_t col;
  Complex value;
};

/// Sparse many-body Hamiltonian over a FockBasis, stored as deterministic
/// row-major triplets.
class ManyBodyMatrix {
 public:
  ManyBodyMatrix(std::size_t dim, std::vector<Triplet> entries,
                 const FockBasis* basis, bool pt_shifted)
      : dim_(dim), entries_(std::move(entries)), basis_(basis),
        pt_shifted_(pt_shifted) {}

  std::size_t dimension() const { return dim_; }
  const std::vector<Triplet>& entries() const { return entries_; }
  const FockBasis& basis() const { return *basis_; }
  bool pt_shifted() const { return pt_shifted_; }

  Eigen::VectorXcd apply(const Eigen::VectorXcd& v) const;
  Eigen::MatrixXcd dense() const;

  /// Coordinate-format text dump: one-line header "D nnz", then
  /// (row, col, re, im) per entry.
  void dump(std::ostream& os) const;

 private:
  std::size_t dim_;
  std::vector<Triplet> entries_;
  const FockBasis* basis_;
  bool pt_shifted_;
};

/// Assembles sum_{ij} (h^h + h^a)_{ij} a_i^dag a_j
///           + (1/N) sum_{ij} h_{ij} a_i^dag a_j^dag a_i a_j
///           + diagonal_shift
/// over the basis. The interaction string is diagonal in the Fock basis.
ManyBodyMatrix assemble_many_body(const CoefficientMatrices& coeffs,
                                  const FockBasis& basis,
                                  Complex diagonal_shift = Complex(0, 0));

/// Many-body matrix of the 4-mode model; with pt_shift the balanced
/// gain/loss variant is produced by adding i*beta*N/2 to the diagonal
/// (the number operator is N times the identity on the fixed-N sector).
ManyBodyMatrix build_many_body(const ModelParams& params, const FockBasis& basis,
                               bool pt_shift = false);

}  // namespace nhjj
