#include "nhjj/model.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace nhjj {

void ModelParams::validate() const {
  if (loss < 0) throw std::invalid_argument("ModelParams: loss beta must be >= 0");
  if (!std::isfinite(hopping) || !std::isfinite(raman) || !std::isfinite(interaction) ||
      !std::isfinite(soc) || !std::isfinite(loss))
    throw std::invalid_argument("ModelParams: parameters must be finite");
  if (n_particles < 0) throw std::invalid_argument("ModelParams: n_particles < 0");
  if (n_modes < 1) throw std::invalid_argument("ModelParams: n_modes < 1");
}

CoefficientMatrices build_coefficients(const ModelParams& params) {
  params.validate();
  if (params.n_modes != 4)
    throw std::invalid_argument("build_coefficients: the named model has 4 modes");
  const double J = params.hopping;
  const double om = params.raman;
  const Complex hop = -J * std::exp(Complex(0, -M_PI * params.soc));  // -J e^{-i pi gamma}
  const Complex hopc = std::conj(hop);

  Eigen::MatrixXcd hh = Eigen::MatrixXcd::Zero(4, 4);
  // Modes: 0 = L-up, 1 = L-down, 2 = R-up, 3 = R-down.
  hh(0, 1) = om;   hh(1, 0) = om;
  hh(2, 3) = om;   hh(3, 2) = om;
  hh(0, 2) = hop;  hh(2, 0) = hopc;
  hh(1, 3) = hopc; hh(3, 1) = hop;

  Eigen::MatrixXcd ha = Eigen::MatrixXcd::Zero(4, 4);
  ha(2, 2) = Complex(0, -params.loss);
  ha(3, 3) = Complex(0, -params.loss);

  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(4, 4);
  h.block<2, 2>(0, 0).setConstant(params.interaction / 2);
  h.block<2, 2>(2, 2).setConstant(params.interaction / 2);

  return CoefficientMatrices{std::move(hh), std::move(ha), std::move(h)};
}

CoefficientMatrices build_general_coefficients(const Eigen::MatrixXcd& hermitian,
                                               const Eigen::MatrixXcd& anti_hermitian,
                                               const Eigen::MatrixXd& interaction,
                                               double tol) {
  const auto m = hermitian.rows();
  if (hermitian.cols() != m || anti_hermitian.rows() != m ||
      anti_hermitian.cols() != m || interaction.rows() != m || interaction.cols() != m)
    throw std::invalid_argument("build_general_coefficients: matrices must be square of equal size");
  if ((hermitian - hermitian.adjoint()).cwiseAbs().maxCoeff() > tol)
    throw property_violation("coefficient validation failed: (h^h)^dag != h^h");
  if ((anti_hermitian + anti_hermitian.adjoint()).cwiseAbs().maxCoeff() > tol)
    throw property_violation("coefficient validation failed: (h^a)^dag != -h^a");
  if ((interaction - interaction.transpose()).cwiseAbs().maxCoeff() > tol)
    throw property_violation("coefficient validation failed: h^T != h");
  return CoefficientMatrices{hermitian, anti_hermitian, interaction};
}

Eigen::VectorXcd ManyBodyMatrix::apply(const Eigen::VectorXcd& v) const {
  if (static_cast<std::size_t>(v.size()) != dim_)
    throw std::invalid_argument("ManyBodyMatrix::apply: dimension mismatch");
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(dim_);
  for (const auto& t : entries_) out[t.row] += t.value * v[t.col];
  return out;
}

Eigen::MatrixXcd ManyBodyMatrix::dense() const {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim_, dim_);
  for (const auto& t : entries_) out(t.row, t.col) += t.value;
  return out;
}

void ManyBodyMatrix::dump(std::ostream& os) const {
  os << dim_ << ' ' << entries_.size() << '\n';
  char buf[128];
  for (const auto& t : entries_) {
    std::snprintf(buf, sizeof buf, "%zu %zu %.17g %.17g\n", t.row, t.col,
                  t.value.real(), t.value.imag());
    os << buf;
  }
}

ManyBodyMatrix assemble_many_body(const CoefficientMatrices& coeffs,
                                  const FockBasis& basis, Complex diagonal_shift) {
  const int m = coeffs.modes();
  if (m != basis.modes())
    throw std::invalid_argument("assemble_many_body: basis/coefficient mode mismatch");
  const int n = basis.particles();
  const Eigen::MatrixXcd hs = coeffs.single_particle();
  const double inv_n = n > 0 ? 1.0 / n : 0.0;

  std::vector<Triplet> entries;
  entries.reserve(basis.size() * (1 + 2 * m));
  std::vector<Triplet> row_buf;
  for (std::size_t r = 0; r < basis.size(); ++r) {
    const Occupation& s = basis.state(r);
    row_buf.clear();
    Complex diag = diagonal_shift;
    for (int i = 0; i < m; ++i) {
      diag += hs(i, i) * static_cast<double>(s[i]);
      for (int j = 0; j < m; ++j) {
        // Normally ordered pair string a_i^dag a_j^dag a_i a_j is diagonal.
        const double pairs = (i == j) ? static_cast<double>(s[i]) * (s[i] - 1)
                                      : static_cast<double>(s[i]) * s[j];
        diag += coeffs.interaction(i, j) * pairs * inv_n;
        if (i == j || hs(i, j) == Complex(0, 0)) continue;
        // <r| a_i^dag a_j |c> pairs row r with column c = index(s - e_i + e_j).
        if (s[i] == 0) continue;
        Occupation t = s;
        t[i] -= 1;
        t[j] += 1;
        const double coeff = std::sqrt(static_cast<double>(s[i]) * t[j]);
        row_buf.push_back({r, basis.index_of(t), hs(i, j) * coeff});
      }
    }
    if (diag != Complex(0, 0)) row_buf.push_back({r, r, diag});
    std::sort(row_buf.begin(), row_buf.end(),
              [](const Triplet& a, const Triplet& b) { return a.col < b.col; });
    entries.insert(entries.end(), row_buf.begin(), row_buf.end());
  }
  return ManyBodyMatrix(basis.size(), std::move(entries), &basis, false);
}

ManyBodyMatrix build_many_body(const ModelParams& params, const FockBasis& basis,
                               bool pt_shift) {
  if (basis.particles() != params.n_particles || basis.modes() != params.n_modes)
    throw std::invalid_argument("build_many_body: basis does not match params");
  const auto coeffs = build_coefficients(params);
  const Complex shift = pt_shift
      ? Complex(0, params.loss * params.n_particles / 2.0)
      : Complex(0, 0);
  ManyBodyMatrix out = assemble_many_body(coeffs, basis, shift);
  return ManyBodyMatrix(out.dimension(), out.entries(), &basis, pt_shift);
}

}  // namespace nhjj
