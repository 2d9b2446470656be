#include "nhjj/spectra.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace nhjj {

namespace {

std::string fingerprint(const Eigen::MatrixXcd& m) {
  return "dim=" + std::to_string(m.rows()) +
         " fro_norm=" + std::to_string(m.norm());
}

void group_by_imag(SpectrumResult& r, const EigenOptions& opts) {
  const auto n = r.eigenvalues.size();
  r.degeneracy_groups.clear();
  if (n == 0) return;
  double max_abs_im = 0;
  for (Eigen::Index k = 0; k < n; ++k)
    max_abs_im = std::max(max_abs_im, std::abs(r.eigenvalues[k].imag()));
  const double tol = std::max(opts.group_tol_scale * max_abs_im, opts.group_tol_floor);
  double group_head = r.eigenvalues[0].imag();
  r.degeneracy_groups.push_back({0});
  for (Eigen::Index k = 1; k < n; ++k) {
    const double im = r.eigenvalues[k].imag();
    if (group_head - im <= tol) {
      r.degeneracy_groups.back().push_back(static_cast<int>(k));
    } else {
      r.degeneracy_groups.push_back({static_cast<int>(k)});
      group_head = im;
    }
  }
}

}  // namespace

SpectrumResult eigendecompose(const Eigen::MatrixXcd& matrix, const EigenOptions& opts) {
  if (matrix.rows() != matrix.cols())
    throw std::invalid_argument("eigendecompose: matrix must be square");
  const auto n = matrix.rows();
  const bool want_right = opts.vectors || opts.left_vectors;
  const bool want_left = opts.left_vectors;

  Eigen::MatrixXcd a = matrix;  // zgeev overwrites its input
  Eigen::VectorXcd w(n);
  Eigen::MatrixXcd vr(want_right ? n : 0, want_right ? n : 0);
  Eigen::MatrixXcd vl(want_left ? n : 0, want_left ? n : 0);
  const int info = LAPACKE_zgeev(
      LAPACK_COL_MAJOR, want_left ? 'V' : 'N', want_right ? 'V' : 'N',
      static_cast<lapack_int>(n),
      reinterpret_cast<lapack_complex_double*>(a.data()), static_cast<lapack_int>(n),
      reinterpret_cast<lapack_complex_double*>(w.data()),
      reinterpret_cast<lapack_complex_double*>(want_left ? vl.data() : nullptr),
      static_cast<lapack_int>(std::max<Eigen::Index>(1, n)),
      reinterpret_cast<lapack_complex_double*>(want_right ? vr.data() : nullptr),
      static_cast<lapack_int>(std::max<Eigen::Index>(1, n)));
  if (info != 0)
    throw solver_error("eigendecompose: zgeev failed (info=" + std::to_string(info) +
                       ", " + fingerprint(matrix) + ")");

  // Stable descending sort on Im(E).
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a_, Eigen::Index b_) {
    return w[a_].imag() > w[b_].imag();
  });

  SpectrumResult r;
  r.eigenvalues.resize(n);
  if (want_right) r.right.resize(n, n);
  if (want_left) r.left.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    r.eigenvalues[k] = w[order[k]];
    if (want_right) r.right.col(k) = vr.col(order[k]);
    if (want_left) r.left.col(k) = vl.col(order[k]);
  }

  if (want_right && n > 0) {
    if (opts.check_residual) {
      const double scale = matrix.norm();
      const Eigen::MatrixXcd resid =
          matrix * r.right - r.right * r.eigenvalues.asDiagonal();
      for (Eigen::Index k = 0; k < n; ++k) {
        if (resid.col(k).norm() > 1e-8 * std::max(scale, 1.0) * r.right.col(k).norm())
          throw solver_error("eigendecompose: residual check failed for eigenpair " +
                             std::to_string(k) + " (" + fingerprint(matrix) + ")");
      }
    }
    // Near an exceptional point the eigenvector matrix becomes singular.
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(r.right);
    const double rcond = lu.rcond();
    if (!(rcond > 1.0 / opts.defective_cond)) r.defective_warning = true;
  }

  group_by_imag(r, opts);
  return r;
}

SpectrumResult eigendecompose(const ManyBodyMatrix& matrix, const EigenOptions& opts) {
  return eigendecompose(matrix.dense(), opts);
}

double default_imag_tol(const ModelParams& params) {
  return 1e-9 * params.n_particles *
         std::max({params.hopping, params.raman, std::abs(params.interaction), 1.0});
}

bool is_pt_broken(const ModelParams& params, const FockBasis& basis, double imag_tol) {
  if (imag_tol <= 0) imag_tol = default_imag_tol(params);
  const auto h = build_many_body(params, basis, /*pt_shift=*/true);
  const auto spec = eigendecompose(h);
  double max_abs_im = 0;
  for (Eigen::Index k = 0; k < spec.eigenvalues.size(); ++k)
    max_abs_im = std::max(max_abs_im, std::abs(spec.eigenvalues[k].imag()));
  return max_abs_im > imag_tol;
}

ThresholdResult breaking_threshold(ModelParams params, const FockBasis& basis,
                                   double beta_max, double tol) {
  if (beta_max <= 0 || tol <= 0)
    throw std::invalid_argument("breaking_threshold: beta_max and tol must be > 0");
  auto broken_at = [&](double beta) {
    params.loss = beta;
    return is_pt_broken(params, basis);
  };
  const double beta_min = tol;
  if (broken_at(beta_min))
    return ThresholdResult{0.0, 0.0, beta_min, true};
  if (!broken_at(beta_max))
    throw bracket_error("breaking_threshold: beta_c > beta_max = " +
                        std::to_string(beta_max));
  double lo = beta_min, hi = beta_max;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (broken_at(mid))
      hi = mid;
    else
      lo = mid;
  }
  return ThresholdResult{0.5 * (lo + hi), lo, hi, false};
}

Eigen::Matrix4cd single_particle_pt_matrix(const ModelParams& params) {
  const auto coeffs = build_coefficients(params);
  return coeffs.hermitian + coeffs.anti_hermitian +
         Complex(0, params.loss / 2) * Eigen::Matrix4cd::Identity();
}

Eigen::MatrixXd single_particle_phase_diagram(const std::vector<double>& gamma_grid,
                                              const std::vector<double>& beta_grid,
                                              double raman, double hopping) {
  if (gamma_grid.empty() || beta_grid.empty())
    throw std::invalid_argument("single_particle_phase_diagram: empty grid");
  Eigen::MatrixXd out(gamma_grid.size(), beta_grid.size());
  ModelParams p;
  p.hopping = hopping;
  p.raman = raman;
  for (std::size_t i = 0; i < gamma_grid.size(); ++i) {
    for (std::size_t j = 0; j < beta_grid.size(); ++j) {
      p.soc = gamma_grid[i];
      p.loss = beta_grid[j];
      const auto spec = eigendecompose(Eigen::MatrixXcd(single_particle_pt_matrix(p)));
      out(i, j) = spec.max_imag();
    }
  }
  return out;
}

}  // namespace nhjj
