#include "nhjj/meanfield.hpp"

#include <cmath>

namespace nhjj {

namespace {

double left_density(const Amplitudes& x) {
  return std::norm(x[0]) + std::norm(x[1]);
}
double right_density(const Amplitudes& x) {
  return std::norm(x[2]) + std::norm(x[3]);
}

}  // namespace

Complex classical_hamiltonian(const Amplitudes& x, const ModelParams& params) {
  const double n = x.squaredNorm();
  if (!(n > 0)) throw std::invalid_argument("classical_hamiltonian: n must be > 0");
  const double J = params.hopping, om = params.raman, g = params.interaction;
  const Complex e = std::exp(Complex(0, -M_PI * params.soc));  // e^{-i pi gamma}
  const Complex hop = e * std::conj(x[0]) * x[2] + std::conj(e) * std::conj(x[1]) * x[3];
  const Complex raman = std::conj(x[0]) * x[1] + std::conj(x[2]) * x[3];
  double quartic = 0;
  for (int i = 0; i < 4; ++i) quartic += std::norm(x[i]) * std::norm(x[i]);
  const double cross = std::norm(x[0]) * std::norm(x[1]) + std::norm(x[2]) * std::norm(x[3]);
  return -J * (hop + std::conj(hop)) + om * (raman + std::conj(raman)) +
         g / (2 * n) * quartic + g / n * cross -
         Complex(0, params.loss) * right_density(x);
}

Complex classical_hamiltonian(const Eigen::VectorXcd& x, const CoefficientMatrices& coeffs) {
  const double n = x.squaredNorm();
  if (!(n > 0)) throw std::invalid_argument("classical_hamiltonian: n must be > 0");
  Complex h = x.adjoint() * coeffs.single_particle() * x;
  const Eigen::VectorXd d = x.cwiseAbs2();
  h += (d.transpose() * coeffs.interaction * d)(0) / n;
  return h;
}

Eigen::MatrixXcd nonlinear_matrix(const Eigen::VectorXcd& x,
                                  const CoefficientMatrices& coeffs) {
  const double n = x.squaredNorm();
  const Eigen::VectorXd d = x.cwiseAbs2();
  const Eigen::VectorXd hd = coeffs.interaction * d;
  const double quad = d.dot(hd);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(x.size(), x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i)
    out(i, i) = 2 * hd[i] / n - quad / (n * n);
  return out;
}

Amplitudes gpe_rhs(const Amplitudes& x, const ModelParams& params, GpeForm form) {
  const double n = x.squaredNorm();
  if (!(n > 0)) throw std::invalid_argument("gpe_rhs: n must be > 0");
  const double J = params.hopping, om = params.raman, g = params.interaction;
  const Complex e = std::exp(Complex(0, -M_PI * params.soc));
  const double nl = left_density(x) / n, nr = right_density(x) / n;
  double xi_l = g * nl, xi_r = g * nr;
  if (form == GpeForm::Ungauged) {
    const double common = -g / 2 * (nl * nl + nr * nr);
    xi_l += common;
    xi_r += common;
  }
  const Complex loss(0, -params.loss);
  Amplitudes hx;
  hx[0] = xi_l * x[0] + om * x[1] - J * e * x[2];
  hx[1] = xi_l * x[1] + om * x[0] - J * std::conj(e) * x[3];
  hx[2] = (xi_r + loss) * x[2] - J * std::conj(e) * x[0] + om * x[3];
  hx[3] = (xi_r + loss) * x[3] - J * e * x[1] + om * x[2];
  return Complex(0, -1) * hx;
}

double gauge_phase_rate(const Amplitudes& x, const ModelParams& params) {
  const double n = x.squaredNorm();
  const double nl = left_density(x) / n, nr = right_density(x) / n;
  return -params.interaction / 2 * (nl * nl + nr * nr);
}

MeanFieldTrajectory evolve_meanfield(const Amplitudes& x0, const ModelParams& params,
                                     const std::vector<double>& t_grid, GpeForm form,
                                     OdeTolerances tol) {
  params.validate();
  const bool gauged = form == GpeForm::Gauged;
  Eigen::VectorXcd y0(gauged ? 5 : 4);
  y0.head<4>() = x0;
  if (gauged) y0[4] = 0;

  auto rhs = [&](double, const Eigen::VectorXcd& y) {
    Eigen::VectorXcd dy(y.size());
    const Amplitudes x = y.head<4>();
    dy.head<4>() = gpe_rhs(x, params, form);
    if (gauged) dy[4] = gauge_phase_rate(x, params);
    return dy;
  };
  const auto states = integrate_to_grid(rhs, y0, t_grid, tol);

  MeanFieldTrajectory out;
  out.times = t_grid;
  out.states.reserve(states.size());
  out.gauge_phase.reserve(states.size());
  for (const auto& y : states) {
    out.states.push_back(y.head<4>());
    out.gauge_phase.push_back(gauged ? y[4].real() : 0.0);
  }
  return out;
}

Eigen::MatrixXcd sigma_rhs(const Eigen::MatrixXcd& sigma,
                           const CoefficientMatrices& coeffs) {
  const Eigen::MatrixXcd hs = coeffs.single_particle();          // h^h + h^a
  const Eigen::MatrixXcd hd = coeffs.hermitian - coeffs.anti_hermitian;  // h^h - h^a
  const Complex decay = (coeffs.anti_hermitian * sigma.transpose()).trace();
  const Eigen::VectorXd diag = sigma.diagonal().real();
  const Eigen::VectorXd hdiag = coeffs.interaction * diag;

  Eigen::MatrixXcd rhs = sigma * hs.transpose() - hd.transpose() * sigma -
                         2.0 * decay * sigma;
  for (Eigen::Index i = 0; i < sigma.rows(); ++i)
    for (Eigen::Index j = 0; j < sigma.cols(); ++j)
      rhs(i, j) += 2.0 * (hdiag[j] - hdiag[i]) * sigma(i, j);
  return Complex(0, -1) * rhs;
}

Amplitudes generalized_force(const Amplitudes& x, const ModelParams& params) {
  // H_a = -i beta (|x3|^2 + |x4|^2); Q_i = -2i dH_a/dx_i.
  Amplitudes q = Amplitudes::Zero();
  q[2] = -2 * params.loss * std::conj(x[2]);
  q[3] = -2 * params.loss * std::conj(x[3]);
  return q;
}

MeanFieldRecord meanfield_observables(double time, const Amplitudes& x) {
  const double n = x.squaredNorm();
  MeanFieldRecord rec;
  rec.time = time;
  rec.n = n;
  if (!(n > 0)) throw std::invalid_argument("meanfield_observables: n must be > 0");
  for (int i = 0; i < 4; ++i) rec.populations[i] = std::norm(x[i]) / n;
  rec.z = rec.populations[0] + rec.populations[1] - rec.populations[2] - rec.populations[3];
  rec.i_up = rec.populations[0] - rec.populations[2];
  rec.i_down = rec.populations[1] - rec.populations[3];
  rec.i_spin = rec.i_up - rec.i_down;
  return rec;
}

}  // namespace nhjj
