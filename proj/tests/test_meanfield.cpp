#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "nhjj/meanfield.hpp"
#include "nhjj/qdyn.hpp"

using namespace nhjj;

namespace {

ModelParams params(double raman, double soc, double g, double beta) {
  ModelParams p;
  p.raman = raman;
  p.soc = soc;
  p.interaction = g;
  p.loss = beta;
  return p;
}

Amplitudes random_state(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Amplitudes x;
  for (int m = 0; m < 4; ++m) x[m] = Complex(u(rng), u(rng));
  return x;
}

// Wirtinger derivative dH/dx_i* by central differences in the real and
// imaginary parts: dH/dx* = (d/dRe + i d/dIm) H / 2.
Complex fd_grad_conj(const Amplitudes& x, const ModelParams& p, int i) {
  const double h = 1e-6;
  auto eval = [&](Complex delta) {
    Amplitudes y = x;
    y[i] += delta;
    return classical_hamiltonian(y, p);
  };
  const Complex d_re = (eval(h) - eval(-h)) / (2 * h);
  const Complex d_im = (eval(Complex(0, h)) - eval(Complex(0, -h))) / (2 * h);
  return 0.5 * (d_re + Complex(0, 1) * d_im);
}

// Same derivative with respect to x_i (not conjugated).
Complex fd_grad(const Amplitudes& x, const ModelParams& p, int i) {
  const double h = 1e-6;
  auto eval = [&](Complex delta) {
    Amplitudes y = x;
    y[i] += delta;
    return classical_hamiltonian(y, p);
  };
  const Complex d_re = (eval(h) - eval(-h)) / (2 * h);
  const Complex d_im = (eval(Complex(0, h)) - eval(Complex(0, -h))) / (2 * h);
  return 0.5 * (d_re - Complex(0, 1) * d_im);
}

}  // namespace

TEST_CASE("classical Hamiltonian closed-form values") {
  Amplitudes x = Amplitudes::Zero();
  x[3] = 1.0;
  const auto h = classical_hamiltonian(x, params(0.7, 0.3, 2.0, 0.25));
  CHECK(h.real() == doctest::Approx(1.0));   // g/2
  CHECK(h.imag() == doctest::Approx(-0.25));  // -beta

  Amplitudes r;
  r << 0.3, -0.6, 0.2, 0.7;
  CHECK(std::abs(classical_hamiltonian(r, params(0.9, 0.4, 1.5, 0.0)).imag()) < 1e-14);

  CHECK_THROWS_AS(classical_hamiltonian(Amplitudes::Zero(), params(1, 0, 0, 0)),
                  std::invalid_argument);
}

TEST_CASE("specific and general-coefficient Hamiltonians agree") {
  const auto p = params(0.8, 0.35, 2.2, 0.15);
  const auto coeffs = build_coefficients(p);
  std::mt19937 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const Amplitudes x = random_state(rng);
    const Complex a = classical_hamiltonian(x, p);
    const Complex b = classical_hamiltonian(Eigen::VectorXcd(x), coeffs);
    CHECK(std::abs(a - b) < 1e-12 * std::max(1.0, std::abs(a)));
  }
}

TEST_CASE("equations of motion derive from the Hamiltonian function") {
  const auto p = params(0.9, 0.2, 1.8, 0.3);
  std::mt19937 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    Amplitudes x = random_state(rng);
    x /= std::sqrt(x.squaredNorm());  // the FD oracle assumes n = 1
    const Amplitudes rhs = gpe_rhs(x, p, GpeForm::Ungauged);
    for (int i = 0; i < 4; ++i) {
      const Complex expected = Complex(0, -1) * fd_grad_conj(x, p, i);
      CHECK(std::abs(rhs[i] - expected) < 1e-6 * std::max(1.0, std::abs(expected)));
    }
  }
}

TEST_CASE("norm decay rate") {
  const auto p = params(0.7, 0.1, 1.0, 0.4);
  Amplitudes x = Amplitudes::Zero();
  x[3] = 1.0;
  auto dn = [&](const Amplitudes& y, GpeForm form) {
    const Amplitudes rhs = gpe_rhs(y, p, form);
    return 2 * (y.conjugate().cwiseProduct(rhs)).sum().real();
  };
  CHECK(dn(x, GpeForm::Ungauged) == doctest::Approx(-2 * p.loss));
  CHECK(dn(x, GpeForm::Gauged) == doctest::Approx(-2 * p.loss));

  const auto lossless = params(0.7, 0.1, 1.0, 0.0);
  Amplitudes y;
  y << 0.4, Complex(0, 0.5), -0.3, 0.6;
  const Amplitudes rhs = gpe_rhs(y, lossless, GpeForm::Ungauged);
  CHECK(std::abs(2 * (y.conjugate().cwiseProduct(rhs)).sum().real()) < 1e-14);

  // Along a trajectory: dn/dt = -2 beta (|x3|^2 + |x4|^2) by finite differences.
  std::mt19937 rng(31);
  Amplitudes x0 = random_state(rng);
  x0 /= std::sqrt(x0.squaredNorm());
  const double delta = 1e-4;
  for (int k = 1; k <= 5; ++k) {
    const double t = 2.0 * k;
    const auto traj = evolve_meanfield(x0, p, {0.0, t - delta, t, t + delta},
                                       GpeForm::Gauged, {1e-12, 1e-14});
    const double fd = (traj.states[3].squaredNorm() - traj.states[1].squaredNorm()) /
                      (2 * delta);
    const Amplitudes& xt = traj.states[2];
    const double expected = -2 * p.loss * (std::norm(xt[2]) + std::norm(xt[3]));
    CHECK(fd == doctest::Approx(expected).epsilon(1e-6));
  }
}

TEST_CASE("interaction diagonal is degenerate within each well") {
  // With J = Omega = beta = 0 the equation is diagonal: i dx_i/dt = xi_i x_i.
  ModelParams p = params(0.0, 0.0, 3.0, 0.0);
  p.hopping = 0.0;
  std::mt19937 rng(43);
  const Amplitudes x = random_state(rng);
  const Amplitudes rhs = gpe_rhs(x, p, GpeForm::Ungauged);
  const Complex xi_l0 = Complex(0, 1) * rhs[0] / x[0];
  const Complex xi_l1 = Complex(0, 1) * rhs[1] / x[1];
  const Complex xi_r0 = Complex(0, 1) * rhs[2] / x[2];
  const Complex xi_r1 = Complex(0, 1) * rhs[3] / x[3];
  CHECK(std::abs(xi_l0 - xi_l1) < 1e-12);
  CHECK(std::abs(xi_r0 - xi_r1) < 1e-12);
}

TEST_CASE("lossless integration conserves the norm") {
  const auto p = params(1.0, 0.3, 2.0, 0.0);
  Amplitudes x0;
  x0 << 0.5, 0.5, Complex(0, 0.5), 0.5;
  const auto traj = evolve_meanfield(x0, p, linspace(0, 200, 100), GpeForm::Gauged,
                                     {1e-12, 1e-14});
  for (const auto& x : traj.states) CHECK(std::abs(x.squaredNorm() - 1.0) < 1e-9);
}

TEST_CASE("gauged and ungauged forms share all densities") {
  const auto p = params(0.8, 0.15, 2.5, 0.2);
  std::mt19937 rng(57);
  Amplitudes x0 = random_state(rng);
  x0 /= std::sqrt(x0.squaredNorm());
  const auto grid = linspace(0, 30, 60);
  const auto a = evolve_meanfield(x0, p, grid, GpeForm::Ungauged, {1e-12, 1e-14});
  const auto b = evolve_meanfield(x0, p, grid, GpeForm::Gauged, {1e-12, 1e-14});
  for (std::size_t k = 0; k < grid.size(); ++k)
    for (int m = 0; m < 4; ++m)
      CHECK(std::abs(std::norm(a.states[k][m]) - std::norm(b.states[k][m])) < 1e-8);

  // The accumulated gauge phase reconstructs the ungauged amplitudes.
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const Complex phase = std::exp(Complex(0, -1) * b.gauge_phase[k]);
    for (int m = 0; m < 4; ++m)
      CHECK(std::abs(phase * b.states[k][m] - a.states[k][m]) < 1e-7);
  }
}

TEST_CASE("linear eigenstates are stationary at zero interaction") {
  // x0 = (1,0,0,1)/sqrt(2) is an eigenvector of the single-particle matrix at
  // gamma = 0 when Omega = J.
  const auto p = params(1.0, 0.0, 0.0, 0.0);
  Amplitudes x0;
  x0 << 1 / std::sqrt(2.0), 0, 0, 1 / std::sqrt(2.0);
  const auto traj = evolve_meanfield(x0, p, linspace(0, 50, 100), GpeForm::Gauged,
                                     {1e-12, 1e-14});
  for (const auto& x : traj.states)
    for (int m = 0; m < 4; ++m)
      CHECK(std::abs(std::norm(x[m]) - std::norm(x0[m])) < 1e-9);
}

TEST_CASE("spin-swap symmetry is preserved by the flow") {
  const auto p = params(1.0, 0.3, 1.5, 0.0);
  Amplitudes x0;
  x0 << 1 / std::sqrt(2.0), 0, 0, 1 / std::sqrt(2.0);
  const auto traj = evolve_meanfield(x0, p, linspace(0, 100, 200), GpeForm::Gauged,
                                     {1e-12, 1e-14});
  for (const auto& x : traj.states) {
    CHECK(std::abs(x[0] - x[3]) < 1e-8);
    CHECK(std::abs(x[1] - x[2]) < 1e-8);
  }
}

TEST_CASE("nonlinear matrix is real symmetric") {
  const auto coeffs = build_coefficients(params(0.8, 0.25, 2.0, 0.3));
  std::mt19937 rng(71);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::VectorXcd x = random_state(rng);
    const Eigen::MatrixXcd hn = nonlinear_matrix(x, coeffs);
    CHECK((hn - hn.conjugate()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((hn - hn.transpose()).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("two-point-function evolution") {
  const auto p = params(1.0, 0.0, 0.1, 0.1);
  const auto coeffs = build_coefficients(p);

  SUBCASE("trace is conserved") {
    std::mt19937 rng(83);
    for (int trial = 0; trial < 50; ++trial) {
      Amplitudes x = random_state(rng);
      x /= std::sqrt(x.squaredNorm());
      const Eigen::MatrixXcd sigma =
          x.conjugate() * x.transpose();
      CHECK(std::abs(sigma.trace() - Complex(1, 0)) < 1e-12);
      CHECK(std::abs(sigma_rhs(sigma, coeffs).trace()) < 1e-12);
    }
  }

  SUBCASE("diagonal sigma has no diagonal motion under off-diagonal couplings") {
    ModelParams q = params(0.6, 0.0, 0.0, 0.0);
    const auto c = build_coefficients(q);
    Eigen::MatrixXcd sigma = Eigen::MatrixXcd::Zero(4, 4);
    sigma.diagonal() << 0.4, 0.3, 0.2, 0.1;
    const auto rhs = sigma_rhs(sigma, c);
    for (int i = 0; i < 4; ++i) CHECK(std::abs(rhs(i, i)) < 1e-14);
  }

  SUBCASE("matches the coherent-state trajectory") {
    Amplitudes x0 = Amplitudes::Zero();
    x0[3] = 1.0;
    const auto grid = linspace(0, 50, 100);
    const auto traj = evolve_meanfield(x0, p, grid, GpeForm::Ungauged, {1e-12, 1e-14});

    const Eigen::MatrixXcd sigma0 =
        x0.conjugate() * x0.transpose();
    Eigen::VectorXcd y0(Eigen::Map<const Eigen::VectorXcd>(sigma0.data(), 16));
    auto rhs = [&](double, const Eigen::VectorXcd& y) {
      const Eigen::MatrixXcd s = Eigen::Map<const Eigen::MatrixXcd>(y.data(), 4, 4);
      const Eigen::MatrixXcd ds = sigma_rhs(s, coeffs);
      return Eigen::VectorXcd(Eigen::Map<const Eigen::VectorXcd>(ds.data(), 16));
    };
    const auto sigmas = integrate_to_grid(rhs, y0, grid, {1e-12, 1e-14});
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const Amplitudes& x = traj.states[k];
      const double n = x.squaredNorm();
      const Eigen::MatrixXcd from_x =
          (x.conjugate() * x.transpose()) / n;
      const Eigen::MatrixXcd direct =
          Eigen::Map<const Eigen::MatrixXcd>(sigmas[k].data(), 4, 4);
      CHECK((from_x - direct).cwiseAbs().maxCoeff() < 1e-7);
    }
  }
}

TEST_CASE("generalized force from the anti-Hermitian part") {
  const auto p = params(0.9, 0.2, 1.5, 0.35);
  CHECK(generalized_force(Amplitudes::Ones(), params(0.9, 0.2, 1.5, 0.0)).norm() == 0.0);

  Amplitudes x = Amplitudes::Zero();
  x[2] = 1.0;
  const auto q = generalized_force(x, p);
  CHECK(std::abs(q[2]) == doctest::Approx(2 * p.loss));
  CHECK(std::abs(q[0]) + std::abs(q[1]) + std::abs(q[3]) == 0.0);

  // Conjugate canonical equation i dx_i*/dt = -dH/dx_i + i Q_i along a trajectory.
  Amplitudes x0;
  x0 << 0.5, 0.5, 0.5, 0.5;
  const auto traj = evolve_meanfield(x0, p, linspace(0, 10, 10), GpeForm::Ungauged,
                                     {1e-12, 1e-14});
  for (const auto& xt : traj.states) {
    const Amplitudes dxdt = gpe_rhs(xt, p, GpeForm::Ungauged);
    for (int i = 0; i < 4; ++i) {
      const Complex lhs = Complex(0, 1) * std::conj(dxdt[i]);
      const Complex rhs = -fd_grad(xt, p, i) +
                          Complex(0, 1) * generalized_force(xt, p)[i];
      CHECK(std::abs(lhs - rhs) < 1e-6 * std::max(1.0, std::abs(rhs)));
    }
  }
}

TEST_CASE("mean-field observables") {
  Amplitudes x;
  x << 0.0, 0.0, 0.0, 2.0;  // unnormalized on purpose
  const auto rec = meanfield_observables(1.5, x);
  CHECK(rec.time == 1.5);
  CHECK(rec.n == doctest::Approx(4.0));
  CHECK(rec.z == doctest::Approx(-1.0));
  CHECK(rec.i_down == doctest::Approx(-1.0));
  CHECK(rec.i_spin == doctest::Approx(1.0));
  CHECK(rec.populations[3] == doctest::Approx(1.0));
  CHECK_THROWS_AS(meanfield_observables(0, Amplitudes::Zero()), std::invalid_argument);
}
