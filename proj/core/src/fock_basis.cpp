#include "nhjj/fock_basis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace nhjj {

namespace {

// C(n, k) in exact integer arithmetic; saturates well above any dimension
// the basis guard allows.
std::size_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::size_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::size_t>(n - k + i) / i;
  return r;
}

}  // namespace

std::size_t basis_dimension(int n_particles, int n_modes) {
  return binomial(n_particles + n_modes - 1, n_modes - 1);
}

FockBasis::FockBasis(int n_particles, int n_modes, std::size_t max_dim)
    : n_particles_(n_particles), n_modes_(n_modes) {
  if (n_particles < 0) throw std::invalid_argument("FockBasis: n_particles < 0");
  if (n_modes < 1) throw std::invalid_argument("FockBasis: n_modes < 1");
  const std::size_t dim = basis_dimension(n_particles, n_modes);
  if (dim > max_dim)
    throw capacity_error("FockBasis: dimension " + std::to_string(dim) +
                         " exceeds guard " + std::to_string(max_dim));
  states_.reserve(dim);
  Occupation current(n_modes, 0);
  // Descending-lex enumeration: leading modes take the largest occupations first.
  auto emit = [&](auto&& self, int mode, int remaining) -> void {
    if (mode == n_modes - 1) {
      current[mode] = remaining;
      states_.push_back(current);
      return;
    }
    for (int k = remaining; k >= 0; --k) {
      current[mode] = k;
      self(self, mode + 1, remaining - k);
    }
  };
  emit(emit, 0, n_particles);
}

std::size_t FockBasis::index_of(const Occupation& state) const {
  if (static_cast<int>(state.size()) != n_modes_)
    throw std::invalid_argument("index_of: wrong number of modes");
  int sum = 0;
  for (int n : state) {
    if (n < 0) throw std::invalid_argument("index_of: negative occupation");
    sum += n;
  }
  if (sum != n_particles_)
    throw std::invalid_argument("index_of: particle sum " + std::to_string(sum) +
                                " != " + std::to_string(n_particles_));
  // Count states that precede `state`: at each mode, every larger leading
  // occupation contributes a full sub-basis of the remaining modes.
  std::size_t rank = 0;
  int remaining = n_particles_;
  for (int mode = 0; mode < n_modes_ - 1; ++mode) {
    for (int k = remaining; k > state[mode]; --k)
      rank += basis_dimension(remaining - k, n_modes_ - mode - 1);
    remaining -= state[mode];
  }
  return rank;
}

std::optional<std::pair<double, Occupation>> hop_element(const Occupation& state,
                                                         int i, int j) {
  const int m = static_cast<int>(state.size());
  if (i < 0 || i >= m || j < 0 || j >= m)
    throw std::invalid_argument("hop_element: mode index out of range");
  if (i == j) return std::make_pair(static_cast<double>(state[i]), state);
  if (state[j] == 0) return std::nullopt;
  Occupation out = state;
  out[j] -= 1;
  out[i] += 1;
  const double coeff = std::sqrt(static_cast<double>(out[i]) * state[j]);
  return std::make_pair(coeff, std::move(out));
}

}  // namespace nhjj
