#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace nhjj {

/// Occupation-number vector: particles per mode.
using Occupation = std::vector<int>;

struct capacity_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Number of Fock states for n particles in m modes: C(n+m-1, m-1).
std::size_t basis_dimension(int n_particles, int n_modes);

/// Fixed-N bosonic Fock basis, ordered by lexicographically descending
/// occupation vectors. Immutable after construction; lookups are done by a
/// combinatorial ranking function, not a hash map.
class FockBasis {
 public:
  static constexpr std::size_t kDefaultMaxDim = 200000;

  FockBasis(int n_particles, int n_modes, std::size_t max_dim = kDefaultMaxDim);

  int particles() const { return n_particles_; }
  int modes() const { return n_modes_; }
  std::size_t size() const { return states_.size(); }
  const Occupation& state(std::size_t k) const { return states_[k]; }
  const std::vector<Occupation>& states() const { return states_; }

  /// Rank of `state` in the canonical ordering. Throws std::invalid_argument
  /// if the state has the wrong number of modes, a negative entry, or does
  /// not sum to N.
  std::size_t index_of(const Occupation& state) const;

 private:
  int n_particles_;
  int n_modes_;
  std::vector<Occupation> states_;
};

/// Matrix element of a_i^dagger a_j on an occupation state.
/// Returns (coefficient, resulting state), or nullopt when a_j annihilates
/// the state (occupation j is zero, i != j). For i == j the coefficient is
/// the occupation n_i and the state is unchanged.
std::optional<std::pair<double, Occupation>> hop_element(const Occupation& state,
                                                         int i, int j);

}  // namespace nhjj
