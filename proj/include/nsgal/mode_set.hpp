#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace nsgal {

using Wavevector = Eigen::Vector3i;

/// Truncated set of integer wavevectors 0 < max|k_i| <= K, in lexicographic
/// order (k1 major). The set is closed under negation and excludes k = 0.
///
/// A ModeSet is fully determined by its cutoff, so instances are interned:
/// `ModeSet::with_cutoff(K)` always hands back the same object for a given K.
class ModeSet {
 public:
  /// A convolution triple with k = p + q, all three inside the set.
  struct Triad {
    std::int32_t p;
    std::int32_t q;
    std::int32_t k;
  };

  static std::shared_ptr<const ModeSet> with_cutoff(int cutoff);

  int cutoff() const { return cutoff_; }
  Eigen::Index size() const { return static_cast<Eigen::Index>(modes_.size()); }

  const Wavevector& wavevector(Eigen::Index i) const { return modes_[static_cast<std::size_t>(i)]; }
  std::span<const Wavevector> wavevectors() const { return modes_; }

  /// Position of k in the set, or -1 if k is zero or outside the cutoff.
  Eigen::Index index_of(const Wavevector& k) const;

  /// Index of -k.
  Eigen::Index negation(Eigen::Index i) const { return size() - 1 - i; }

  /// |k|^2 as an integer.
  int norm_squared(Eigen::Index i) const { return norm_sq_[static_cast<std::size_t>(i)]; }

  std::span<const Triad> triads() const { return triads_; }

  /// Smallest odd grid size on which a product of `degree` fields from this
  /// set is integrated exactly by the periodic trapezoid rule.
  int exact_grid_size(int degree) const { return degree * cutoff_ + 1; }

  explicit ModeSet(int cutoff);

 private:
  int cutoff_;
  std::vector<Wavevector> modes_;
  std::vector<int> norm_sq_;
  std::vector<std::int32_t> lookup_;
  std::vector<Triad> triads_;
};

bool same_modes(const ModeSet& a, const ModeSet& b);

}  // namespace nsgal
