#include "nsgal/mode_set.hpp"

#include "nsgal/errors.hpp"

#include <map>
#include <mutex>
#include <string>

namespace nsgal {

ModeSet::ModeSet(int cutoff) : cutoff_(cutoff) {
  if (cutoff < 1) throw ConfigError("mode cutoff must be a positive integer, got " + std::to_string(cutoff));
  const int side = 2 * cutoff + 1;
  lookup_.assign(static_cast<std::size_t>(side) * side * side, -1);
  for (int a = -cutoff; a <= cutoff; ++a) {
    for (int b = -cutoff; b <= cutoff; ++b) {
      for (int c = -cutoff; c <= cutoff; ++c) {
        if (a == 0 && b == 0 && c == 0) continue;
        const auto slot = static_cast<std::size_t>(((a + cutoff) * side + (b + cutoff)) * side + (c + cutoff));
        lookup_[slot] = static_cast<std::int32_t>(modes_.size());
        modes_.emplace_back(a, b, c);
        norm_sq_.push_back(a * a + b * b + c * c);
      }
    }
  }

  const auto n = static_cast<std::int32_t>(modes_.size());
  for (std::int32_t p = 0; p < n; ++p) {
    for (std::int32_t q = 0; q < n; ++q) {
      const Eigen::Index k = index_of(modes_[p] + modes_[q]);
      if (k >= 0) triads_.push_back({p, q, static_cast<std::int32_t>(k)});
    }
  }
}

Eigen::Index ModeSet::index_of(const Wavevector& k) const {
  if (k.cwiseAbs().maxCoeff() > cutoff_) return -1;
  const int side = 2 * cutoff_ + 1;
  const auto slot = static_cast<std::size_t>(((k[0] + cutoff_) * side + (k[1] + cutoff_)) * side + (k[2] + cutoff_));
  return lookup_[slot];
}

std::shared_ptr<const ModeSet> ModeSet::with_cutoff(int cutoff) {
  static std::mutex mutex;
  static std::map<int, std::shared_ptr<const ModeSet>> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(cutoff);
  if (it != cache.end()) return it->second;
  auto modes = std::make_shared<const ModeSet>(cutoff);
  cache.emplace(cutoff, modes);
  return modes;
}

bool same_modes(const ModeSet& a, const ModeSet& b) { return &a == &b || a.cutoff() == b.cutoff(); }

}  // namespace nsgal
