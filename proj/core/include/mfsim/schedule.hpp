#pragma once

#include <vector>

#include "mfsim/types.hpp"

namespace mfsim {

/// A two-site bond (left, right). The wrap bond under PBC is (L-1, 0).
struct Bond {
  int left;
  int right;
  friend bool operator==(const Bond&, const Bond&) = default;
};

/// Brick-wall layer schedule. Odd time steps act on bonds
/// (0,1), (2,3), ..., (L-2, L-1); even steps act on (1,2), (3,4), ...
/// which under OBC stops at (L-3, L-2) and under PBC additionally
/// includes the wrap bond (L-1, 0).
struct CircuitSchedule {
  int length;
  Boundary boundary = Boundary::OBC;

  std::vector<Bond> active_bonds(long t) const {
    std::vector<Bond> bonds;
    bonds.reserve(static_cast<std::size_t>(length) / 2);
    for_each_bond(t, [&](int left, int right) { bonds.push_back({left, right}); });
    return bonds;
  }

  template <class F>
  void for_each_bond(long t, F&& f) const {
    const bool odd = (t % 2) != 0;
    const int first = odd ? 0 : 1;
    for (int j = first; j + 1 < length; j += 2) {
      f(j, j + 1);
    }
    if (!odd && boundary == Boundary::PBC && length >= 2) {
      f(length - 1, 0);
    }
  }

  /// Bond containing `site` in layer t, or {-1,-1} if the site idles.
  Bond bond_of_site(long t, int site) const {
    Bond found{-1, -1};
    for_each_bond(t, [&](int left, int right) {
      if (left == site || right == site) found = {left, right};
    });
    return found;
  }
};

}  // namespace mfsim
