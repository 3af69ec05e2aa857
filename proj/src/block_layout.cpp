#include "vcm/block_layout.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vcm {

BlockLayout BlockLayout::make(int L_plus_1, int d) {
  if (L_plus_1 < 1) throw std::invalid_argument("block layout: L_plus_1 < 1");
  if (d < 1) throw std::invalid_argument("block layout: d < 1");
  BlockLayout layout;
  layout.L_plus_1 = L_plus_1;
  layout.d = d;
  layout.blocks.push_back({0, 1});
  for (int start = 1; start < L_plus_1; start += d)
    layout.blocks.push_back({start, std::min(d, L_plus_1 - start)});
  layout.M = static_cast<int>(layout.blocks.size()) - 1;
  return layout;
}

BlockLayout BlockLayout::for_sample_size(int L_plus_1, long n) {
  if (n < 1) throw std::invalid_argument("block layout: n < 1");
  int d = std::max(1, static_cast<int>(std::floor(std::log(static_cast<double>(n)))));
  return make(L_plus_1, d);
}

}  // namespace vcm
