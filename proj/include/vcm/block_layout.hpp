#pragma once

#include <vector>

namespace vcm {

// Column grouping of a p x (L+1) coefficient matrix: K_0 = {0} holds the
// constant-term coefficient, K_1..K_M cover {1,...,L} with |K_l| = d except
// possibly a short last block.
struct BlockLayout {
  struct Block {
    int start = 0;
    int len = 0;
  };

  int L_plus_1 = 1;
  int d = 1;
  int M = 0;                  // number of nonzero-index blocks
  std::vector<Block> blocks;  // blocks[0] = {0,1}, blocks[1..M]

  int block_count() const { return static_cast<int>(blocks.size()); }

  static BlockLayout make(int L_plus_1, int d);

  // d = max(1, floor(ln n))
  static BlockLayout for_sample_size(int L_plus_1, long n);
};

}  // namespace vcm
