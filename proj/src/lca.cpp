#include "parle/lca.hpp"
#include <algorithm>

namespace parle {

void LcaIndex::build_table() {
  const int m = static_cast<int>(euler_.size());
  const int blocks = (m + kBlock - 1) / kBlock;

  std::vector<int> block_min(blocks);
  for (int i = 0; i < blocks; ++i)
    block_min[i] = scan_min(i * kBlock, std::min(m - 1, (i + 1) * kBlock - 1));

  log2_.assign(blocks + 1, 0);
  for (int i = 2; i <= blocks; ++i) log2_[i] = log2_[i / 2] + 1;

  const int levels = log2_[blocks] + 1;
  table_.assign(levels, std::vector<int>(blocks));
  table_[0] = std::move(block_min);
  for (int k = 1; k < levels; ++k) {
    const int half = 1 << (k - 1);
    const int len = 1 << k;
    for (int i = 0; i + len <= blocks; ++i) {
      const int p = table_[k - 1][i];
      const int q = table_[k - 1][i + half];
      table_[k][i] = euler_depth(p) <= euler_depth(q) ? p : q;
    }
  }
}

}  // namespace parle
