#pragma once

#include "fgcn/graph.hpp"

namespace fgcn {

/// Zachary's karate club, the classic 34-node two-faction graph. Bundled as
/// the standard small real-graph fixture: identity node features, faction
/// labels, one training node per faction (the instructor, node 0, and the
/// administrator, node 33), everything else test.
inline GraphBundle karate_club_bundle() {
  GraphBundle b;
  b.num_nodes = 34;
  b.edges = {
      {0, 1, 1.0}, {0, 2, 1.0}, {0, 3, 1.0}, {0, 4, 1.0}, {0, 5, 1.0}, {0, 6, 1.0}, {0, 7, 1.0}, {0, 8, 1.0}, {0, 10, 1.0}, {0, 11, 1.0},
      {0, 12, 1.0}, {0, 13, 1.0}, {0, 17, 1.0}, {0, 19, 1.0}, {0, 21, 1.0}, {0, 31, 1.0}, {1, 2, 1.0}, {1, 3, 1.0}, {1, 7, 1.0}, {1, 13, 1.0},
      {1, 17, 1.0}, {1, 19, 1.0}, {1, 21, 1.0}, {1, 30, 1.0}, {2, 3, 1.0}, {2, 7, 1.0}, {2, 8, 1.0}, {2, 9, 1.0}, {2, 13, 1.0}, {2, 27, 1.0},
      {2, 28, 1.0}, {2, 32, 1.0}, {3, 7, 1.0}, {3, 12, 1.0}, {3, 13, 1.0}, {4, 6, 1.0}, {4, 10, 1.0}, {5, 6, 1.0}, {5, 10, 1.0}, {5, 16, 1.0},
      {6, 16, 1.0}, {8, 30, 1.0}, {8, 32, 1.0}, {8, 33, 1.0}, {9, 33, 1.0}, {13, 33, 1.0}, {14, 32, 1.0}, {14, 33, 1.0}, {15, 32, 1.0}, {15, 33, 1.0},
      {18, 32, 1.0}, {18, 33, 1.0}, {19, 33, 1.0}, {20, 32, 1.0}, {20, 33, 1.0}, {22, 32, 1.0}, {22, 33, 1.0}, {23, 25, 1.0}, {23, 27, 1.0}, {23, 29, 1.0},
      {23, 32, 1.0}, {23, 33, 1.0}, {24, 25, 1.0}, {24, 27, 1.0}, {24, 31, 1.0}, {25, 31, 1.0}, {26, 29, 1.0}, {26, 33, 1.0}, {27, 33, 1.0}, {28, 31, 1.0},
      {28, 33, 1.0}, {29, 32, 1.0}, {29, 33, 1.0}, {30, 32, 1.0}, {30, 33, 1.0}, {31, 32, 1.0}, {31, 33, 1.0}, {32, 33, 1.0},
  };
  static constexpr int kFaction[34] = {0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 1, 0,
                                       0, 1, 0, 1, 0, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1};
  b.labels.assign(kFaction, kFaction + 34);
  b.num_classes = 2;
  b.features = DenseMatrix(34, 34);
  for (std::size_t i = 0; i < 34; ++i) b.features(i, i) = 1.0;
  b.train_mask.assign(34, 0);
  b.val_mask.assign(34, 0);
  b.test_mask.assign(34, 1);
  b.train_mask[0] = 1;
  b.test_mask[0] = 0;
  b.train_mask[33] = 1;
  b.test_mask[33] = 0;
  return b;
}

}  // namespace fgcn
