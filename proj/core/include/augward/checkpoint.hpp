#pragma once

#include <string>

#include "augward/model.hpp"

namespace augward {

// Flat little-endian binary checkpoint with a bitwise round-trip guarantee:
//   bytes 0-7   magic "AWCKPT01"
//   4 x int32   in_dim, hidden, layers, num_classes
//   int32       number of parameter tensors
//   per tensor  int32 name length, name bytes, int32 rows, int32 cols
//   then all value buffers as row-major float64, in parameter order.
void save_checkpoint(const Model& model, const std::string& path);
Model load_checkpoint(const std::string& path);

}  // namespace augward
