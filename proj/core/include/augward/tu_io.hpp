#pragma once

#include <string>

#include "augward/graph.hpp"

namespace augward {

// Loads a dataset in TU flat-file layout from dir_path:
//   {name}_A.txt                "u, v" pairs, 1-indexed global node ids
//   {name}_graph_indicator.txt  graph id per node, 1-indexed
//   {name}_graph_labels.txt     integer label per graph
//   {name}_node_labels.txt      optional, one-hot encoded into features
//   {name}_node_attributes.txt  optional, appended to features as-is
// Node labels become one-hot columns over the sorted distinct values;
// with neither optional file, features are a single constant-1.0 column.
// Graph labels are remapped to contiguous [1, num_classes]. Duplicate
// directed edge entries are collapsed to one undirected edge.
// All data errors report file and line number.
Dataset load_tu_dataset(const std::string& dir_path, const std::string& name);

// Writes ds back in the same layout (edges emitted in both directions,
// features as node_attributes). load(save(ds)) reproduces ds graph by graph.
void save_tu_dataset(const Dataset& ds, const std::string& dir_path);

}  // namespace augward
