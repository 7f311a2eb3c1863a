//
// Copyright 2026 The dqmetrics Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef DQM_GTREE_H_
#define DQM_GTREE_H_

#include <map>
#include <string>
#include <vector>

#include "absl/container/flat_hash_map.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "absl/types/span.h"
#include "nlohmann/json.hpp"

namespace dqm {

// Generalization hierarchy for one categorical column. Each node carries a
// geometric size; leaves are the original category tokens.
class GTree {
 public:
  using NodeId = int;

  struct Node {
    std::string label;
    double size = 0.0;
    NodeId parent = -1;
    int depth = 0;
    std::vector<NodeId> children;
    bool is_leaf() const { return children.empty(); }
  };

  struct Spec {
    std::string label;
    double size = 0.0;
    std::vector<Spec> children;
  };

  GTree() = default;

  // Builds a tree from a nested spec. Structural problems (an empty spec or a
  // negative size) fail; invariant violations are left to Validate().
  static absl::StatusOr<GTree> Build(const Spec& root);

  // Depth-2 tree: root "*" of `root_size` over one leaf per value.
  static absl::StatusOr<GTree> Flat(absl::Span<const std::string> values,
                                    double root_size = 1.0);

  // Parses {"label": ..., "size": ..., "children": [...]}.
  static absl::StatusOr<GTree> FromJson(const nlohmann::json& doc);
  nlohmann::json ToJson() const;

  NodeId root() const { return 0; }
  const Node& node(NodeId id) const { return nodes_[id]; }
  size_t num_nodes() const { return nodes_.size(); }
  double root_size() const { return nodes_.empty() ? 0.0 : nodes_[0].size; }

  absl::StatusOr<NodeId> Leaf(absl::string_view token) const;
  bool HasLeaf(absl::string_view token) const;
  std::vector<std::string> LeafLabels() const;

  NodeId Lca(NodeId a, NodeId b) const;
  // Lowest common ancestor covering every token; a single token returns its
  // leaf.
  absl::StatusOr<NodeId> Lca(absl::Span<const std::string> tokens) const;

  // All invariant violations, empty when valid.
  std::vector<std::string> Validate() const;

 private:
  NodeId AddNode(const Spec& spec, NodeId parent, int depth);

  std::vector<Node> nodes_;
  absl::flat_hash_map<std::string, NodeId> leaf_index_;
  std::vector<std::string> duplicate_leaves_;
};

using GTreeMap = std::map<std::string, GTree>;

}  // namespace dqm

#endif  // DQM_GTREE_H_
