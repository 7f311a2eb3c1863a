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

#include "dqm/gtree.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"

namespace dqm {

GTree::NodeId GTree::AddNode(const Spec& spec, NodeId parent, int depth) {
  const NodeId id = static_cast<NodeId>(nodes_.size());
  nodes_.push_back(Node{spec.label, spec.size, parent, depth, {}});
  if (spec.children.empty()) {
    if (!leaf_index_.emplace(spec.label, id).second) {
      duplicate_leaves_.push_back(spec.label);
    }
  }
  for (const Spec& child : spec.children) {
    const NodeId c = AddNode(child, id, depth + 1);
    nodes_[id].children.push_back(c);
  }
  return id;
}

absl::StatusOr<GTree> GTree::Build(const Spec& root) {
  std::vector<const Spec*> stack = {&root};
  while (!stack.empty()) {
    const Spec* s = stack.back();
    stack.pop_back();
    if (!std::isfinite(s->size) || s->size < 0.0) {
      return absl::InvalidArgumentError(absl::StrCat(
          "g-tree node '", s->label, "' has invalid size ", s->size));
    }
    for (const Spec& c : s->children) stack.push_back(&c);
  }
  GTree tree;
  tree.AddNode(root, -1, 0);
  return tree;
}

absl::StatusOr<GTree> GTree::Flat(absl::Span<const std::string> values,
                                  double root_size) {
  if (values.empty()) {
    return absl::InvalidArgumentError("flat g-tree needs at least one value");
  }
  if (!(root_size > 0.0)) {
    return absl::InvalidArgumentError("flat g-tree root size must be > 0");
  }
  std::vector<std::string> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  Spec root{"*", root_size, {}};
  for (const std::string& v : sorted) root.children.push_back({v, 0.0, {}});
  return Build(root);
}

namespace {

absl::StatusOr<GTree::Spec> SpecFromJson(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("label")) {
    return absl::InvalidArgumentError("g-tree node needs a 'label'");
  }
  GTree::Spec spec;
  spec.label = doc.at("label").get<std::string>();
  spec.size = doc.value("size", 0.0);
  if (doc.contains("children")) {
    for (const nlohmann::json& child : doc.at("children")) {
      absl::StatusOr<GTree::Spec> c = SpecFromJson(child);
      if (!c.ok()) return c.status();
      spec.children.push_back(*std::move(c));
    }
  }
  return spec;
}

}  // namespace

absl::StatusOr<GTree> GTree::FromJson(const nlohmann::json& doc) {
  absl::StatusOr<Spec> spec;
  try {
    spec = SpecFromJson(doc);
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat("g-tree: ", e.what()));
  }
  if (!spec.ok()) return spec.status();
  return Build(*spec);
}

nlohmann::json GTree::ToJson() const {
  auto emit = [&](auto&& self, NodeId id) -> nlohmann::json {
    nlohmann::json j = {{"label", nodes_[id].label}, {"size", nodes_[id].size}};
    if (!nodes_[id].children.empty()) {
      j["children"] = nlohmann::json::array();
      for (NodeId c : nodes_[id].children) j["children"].push_back(self(self, c));
    }
    return j;
  };
  return nodes_.empty() ? nlohmann::json() : emit(emit, root());
}

absl::StatusOr<GTree::NodeId> GTree::Leaf(absl::string_view token) const {
  auto it = leaf_index_.find(token);
  if (it == leaf_index_.end()) {
    return absl::NotFoundError(
        absl::StrCat("'", token, "' is not a leaf of the g-tree"));
  }
  return it->second;
}

bool GTree::HasLeaf(absl::string_view token) const {
  return leaf_index_.contains(token);
}

std::vector<std::string> GTree::LeafLabels() const {
  std::vector<std::string> out;
  for (const Node& n : nodes_) {
    if (n.is_leaf()) out.push_back(n.label);
  }
  return out;
}

GTree::NodeId GTree::Lca(NodeId a, NodeId b) const {
  while (nodes_[a].depth > nodes_[b].depth) a = nodes_[a].parent;
  while (nodes_[b].depth > nodes_[a].depth) b = nodes_[b].parent;
  while (a != b) {
    a = nodes_[a].parent;
    b = nodes_[b].parent;
  }
  return a;
}

absl::StatusOr<GTree::NodeId> GTree::Lca(
    absl::Span<const std::string> tokens) const {
  if (tokens.empty()) {
    return absl::InvalidArgumentError("lca of an empty token set");
  }
  absl::StatusOr<NodeId> acc = Leaf(tokens[0]);
  if (!acc.ok()) return acc.status();
  NodeId node = *acc;
  for (size_t i = 1; i < tokens.size(); ++i) {
    absl::StatusOr<NodeId> leaf = Leaf(tokens[i]);
    if (!leaf.ok()) return leaf.status();
    node = Lca(node, *leaf);
  }
  return node;
}

std::vector<std::string> GTree::Validate() const {
  std::vector<std::string> problems;
  if (nodes_.empty()) {
    problems.push_back("empty tree");
    return problems;
  }
  for (const std::string& d : duplicate_leaves_) {
    problems.push_back(absl::StrCat("duplicate leaf '", d, "'"));
  }
  for (NodeId id = 0; id < static_cast<NodeId>(nodes_.size()); ++id) {
    const Node& n = nodes_[id];
    if (n.is_leaf() && n.size != 0.0) {
      problems.push_back(absl::StrCat("leaf '", n.label, "' has size ",
                                      n.size, ", expected 0"));
    }
    if (n.parent >= 0 && nodes_[n.parent].size < n.size) {
      problems.push_back(absl::StrCat(
          "size decreases from '", n.label, "' (", n.size, ") to parent '",
          nodes_[n.parent].label, "' (", nodes_[n.parent].size, ")"));
    }
  }
  if (leaf_index_.size() >= 2 && !(root_size() > 0.0)) {
    problems.push_back("root size must be > 0 when the tree has >= 2 leaves");
  }
  return problems;
}

}  // namespace dqm
