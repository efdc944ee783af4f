#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace hyperrecon {

using NodeId = std::uint32_t;
using Multiplicity = std::uint64_t;

/// Canonical node-set key: strictly increasing node ids.
using NodeSet = std::vector<NodeId>;

struct NodeSetHash {
  using is_transparent = void;
  std::size_t operator()(std::span<const NodeId> key) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL ^ key.size();
    for (NodeId v : key) {
      h ^= v;
      h *= 0x100000001b3ULL;
      h ^= h >> 29;
    }
    return static_cast<std::size_t>(h);
  }
  std::size_t operator()(const NodeSet& key) const noexcept {
    return (*this)(std::span<const NodeId>(key));
  }
};

struct NodeSetEqual {
  using is_transparent = void;
  bool operator()(std::span<const NodeId> a, std::span<const NodeId> b) const noexcept {
    return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin());
  }
};

template <typename V>
using NodeSetMap = std::unordered_map<NodeSet, V, NodeSetHash, NodeSetEqual>;

/// Input error carrying the 1-based line it was detected on.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Raised when a configured computational cap is exceeded.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bidirectional map between external labels and contiguous ids.
class NodeLabels {
 public:
  NodeLabels() = default;

  /// Labels "0", "1", ..., "n-1".
  static NodeLabels numbered(std::size_t n);

  /// Returns the id of `label`, assigning the next free id on first sight.
  NodeId intern(std::string_view label);

  const std::string* find_label(NodeId id) const {
    return id < names_.size() ? &names_[id] : nullptr;
  }
  bool contains(std::string_view label) const;
  NodeId at(std::string_view label) const;
  const std::string& name(NodeId id) const { return names_.at(id); }
  std::size_t size() const noexcept { return names_.size(); }
  const std::vector<std::string>& names() const noexcept { return names_; }

 private:
  struct StringHash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept {
      return std::hash<std::string_view>{}(s);
    }
  };
  std::vector<std::string> names_;
  std::unordered_map<std::string, NodeId, StringHash, std::equal_to<>> index_;
};

}  // namespace hyperrecon
