#pragma once

// Branches, memo tables and the store.
//
// A memo table is a tree of hash tables: the root is probed with the first
// event of a branch, the child it yields with the second, and so on. Each
// node may also hold the value recorded for the branch ending there.

#include <cstdint>
#include <memory>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mfl/ast.hpp"
#include "mfl/errors.hpp"

namespace mfl {

enum class EventKind : std::uint8_t { Bang, Inl, Inr };

struct Event {
  EventKind kind;
  std::int64_t index = 0;  // Bang only

  static Event bang(std::int64_t idx) { return {EventKind::Bang, idx}; }
  static Event inl() { return {EventKind::Inl, 0}; }
  static Event inr() { return {EventKind::Inr, 0}; }
  bool operator==(const Event&) const = default;
};

using Branch = std::vector<Event>;

struct EncodedEvent {
  std::int64_t kind;
  std::int64_t payload;
  bool operator==(const EncodedEvent&) const = default;
};

/// (0, idx) for !idx, (1, 0) for inl, (1, 1) for inr.
EncodedEvent encode_event(const Event& ev);
Event decode_event(const EncodedEvent& enc);

/// Index of a value of indexable type: integers map to themselves, unit to
/// 0, boxes to their tag. Throws EvalError(NonIndexableValue) otherwise.
std::int64_t index_of(const Value& v);

/// Seeded hash of an encoded event.
struct EventHash {
  std::uint64_t seed = 0;
  std::size_t operator()(const EncodedEvent& e) const noexcept;
};

class MemoTable {
 public:
  explicit MemoTable(std::uint64_t seed);
  ~MemoTable();
  MemoTable(const MemoTable&) = delete;
  MemoTable& operator=(const MemoTable&) = delete;

  /// Value recorded at exactly `b`. Costs |b| + 1 probes.
  std::optional<Value> lookup(const Branch& b) const;

  /// Record `v` at `b`. Costs |b| + 1 probes. Throws
  /// EvalError(DuplicateBranch) if `b` is already bound or if binding it
  /// would make one stored branch a strict prefix of another.
  void insert(const Branch& b, Value v);

  /// True when insert(b, _) would succeed. Does not count probes.
  bool can_insert(const Branch& b) const;

  std::size_t size() const { return size_; }
  std::uint64_t probes() const { return probes_; }

  /// All (branch, value) pairs, ordered by encoded branch.
  std::vector<std::pair<Branch, Value>> entries() const;

  // Per-table counters maintained by the memoizing evaluator.
  std::uint64_t hits = 0;
  std::uint64_t misses = 0;

 private:
  struct Node;
  std::unique_ptr<Node> root_;
  std::uint64_t seed_;
  std::size_t size_ = 0;
  mutable std::uint64_t probes_ = 0;
};

/// Tag-indexed registry of boxed values.
class BoxRegistry {
 public:
  /// Register `v` under a fresh tag and return the box value.
  Value alloc(Value v);
  /// Throws EvalError(Stuck) on an unknown tag.
  const Value& unbox(BoxTag tag) const;
  bool contains(BoxTag tag) const;
  std::size_t size() const { return boxes_.size(); }

 private:
  std::vector<Value> boxes_;  // tag t lives at t - 1
};

/// The store: locations to memo tables, plus the box registry.
class Store {
 public:
  explicit Store(std::uint64_t seed);

  /// Bind a fresh location to an empty table.
  Location alloc_table();
  bool contains(Location l) const;
  /// Throws EvalError(Stuck) on an unknown location.
  MemoTable& table(Location l);
  const MemoTable& table(Location l) const;
  std::size_t size() const { return tables_.size(); }

  Value alloc_box(Value v) { return boxes_.alloc(std::move(v)); }
  const Value& unbox(BoxTag tag) const { return boxes_.unbox(tag); }
  BoxRegistry& boxes() { return boxes_; }
  const BoxRegistry& boxes() const { return boxes_; }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t total_probes() const;

 private:
  std::uint64_t seed_;
  std::vector<std::unique_ptr<MemoTable>> tables_;  // location l lives at l - 1
  BoxRegistry boxes_;
};

}  // namespace mfl
