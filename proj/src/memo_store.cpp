#include "mfl/memo_store.hpp"

#include <algorithm>
#include <string>

namespace mfl {

EncodedEvent encode_event(const Event& ev) {
  switch (ev.kind) {
    case EventKind::Bang: return {0, ev.index};
    case EventKind::Inl: return {1, 0};
    case EventKind::Inr: return {1, 1};
  }
  return {1, 0};
}

Event decode_event(const EncodedEvent& enc) {
  if (enc.kind == 0) return Event::bang(enc.payload);
  return enc.payload == 0 ? Event::inl() : Event::inr();
}

std::int64_t index_of(const Value& v) {
  switch (v->kind) {
    case TermKind::Int: return v->num;
    case TermKind::Unit: return 0;
    case TermKind::BoxVal: return v->num;
    default:
      throw EvalError(EvalErrorKind::NonIndexableValue, "value has no index");
  }
}

namespace {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::size_t EventHash::operator()(const EncodedEvent& e) const noexcept {
  std::uint64_t h = mix64(seed ^ static_cast<std::uint64_t>(e.kind));
  return static_cast<std::size_t>(mix64(h ^ static_cast<std::uint64_t>(e.payload)));
}

struct MemoTable::Node {
  explicit Node(std::uint64_t seed) : children(0, EventHash{seed}) {}
  std::optional<Value> value;
  std::unordered_map<EncodedEvent, std::unique_ptr<Node>, EventHash> children;
};

MemoTable::MemoTable(std::uint64_t seed) : root_(std::make_unique<Node>(seed)), seed_(seed) {}

MemoTable::~MemoTable() = default;

std::optional<Value> MemoTable::lookup(const Branch& b) const {
  const Node* node = root_.get();
  ++probes_;
  for (const Event& ev : b) {
    ++probes_;
    auto it = node->children.find(encode_event(ev));
    if (it == node->children.end()) return std::nullopt;
    node = it->second.get();
  }
  return node->value;
}

bool MemoTable::can_insert(const Branch& b) const {
  const Node* node = root_.get();
  for (const Event& ev : b) {
    if (node->value) return false;
    auto it = node->children.find(encode_event(ev));
    if (it == node->children.end()) return true;
    node = it->second.get();
  }
  return !node->value && node->children.empty();
}

void MemoTable::insert(const Branch& b, Value v) {
  Node* node = root_.get();
  ++probes_;
  for (const Event& ev : b) {
    if (node->value)
      throw EvalError(EvalErrorKind::DuplicateBranch,
                      "a stored branch is a strict prefix of the inserted branch");
    ++probes_;
    auto& child = node->children[encode_event(ev)];
    if (!child) child = std::make_unique<Node>(seed_);
    node = child.get();
  }
  if (node->value) throw EvalError(EvalErrorKind::DuplicateBranch, "branch already bound");
  if (!node->children.empty())
    throw EvalError(EvalErrorKind::DuplicateBranch,
                    "the inserted branch is a strict prefix of a stored branch");
  node->value = std::move(v);
  ++size_;
}

std::vector<std::pair<Branch, Value>> MemoTable::entries() const {
  std::vector<std::pair<Branch, Value>> out;
  Branch path;
  auto walk = [&](auto&& self, const Node& node) -> void {
    if (node.value) out.emplace_back(path, *node.value);
    std::vector<std::pair<EncodedEvent, const Node*>> kids;
    kids.reserve(node.children.size());
    for (const auto& [k, child] : node.children) kids.emplace_back(k, child.get());
    std::sort(kids.begin(), kids.end(), [](const auto& a, const auto& b) {
      return std::pair(a.first.kind, a.first.payload) < std::pair(b.first.kind, b.first.payload);
    });
    for (const auto& [k, child] : kids) {
      path.push_back(decode_event(k));
      self(self, *child);
      path.pop_back();
    }
  };
  walk(walk, *root_);
  return out;
}

Value BoxRegistry::alloc(Value v) {
  boxes_.push_back(std::move(v));
  return mk::box_val(static_cast<BoxTag>(boxes_.size()));
}

bool BoxRegistry::contains(BoxTag tag) const {
  return raw(tag) >= 1 && raw(tag) <= boxes_.size();
}

const Value& BoxRegistry::unbox(BoxTag tag) const {
  if (!contains(tag)) throw EvalError(EvalErrorKind::Stuck, "unknown box tag " + std::to_string(raw(tag)));
  return boxes_[raw(tag) - 1];
}

Store::Store(std::uint64_t seed) : seed_(seed) {}

Location Store::alloc_table() {
  // Each table gets its own hash seed, derived from the store seed.
  tables_.push_back(std::make_unique<MemoTable>(mix64(seed_ + tables_.size() + 1)));
  return static_cast<Location>(tables_.size());
}

bool Store::contains(Location l) const { return raw(l) >= 1 && raw(l) <= tables_.size(); }

MemoTable& Store::table(Location l) {
  if (!contains(l)) throw EvalError(EvalErrorKind::Stuck, "unknown location " + std::to_string(raw(l)));
  return *tables_[raw(l) - 1];
}

const MemoTable& Store::table(Location l) const {
  if (!contains(l)) throw EvalError(EvalErrorKind::Stuck, "unknown location " + std::to_string(raw(l)));
  return *tables_[raw(l) - 1];
}

std::uint64_t Store::total_probes() const {
  std::uint64_t n = 0;
  for (const auto& t : tables_) n += t->probes();
  return n;
}

}  // namespace mfl
