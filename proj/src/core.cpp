#include "aptmine/core.hpp"

#include "aptmine/errors.hpp"

#include <algorithm>

namespace aptmine {

std::string to_string(const GroundAtom &atom) {
  std::string out = atom.predicate.name;
  if (atom.args.empty()) return out;
  out += '(';
  for (std::size_t i = 0; i < atom.args.size(); ++i) {
    if (i) out += ',';
    out += atom.args[i];
  }
  out += ')';
  return out;
}

// ---------------------------------------------------------------------------
// AtomRegistry

void AtomRegistry::check_mutable() const {
  if (frozen_) throw std::logic_error("atom registry is frozen");
}

AtomId AtomRegistry::intern(const Predicate &predicate, const std::vector<std::string> &args) {
  if (predicate.name.empty()) throw std::invalid_argument("predicate name must be non-empty");
  if (args.size() != predicate.arity)
    throw ArityError("predicate " + predicate.name + " expects " + std::to_string(predicate.arity) +
                     " argument(s), got " + std::to_string(args.size()));
  if (auto known = arity_.find(predicate.name); known != arity_.end() && known->second != predicate.arity)
    throw ArityError("predicate " + predicate.name + " registered with arity " + std::to_string(known->second) +
                     ", got " + std::to_string(predicate.arity));

  auto key = std::make_pair(predicate.name, args);
  if (auto it = index_.find(key); it != index_.end()) return it->second;

  check_mutable();
  const auto id = static_cast<AtomId>(atoms_.size());
  atoms_.push_back(GroundAtom{predicate, args});
  action_.push_back(false);
  env_.push_back(true);
  index_.emplace(std::move(key), id);
  arity_.emplace(predicate.name, predicate.arity);
  return id;
}

AtomId AtomRegistry::intern(const std::string &name, const std::vector<std::string> &args) {
  return intern(Predicate{name, args.size()}, args);
}

std::optional<AtomId> AtomRegistry::find(const std::string &name, const std::vector<std::string> &args) const {
  if (auto it = index_.find(std::make_pair(name, args)); it != index_.end()) return it->second;
  return std::nullopt;
}

const GroundAtom &AtomRegistry::atom(AtomId id) const {
  if (id >= atoms_.size()) throw std::out_of_range("unknown atom id " + std::to_string(id));
  return atoms_[id];
}

void AtomRegistry::set_action(AtomId id, bool on) {
  check_mutable();
  action_.at(id) = on;
}

void AtomRegistry::set_environmental(AtomId id, bool on) {
  check_mutable();
  env_.at(id) = on;
}

std::vector<AtomId> AtomRegistry::action_atoms() const {
  std::vector<AtomId> out;
  for (AtomId i = 0; i < atoms_.size(); ++i)
    if (action_[i]) out.push_back(i);
  return out;
}

std::vector<AtomId> AtomRegistry::environmental_atoms() const {
  std::vector<AtomId> out;
  for (AtomId i = 0; i < atoms_.size(); ++i)
    if (env_[i]) out.push_back(i);
  return out;
}

// ---------------------------------------------------------------------------
// World / Conjunction

World::World(std::size_t atom_count, const std::vector<AtomId> &members) : bits_(atom_count) {
  for (AtomId id : members) {
    if (id >= atom_count) throw std::invalid_argument("world member " + std::to_string(id) + " is not registered");
    bits_.set(id);
  }
}

std::vector<AtomId> World::members() const {
  std::vector<AtomId> out;
  for (std::size_t i : bits_.members()) out.push_back(static_cast<AtomId>(i));
  return out;
}

Conjunction::Conjunction(std::vector<AtomId> atoms) : atoms_(std::move(atoms)) {
  if (atoms_.empty()) throw std::invalid_argument("conjunction must contain at least one atom");
  std::sort(atoms_.begin(), atoms_.end());
  atoms_.erase(std::unique(atoms_.begin(), atoms_.end()), atoms_.end());
}

bool Conjunction::contains(AtomId id) const noexcept {
  return std::binary_search(atoms_.begin(), atoms_.end(), id);
}

Conjunction Conjunction::merged(const Conjunction &other) const {
  std::vector<AtomId> all;
  std::set_union(atoms_.begin(), atoms_.end(), other.atoms_.begin(), other.atoms_.end(), std::back_inserter(all));
  return Conjunction(std::move(all));
}

// ---------------------------------------------------------------------------
// Thread

Thread::Thread(std::size_t atom_count, std::vector<std::vector<AtomId>> worlds) : atom_count_(atom_count) {
  if (worlds.empty()) throw std::invalid_argument("thread must contain at least one time point");
  const std::size_t t_max = worlds.size();
  worlds_.reserve(t_max);
  occurrences_.assign(atom_count, BitSet(t_max));
  for (std::size_t i = 0; i < t_max; ++i) {
    worlds_.emplace_back(atom_count, worlds[i]);
    for (AtomId id : worlds[i]) occurrences_[id].set(i);
  }
  with_successor_ = BitSet(t_max);
  for (std::size_t i = 0; i + 1 < t_max; ++i) with_successor_.set(i);
}

void Thread::check_time(TimeIndex t) const {
  if (t < 1 || t > worlds_.size())
    throw TimeRangeError("time index " + std::to_string(t) + " outside 1.." + std::to_string(worlds_.size()));
}

const World &Thread::world(TimeIndex t) const {
  check_time(t);
  return worlds_[t - 1];
}

std::vector<TimeIndex> Thread::occurrence_times(AtomId id) const {
  std::vector<TimeIndex> out;
  for (std::size_t i : occurrences_.at(id).members()) out.push_back(i + 1);
  return out;
}

BitSet Thread::conjunction_occurrences(const Conjunction &c) const {
  BitSet out = occurrences_.at(c.atoms().front());
  for (std::size_t i = 1; i < c.size(); ++i) out &= occurrences_.at(c.atoms()[i]);
  return out;
}

// ---------------------------------------------------------------------------
// Formula

Formula Formula::atom(AtomId id) { return Formula(std::make_shared<const Node>(Node{id})); }
Formula Formula::negation(Formula f) { return Formula(std::make_shared<const Node>(Node{Not{std::move(f)}})); }
Formula Formula::conjunction(Formula lhs, Formula rhs) {
  return Formula(std::make_shared<const Node>(Node{And{std::move(lhs), std::move(rhs)}}));
}
Formula Formula::disjunction(Formula lhs, Formula rhs) {
  return Formula(std::make_shared<const Node>(Node{Or{std::move(lhs), std::move(rhs)}}));
}

Formula Formula::of(const Conjunction &c) {
  Formula f = atom(c.atoms().front());
  for (std::size_t i = 1; i < c.size(); ++i) f = conjunction(std::move(f), atom(c.atoms()[i]));
  return f;
}

namespace {

bool holds(const World &world, const Formula &f) {
  struct Visitor {
    const World &world;
    bool operator()(AtomId id) const { return world.contains(id); }
    bool operator()(const Formula::Not &n) const { return !holds(world, n.operand); }
    bool operator()(const Formula::And &a) const { return holds(world, a.lhs) && holds(world, a.rhs); }
    bool operator()(const Formula::Or &o) const { return holds(world, o.lhs) || holds(world, o.rhs); }
  };
  return std::visit(Visitor{world}, f.node().value);
}

} // namespace

bool satisfies(const Thread &thread, TimeIndex t, const Formula &f) { return holds(thread.world(t), f); }

bool satisfies_conjunction(const Thread &thread, TimeIndex t, const Conjunction &c) {
  const World &w = thread.world(t);
  return std::all_of(c.atoms().begin(), c.atoms().end(), [&](AtomId id) { return w.contains(id); });
}

} // namespace aptmine
