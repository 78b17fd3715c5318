#pragma once

#include "aptmine/bitset.hpp"

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace aptmine {

/// Dense identifier assigned in interning order.
using AtomId = std::uint32_t;

/// 1-based time point, 1..t_max.
using TimeIndex = std::size_t;

struct Predicate {
  std::string name;
  std::size_t arity = 0;

  friend bool operator==(const Predicate &, const Predicate &) = default;
};

struct GroundAtom {
  Predicate predicate;
  std::vector<std::string> args;

  friend bool operator==(const GroundAtom &, const GroundAtom &) = default;
};

/// "name(arg1,arg2)"; a nullary atom prints as its bare name.
std::string to_string(const GroundAtom &atom);

/// Bijection AtomId <-> GroundAtom plus the action/environmental partition.
///
/// Atoms are environmental by default. Action atoms may also be environmental,
/// which is the usual configuration (spike atoms are both). Once frozen the
/// registry rejects further mutation.
class AtomRegistry {
public:
  /// Returns the existing id for predicate+args or assigns the next dense id.
  /// Throws ArityError when args.size() != predicate.arity or when the
  /// predicate name was registered earlier with a different arity.
  AtomId intern(const Predicate &predicate, const std::vector<std::string> &args);
  /// Shorthand that takes the arity from args.size().
  AtomId intern(const std::string &name, const std::vector<std::string> &args);

  std::optional<AtomId> find(const std::string &name, const std::vector<std::string> &args) const;
  const GroundAtom &atom(AtomId id) const;
  std::string name(AtomId id) const { return to_string(atom(id)); }
  std::size_t size() const noexcept { return atoms_.size(); }

  void set_action(AtomId id, bool on = true);
  void set_environmental(AtomId id, bool on = true);
  bool is_action(AtomId id) const { return action_.at(id); }
  bool is_environmental(AtomId id) const { return env_.at(id); }

  /// Sorted ascending.
  std::vector<AtomId> action_atoms() const;
  std::vector<AtomId> environmental_atoms() const;

  void freeze() noexcept { frozen_ = true; }
  bool frozen() const noexcept { return frozen_; }

  friend bool operator==(const AtomRegistry &a, const AtomRegistry &b) {
    return a.atoms_ == b.atoms_ && a.action_ == b.action_ && a.env_ == b.env_;
  }

private:
  void check_mutable() const;

  std::vector<GroundAtom> atoms_;
  std::vector<bool> action_;
  std::vector<bool> env_;
  std::map<std::pair<std::string, std::vector<std::string>>, AtomId> index_;
  std::map<std::string, std::size_t> arity_;
  bool frozen_ = false;
};

/// The set of atoms true at one time point.
class World {
public:
  World() = default;
  World(std::size_t atom_count, const std::vector<AtomId> &members);

  bool contains(AtomId id) const noexcept { return id < bits_.size() && bits_.test(id); }
  std::size_t size() const noexcept { return bits_.count(); }
  /// Sorted ascending.
  std::vector<AtomId> members() const;
  const BitSet &bits() const noexcept { return bits_; }

  friend bool operator==(const World &, const World &) = default;

private:
  BitSet bits_;
};

/// Non-empty set of positive atoms, stored sorted and duplicate-free so that
/// equality and ordering are canonical.
class Conjunction {
public:
  Conjunction(std::initializer_list<AtomId> atoms) : Conjunction(std::vector<AtomId>(atoms)) {}
  /// Throws std::invalid_argument when atoms is empty. Duplicates are collapsed.
  explicit Conjunction(std::vector<AtomId> atoms);

  const std::vector<AtomId> &atoms() const noexcept { return atoms_; }
  /// Dimension of a rule with this precondition.
  std::size_t size() const noexcept { return atoms_.size(); }
  bool contains(AtomId id) const noexcept;
  /// Union of both atom sets.
  Conjunction merged(const Conjunction &other) const;

  friend bool operator==(const Conjunction &, const Conjunction &) = default;
  friend std::strong_ordering operator<=>(const Conjunction &a, const Conjunction &b) {
    return a.atoms_ <=> b.atoms_;
  }

private:
  std::vector<AtomId> atoms_;
};

/// Immutable time-indexed sequence of worlds, 1-based.
///
/// Besides the worlds it keeps one occurrence set per atom (bit t-1 is set
/// when the atom holds at time t); conjunction and rule statistics are
/// computed from those.
class Thread {
public:
  /// Throws std::invalid_argument when worlds is empty or a member id is
  /// >= atom_count.
  Thread(std::size_t atom_count, std::vector<std::vector<AtomId>> worlds);

  std::size_t t_max() const noexcept { return worlds_.size(); }
  std::size_t atom_count() const noexcept { return atom_count_; }

  /// Throws TimeRangeError unless 1 <= t <= t_max.
  const World &world(TimeIndex t) const;
  void check_time(TimeIndex t) const;

  const BitSet &occurrences(AtomId id) const { return occurrences_.at(id); }
  /// Sorted time points at which the atom holds.
  std::vector<TimeIndex> occurrence_times(AtomId id) const;
  /// Time points at which every atom of c holds.
  BitSet conjunction_occurrences(const Conjunction &c) const;
  /// All-ones over 1..t_max-1: time points that have a successor.
  const BitSet &with_successor() const noexcept { return with_successor_; }

  friend bool operator==(const Thread &a, const Thread &b) {
    return a.atom_count_ == b.atom_count_ && a.worlds_ == b.worlds_;
  }

private:
  std::size_t atom_count_;
  std::vector<World> worlds_;
  std::vector<BitSet> occurrences_;
  BitSet with_successor_;
};

/// Ground propositional formula over registered atoms.
class Formula {
public:
  static Formula atom(AtomId id);
  static Formula negation(Formula f);
  static Formula conjunction(Formula lhs, Formula rhs);
  static Formula disjunction(Formula lhs, Formula rhs);
  /// Left-nested And-tree over the atoms of c.
  static Formula of(const Conjunction &c);

  friend Formula operator!(Formula f) { return negation(std::move(f)); }
  friend Formula operator&(Formula a, Formula b) { return conjunction(std::move(a), std::move(b)); }
  friend Formula operator|(Formula a, Formula b) { return disjunction(std::move(a), std::move(b)); }

  struct Not;
  struct And;
  struct Or;
  struct Node;

  const Node &node() const noexcept;

private:
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct Formula::Not {
  Formula operand;
};
struct Formula::And {
  Formula lhs, rhs;
};
struct Formula::Or {
  Formula lhs, rhs;
};
struct Formula::Node {
  std::variant<AtomId, Not, And, Or> value;
};

inline const Formula::Node &Formula::node() const noexcept { return *node_; }

/// Recursive satisfaction Θ[t] |= f. Throws TimeRangeError for t outside 1..t_max.
bool satisfies(const Thread &thread, TimeIndex t, const Formula &f);

/// Θ[t] |= c, i.e. every atom of c is in Θ[t].
bool satisfies_conjunction(const Thread &thread, TimeIndex t, const Conjunction &c);

} // namespace aptmine
