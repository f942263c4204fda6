#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace hddl::model {

using TypeId = int;
using ConstId = int;

/// Types with multiple inheritance plus the constants (domain constants and
/// problem objects) and their declared types. Type 0 is always `object`.
class TypeHierarchy {
public:
  static constexpr TypeId kObject = 0;

  TypeHierarchy();

  /// Returns the existing id when `name` is already known.
  TypeId add_type(const std::string &name);
  void add_parent(TypeId child, TypeId parent);
  std::optional<TypeId> find_type(std::string_view name) const;
  const std::string &type_name(TypeId t) const { return type_names_[t]; }
  std::size_t type_count() const { return type_names_.size(); }
  const std::vector<TypeId> &parents(TypeId t) const { return parents_[t]; }

  /// Returns the existing id when `name` is already known.
  ConstId add_constant(const std::string &name);
  /// Returns false when the constant already had this type.
  bool add_constant_type(ConstId c, TypeId t);
  std::optional<ConstId> find_constant(std::string_view name) const;
  const std::string &constant_name(ConstId c) const { return constant_names_[c]; }
  std::size_t constant_count() const { return constant_names_.size(); }
  const std::vector<TypeId> &declared_types(ConstId c) const { return constant_types_[c]; }

  /// A cycle in the parent relation, as a list of type ids, if any.
  std::optional<std::vector<TypeId>> find_cycle() const;

  /// Computes the subtype closure and per-type constant lists. Must be
  /// called after the last mutation and only on an acyclic hierarchy.
  void finalize();

  /// Reflexive-transitive subtype relation.
  bool is_subtype(TypeId sub, TypeId super) const;
  /// Some declared type of `c` is a subtype of `t`.
  bool has_type(ConstId c, TypeId t) const;
  /// Constants of type `t` (through subtypes), in declaration order.
  const std::vector<ConstId> &constants_of(TypeId t) const { return members_[t]; }

  friend bool operator==(const TypeHierarchy &a, const TypeHierarchy &b) {
    return a.type_names_ == b.type_names_ && a.parents_ == b.parents_ &&
           a.constant_names_ == b.constant_names_ && a.constant_types_ == b.constant_types_;
  }

private:
  std::vector<std::string> type_names_;
  std::vector<std::vector<TypeId>> parents_;
  std::unordered_map<std::string, TypeId> type_index_;
  std::vector<std::string> constant_names_;
  std::vector<std::vector<TypeId>> constant_types_;
  std::unordered_map<std::string, ConstId> constant_index_;

  std::vector<std::vector<bool>> subtype_; // [sub][super]
  std::vector<std::vector<ConstId>> members_;
};

} // namespace hddl::model
