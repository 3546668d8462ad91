#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hierdis {

struct CategoricalOption;

// A categorical variable: each option leads to a child dimension group
// (possibly the empty group).
struct Categorical {
  std::string name;
  std::vector<CategoricalOption> options;

  bool operator==(const Categorical&) const;
};

// A node of a dimension hierarchy: any number of continuous dimensions plus
// at most one categorical whose options point at child groups.
struct DimensionGroup {
  std::vector<std::string> continuous_dims;
  std::optional<Categorical> categorical;

  bool is_leaf() const { return !categorical.has_value(); }
  bool is_empty() const { return continuous_dims.empty() && is_leaf(); }

  bool operator==(const DimensionGroup&) const;
};

struct CategoricalOption {
  std::string label;
  DimensionGroup child;

  bool operator==(const CategoricalOption&) const;
};

struct HierarchyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Tree of dimension groups. Instances are associated with root-to-leaf paths;
// a dimension is active for an instance exactly when its group lies on the
// instance's path.
struct DimensionHierarchy {
  DimensionGroup root;

  // Throws HierarchyError on duplicate dimension/categorical names or a
  // categorical without options.
  void validate() const;

  bool operator==(const DimensionHierarchy&) const = default;
};

// Per-instance choice of option at each categorical, indexed by the
// categorical's pre-order id. Undefined (off-path) entries are -1.
using PathAssignment = std::vector<int>;

// Per-slot activation weights over a FlatLayout; [0,1] soft or {0,1} hard.
using ActivationMask = std::vector<double>;

// ---------------------------------------------------------------------------
// Indexed view. Groups, categoricals and continuous dims get stable ids in
// depth-first pre-order; all downstream code works against this index.
// ---------------------------------------------------------------------------

class HierarchyIndex {
 public:
  struct Group {
    int parent_group = -1;   // -1 for root
    int parent_cat = -1;     // categorical leading here
    int parent_option = -1;  // option index within parent_cat
    std::vector<int> dims;   // continuous dim ids housed here
    int cat = -1;            // categorical id owned here, -1 if leaf
    int depth = 0;
  };
  struct Cat {
    int group = -1;  // owning group
    std::string name;
    std::vector<std::string> option_labels;
    std::vector<int> children;  // child group id per option
  };
  struct Dim {
    std::string name;
    int group = -1;
  };

  HierarchyIndex() = default;
  explicit HierarchyIndex(const DimensionHierarchy& h);

  const DimensionHierarchy& hierarchy() const { return hierarchy_; }
  const std::vector<Group>& groups() const { return groups_; }
  const std::vector<Cat>& cats() const { return cats_; }
  const std::vector<Dim>& dims() const { return dims_; }
  int num_groups() const { return static_cast<int>(groups_.size()); }
  int num_cats() const { return static_cast<int>(cats_.size()); }
  int num_dims() const { return static_cast<int>(dims_.size()); }

  int dim_id(const std::string& name) const;  // -1 if absent

  // Sum of continuous dims housed strictly above `group`.
  int prefix_dims(int group) const { return prefix_[group]; }
  // Minimum total continuous dims over leaf completions below `group`
  // (including the group's own dims).
  int min_total(int group) const { return min_total_[group]; }

  // (cat, option) pairs on the path from the root down to `group`.
  const std::vector<std::pair<int, int>>& ancestors(int group) const {
    return ancestors_[group];
  }

 private:
  DimensionHierarchy hierarchy_;
  std::vector<Group> groups_;
  std::vector<Cat> cats_;
  std::vector<Dim> dims_;
  std::vector<int> prefix_;
  std::vector<int> min_total_;
  std::vector<std::vector<std::pair<int, int>>> ancestors_;
};

// A root-to-leaf path: the visited groups and the option chosen at each
// categorical along the way.
struct HierPath {
  std::vector<int> groups;
  std::vector<std::pair<int, int>> choices;  // (cat id, option index)

  PathAssignment assignment(const HierarchyIndex& idx) const;
};

std::vector<HierPath> enumerate_paths(const HierarchyIndex& idx);

// Minimum over leaf completions through `group` of the total number of
// active continuous dims from root to leaf.
int min_downstream_dim(const HierarchyIndex& idx, int group);

// min_downstream_dim at each node visited by the path, in order. Two paths
// are compatible for H-error matching iff their signatures are equal.
std::vector<int> path_signature(const HierarchyIndex& idx, const HierPath& p);

// Resolves an assignment to the pre-order id of its path among
// enumerate_paths(idx); throws HierarchyError if the assignment is not
// consistent with the hierarchy.
int path_id_of_assignment(const HierarchyIndex& idx,
                          const std::vector<HierPath>& paths,
                          const PathAssignment& a);

// ---------------------------------------------------------------------------
// Flat layout: ordered slots for every continuous dim and categorical option.
// Order is depth-first pre-order; within a group, continuous dims come before
// the categorical's option block, then each option's subtree in option order.
// ---------------------------------------------------------------------------

class FlatLayout {
 public:
  enum class SlotKind { Continuous, Option };
  struct Slot {
    SlotKind kind;
    int group = -1;
    int dim = -1;     // continuous dim id, if kind == Continuous
    int cat = -1;     // categorical id, if kind == Option
    int option = -1;  // option index within cat
    std::string name;
    // (cat, option) ancestors whose activation gates this slot. For an option
    // slot these are the options above the categorical's own group.
    std::vector<std::pair<int, int>> mask_ancestors;
  };

  FlatLayout() = default;
  explicit FlatLayout(const HierarchyIndex& idx);

  int size() const { return static_cast<int>(slots_.size()); }
  const std::vector<Slot>& slots() const { return slots_; }
  const std::vector<int>& continuous_slots() const { return continuous_slots_; }
  const std::vector<std::vector<int>>& option_slots() const { return option_slots_; }
  int slot_of_dim(int dim) const { return dim_slot_[dim]; }
  int option_slot(int cat, int option) const { return option_slots_[cat][option]; }

 private:
  std::vector<Slot> slots_;
  std::vector<int> continuous_slots_;          // slot id per continuous dim id
  std::vector<std::vector<int>> option_slots_; // [cat][option] -> slot id
  std::vector<int> dim_slot_;
};

// Hard activation mask of an assignment: slots on the assigned path are 1,
// everything else 0. Throws HierarchyError if the assignment references a
// nonexistent option or is undefined at an on-path categorical.
ActivationMask hard_mask(const HierarchyIndex& idx, const FlatLayout& layout,
                         const PathAssignment& a);

// Groups on the assignment's path, as a 0/1 flag per group id.
std::vector<std::uint8_t> groups_on_path(const HierarchyIndex& idx,
                                         const PathAssignment& a);

// ---------------------------------------------------------------------------
// Structure-preserving transforms. Both leave every path's total
// dimensionality profile (min_downstream_dim sequence) unchanged.
// ---------------------------------------------------------------------------

// Relocates a set of dims, one per sibling option group, into the group that
// owns their categorical as a single new dim named `merged_name`.
DimensionHierarchy merge_up(const DimensionHierarchy& h,
                            const std::vector<std::string>& dims,
                            const std::string& merged_name);

// Moves `dim` from a group owning a categorical into every option child,
// duplicated as "<dim>/<option label>".
DimensionHierarchy push_down(const DimensionHierarchy& h, const std::string& dim);

// ---------------------------------------------------------------------------
// Text format (JSON), version "hierdis-hierarchy/1". Unknown fields are
// rejected; parse errors carry a node path.
// ---------------------------------------------------------------------------

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string serialize_hierarchy(const DimensionHierarchy& h);
DimensionHierarchy parse_hierarchy(const std::string& text);
void save_hierarchy(const DimensionHierarchy& h, const std::string& path);
DimensionHierarchy load_hierarchy(const std::string& path);

}  // namespace hierdis
