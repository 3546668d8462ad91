#include "hierdis/hierarchy.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

namespace hierdis {

using nlohmann::json;

bool Categorical::operator==(const Categorical& o) const {
  return name == o.name && options == o.options;
}
bool DimensionGroup::operator==(const DimensionGroup& o) const {
  return continuous_dims == o.continuous_dims && categorical == o.categorical;
}
bool CategoricalOption::operator==(const CategoricalOption& o) const {
  return label == o.label && child == o.child;
}

namespace {

void validate_group(const DimensionGroup& g, std::unordered_set<std::string>& names) {
  for (const auto& d : g.continuous_dims) {
    if (d.empty()) throw HierarchyError("empty dimension name");
    if (!names.insert(d).second)
      throw HierarchyError("duplicate dimension name: " + d);
  }
  if (g.categorical) {
    if (g.categorical->options.empty())
      throw HierarchyError("categorical '" + g.categorical->name + "' has no options");
    if (!names.insert(g.categorical->name).second)
      throw HierarchyError("duplicate dimension name: " + g.categorical->name);
    for (const auto& opt : g.categorical->options) validate_group(opt.child, names);
  }
}

}  // namespace

void DimensionHierarchy::validate() const {
  std::unordered_set<std::string> names;
  validate_group(root, names);
}

HierarchyIndex::HierarchyIndex(const DimensionHierarchy& h) : hierarchy_(h) {
  hierarchy_.validate();

  // Depth-first pre-order: group, its dims, its categorical, then children.
  struct Walker {
    HierarchyIndex& ix;
    int walk(const DimensionGroup& g, int parent_group, int parent_cat,
             int parent_option, int depth) {
      int gid = static_cast<int>(ix.groups_.size());
      ix.groups_.push_back({parent_group, parent_cat, parent_option, {}, -1, depth});
      for (const auto& d : g.continuous_dims) {
        int did = static_cast<int>(ix.dims_.size());
        ix.dims_.push_back({d, gid});
        ix.groups_[gid].dims.push_back(did);
      }
      if (g.categorical) {
        int cid = static_cast<int>(ix.cats_.size());
        ix.groups_[gid].cat = cid;
        ix.cats_.push_back({gid, g.categorical->name, {}, {}});
        for (const auto& opt : g.categorical->options)
          ix.cats_[cid].option_labels.push_back(opt.label);
        for (int o = 0; o < static_cast<int>(g.categorical->options.size()); ++o) {
          int child = walk(g.categorical->options[o].child, gid, cid, o, depth + 1);
          ix.cats_[cid].children.push_back(child);
        }
      }
      return gid;
    }
  };
  Walker{*this}.walk(hierarchy_.root, -1, -1, -1, 0);

  int ng = num_groups();
  prefix_.assign(ng, 0);
  ancestors_.resize(ng);
  for (int g = 0; g < ng; ++g) {
    int p = groups_[g].parent_group;
    if (p >= 0) {
      prefix_[g] = prefix_[p] + static_cast<int>(groups_[p].dims.size());
      ancestors_[g] = ancestors_[p];
      ancestors_[g].emplace_back(groups_[g].parent_cat, groups_[g].parent_option);
    }
  }
  // Children have larger pre-order ids, so one reverse sweep suffices.
  min_total_.assign(ng, 0);
  for (int g = ng - 1; g >= 0; --g) {
    int own = static_cast<int>(groups_[g].dims.size());
    if (groups_[g].cat < 0) {
      min_total_[g] = own;
    } else {
      int best = std::numeric_limits<int>::max();
      for (int child : cats_[groups_[g].cat].children)
        best = std::min(best, min_total_[child]);
      min_total_[g] = own + best;
    }
  }
}

int HierarchyIndex::dim_id(const std::string& name) const {
  for (int i = 0; i < num_dims(); ++i)
    if (dims_[i].name == name) return i;
  return -1;
}

PathAssignment HierPath::assignment(const HierarchyIndex& idx) const {
  PathAssignment a(idx.num_cats(), -1);
  for (auto [cat, opt] : choices) a[cat] = opt;
  return a;
}

std::vector<HierPath> enumerate_paths(const HierarchyIndex& idx) {
  std::vector<HierPath> out;
  HierPath cur;
  auto dfs = [&](auto&& self, int g) -> void {
    cur.groups.push_back(g);
    int cat = idx.groups()[g].cat;
    if (cat < 0) {
      out.push_back(cur);
    } else {
      const auto& c = idx.cats()[cat];
      for (int o = 0; o < static_cast<int>(c.children.size()); ++o) {
        cur.choices.emplace_back(cat, o);
        self(self, c.children[o]);
        cur.choices.pop_back();
      }
    }
    cur.groups.pop_back();
  };
  dfs(dfs, 0);
  return out;
}

int min_downstream_dim(const HierarchyIndex& idx, int group) {
  return idx.prefix_dims(group) + idx.min_total(group);
}

std::vector<int> path_signature(const HierarchyIndex& idx, const HierPath& p) {
  std::vector<int> sig;
  sig.reserve(p.groups.size());
  for (int g : p.groups) sig.push_back(min_downstream_dim(idx, g));
  return sig;
}

int path_id_of_assignment(const HierarchyIndex& idx,
                          const std::vector<HierPath>& paths,
                          const PathAssignment& a) {
  if (static_cast<int>(a.size()) != idx.num_cats())
    throw HierarchyError("assignment length does not match categorical count");
  // Walk down taking the chosen option at each on-path categorical.
  int g = 0;
  for (;;) {
    int cat = idx.groups()[g].cat;
    if (cat < 0) break;
    int opt = a[cat];
    if (opt < 0)
      throw HierarchyError("assignment undefined at on-path categorical '" +
                           idx.cats()[cat].name + "'");
    if (opt >= static_cast<int>(idx.cats()[cat].children.size()))
      throw HierarchyError("assignment references nonexistent option of '" +
                           idx.cats()[cat].name + "'");
    g = idx.cats()[cat].children[opt];
  }
  for (int i = 0; i < static_cast<int>(paths.size()); ++i)
    if (paths[i].groups.back() == g) return i;
  throw HierarchyError("no path ends at resolved leaf group");
}

FlatLayout::FlatLayout(const HierarchyIndex& idx) {
  continuous_slots_.assign(idx.num_dims(), -1);
  dim_slot_.assign(idx.num_dims(), -1);
  option_slots_.resize(idx.num_cats());

  auto walk = [&](auto&& self, int g) -> void {
    const auto& group = idx.groups()[g];
    for (int d : group.dims) {
      Slot s;
      s.kind = SlotKind::Continuous;
      s.group = g;
      s.dim = d;
      s.name = idx.dims()[d].name;
      s.mask_ancestors = idx.ancestors(g);
      dim_slot_[d] = static_cast<int>(slots_.size());
      slots_.push_back(std::move(s));
    }
    if (group.cat >= 0) {
      const auto& c = idx.cats()[group.cat];
      option_slots_[group.cat].resize(c.children.size());
      for (int o = 0; o < static_cast<int>(c.children.size()); ++o) {
        Slot s;
        s.kind = SlotKind::Option;
        s.group = g;
        s.cat = group.cat;
        s.option = o;
        s.name = c.name + "=" + c.option_labels[o];
        s.mask_ancestors = idx.ancestors(g);
        option_slots_[group.cat][o] = static_cast<int>(slots_.size());
        slots_.push_back(std::move(s));
      }
      for (int child : c.children) self(self, child);
    }
  };
  walk(walk, 0);

  continuous_slots_.clear();
  for (int i = 0; i < size(); ++i)
    if (slots_[i].kind == SlotKind::Continuous) continuous_slots_.push_back(i);
}

std::vector<std::uint8_t> groups_on_path(const HierarchyIndex& idx,
                                         const PathAssignment& a) {
  std::vector<std::uint8_t> on(idx.num_groups(), 0);
  int g = 0;
  for (;;) {
    on[g] = 1;
    int cat = idx.groups()[g].cat;
    if (cat < 0) break;
    if (static_cast<int>(a.size()) <= cat)
      throw HierarchyError("assignment too short");
    int opt = a[cat];
    if (opt < 0) break;  // path stops here (partial assignment)
    if (opt >= static_cast<int>(idx.cats()[cat].children.size()))
      throw HierarchyError("assignment references nonexistent option of '" +
                           idx.cats()[cat].name + "'");
    g = idx.cats()[cat].children[opt];
  }
  return on;
}

ActivationMask hard_mask(const HierarchyIndex& idx, const FlatLayout& layout,
                         const PathAssignment& a) {
  if (static_cast<int>(a.size()) != idx.num_cats())
    throw HierarchyError("assignment length does not match categorical count");
  // Validate on-path categoricals are defined before masking.
  {
    int g = 0;
    for (;;) {
      int cat = idx.groups()[g].cat;
      if (cat < 0) break;
      int opt = a[cat];
      if (opt < 0)
        throw HierarchyError("assignment undefined at on-path categorical '" +
                             idx.cats()[cat].name + "'");
      if (opt >= static_cast<int>(idx.cats()[cat].children.size()))
        throw HierarchyError("assignment references nonexistent option of '" +
                             idx.cats()[cat].name + "'");
      g = idx.cats()[cat].children[opt];
    }
  }
  auto on = groups_on_path(idx, a);
  ActivationMask m(layout.size(), 0.0);
  for (int i = 0; i < layout.size(); ++i) {
    const auto& s = layout.slots()[i];
    if (!on[s.group]) continue;
    if (s.kind == FlatLayout::SlotKind::Continuous) {
      m[i] = 1.0;
    } else {
      m[i] = (a[s.cat] == s.option) ? 1.0 : 0.0;
    }
  }
  return m;
}

// ---------------------------------------------------------------------------
// Transforms
// ---------------------------------------------------------------------------

namespace {

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

void erase_name(std::vector<std::string>& v, const std::string& s) {
  v.erase(std::remove(v.begin(), v.end(), s), v.end());
}

// Finds the group owning a categorical whose option children each directly
// contain exactly one of `dims`; applies the merge there.
bool try_merge_up(DimensionGroup& g, const std::vector<std::string>& dims,
                  const std::string& merged_name) {
  if (g.categorical) {
    auto& opts = g.categorical->options;
    bool applicable = opts.size() == dims.size();
    std::vector<std::string> found;
    if (applicable) {
      for (auto& opt : opts) {
        int hits = 0;
        std::string hit;
        for (const auto& d : dims)
          if (contains(opt.child.continuous_dims, d)) {
            ++hits;
            hit = d;
          }
        if (hits != 1) {
          applicable = false;
          break;
        }
        found.push_back(hit);
      }
    }
    if (applicable) {
      std::vector<std::string> sorted = found;
      std::sort(sorted.begin(), sorted.end());
      std::vector<std::string> want = dims;
      std::sort(want.begin(), want.end());
      if (sorted == want) {
        for (size_t o = 0; o < opts.size(); ++o)
          erase_name(opts[o].child.continuous_dims, found[o]);
        g.continuous_dims.push_back(merged_name);
        return true;
      }
    }
    for (auto& opt : opts)
      if (try_merge_up(opt.child, dims, merged_name)) return true;
  }
  return false;
}

bool try_push_down(DimensionGroup& g, const std::string& dim) {
  if (contains(g.continuous_dims, dim) && g.categorical) {
    erase_name(g.continuous_dims, dim);
    for (auto& opt : g.categorical->options)
      opt.child.continuous_dims.push_back(dim + "/" + opt.label);
    return true;
  }
  if (g.categorical) {
    for (auto& opt : g.categorical->options)
      if (try_push_down(opt.child, dim)) return true;
  }
  return false;
}

}  // namespace

DimensionHierarchy merge_up(const DimensionHierarchy& h,
                            const std::vector<std::string>& dims,
                            const std::string& merged_name) {
  if (dims.empty()) throw HierarchyError("merge_up: empty dim set");
  DimensionHierarchy out = h;
  if (!try_merge_up(out.root, dims, merged_name))
    throw HierarchyError(
        "merge_up: dims are not one-per-sibling-option-group of a common categorical");
  out.validate();
  return out;
}

DimensionHierarchy push_down(const DimensionHierarchy& h, const std::string& dim) {
  DimensionHierarchy out = h;
  if (!try_push_down(out.root, dim))
    throw HierarchyError("push_down: '" + dim +
                         "' is not in a group owning a categorical");
  out.validate();
  return out;
}

// ---------------------------------------------------------------------------
// JSON format
// ---------------------------------------------------------------------------

namespace {

constexpr const char* kHierVersion = "hierdis-hierarchy/1";

json group_to_json(const DimensionGroup& g) {
  json j;
  j["continuous"] = g.continuous_dims;
  if (g.categorical) {
    json opts = json::array();
    for (const auto& opt : g.categorical->options)
      opts.push_back({{"label", opt.label}, {"child", group_to_json(opt.child)}});
    j["categorical"] = {{"name", g.categorical->name}, {"options", opts}};
  }
  return j;
}

void reject_unknown(const json& j, std::initializer_list<const char*> keys,
                    const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : keys)
      if (it.key() == k) known = true;
    if (!known)
      throw ParseError("unknown field '" + it.key() + "' at " + where);
  }
}

DimensionGroup group_from_json(const json& j, const std::string& where) {
  if (!j.is_object()) throw ParseError("expected object at " + where);
  reject_unknown(j, {"continuous", "categorical"}, where);
  DimensionGroup g;
  if (j.contains("continuous")) {
    const auto& c = j.at("continuous");
    if (!c.is_array()) throw ParseError("'continuous' must be an array at " + where);
    for (const auto& d : c) {
      if (!d.is_string()) throw ParseError("dimension names must be strings at " + where);
      g.continuous_dims.push_back(d.get<std::string>());
    }
  }
  if (j.contains("categorical") && !j.at("categorical").is_null()) {
    const auto& c = j.at("categorical");
    std::string cw = where + ".categorical";
    if (!c.is_object()) throw ParseError("expected object at " + cw);
    reject_unknown(c, {"name", "options"}, cw);
    Categorical cat;
    if (!c.contains("name") || !c.at("name").is_string())
      throw ParseError("missing 'name' at " + cw);
    cat.name = c.at("name").get<std::string>();
    if (!c.contains("options") || !c.at("options").is_array())
      throw ParseError("missing 'options' at " + cw);
    int oi = 0;
    for (const auto& jo : c.at("options")) {
      std::string ow = cw + ".options[" + std::to_string(oi++) + "]";
      if (!jo.is_object()) throw ParseError("expected object at " + ow);
      reject_unknown(jo, {"label", "child"}, ow);
      CategoricalOption opt;
      if (!jo.contains("label") || !jo.at("label").is_string())
        throw ParseError("missing 'label' at " + ow);
      opt.label = jo.at("label").get<std::string>();
      if (!jo.contains("child"))
        throw ParseError("missing 'child' at " + ow);
      opt.child = group_from_json(jo.at("child"), ow + ".child");
      cat.options.push_back(std::move(opt));
    }
    g.categorical = std::move(cat);
  }
  return g;
}

}  // namespace

std::string serialize_hierarchy(const DimensionHierarchy& h) {
  json j;
  j["version"] = kHierVersion;
  j["root"] = group_to_json(h.root);
  return j.dump(2);
}

DimensionHierarchy parse_hierarchy(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("expected top-level object");
  reject_unknown(j, {"version", "root"}, "document");
  if (!j.contains("version") || j.at("version") != kHierVersion)
    throw ParseError("missing or unsupported version (want '" +
                     std::string(kHierVersion) + "')");
  if (!j.contains("root")) throw ParseError("missing 'root'");
  DimensionHierarchy h{group_from_json(j.at("root"), "root")};
  h.validate();
  return h;
}

void save_hierarchy(const DimensionHierarchy& h, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << serialize_hierarchy(h) << "\n";
}

DimensionHierarchy load_hierarchy(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_hierarchy(ss.str());
}

}  // namespace hierdis
