#include "hierdis/chopsticks.hpp"

#include <cmath>

#include "hierdis/rng.hpp"

namespace hierdis {

ChopsticksVariant chopsticks_variant_from_string(const std::string& s) {
  if (s == "intercept" || s == "inter") return ChopsticksVariant::Intercept;
  if (s == "slope") return ChopsticksVariant::Slope;
  if (s == "both") return ChopsticksVariant::Both;
  if (s == "either") return ChopsticksVariant::Either;
  throw std::invalid_argument("unknown chopsticks variant: " + s);
}

std::string to_string(ChopsticksVariant v) {
  switch (v) {
    case ChopsticksVariant::Intercept: return "intercept";
    case ChopsticksVariant::Slope: return "slope";
    case ChopsticksVariant::Both: return "both";
    case ChopsticksVariant::Either: return "either";
  }
  return "?";
}

void ChopsticksConfig::validate() const {
  if (depth < 2 || depth > 6)
    throw std::invalid_argument("chopsticks depth must be in [2, 6]");
  if (n_samples <= 0) throw std::invalid_argument("n_samples must be positive");
  if (noise_sigma < 0) throw std::invalid_argument("noise_sigma must be >= 0");
}

double chopsticks_continue_prob(int depth, int level) {
  if (level >= depth) return 0.0;
  return static_cast<double>(depth - level) / static_cast<double>(depth - level + 1);
}

namespace {

DimensionGroup empty_group() { return DimensionGroup{}; }

// slope/intercept/both: a chain of depth groups joined by stop/chop choices.
DimensionGroup chain_group(ChopsticksVariant v, int level, int depth) {
  DimensionGroup g;
  std::string lv = std::to_string(level);
  switch (v) {
    case ChopsticksVariant::Intercept: g.continuous_dims = {"b" + lv}; break;
    case ChopsticksVariant::Slope: g.continuous_dims = {"s" + lv}; break;
    case ChopsticksVariant::Both: g.continuous_dims = {"s" + lv, "b" + lv}; break;
    case ChopsticksVariant::Either: break;
  }
  if (level < depth) {
    Categorical c;
    c.name = "chop" + lv;
    c.options.push_back({"stop", empty_group()});
    c.options.push_back({"chop", chain_group(v, level + 1, depth)});
    g.categorical = std::move(c);
  }
  return g;
}

// either: every chop independently offsets the slope or the intercept, so
// each level forks into two sibling groups of one new dim each.
DimensionGroup either_group(const std::string& token, int level, int depth) {
  DimensionGroup g;
  g.continuous_dims = {token};
  if (level < depth) {
    Categorical c;
    c.name = "chop:" + token;
    c.options.push_back({"stop", empty_group()});
    c.options.push_back(
        {"slope", either_group(token + ".s" + std::to_string(level + 1), level + 1, depth)});
    c.options.push_back(
        {"icept", either_group(token + ".i" + std::to_string(level + 1), level + 1, depth)});
    g.categorical = std::move(c);
  }
  return g;
}

}  // namespace

DimensionHierarchy chopsticks_hierarchy(const ChopsticksConfig& cfg) {
  cfg.validate();
  DimensionHierarchy h;
  if (cfg.variant == ChopsticksVariant::Either) {
    Categorical mode;
    mode.name = "mode";
    mode.options.push_back({"slope", either_group("s1", 1, cfg.depth)});
    mode.options.push_back({"icept", either_group("i1", 1, cfg.depth)});
    h.root.categorical = std::move(mode);
  } else {
    h.root = chain_group(cfg.variant, 1, cfg.depth);
  }
  h.validate();
  return h;
}

namespace {

// Dim names encode their role: "s*" offsets the slope, "b*"/"i*" the intercept.
bool dim_is_slope(const std::string& name) {
  auto pos = name.rfind('.');
  char c = (pos == std::string::npos) ? name[0] : name[pos + 1];
  return c == 's';
}

Eigen::VectorXf series_from_pieces(const std::vector<double>& slopes,
                                   const std::vector<double>& icepts) {
  int pieces = static_cast<int>(slopes.size());
  Eigen::VectorXf x(kChopsticksSeriesLen);
  for (int i = 0; i < kChopsticksSeriesLen; ++i) {
    double t = (i + 0.5) / kChopsticksSeriesLen;
    // Piece j covers [1 - 2^-j, 1 - 2^-(j+1)); the last piece runs to 1.
    int j = 0;
    while (j + 1 < pieces && t >= 1.0 - std::ldexp(1.0, -(j + 1))) ++j;
    x[i] = static_cast<float>(icepts[j] + slopes[j] * t);
  }
  return x;
}

}  // namespace

LabeledDataset generate_chopsticks(const ChopsticksConfig& cfg) {
  cfg.validate();
  LabeledDataset ds;
  ds.hierarchy = chopsticks_hierarchy(cfg);
  HierarchyIndex idx(ds.hierarchy);

  int n = cfg.n_samples;
  ds.X.resize(n, kChopsticksSeriesLen);
  ds.V.resize(n, idx.num_dims());
  ds.V.setConstant(std::numeric_limits<double>::quiet_NaN());
  ds.V_active.setZero(n, idx.num_dims());
  ds.A.assign(n, PathAssignment(idx.num_cats(), -1));

  for (int i = 0; i < n; ++i) {
    Rng rng = Rng::stream(cfg.seed, static_cast<std::uint64_t>(i));

    int group = 0;
    if (cfg.variant == ChopsticksVariant::Either) {
      int mode = static_cast<int>(rng.uniform_int(2));
      int cat = idx.groups()[0].cat;
      ds.A[i][cat] = mode;
      group = idx.cats()[cat].children[mode];
    }

    std::vector<double> slopes, icepts;
    double s_cum = 0.0, b_cum = 0.0;
    for (int level = 1;; ++level) {
      // New degrees of freedom for this level, in the group's dim order.
      for (int d : idx.groups()[group].dims) {
        double v = rng.uniform(-1.0, 1.0);
        ds.V(i, d) = v;
        ds.V_active(i, d) = 1;
        if (dim_is_slope(idx.dims()[d].name))
          s_cum += v;
        else
          b_cum += v;
      }
      slopes.push_back(s_cum);
      icepts.push_back(b_cum);

      int cat = idx.groups()[group].cat;
      if (cat < 0) break;  // deepest level
      bool go_on = rng.uniform() < chopsticks_continue_prob(cfg.depth, level);
      if (!go_on) {
        ds.A[i][cat] = 0;  // stop
        break;
      }
      int opt;
      if (cfg.variant == ChopsticksVariant::Either)
        opt = 1 + static_cast<int>(rng.uniform_int(2));  // slope / icept offset
      else
        opt = 1;  // chop
      ds.A[i][cat] = opt;
      group = idx.cats()[cat].children[opt];
    }

    Eigen::VectorXf x = series_from_pieces(slopes, icepts);
    if (cfg.noise_sigma > 0) {
      for (int k = 0; k < kChopsticksSeriesLen; ++k)
        x[k] = static_cast<float>(x[k] + cfg.noise_sigma * rng.normal());
    }
    ds.X.row(i) = x.transpose();
  }

  ds.meta = {{"dataset", "chopsticks"},
             {"variant", to_string(cfg.variant)},
             {"depth", cfg.depth},
             {"noise_sigma", cfg.noise_sigma},
             {"seed", cfg.seed}};
  return ds;
}

Eigen::VectorXf reconstruct_chopsticks_row(
    const ChopsticksConfig& cfg, const HierarchyIndex& idx,
    const Eigen::VectorXd& v_row,
    const Eigen::Matrix<std::uint8_t, Eigen::Dynamic, 1>& active_row,
    const PathAssignment& a) {
  int group = 0;
  if (cfg.variant == ChopsticksVariant::Either) {
    int cat = idx.groups()[0].cat;
    group = idx.cats()[cat].children[a[cat]];
  }
  std::vector<double> slopes, icepts;
  double s_cum = 0.0, b_cum = 0.0;
  for (;;) {
    for (int d : idx.groups()[group].dims) {
      if (!active_row[d])
        throw std::runtime_error("inactive factor on assigned path");
      if (dim_is_slope(idx.dims()[d].name))
        s_cum += v_row[d];
      else
        b_cum += v_row[d];
    }
    slopes.push_back(s_cum);
    icepts.push_back(b_cum);
    int cat = idx.groups()[group].cat;
    if (cat < 0 || a[cat] <= 0) break;
    group = idx.cats()[cat].children[a[cat]];
  }
  return series_from_pieces(slopes, icepts);
}

}  // namespace hierdis
