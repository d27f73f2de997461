#include "hlplan/forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace hlplan {

namespace {

using Dataset = std::vector<std::pair<SituationDescriptor, int>>;

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 step keyed by the stream index.
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double gini(const std::array<std::int64_t, 3>& counts, std::int64_t total) {
  if (total == 0) return 0.0;
  double g = 1.0;
  for (std::int64_t c : counts) {
    const double p = static_cast<double>(c) / static_cast<double>(total);
    g -= p * p;
  }
  return g;
}

struct TreeBuilder {
  const Dataset& data;
  std::size_t n_classes;
  int min_leaf;
  int features_per_split;
  std::mt19937_64 rng;
  std::vector<TreeNode> nodes;

  int build(std::vector<std::size_t>& indices, std::size_t lo, std::size_t hi) {
    TreeNode node;
    std::array<std::int64_t, 3> counts{};
    for (std::size_t i = lo; i < hi; ++i) counts[static_cast<std::size_t>(data[indices[i]].second)]++;
    node.counts = counts;

    const auto total = static_cast<std::int64_t>(hi - lo);
    const bool pure =
        std::count_if(counts.begin(), counts.end(), [](std::int64_t c) { return c > 0; }) <= 1;
    if (pure || total < 2 * min_leaf) {
      nodes.push_back(node);
      return static_cast<int>(nodes.size() - 1);
    }

    // Feature subset without replacement.
    std::array<int, kDescriptorSize> feats;
    std::iota(feats.begin(), feats.end(), 0);
    for (int i = 0; i < features_per_split; ++i) {
      std::uniform_int_distribution<int> pick(i, static_cast<int>(kDescriptorSize) - 1);
      std::swap(feats[static_cast<std::size_t>(i)], feats[static_cast<std::size_t>(pick(rng))]);
    }

    int best_feature = -1;
    double best_threshold = 0.0;
    double best_score = std::numeric_limits<double>::infinity();

    std::vector<std::pair<double, int>> column;
    column.reserve(hi - lo);
    for (int fi = 0; fi < features_per_split; ++fi) {
      const int f = feats[static_cast<std::size_t>(fi)];
      column.clear();
      for (std::size_t i = lo; i < hi; ++i) {
        const auto& row = data[indices[i]];
        column.emplace_back(row.first[static_cast<std::size_t>(f)], row.second);
      }
      std::sort(column.begin(), column.end());

      std::array<std::int64_t, 3> left{};
      for (std::size_t i = 1; i < column.size(); ++i) {
        left[static_cast<std::size_t>(column[i - 1].second)]++;
        if (column[i].first <= column[i - 1].first) continue;
        const auto nl = static_cast<std::int64_t>(i);
        const auto nr = total - nl;
        if (nl < min_leaf || nr < min_leaf) continue;
        std::array<std::int64_t, 3> right{};
        for (std::size_t c = 0; c < 3; ++c) right[c] = counts[c] - left[c];
        const double score = (static_cast<double>(nl) * gini(left, nl) +
                              static_cast<double>(nr) * gini(right, nr)) /
                             static_cast<double>(total);
        if (score < best_score - 1e-15) {
          best_score = score;
          best_feature = f;
          best_threshold = 0.5 * (column[i - 1].first + column[i].first);
        }
      }
    }

    if (best_feature < 0) {
      nodes.push_back(node);
      return static_cast<int>(nodes.size() - 1);
    }

    auto mid_it = std::stable_partition(
        indices.begin() + static_cast<std::ptrdiff_t>(lo),
        indices.begin() + static_cast<std::ptrdiff_t>(hi), [&](std::size_t idx) {
          return data[idx].first[static_cast<std::size_t>(best_feature)] <= best_threshold;
        });
    const auto mid = static_cast<std::size_t>(mid_it - indices.begin());

    node.feature = best_feature;
    node.threshold = best_threshold;
    nodes.push_back(node);
    const auto self = static_cast<int>(nodes.size() - 1);
    const int left_child = build(indices, lo, mid);
    const int right_child = build(indices, mid, hi);
    nodes[static_cast<std::size_t>(self)].left = left_child;
    nodes[static_cast<std::size_t>(self)].right = right_child;
    return self;
  }
};

std::vector<TreeNode> grow_tree(const Dataset& data, const std::vector<std::size_t>& sample,
                                std::size_t n_classes, const ForestHyper& hyper, int min_leaf,
                                std::uint64_t seed) {
  TreeBuilder builder{data, n_classes, min_leaf, hyper.features_per_split,
                      std::mt19937_64(seed), {}};
  std::vector<std::size_t> indices = sample;
  builder.build(indices, 0, indices.size());
  return std::move(builder.nodes);
}

std::vector<std::vector<TreeNode>> grow_forest(const Dataset& data, std::size_t n_classes,
                                               const ForestHyper& hyper, int min_leaf,
                                               std::uint64_t seed) {
  std::vector<std::vector<TreeNode>> trees;
  trees.reserve(static_cast<std::size_t>(hyper.n_trees));
  for (int t = 0; t < hyper.n_trees; ++t) {
    const std::uint64_t tree_seed = derive_seed(seed, static_cast<std::uint64_t>(t));
    std::vector<std::size_t> sample;
    sample.reserve(data.size());
    if (hyper.bootstrap) {
      std::mt19937_64 rng(derive_seed(tree_seed, 0xb00f));
      std::uniform_int_distribution<std::size_t> pick(0, data.size() - 1);
      for (std::size_t i = 0; i < data.size(); ++i) sample.push_back(pick(rng));
    } else {
      sample.resize(data.size());
      std::iota(sample.begin(), sample.end(), std::size_t{0});
    }
    trees.push_back(grow_tree(data, sample, n_classes, hyper, min_leaf, tree_seed));
  }
  return trees;
}

const TreeNode& find_leaf(const std::vector<TreeNode>& tree, const SituationDescriptor& desc) {
  const TreeNode* node = &tree.front();
  while (node->feature >= 0) {
    const double v = desc[static_cast<std::size_t>(node->feature)];
    node = &tree[static_cast<std::size_t>(v <= node->threshold ? node->left : node->right)];
  }
  return *node;
}

double forest_accuracy(const ForestModel& model, const Dataset& data) {
  if (data.empty()) return 0.0;
  std::size_t hits = 0;
  for (const auto& [desc, label] : data) {
    if (predict_class(model, desc) == label) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(data.size());
}

}  // namespace

int maneuver_to_class(Maneuver m, DecisionPool pool) {
  if (pool == DecisionPool::TwoWay) return m == Maneuver::CF ? 1 : 0;
  switch (m) {
    case Maneuver::LLC: return 0;
    case Maneuver::CF: return 1;
    case Maneuver::RLC: return 2;
  }
  return 1;
}

const char* class_name(int cls, DecisionPool pool) {
  if (pool == DecisionPool::TwoWay) return cls == 0 ? "LC" : "CF";
  switch (cls) {
    case 0: return "LLC";
    case 1: return "CF";
    case 2: return "RLC";
  }
  return "?";
}

SituationDescriptor encode_situation(const DrivingSituation& situation,
                                     const CostConfig& cfg) {
  SituationDescriptor desc{};
  desc[0] = situation.ego.vs;
  std::size_t idx = 1;
  for (SlotId id : kAllSlots) {
    const Lane lane = (id == SlotId::LF || id == SlotId::LB)   ? Lane::Left
                      : (id == SlotId::RF || id == SlotId::RB) ? Lane::Right
                                                               : Lane::Current;
    const auto& st = situation.slot(id);
    if (!situation.lane_exists(lane)) {
      desc[idx] = 0.0;
      desc[idx + 1] = 0.0;
    } else if (st) {
      desc[idx] = std::abs(st->s - situation.ego.s);
      desc[idx + 1] = st->vs - situation.ego.vs;
    } else {
      desc[idx] = cfg.virtual_distance;
      desc[idx + 1] = is_front_slot(id) ? cfg.virtual_speed : -cfg.virtual_speed;
    }
    idx += 2;
  }
  return desc;
}

ForestModel train_forest(const Dataset& samples, DecisionPool pool,
                         const ForestHyper& hyper, std::uint64_t seed) {
  const auto n_classes = static_cast<std::size_t>(pool);
  std::array<std::int64_t, 3> class_counts{};
  for (const auto& [desc, label] : samples) {
    if (label < 0 || static_cast<std::size_t>(label) >= n_classes)
      throw DataError("train_forest: label outside the decision pool");
    class_counts[static_cast<std::size_t>(label)]++;
  }
  std::size_t present = 0;
  for (std::size_t c = 0; c < n_classes; ++c) {
    if (class_counts[c] > 0) ++present;
  }
  if (present <= 1) throw DataError("train_forest: degenerate single-class input");
  for (std::size_t c = 0; c < n_classes; ++c) {
    if (class_counts[c] < hyper.cv_folds && hyper.min_leaf_grid.size() > 1)
      throw DataError(std::string("train_forest: fewer samples of class ") +
                      class_name(static_cast<int>(c), pool) + " than cv folds");
  }

  // Cross-validated selection of the leaf size, ties toward larger leaves.
  int best_leaf = hyper.min_leaf_grid.front();
  if (hyper.min_leaf_grid.size() > 1) {
    std::vector<std::size_t> order(samples.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 fold_rng(derive_seed(seed, 0xf01d));
    std::shuffle(order.begin(), order.end(), fold_rng);

    double best_acc = -1.0;
    for (int leaf : hyper.min_leaf_grid) {
      double acc_sum = 0.0;
      for (int fold = 0; fold < hyper.cv_folds; ++fold) {
        Dataset train_fold, val_fold;
        for (std::size_t i = 0; i < order.size(); ++i) {
          if (static_cast<int>(i % static_cast<std::size_t>(hyper.cv_folds)) == fold)
            val_fold.push_back(samples[order[i]]);
          else
            train_fold.push_back(samples[order[i]]);
        }
        ForestModel fm;
        fm.pool = pool;
        fm.alpha = hyper.alpha;
        fm.min_samples_leaf = leaf;
        fm.n_trees = hyper.n_trees;
        fm.trees = grow_forest(train_fold, n_classes, hyper, leaf,
                               derive_seed(seed, static_cast<std::uint64_t>(fold) + 0xcull));
        acc_sum += forest_accuracy(fm, val_fold);
      }
      const double acc = acc_sum / static_cast<double>(hyper.cv_folds);
      if (acc >= best_acc - 1e-12) {  // ties (and near-ties) go to the larger leaf
        if (acc > best_acc + 1e-12 || leaf > best_leaf) {
          best_acc = std::max(acc, best_acc);
          best_leaf = leaf;
        }
      }
    }
  }

  ForestModel model;
  model.pool = pool;
  model.seed = seed;
  model.n_trees = hyper.n_trees;
  model.min_samples_leaf = best_leaf;
  model.alpha = hyper.alpha;
  model.trees = grow_forest(samples, n_classes, hyper, best_leaf, seed);
  return model;
}

std::vector<double> predict_proba(const ForestModel& model,
                                  const SituationDescriptor& desc) {
  const std::size_t nc = model.n_classes();
  std::vector<double> probs(nc, 0.0);
  for (const auto& tree : model.trees) {
    const TreeNode& leaf = find_leaf(tree, desc);
    std::int64_t total = 0;
    for (std::size_t c = 0; c < nc; ++c) total += leaf.counts[c];
    const double denom = static_cast<double>(total) + model.alpha * static_cast<double>(nc);
    for (std::size_t c = 0; c < nc; ++c) {
      probs[c] += (static_cast<double>(leaf.counts[c]) + model.alpha) / denom;
    }
  }
  for (double& p : probs) p /= static_cast<double>(model.trees.size());
  return probs;
}

int predict_class(const ForestModel& model, const SituationDescriptor& desc) {
  const auto probs = predict_proba(model, desc);
  return static_cast<int>(std::max_element(probs.begin(), probs.end()) - probs.begin());
}

double rf_incentive_cost(const ForestModel& model, const DrivingSituation& situation,
                         Maneuver decision, const CostConfig& cfg) {
  const auto desc = encode_situation(situation, cfg);
  const auto probs = predict_proba(model, desc);
  const int cls = maneuver_to_class(decision, model.pool);
  return -std::log(probs[static_cast<std::size_t>(cls)]);
}

}  // namespace hlplan
