#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "uwbsd/detect.hpp"
#include "uwbsd/metrics.hpp"
#include "uwbsd/search_tree.hpp"

namespace uwbsd::detect {

namespace {

/// Working state of one search: radius, best sequence and metric, the
/// counterhypothesis metrics and the path metrics λ_0..λ_L.
struct SdState {
  explicit SdState(std::size_t L)
      : best(L), lambda_counter(L, kInfinity), path_metric(L + 1, 0.0) {}

  double radius = kInfinity;
  double lambda_best = kInfinity;
  Hypothesis best;
  std::vector<double> lambda_counter;
  std::vector<double> path_metric;
  std::uint64_t nodes_visited = 0;
};

void clip_counters(SdState& s, double lambda_max) {
  const double ceiling = s.lambda_best + lambda_max;
  for (double& c : s.lambda_counter) c = std::min(c, ceiling);
}

/// R = max{ max_{k=i..L} Λ̄_k, max_{l<i, a_l != a_l^MSDD} Λ̄_l }.
double search_radius(const SdState& s, const SearchTree& tree, std::size_t depth) {
  const auto best = s.best.symbols();
  double r = -kInfinity;
  for (std::size_t l = 1; l < depth; ++l) {
    if (tree.symbol(l) != best[l - 1]) r = std::max(r, s.lambda_counter[l - 1]);
  }
  for (std::size_t k = depth; k <= tree.block_size(); ++k) r = std::max(r, s.lambda_counter[k - 1]);
  return r;
}

}  // namespace

SoftDecision sosd(const AcrMatrix& z, const DetectorConfig& cfg, SearchTrace* trace) {
  cfg.validate();
  const std::size_t L = z.block_size();
  if (cfg.block_size != L) {
    throw std::invalid_argument("sosd: DetectorConfig block size does not match AcrMatrix");
  }
  if (cfg.llr_max > 0.0 && !(z.sigma_n2() > 0.0)) {
    throw std::invalid_argument("sosd: sigma_n2 must be > 0 for soft output");
  }
  if (trace != nullptr && L > 62) throw std::invalid_argument("sosd: tracing supports L <= 62");

  const double scale = z.sigma_n2() * static_cast<double>(L + 1);
  const double lambda_max = cfg.llr_max == 0.0 ? 0.0 : scale * cfg.llr_max;
  const double r_stop = cfg.use_stopping_criterion ? stopping_radius(z) : -kInfinity;

  SdState s(L);
  SearchTree tree(z);
  bool terminated_early = false;

  auto visit = [&](SearchTree::Step step) {
    ++s.nodes_visited;
    if (trace != nullptr) trace->visited.push_back(tree.node_id(step.depth));
    return step;
  };

  SearchTree::Step step = visit(tree.find_best(1));
  std::size_t i = 1;
  double delta = step.delta;

  while (i != 0) {
    s.path_metric[i] = s.path_metric[i - 1] + delta;
    if (s.path_metric[i] < s.radius) {
      if (i != L) {
        ++i;
        step = visit(tree.find_best(i));
        delta = step.delta;
      } else {
        const double leaf = s.path_metric[L];
        const auto best = s.best.symbols();
        if (leaf < s.lambda_best) {
          for (std::size_t l = 1; l <= L; ++l) {
            if (tree.symbol(l) != best[l - 1]) s.lambda_counter[l - 1] = s.lambda_best;
          }
          std::copy(tree.path().begin(), tree.path().end(), s.best.symbols().begin());
          s.lambda_best = leaf;
          if (s.lambda_best <= r_stop) {
            terminated_early = true;
            break;
          }
        } else {
          for (std::size_t l = 1; l <= L; ++l) {
            if (tree.symbol(l) != best[l - 1]) {
              s.lambda_counter[l - 1] = std::min(s.lambda_counter[l - 1], leaf);
            }
          }
        }
        clip_counters(s, lambda_max);
        // The sibling leaf may still improve Λ̄_L, so enumeration resumes at
        // the leaf level; find_next ascends by itself once both are done.
        step = tree.find_next(i);
        if (step.depth == 0) break;
        visit(step);
        i = step.depth;
        delta = step.delta;
      }
    } else {
      step = tree.find_next(i - 1);
      if (step.depth == 0) break;
      visit(step);
      i = step.depth;
      delta = step.delta;
    }
    s.radius = search_radius(s, tree, i);
  }

  if (terminated_early) clip_counters(s, lambda_max);

  SoftDecision out;
  out.hard = s.best;
  out.lambda_best = s.lambda_best;
  out.lambda_counter = s.lambda_counter;
  out.nodes_visited = s.nodes_visited;
  out.terminated_early = terminated_early;
  out.llr.assign(L, 0.0);
  out.unresolved.assign(L, false);
  if (cfg.llr_max == 0.0) return out;

  const double ceiling = 2.0 * abs_sum(z);
  for (std::size_t i = 1; i <= L; ++i) {
    double counter = s.lambda_counter[i - 1];
    if (std::isinf(counter)) {
      out.unresolved[i - 1] = true;
      counter = std::max(ceiling, s.lambda_best);
    }
    double llr = s.best.at(i) * (counter - s.lambda_best) / scale;
    out.llr[i - 1] = std::clamp(llr, -cfg.llr_max, cfg.llr_max);
  }
  return out;
}

}  // namespace uwbsd::detect
