#include "walip/pipeline.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iterator>

#include "walip/error.hpp"
#include "walip/procrustes.hpp"
#include "walip/similarity.hpp"

namespace walip {
namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

constexpr double kReorthogonalizeAbove = 1e-9;

Matrix reorthogonalize(const Matrix& w) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(Eigen::MatrixXd(w), Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().transpose();
}

void gather(const Matrix& a, const Matrix& b, const WordMapping& mapping, Matrix& ta, Matrix& tb) {
  const auto n = static_cast<Eigen::Index>(mapping.size());
  ta.resize(n, a.cols());
  tb.resize(n, b.cols());
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto& p = mapping.pairs()[static_cast<std::size_t>(r)];
    ta.row(r) = a.row(static_cast<Eigen::Index>(p.src));
    tb.row(r) = b.row(static_cast<Eigen::Index>(p.tgt));
  }
}

}  // namespace

WordMapping initial_mapping(const FingerprintTable& src, const FingerprintTable& tgt, double q,
                            std::size_t csls_k, const FilterParams& params) {
  if (src.dim() != tgt.dim()) {
    throw InvalidArgument("fingerprints come from different image sets (" +
                          std::to_string(src.dim()) + " vs " + std::to_string(tgt.dim()) +
                          " images)");
  }
  if (csls_k < 1) throw InvalidArgument("csls_k must be >= 1");
  const FingerprintTable fs = src.sparsified() ? src : visual_word_filter(src, params);
  const FingerprintTable ft = tgt.sparsified() ? tgt : visual_word_filter(tgt, params);
  if (fs.active().empty() || ft.active().empty()) {
    throw InvalidArgument("no active words after visual-word filtering");
  }
  const std::size_t k = std::min({csls_k, fs.active().size(), ft.active().size()});
  const ScoreMatrix scores = csls_matrix(fs.active_rows(), ft.active_rows(), CslsParams{k});
  const WordMapping local = matching_filter(scores, q);

  WordMapping mapping;
  for (const auto& p : local.pairs()) {
    mapping.add(fs.active()[p.src], ft.active()[p.tgt], p.score);
  }
  return mapping;
}

double alignment_loss(const Matrix& mapped_src, const Matrix& tgt, const WordMapping& mapping) {
  if (mapping.empty()) throw InvalidArgument("alignment_loss: empty mapping");
  mapping.check_bounds(static_cast<std::size_t>(mapped_src.rows()),
                       static_cast<std::size_t>(tgt.rows()));
  double diff = 0.0, na = 0.0, nb = 0.0;
  for (const auto& p : mapping.pairs()) {
    const auto a = mapped_src.row(static_cast<Eigen::Index>(p.src));
    const auto b = tgt.row(static_cast<Eigen::Index>(p.tgt));
    diff += (a - b).squaredNorm();
    na += a.squaredNorm();
    nb += b.squaredNorm();
  }
  const double denom = std::sqrt(na) + std::sqrt(nb);
  return denom > 0.0 ? std::sqrt(diff) / denom : 0.0;
}

AlignResult walip_align(const EmbeddingTable& src, const EmbeddingTable& tgt,
                        const WordMapping& init, const PipelineConfig& cfg) {
  cfg.validate();
  if (init.empty()) throw InvalidArgument("walip_align: empty initial mapping");
  if (src.dim() != tgt.dim()) {
    throw InvalidArgument("walip_align: embedding dimensions differ (" +
                          std::to_string(src.dim()) + " vs " + std::to_string(tgt.dim()) + ")");
  }
  init.check_bounds(src.size(), tgt.size());

  const Matrix a = cfg.normalize_embeddings ? normalized_rows(src.matrix()) : src.matrix();
  const Matrix b = cfg.normalize_embeddings ? normalized_rows(tgt.matrix()) : tgt.matrix();
  const auto d = static_cast<Eigen::Index>(src.dim());
  const std::size_t csls_k = std::min({cfg.csls_k, src.size(), tgt.size()});
  const RobustParams robust{cfg.robust_eps, cfg.robust_iters};

  AlignResult result{LinearMap::identity(src.dim()), WordMapping{}, {}, false, {}, {}};
  Matrix w_total = Matrix::Identity(d, d);
  Matrix a_work = a;
  WordMapping current = init;
  std::optional<double> prev_loss;
  std::size_t stage = 0;
  const std::size_t last_stage = cfg.candidate_schedule.size() - 1;
  const std::size_t steps = std::max<std::size_t>(cfg.align_steps, 1);

  Matrix ta, tb;
  for (std::size_t step = 1; step <= steps; ++step) {
    auto t0 = Clock::now();
    gather(a_work, b, current, ta, tb);
    const LinearMap w_step = cfg.procrustes == ProcrustesKind::Robust
                                 ? robust_procrustes(ta, tb, robust)
                                 : procrustes(ta, tb);
    w_total = w_total * w_step.matrix();
    if (orthogonality_error(w_total) > kReorthogonalizeAbove) w_total = reorthogonalize(w_total);
    a_work = a * w_total;
    const double loss = alignment_loss(a_work, b, current);
    result.timings.fit_ms += elapsed_ms(t0);
    if (cfg.align_steps == 0) break;

    t0 = Clock::now();
    const double q = cfg.quantile_schedule_mode == QuantileSchedule::Adaptive
                         ? std::clamp(loss, 0.1, 0.9)
                         : kDiscreteQuantiles[(step - 1) % std::size(kDiscreteQuantiles)];
    const bool converged = prev_loss && std::abs(loss - *prev_loss) < cfg.convergence_tol;
    const bool exhausted = stage == last_stage;
    if (converged && !exhausted) ++stage;
    const std::size_t cand_k = std::min(cfg.candidate_schedule[stage], tgt.size());

    const ScoreMatrix scores = csls_matrix(a_work, b, CslsParams{csls_k});
    const auto candidates = topk_candidates(scores, cand_k);
    WordMapping next = matching_filter(std::span<const Candidate>(candidates), q);
    result.timings.match_ms += elapsed_ms(t0);

    IterationRecord rec;
    rec.step = step;
    rec.loss = loss;
    rec.quantile = q;
    rec.candidate_k = cand_k;
    rec.fit_pairs = current.size();
    rec.pairs = next.size();
    rec.snapshot = std::make_shared<const WordMapping>(next);
    result.history.push_back(std::move(rec));

    if (next.size() < src.dim()) {
      result.collapsed = true;
      result.message = "mapping collapsed to " + std::to_string(next.size()) +
                       " pairs (< dimension " + std::to_string(src.dim()) + ") at step " +
                       std::to_string(step) + "; keeping the last fitted map";
      break;
    }
    current = std::move(next);
    if (converged && exhausted) break;
    prev_loss = loss;
  }

  auto t0 = Clock::now();
  result.map = LinearMap(w_total);
  result.mapping = matching_filter(csls_matrix(a_work, b, CslsParams{csls_k}), 0.0);
  result.timings.final_ms = elapsed_ms(t0);
  return result;
}

std::vector<std::vector<RankedTarget>> rank_translations(const Matrix& src, const Matrix& tgt,
                                                         const LinearMap& map, std::size_t n,
                                                         std::size_t csls_k, bool normalize) {
  if (static_cast<std::size_t>(src.cols()) != map.dim() || src.cols() != tgt.cols()) {
    throw InvalidArgument("rank_translations: dimension mismatch");
  }
  const Matrix a = (normalize ? normalized_rows(src) : src) * map.matrix();
  const Matrix b = normalize ? normalized_rows(tgt) : tgt;
  const auto rows = static_cast<std::size_t>(a.rows());
  const auto cols = static_cast<std::size_t>(b.rows());
  const std::size_t k = std::min({csls_k, rows, cols});
  const std::size_t top = std::min(n, cols);
  const auto cands = topk_candidates(csls_matrix(a, b, CslsParams{k}), top);
  std::vector<std::vector<RankedTarget>> out(rows);
  for (const auto& c : cands) out[c.src].push_back({c.tgt, c.score});
  return out;
}

RankedPredictions to_predictions(const std::vector<std::vector<RankedTarget>>& ranked,
                                 std::span<const std::string> src_words,
                                 std::span<const std::string> tgt_words) {
  if (ranked.size() != src_words.size()) {
    throw InvalidArgument("to_predictions: one ranked list per source word expected");
  }
  RankedPredictions out;
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    auto& list = out[src_words[i]];
    for (const auto& r : ranked[i]) {
      if (r.tgt >= tgt_words.size()) throw InvalidArgument("to_predictions: target out of range");
      list.push_back(tgt_words[r.tgt]);
    }
  }
  return out;
}

RankedPredictions to_predictions(const WordMapping& mapping,
                                 std::span<const std::string> src_words,
                                 std::span<const std::string> tgt_words) {
  mapping.check_bounds(src_words.size(), tgt_words.size());
  RankedPredictions out;
  for (const auto& p : mapping.pairs()) out[src_words[p.src]].push_back(tgt_words[p.tgt]);
  return out;
}

}  // namespace walip
