#include "cli.hpp"

#include <chrono>
#include <cstdlib>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "walip/clip_nn.hpp"
#include "walip/config.hpp"
#include "walip/error.hpp"
#include "walip/evalbench.hpp"
#include "walip/fingerprint.hpp"
#include "walip/io.hpp"
#include "walip/lexical_init.hpp"
#include "walip/parallel.hpp"
#include "walip/pipeline.hpp"
#include "walip/report.hpp"

namespace walip::cli {
namespace {

/// Flag combinations CLI11 cannot express (method-specific requirements).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string format_recall(std::size_t n, double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "recall@%zu %.6f", n, value);
  return buf;
}

EmbeddingFormat parse_format(const std::string& s) {
  return s == "binary" ? EmbeddingFormat::Binary : EmbeddingFormat::Text;
}

std::size_t threads_from_env() {
  const char* env = std::getenv("WALIP_THREADS");
  if (env == nullptr || *env == '\0') return 1;
  try {
    const long v = std::stol(env);
    return v > 0 ? static_cast<std::size_t>(v) : 1;
  } catch (const std::exception&) {
    throw UsageError(std::string("WALIP_THREADS must be a positive integer, got '") + env + "'");
  }
}

// -- fingerprint ----------------------------------------------------------

struct FingerprintArgs {
  std::string text, images, out, format = "text";
  bool filter = false;
  FilterParams params;
};

void add_fingerprint(CLI::App& app, FingerprintArgs& a) {
  auto* sub = app.add_subcommand("fingerprint", "Build image fingerprints from CLIP embeddings");
  sub->add_option("--text", a.text, "Word (text) embeddings")->required();
  sub->add_option("--images", a.images, "Image embeddings")->required();
  sub->add_option("--out", a.out, "Output fingerprint file")->required();
  sub->add_flag("--filter", a.filter, "Apply visual-word filtering and sparsification");
  sub->add_option("--max-sim-quantile", a.params.max_sim_quantile, "Active-word quantile")
      ->capture_default_str();
  sub->add_option("--sparsify-quantile", a.params.sparsify_quantile, "Per-row sparsify quantile")
      ->capture_default_str();
  sub->add_option("--format", a.format, "Output format")
      ->check(CLI::IsMember({"text", "binary"}))
      ->capture_default_str();
}

int run_fingerprint(const FingerprintArgs& a, std::ostream& out) {
  const auto text = load_embeddings(a.text);
  const auto images = load_embeddings(a.images);
  FingerprintTable fp = build_fingerprints(text, images);
  if (a.filter) fp = visual_word_filter(fp, a.params);
  save_fingerprints(fp, a.out, parse_format(a.format),
                    a.filter ? std::optional<FilterParams>(a.params) : std::nullopt);
  out << "fingerprints " << fp.size() << " x " << fp.dim() << '\n';
  if (a.filter) out << "active " << fp.active().size() << '\n';
  return kExitOk;
}

// -- init -----------------------------------------------------------------

struct InitArgs {
  std::string method, src_fp, tgt_fp, src, tgt, out, config;
  std::optional<double> quantile;
  std::optional<std::size_t> csls_k;
  std::size_t min_len = 3;
};

void add_init(CLI::App& app, InitArgs& a) {
  auto* sub = app.add_subcommand("init", "Compute initial (pivot) word pairs");
  sub->add_option("--method", a.method, "Initializer")
      ->required()
      ->check(CLI::IsMember({"fingerprint", "substring", "charmap"}));
  sub->add_option("--src-fp", a.src_fp, "Source fingerprints (method fingerprint)");
  sub->add_option("--tgt-fp", a.tgt_fp, "Target fingerprints (method fingerprint)");
  sub->add_option("--src", a.src, "Source vocabulary as an embedding file (substring/charmap)");
  sub->add_option("--tgt", a.tgt, "Target vocabulary as an embedding file (substring/charmap)");
  sub->add_option("--quantile", a.quantile, "Matching quantile (default: config init_quantile)");
  sub->add_option("--csls-k", a.csls_k, "CSLS neighbours (default: config csls_k)");
  sub->add_option("--min-len", a.min_len, "Minimum common substring length")
      ->capture_default_str();
  sub->add_option("--config", a.config, "PipelineConfig JSON");
  sub->add_option("--out", a.out, "Output mapping TSV")->required();
}

int run_init(const InitArgs& a, std::ostream& out) {
  PipelineConfig cfg = a.config.empty() ? PipelineConfig{} : load_config(a.config);
  if (a.quantile) cfg.init_quantile = *a.quantile;
  if (a.csls_k) cfg.csls_k = *a.csls_k;
  cfg.validate();

  WordMapping mapping;
  std::vector<std::string> src_words, tgt_words;
  if (a.method == "fingerprint") {
    if (a.src_fp.empty() || a.tgt_fp.empty()) {
      throw UsageError("--method fingerprint requires --src-fp and --tgt-fp");
    }
    const auto src = load_fingerprints(a.src_fp);
    const auto tgt = load_fingerprints(a.tgt_fp);
    mapping = initial_mapping(src, tgt, cfg.init_quantile, cfg.csls_k);
    src_words = src.words();
    tgt_words = tgt.words();
  } else {
    if (a.src.empty() || a.tgt.empty()) {
      throw UsageError("--method " + a.method + " requires --src and --tgt");
    }
    src_words = load_embeddings(a.src).words();
    tgt_words = load_embeddings(a.tgt).words();
    mapping = a.method == "substring" ? substring_init(src_words, tgt_words, a.min_len)
                                      : char_map_init(src_words, tgt_words, a.min_len);
  }
  save_mapping(mapping, src_words, tgt_words, a.out);
  out << "pairs " << mapping.size() << '\n';
  return kExitOk;
}

// -- align ----------------------------------------------------------------

struct AlignArgs {
  std::string src, tgt, init, config, gold, out_mapping, out_map, report, pred_out;
  std::size_t pred_n = 10;
  std::vector<std::size_t> recall_n{1};
  std::optional<std::size_t> csls_k, steps, robust_iters;
  std::optional<double> quantile, robust_eps, tol;
  std::optional<std::string> schedule, quantile_mode, procrustes;
  std::optional<std::uint64_t> seed;
  bool no_normalize = false;
};

void add_align(CLI::App& app, AlignArgs& a) {
  auto* sub = app.add_subcommand("align", "Learn the orthogonal map with iterative robust Procrustes");
  sub->add_option("--src", a.src, "Source word vectors")->required();
  sub->add_option("--tgt", a.tgt, "Target word vectors")->required();
  sub->add_option("--init", a.init, "Initial mapping TSV")->required();
  sub->add_option("--config", a.config, "PipelineConfig JSON (flags override)");
  sub->add_option("--gold", a.gold, "Gold lexicon; prints recall lines");
  sub->add_option("--recall-n", a.recall_n, "Recall cut-offs, e.g. 1,10")->delimiter(',');
  sub->add_option("--out-mapping", a.out_mapping, "Final mapping TSV");
  sub->add_option("--out-map", a.out_map, "Learned linear map (binary)");
  sub->add_option("--report", a.report, "Run-report JSON");
  sub->add_option("--pred-out", a.pred_out, "Ranked predictions TSV");
  sub->add_option("--pred-n", a.pred_n, "Predictions per word for --pred-out")->capture_default_str();
  sub->add_option("--csls-k", a.csls_k, "CSLS neighbours");
  sub->add_option("--steps", a.steps, "Alignment steps K");
  sub->add_option("--quantile", a.quantile, "init_quantile (consumed by init; recorded in the report)");
  sub->add_option("--robust-iters", a.robust_iters, "Robust Procrustes iterations M");
  sub->add_option("--robust-eps", a.robust_eps, "Robust Procrustes epsilon");
  sub->add_option("--schedule", a.schedule, "Candidate schedule, e.g. 10,5,3,1");
  sub->add_option("--quantile-mode", a.quantile_mode, "adaptive | discrete");
  sub->add_option("--tol", a.tol, "Loss convergence tolerance");
  sub->add_option("--procrustes", a.procrustes, "robust | standard");
  sub->add_option("--seed", a.seed, "Seed recorded in the config");
  sub->add_flag("--no-normalize", a.no_normalize, "Do not L2-normalize embeddings");
}

std::vector<std::size_t> parse_schedule(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const long v = std::stol(item, &used);
      if (used != item.size() || v < 1) throw std::invalid_argument(item);
      out.push_back(static_cast<std::size_t>(v));
    } catch (const std::exception&) {
      throw ConfigError("--schedule expects positive integers, got '" + text + "'");
    }
  }
  return out;
}

PipelineConfig align_config(const AlignArgs& a) {
  PipelineConfig cfg = a.config.empty() ? PipelineConfig{} : load_config(a.config);
  if (a.csls_k) cfg.csls_k = *a.csls_k;
  if (a.steps) cfg.align_steps = *a.steps;
  if (a.quantile) cfg.init_quantile = *a.quantile;
  if (a.robust_iters) cfg.robust_iters = *a.robust_iters;
  if (a.robust_eps) cfg.robust_eps = *a.robust_eps;
  if (a.schedule) cfg.candidate_schedule = parse_schedule(*a.schedule);
  if (a.quantile_mode) cfg.quantile_schedule_mode = parse_quantile_schedule(*a.quantile_mode);
  if (a.tol) cfg.convergence_tol = *a.tol;
  if (a.procrustes) cfg.procrustes = parse_procrustes_kind(*a.procrustes);
  if (a.seed) cfg.seed = *a.seed;
  if (a.no_normalize) cfg.normalize_embeddings = false;
  cfg.validate();
  return cfg;
}

int run_align(const AlignArgs& a, std::ostream& out) {
  const auto started = std::chrono::steady_clock::now();
  const PipelineConfig cfg = align_config(a);
  const auto src = load_embeddings(a.src);
  const auto tgt = load_embeddings(a.tgt);
  const auto init = load_mapping(a.init, src.words(), tgt.words());
  std::optional<GoldLexicon> gold;
  if (!a.gold.empty()) gold = load_lexicon(a.gold);

  const AlignResult result = walip_align(src, tgt, init, cfg);
  RunReport report = make_run_report(result, cfg, src.size(), tgt.size(), init.size());

  std::size_t max_n = a.pred_out.empty() ? 0 : a.pred_n;
  if (gold) {
    for (std::size_t n : a.recall_n) {
      if (n < 1) throw UsageError("--recall-n values must be >= 1");
      max_n = std::max(max_n, n);
    }
  }
  if (max_n > 0) {
    const auto ranked = rank_translations(src.matrix(), tgt.matrix(), result.map, max_n,
                                          cfg.csls_k, cfg.normalize_embeddings);
    const auto preds = to_predictions(ranked, src.words(), tgt.words());
    if (gold) {
      for (std::size_t n : a.recall_n) report.recall[n] = recall_at_n(preds, *gold, n);
    }
    if (!a.pred_out.empty()) {
      RankedPredictions trimmed = preds;
      for (auto& [w, list] : trimmed) {
        if (list.size() > a.pred_n) list.resize(a.pred_n);
      }
      save_predictions(trimmed, a.pred_out);
    }
  }
  if (!a.out_mapping.empty()) save_mapping(result.mapping, src.words(), tgt.words(), a.out_mapping);
  if (!a.out_map.empty()) save_linear_map(result.map, a.out_map);
  report.total_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
  if (!a.report.empty()) {
    std::ofstream f(a.report);
    f << render_run_report(report) << '\n';
    if (!f) throw IoError("failed writing '" + a.report + "'");
  }

  out << "iterations " << result.history.size() << '\n';
  out << "final_pairs " << result.mapping.size() << '\n';
  if (result.collapsed) out << "collapsed " << result.message << '\n';
  for (const auto& [n, v] : report.recall) out << format_recall(n, v) << '\n';
  return kExitOk;
}

// -- baseline clip-nn -----------------------------------------------------

struct ClipNnArgs {
  std::string src_text, images, tgt_images, tgt_text, out, gold;
  std::size_t n = 1;
};

void add_baseline(CLI::App& app, ClipNnArgs& a) {
  auto* base = app.add_subcommand("baseline", "Reference baselines");
  base->require_subcommand(1);
  auto* sub = base->add_subcommand("clip-nn", "Double k-NN through CLIP image embeddings");
  sub->add_option("--src-text", a.src_text, "Source CLIP text embeddings")->required();
  sub->add_option("--images", a.images, "Image embeddings (source CLIP)")->required();
  sub->add_option("--tgt-images", a.tgt_images, "Image embeddings under the target CLIP (default: --images)");
  sub->add_option("--tgt-text", a.tgt_text, "Target CLIP text embeddings")->required();
  sub->add_option("--n", a.n, "Predictions per word")->capture_default_str();
  sub->add_option("--out", a.out, "Ranked predictions TSV")->required();
  sub->add_option("--gold", a.gold, "Gold lexicon; prints recall@n");
}

int run_clip_nn(const ClipNnArgs& a, std::ostream& out) {
  const auto src = load_embeddings(a.src_text);
  const auto images = load_embeddings(a.images);
  const auto tgt = load_embeddings(a.tgt_text);
  std::optional<EmbeddingTable> tgt_images;
  if (!a.tgt_images.empty()) tgt_images = load_embeddings(a.tgt_images);
  const auto ranked =
      clip_nn_baseline(src.matrix(), images.matrix(),
                       tgt_images ? tgt_images->matrix() : images.matrix(), tgt.matrix(), a.n);
  const auto preds = to_predictions(ranked, src.words(), tgt.words());
  save_predictions(preds, a.out);
  if (!a.gold.empty()) out << format_recall(a.n, recall_at_n(preds, load_lexicon(a.gold), a.n)) << '\n';
  return kExitOk;
}

// -- eval -----------------------------------------------------------------

struct EvalArgs {
  std::string pred, gold;
  std::vector<std::size_t> n{1};
};

void add_eval(CLI::App& app, EvalArgs& a) {
  auto* sub = app.add_subcommand("eval", "recall@n of ranked predictions against a gold lexicon");
  sub->add_option("--pred", a.pred, "Predictions TSV (rows in rank order)")->required();
  sub->add_option("--gold", a.gold, "Gold lexicon")->required();
  sub->add_option("--n", a.n, "Cut-offs, e.g. 1,10")->delimiter(',');
}

int run_eval(const EvalArgs& a, std::ostream& out) {
  for (std::size_t n : a.n) {
    if (n < 1) throw UsageError("--n values must be >= 1");
  }
  const auto preds = load_predictions(a.pred);
  const auto gold = load_lexicon(a.gold);
  for (std::size_t n : a.n) out << format_recall(n, recall_at_n(preds, gold, n)) << '\n';
  return kExitOk;
}

// -- synth ----------------------------------------------------------------

struct SynthArgs {
  SyntheticSpec spec;
  std::string out_dir;
};

void add_synth(CLI::App& app, SynthArgs& a) {
  auto* sub = app.add_subcommand("synth", "Generate a planted synthetic instance");
  sub->add_option("--n", a.spec.n_words, "Words per language")->capture_default_str();
  sub->add_option("--dim", a.spec.dim, "Embedding dimension")->capture_default_str();
  sub->add_option("--images", a.spec.n_images, "Images (fingerprint length)")->capture_default_str();
  sub->add_option("--visual-frac", a.spec.visual_frac, "Fraction of visual words")->capture_default_str();
  sub->add_option("--noise", a.spec.noise_sigma, "Per-coordinate Gaussian noise")->capture_default_str();
  sub->add_option("--corrupt", a.spec.corrupt_frac, "Fraction of init pairs misassigned")->capture_default_str();
  sub->add_option("--init-frac", a.spec.init_frac, "Init pairs as a fraction of words")->capture_default_str();
  sub->add_option("--seed", a.spec.seed, "Random seed")->capture_default_str();
  sub->add_option("--out-dir", a.out_dir, "Output directory")->required();
}

int run_synth(const SynthArgs& a, std::ostream& out) {
  const auto inst = gen_synthetic(a.spec);
  write_synthetic(inst, a.out_dir);
  out << "words " << inst.src.size() << '\n'
      << "visual " << inst.visual_words.size() << '\n'
      << "init_pairs " << inst.init.size() << '\n';
  return kExitOk;
}

// -- report ---------------------------------------------------------------

struct ReportArgs {
  std::string in, format = "text";
};

void add_report(CLI::App& app, ReportArgs& a) {
  auto* sub = app.add_subcommand("report", "Render a run-report JSON as a table");
  sub->add_option("--in", a.in, "Run-report JSON")->required();
  sub->add_option("--format", a.format, "text | csv")
      ->check(CLI::IsMember({"text", "csv"}))
      ->capture_default_str();
}

int run_report(const ReportArgs& a, std::ostream& out) {
  std::ifstream f(a.in);
  if (!f) throw IoError("cannot open '" + a.in + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  const auto report = parse_run_report(ss.str());
  out << render_report_table(report, a.format == "csv" ? TableFormat::Csv : TableFormat::Text);
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"walip: bilingual word alignment from image fingerprints and robust Procrustes"};
  app.name(args.empty() ? "walip" : args.front());
  app.require_subcommand(1);
  app.fallthrough();

  std::optional<std::size_t> threads;
  app.add_option("--threads", threads, "Worker threads (fallback: WALIP_THREADS)");

  FingerprintArgs fingerprint_args;
  InitArgs init_args;
  AlignArgs align_args;
  ClipNnArgs clip_args;
  EvalArgs eval_args;
  SynthArgs synth_args;
  ReportArgs report_args;
  add_fingerprint(app, fingerprint_args);
  add_init(app, init_args);
  add_align(app, align_args);
  add_baseline(app, clip_args);
  add_eval(app, eval_args);
  add_synth(app, synth_args);
  add_report(app, report_args);

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  if (args.empty()) argv.push_back("walip");
  for (const auto& s : args) argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  const std::size_t previous_threads = thread_count();
  try {
    set_thread_count(threads ? *threads : threads_from_env());
    int rc = kExitUsage;
    if (app.got_subcommand("fingerprint")) {
      rc = run_fingerprint(fingerprint_args, out);
    } else if (app.got_subcommand("init")) {
      rc = run_init(init_args, out);
    } else if (app.got_subcommand("align")) {
      rc = run_align(align_args, out);
    } else if (app.got_subcommand("baseline")) {
      rc = run_clip_nn(clip_args, out);
    } else if (app.got_subcommand("eval")) {
      rc = run_eval(eval_args, out);
    } else if (app.got_subcommand("synth")) {
      rc = run_synth(synth_args, out);
    } else if (app.got_subcommand("report")) {
      rc = run_report(report_args, out);
    }
    set_thread_count(previous_threads);
    return rc;
  } catch (const UsageError& e) {
    set_thread_count(previous_threads);
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    set_thread_count(previous_threads);
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
}

}  // namespace walip::cli
