#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "walip/pipeline.hpp"
#include "walip/types.hpp"

namespace walip {

/// Summary of one `align` run; serialised as the run-report JSON
/// (schema in docs/run_report.md).
struct RunReport {
  PipelineConfig config;
  std::size_t n_src = 0;
  std::size_t n_tgt = 0;
  std::size_t dim = 0;
  std::size_t init_pairs = 0;
  std::vector<IterationRecord> iterations;
  std::size_t final_pairs = 0;
  bool collapsed = false;
  std::string message;
  std::map<std::size_t, double> recall;  // n -> recall@n, when gold was supplied
  PhaseTimings timings;
  double total_ms = 0.0;
};

RunReport make_run_report(const AlignResult& result, const PipelineConfig& cfg,
                          std::size_t n_src, std::size_t n_tgt, std::size_t init_pairs);

std::string render_run_report(const RunReport& report);
/// Throws ParseError on malformed documents.
RunReport parse_run_report(std::string_view json);

enum class TableFormat { Text, Csv };
/// Per-iteration table (step, loss, q, candidate_k, fit_pairs, pairs) followed
/// by the final summary.
std::string render_report_table(const RunReport& report, TableFormat format);

}  // namespace walip
