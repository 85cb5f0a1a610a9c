#include "walip/report.hpp"

#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "walip/config.hpp"
#include "walip/error.hpp"

namespace walip {

using nlohmann::json;

RunReport make_run_report(const AlignResult& result, const PipelineConfig& cfg,
                          std::size_t n_src, std::size_t n_tgt, std::size_t init_pairs) {
  RunReport r;
  r.config = cfg;
  r.n_src = n_src;
  r.n_tgt = n_tgt;
  r.dim = result.map.dim();
  r.init_pairs = init_pairs;
  r.iterations = result.history;
  r.final_pairs = result.mapping.size();
  r.collapsed = result.collapsed;
  r.message = result.message;
  r.timings = result.timings;
  return r;
}

std::string render_run_report(const RunReport& report) {
  json iterations = json::array();
  for (const auto& it : report.iterations) {
    iterations.push_back({{"k", it.step},
                          {"loss", it.loss},
                          {"q", it.quantile},
                          {"candidate_k", it.candidate_k},
                          {"fit_pairs", it.fit_pairs},
                          {"pairs", it.pairs}});
  }
  json recall = json::object();
  for (const auto& [n, v] : report.recall) recall["recall@" + std::to_string(n)] = v;

  json doc{
      {"format", "walip-run-report"},
      {"version", 1},
      {"config", json::parse(config_to_json(report.config))},
      {"input", {{"n_src", report.n_src}, {"n_tgt", report.n_tgt}, {"dim", report.dim},
                 {"init_pairs", report.init_pairs}}},
      {"iterations", iterations},
      {"final", {{"pairs", report.final_pairs}, {"collapsed", report.collapsed},
                 {"message", report.message}, {"recall", recall}}},
      {"timing_ms", {{"fit", report.timings.fit_ms}, {"match", report.timings.match_ms},
                     {"final_match", report.timings.final_ms}, {"total", report.total_ms}}},
  };
  return doc.dump(2);
}

RunReport parse_run_report(std::string_view text) {
  try {
    const json doc = json::parse(text);
    if (doc.value("format", "") != "walip-run-report") {
      throw ParseError(ParseErrorKind::MalformedHeader, 1, "not a walip run report");
    }
    RunReport r;
    r.config = config_from_json(doc.at("config").dump());
    const auto& input = doc.at("input");
    r.n_src = input.at("n_src").get<std::size_t>();
    r.n_tgt = input.at("n_tgt").get<std::size_t>();
    r.dim = input.at("dim").get<std::size_t>();
    r.init_pairs = input.at("init_pairs").get<std::size_t>();
    for (const auto& it : doc.at("iterations")) {
      IterationRecord rec;
      rec.step = it.at("k").get<std::size_t>();
      rec.loss = it.at("loss").get<double>();
      rec.quantile = it.at("q").get<double>();
      rec.candidate_k = it.at("candidate_k").get<std::size_t>();
      rec.fit_pairs = it.at("fit_pairs").get<std::size_t>();
      rec.pairs = it.at("pairs").get<std::size_t>();
      r.iterations.push_back(rec);
    }
    const auto& fin = doc.at("final");
    r.final_pairs = fin.at("pairs").get<std::size_t>();
    r.collapsed = fin.at("collapsed").get<bool>();
    r.message = fin.at("message").get<std::string>();
    for (const auto& [key, v] : fin.at("recall").items()) {
      r.recall[std::stoul(key.substr(key.find('@') + 1))] = v.get<double>();
    }
    const auto& t = doc.at("timing_ms");
    r.timings = {t.at("fit").get<double>(), t.at("match").get<double>(),
                 t.at("final_match").get<double>()};
    r.total_ms = t.at("total").get<double>();
    return r;
  } catch (const json::exception& e) {
    throw ParseError(ParseErrorKind::MalformedHeader, 1, std::string("bad run report: ") + e.what());
  } catch (const ConfigError& e) {
    throw ParseError(ParseErrorKind::MalformedHeader, 1, std::string("bad run report config: ") + e.what());
  }
}

std::string render_report_table(const RunReport& report, TableFormat format) {
  std::ostringstream out;
  char buf[160];
  if (format == TableFormat::Csv) {
    out << "k,loss,q,candidate_k,fit_pairs,pairs\n";
    for (const auto& it : report.iterations) {
      std::snprintf(buf, sizeof buf, "%zu,%.9g,%.6g,%zu,%zu,%zu\n", it.step, it.loss, it.quantile,
                    it.candidate_k, it.fit_pairs, it.pairs);
      out << buf;
    }
    return out.str();
  }
  std::snprintf(buf, sizeof buf, "%5s  %12s  %6s  %11s  %9s  %9s\n", "k", "loss", "q",
                "candidate_k", "fit_pairs", "pairs");
  out << buf;
  for (const auto& it : report.iterations) {
    std::snprintf(buf, sizeof buf, "%5zu  %12.6e  %6.3f  %11zu  %9zu  %9zu\n", it.step, it.loss,
                  it.quantile, it.candidate_k, it.fit_pairs, it.pairs);
    out << buf;
  }
  out << "final pairs " << report.final_pairs << (report.collapsed ? " (collapsed)" : "") << '\n';
  for (const auto& [n, v] : report.recall) {
    std::snprintf(buf, sizeof buf, "recall@%zu %.6f\n", n, v);
    out << buf;
  }
  std::snprintf(buf, sizeof buf, "time fit %.1f ms, match %.1f ms, final %.1f ms, total %.1f ms\n",
                report.timings.fit_ms, report.timings.match_ms, report.timings.final_ms,
                report.total_ms);
  out << buf;
  return out.str();
}

}  // namespace walip
