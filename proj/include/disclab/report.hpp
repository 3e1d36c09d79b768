#pragma once

#include <cmath>
#include <string>

#include <json.hpp>

#include "disclab/beck_fiala.hpp"
#include "disclab/full_coloring.hpp"
#include "disclab/oracle.hpp"
#include "disclab/set_system.hpp"

namespace disclab {

using json = nlohmann::ordered_json;

inline constexpr int kReportVersion = 1;

// Scale of the full-coloring guarantee, sqrt(n ln(2m/n)); reported so runs
// can be compared across instance sizes. m is padded up to n so the
// logarithm stays positive.
inline double disc_bound_scale(int n, int m) {
  const double mm = static_cast<double>(std::max(m, n));
  return std::sqrt(static_cast<double>(n) * std::log(2.0 * mm / n));
}

inline json instance_json(const SetSystem& sys, const std::string& source) {
  return json{{"n", sys.n},
              {"m", sys.m()},
              {"max_degree", max_degree(sys)},
              {"source", source}};
}

// Wall time lives in its own field so consumers can drop it when comparing
// reports for reproducibility.
inline json solve_report_lm(const SetSystem& sys, const std::string& source,
                            const FullColoringParams& params,
                            const FullColoringReport& rep, double wall_ms) {
  json phases = json::array();
  for (const auto& p : rep.phases) {
    phases.push_back(json{{"active_before", p.active_before},
                          {"active_after", p.active_after},
                          {"constraints", p.constraints},
                          {"threshold", p.threshold},
                          {"gamma", p.gamma},
                          {"step_budget", p.step_budget},
                          {"steps_taken", p.steps_taken},
                          {"frozen_vars", p.frozen_vars},
                          {"frozen_disc", p.frozen_disc},
                          {"restarts", p.restarts},
                          {"attempts_exited", p.attempts_exited}});
  }
  const double scale = disc_bound_scale(sys.n, sys.m());
  return json{
      {"report_version", kReportVersion},
      {"command", "solve"},
      {"instance", instance_json(sys, source)},
      {"algorithm",
       json{{"name", "lm"},
            {"delta", rep.delta},
            {"seed", params.seed},
            {"restarts_per_phase", params.restarts_per_phase},
            {"phase_retries", params.phase_retries}}},
      {"outcome", json{{"status", rep.success ? "ok" : "failed"},
                       {"achieved_disc", rep.achieved_disc},
                       {"bound_scale", scale},
                       {"disc_over_scale",
                        scale > 0.0 ? rep.achieved_disc / scale : 0.0},
                       {"phases", rep.iterations},
                       {"failure_reason", rep.failure_reason},
                       {"wall_time_ms", wall_ms}}},
      {"phases", phases},
      {"rounding", json{{"flipped", rep.rounding.flipped},
                        {"pre_round_fractional_disc",
                         rep.rounding.pre_round_fractional_disc},
                        {"brute_tail_size", rep.brute_tail_size}}}};
}

inline json solve_report_beck_fiala(const SetSystem& sys,
                                    const std::string& source,
                                    const BeckFialaResult& res,
                                    double wall_ms) {
  return json{
      {"report_version", kReportVersion},
      {"command", "solve"},
      {"instance", instance_json(sys, source)},
      {"algorithm", json{{"name", "beck-fiala"}, {"t", res.trace.t_eff}}},
      {"outcome", json{{"status", "ok"},
                       {"achieved_disc", res.achieved_disc},
                       {"bound", res.bound},
                       {"iterations", res.trace.iterations},
                       {"wall_time_ms", wall_ms}}}};
}

inline json solve_report_brute(const SetSystem& sys, const std::string& source,
                               const OracleResult& res, double wall_ms) {
  return json{
      {"report_version", kReportVersion},
      {"command", "solve"},
      {"instance", instance_json(sys, source)},
      {"algorithm", json{{"name", "brute"}}},
      {"outcome", json{{"status", "ok"},
                       {"achieved_disc", res.min_disc},
                       {"colorings_examined", res.colorings_examined},
                       {"wall_time_ms", wall_ms}}}};
}

// Removes every wall-time field; what remains must be identical across
// re-runs with the same seed and parameters.
inline json strip_wall_time(json report) {
  if (report.contains("outcome") && report["outcome"].contains("wall_time_ms"))
    report["outcome"].erase("wall_time_ms");
  if (report.contains("wall_time_ms")) report.erase("wall_time_ms");
  return report;
}

}  // namespace disclab
