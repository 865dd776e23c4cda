#pragma once

#include <iosfwd>
#include <span>
#include <string>

#include "advinterp/bench.hpp"
#include "advinterp/cli/run_config.hpp"

namespace advinterp::cli {

enum ExitCode : int {
  kSuccess = 0,
  kIoError = 1,
  kConfigError = 2,
  kRuntimeFailure = 3,
};

//! %.9g, the rendering used for every floating-point CSV field.
std::string format_double(double v);

inline constexpr const char* kRecordsHeader =
    "case,n,r,method,rep,adv_loss,std_loss,train_mse,max_resid,bandwidth";
inline constexpr const char* kSummaryHeader = "case,n,r,method,median,se";
inline constexpr const char* kPhaseHeader = "r_exponent,regime,dominant_term,boundary_flag";
inline constexpr const char* kTheoryHeader = "check,parameter,closed_form,mc_estimate,std_error,pass";
inline constexpr const char* kCurseHeader = "n,r,method,median,se,log_log_n";
inline constexpr const char* kRateHeader =
    "n,r,beta,d,delta,sigma,regime,attack_term,estimation_term,interpolation_term,dominant";

std::string records_csv(std::span<const bench::ReplicationRecord> records);
std::string summary_csv(std::span<const bench::SummaryRow> rows);

bench::ExperimentPlan plan_from_config(const RunConfig& config);

// Each command writes its CSV file(s) into the `out` directory of the
// config and returns an ExitCode. Invalid settings raise ConfigError.
int cmd_simulate(const RunConfig& config, std::ostream& log);
int cmd_phase_diagram(const RunConfig& config, std::ostream& log);
int cmd_theory_check(const RunConfig& config, std::ostream& log);
int cmd_curse(const RunConfig& config, std::ostream& log);
int cmd_rate_report(const RunConfig& config, std::ostream& log);

//! Full command-line entry point.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace advinterp::cli
