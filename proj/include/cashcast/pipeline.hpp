#pragma once

#include "cashcast/config.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace cashcast {

enum class Command { Summarize, Derive, CV, Compare, Sweep };

std::string_view to_string(Command command);
/// "summarize", "derive", "cv", "compare", "sweep"
Command parse_command(std::string_view text);

enum class OutputFormat { Csv, CsvPlot };

/// "csv" or "csv+plot"
OutputFormat parse_output_format(std::string_view text);

struct RunResult {
    int exit_code = 0;
    std::vector<std::filesystem::path> files;
    std::string error;  // set iff exit_code != 0
};

/// Runs one command and writes its artifacts into config.output_dir. Errors are logged and
/// reported through a nonzero exit code rather than thrown.
///   summarize  summary.csv
///   derive     <dataset>_<variant>.csv
///   cv         cv_summary.csv, epsilon.csv (model.json with save_model)
///   compare    savings.csv
///   sweep      sweep.csv (+ sweep.svg with csv+plot, decision.txt when improvement is set)
RunResult run(Command command, const PipelineConfig& config, OutputFormat format = OutputFormat::Csv);

/// The model spec actually fitted: config.model (or the parameter-search winner among
/// config.grid) with its seed split from the master seed.
ModelSpec resolve_model(const PipelineConfig& config, const CashFlowSeries& series);

/// Input series after applying the configured variant.
CashFlowSeries load_input(const PipelineConfig& config);

}  // namespace cashcast
