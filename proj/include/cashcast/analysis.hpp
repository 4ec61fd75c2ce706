#pragma once

#include "cashcast/evaluation.hpp"
#include "cashcast/policy.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cashcast {

struct SavingsRecord {
    std::string scenario;
    double risk = 0.0;
    double cost_candidate = 0.0;  // average daily cost
    double cost_mean = 0.0;
    double saving_abs = 0.0;  // cost_mean - cost_candidate
    double saving_rel = 0.0;  // 1 - cost_candidate / cost_mean, 0 when cost_mean is 0
};

struct SavingsReport {
    std::string label;
    std::size_t g = 0;
    std::size_t H = 0;
    std::size_t origin_count = 0;
    std::vector<SavingsRecord> records;  // scenario-major within each risk level
};

struct CompareOptions {
    std::size_t g = 0;
    std::size_t H = 1;
    std::size_t stride = 1;
    std::vector<double> risk_levels{0.05, 0.10, 0.15};
    SimulationOptions simulation;
};

/// Rolling comparison of policy costs. For each origin the candidate and the mean forecaster are
/// fitted on all observations before the window, policy limits come from the same training
/// observations, and both forecast tracks run the policy over the H-day window from balance d.
SavingsReport compare_savings(std::span<const double> values, const ForecastProvider& candidate,
                              std::span<const CostStructure> costs, const CompareOptions& options,
                              std::string label = "candidate");
SavingsReport compare_savings(const CashFlowSeries& series, const ModelSpec& candidate,
                              std::span<const CostStructure> costs, const CompareOptions& options);

/// CSV `scenario,risk,cost_candidate,cost_mean,saving_abs,saving_pct` (saving_pct in percent).
void write_savings_csv(const SavingsReport& report, std::ostream& out);

/// y_t + N(0, sigma) per element. sigma = 0 returns the input unchanged.
std::vector<double> synthesize_forecasts(std::span<const double> actuals, double sigma, std::uint64_t seed);

struct SweepPoint {
    double sigma = 0.0;
    double epsilon_bar = 0.0;
    std::vector<double> risk_levels;
    /// Per risk level: 1 - sum of candidate costs / sum of mean-forecaster costs over all scenarios.
    std::vector<double> savings_rel;
    /// Per risk level: average over scenarios of the absolute daily saving.
    std::vector<double> savings_abs;
    std::uint64_t seed = 0;
};

/// {0, 0.1, ..., 1.5} x std of the first g observations.
std::vector<double> default_sigma_grid(std::span<const double> values, std::size_t g);

/// For each sigma (grid index k uses seed + k) one noisy copy of the series serves as forecasts
/// for every origin. epsilon_bar uses the full-window origins after g, and savings come from the
/// same comparison as compare_savings with the synthetic track as candidate.
std::vector<SweepPoint> accuracy_savings_sweep(std::span<const double> values, std::span<const double> sigma_grid,
                                               std::span<const CostStructure> costs, const CompareOptions& options,
                                               std::uint64_t seed);

/// CSV `sigma,epsilon_bar,risk,savings_pct`, one row per point and risk level.
void write_sweep_csv(std::span<const SweepPoint> points, std::ostream& out);

struct ReferenceLine {
    std::string label;
    double epsilon_bar = 0.0;
};

/// Standalone SVG: epsilon_bar on x, savings % on y, one polyline per risk level.
void write_sweep_svg(std::span<const SweepPoint> points, std::ostream& out,
                     std::span<const ReferenceLine> references = {}, const std::string& comment = {});

/// Writes sweep.csv and, when `with_plot`, sweep.svg into `directory`. Needs at least two points.
void render_sweep(std::span<const SweepPoint> points, const std::filesystem::path& directory, bool with_plot,
                  std::span<const ReferenceLine> references = {}, const std::string& header_comment = {});

/// Savings expected from moving accuracy from one epsilon_bar to another, read off the sweep by
/// linear interpolation of absolute daily savings, against the daily cost of that improvement.
struct ImprovementDecision {
    double risk = 0.0;
    double saving_from = 0.0;
    double saving_to = 0.0;
    double gain = 0.0;  // saving_to - saving_from, money per day
    double improvement_cost = 0.0;
    bool worthwhile = false;
};

std::vector<ImprovementDecision> improvement_decision(std::span<const SweepPoint> points, double epsilon_from,
                                                      double epsilon_to, double improvement_cost_per_day);
std::string decision_line(const ImprovementDecision& decision, double epsilon_from, double epsilon_to);

}  // namespace cashcast
