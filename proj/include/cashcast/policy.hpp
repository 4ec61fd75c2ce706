#pragma once

#include "cashcast/calendar.hpp"

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace cashcast {

/// Rates are annual fractions (0.15 = 15% p.a.); fixed costs are money per transfer;
/// variable costs are money per unit transferred.
struct CostStructure {
    std::string name;
    double holding_q = 0.0;
    double shortage_u = 0.0;
    double fixed_in = 0.0;
    double fixed_out = 0.0;
    double variable_in = 0.0;
    double variable_out = 0.0;

    void validate() const;
};

/// Balance limits D < V and rebalance levels d, v of the simple policy.
struct PolicyParameters {
    double D = 0.0;
    double d = 0.0;
    double v = 0.0;
    double V = 0.0;
    double max_pct = 0.0;
    double alpha1 = 0.5;
    double alpha2 = 0.5;
};

/// D = |o_(k)| with o the ascending training flows and k = ceil(N * max_pct) (1-based),
/// V = 1.5 D, d = D + alpha1 (V - D), v = V - alpha2 (V - d).
/// Throws DegenerateError when o_(k) >= 0.
PolicyParameters derive_parameters(std::span<const double> train_flows, double max_pct);

double daily_rate(double annual, double workdays_per_year = 250.0);

enum class ShortageRateMode {
    Annual,  // u is converted with daily_rate like q
    Daily    // u is already a per-day rate
};

struct SimulationOptions {
    double workdays_per_year = 250.0;
    ShortageRateMode shortage_mode = ShortageRateMode::Annual;
};

struct LedgerDay {
    double transfer = 0.0;  // > 0 into the account, < 0 out of it
    double transfer_cost = 0.0;
    double holding_cost = 0.0;
    double shortage_cost = 0.0;
    double balance = 0.0;  // end of day

    double cost() const noexcept { return transfer_cost + holding_cost + shortage_cost; }
};

struct CostLedger {
    std::vector<Date> dates;  // empty when simulate got no dates
    std::vector<LedgerDay> days;
    double initial_balance = 0.0;
    double transfer_cost = 0.0;
    double holding_cost = 0.0;
    double shortage_cost = 0.0;
    std::size_t transfer_count = 0;

    double total_cost() const noexcept { return transfer_cost + holding_cost + shortage_cost; }
    std::size_t day_count() const noexcept { return days.size(); }
    double average_daily_cost() const noexcept;
};

/// Runs the policy day by day. Each day the projected balance (prior + forecast) decides a
/// transfer back to d or v, the transfer settles, then the actual flow lands and holding or
/// shortage cost accrues on the end-of-day balance.
CostLedger simulate(std::span<const double> flows, std::span<const double> forecasts,
                    const PolicyParameters& params, const CostStructure& costs, double initial_balance,
                    const SimulationOptions& options = {}, std::span<const Date> dates = {});

/// CSV `date,transfer,transfer_cost,holding_cost,shortage_cost,balance`; the date column
/// holds the 1-based day number when the ledger has no dates.
void write_ledger_csv(const CostLedger& ledger, std::ostream& out);

enum class ScenarioGroup { MostLikely, VaryingShortage, VariableCost };

std::string_view to_string(ScenarioGroup group);
/// "most_likely", "varying_shortage", "variable_cost"
ScenarioGroup parse_scenario_group(std::string_view text);

/// Standard cost grids. MostLikely: q in {10,15,20}% x fixed cost in {1..5}, u = 30%.
/// VaryingShortage: u in {10,20,40}%, q = 15%, fixed 3. VariableCost: per-unit cost in
/// {0.1,0.2,0.4} per mille, q = 15%, u = 30%, fixed 3.
std::vector<CostStructure> cost_scenarios(ScenarioGroup group);
/// All three groups in the order above (15 + 3 + 3).
std::vector<CostStructure> cost_scenarios();

}  // namespace cashcast
