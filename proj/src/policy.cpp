#include "cashcast/policy.hpp"

#include "cashcast/error.hpp"
#include "cashcast/numfmt.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace cashcast {

void CostStructure::validate() const {
    const double fields[] = {holding_q, shortage_u, fixed_in, fixed_out, variable_in, variable_out};
    for (double f : fields) {
        if (!(f >= 0.0) || !std::isfinite(f)) {
            throw ValidationError("cost structure '" + name + "' has a negative or non-finite value");
        }
    }
}

PolicyParameters derive_parameters(std::span<const double> train_flows, double max_pct) {
    if (train_flows.empty()) throw ValidationError("derive_parameters needs training flows");
    if (!(max_pct > 0.0 && max_pct < 1.0)) throw ValidationError("max_pct must lie in (0, 1)");
    std::vector<double> sorted(train_flows.begin(), train_flows.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    auto k = static_cast<std::size_t>(std::ceil(n * max_pct - 1e-9));
    k = std::clamp<std::size_t>(k, 1, sorted.size());
    const double o = sorted[k - 1];
    if (o >= 0.0) {
        throw DegenerateError("order statistic " + std::to_string(k) +
                              " of the training flows is not negative; no downside risk to bound");
    }
    PolicyParameters p;
    p.max_pct = max_pct;
    p.D = -o;
    p.V = 1.5 * p.D;
    p.d = p.D + p.alpha1 * (p.V - p.D);
    p.v = p.V - p.alpha2 * (p.V - p.d);
    return p;
}

double daily_rate(double annual, double workdays_per_year) {
    if (!(workdays_per_year > 0.0)) throw ValidationError("workdays per year must be positive");
    return annual / workdays_per_year;
}

double CostLedger::average_daily_cost() const noexcept {
    return days.empty() ? 0.0 : total_cost() / static_cast<double>(days.size());
}

CostLedger simulate(std::span<const double> flows, std::span<const double> forecasts,
                    const PolicyParameters& params, const CostStructure& costs, double initial_balance,
                    const SimulationOptions& options, std::span<const Date> dates) {
    if (flows.size() != forecasts.size()) {
        throw ValidationError("flows and forecasts differ in length (" + std::to_string(flows.size()) + " vs " +
                              std::to_string(forecasts.size()) + ")");
    }
    if (!dates.empty() && dates.size() != flows.size()) {
        throw ValidationError("dates and flows differ in length");
    }
    costs.validate();
    const double hold = daily_rate(costs.holding_q, options.workdays_per_year);
    const double short_rate = options.shortage_mode == ShortageRateMode::Annual
                                  ? daily_rate(costs.shortage_u, options.workdays_per_year)
                                  : costs.shortage_u;

    CostLedger ledger;
    ledger.initial_balance = initial_balance;
    ledger.dates.assign(dates.begin(), dates.end());
    ledger.days.reserve(flows.size());
    double balance = initial_balance;
    for (std::size_t t = 0; t < flows.size(); ++t) {
        LedgerDay day;
        const double projected = balance + forecasts[t];
        if (projected < params.D) {
            day.transfer = params.d - projected;
            day.transfer_cost = costs.fixed_in + costs.variable_in * day.transfer;
        } else if (projected > params.V) {
            day.transfer = params.v - projected;
            day.transfer_cost = costs.fixed_out + costs.variable_out * -day.transfer;
        }
        balance = balance + day.transfer + flows[t];
        day.balance = balance;
        if (balance >= 0.0) {
            day.holding_cost = hold * balance;
        } else {
            day.shortage_cost = short_rate * -balance;
        }
        if (day.transfer != 0.0) ++ledger.transfer_count;
        ledger.transfer_cost += day.transfer_cost;
        ledger.holding_cost += day.holding_cost;
        ledger.shortage_cost += day.shortage_cost;
        ledger.days.push_back(day);
    }
    return ledger;
}

void write_ledger_csv(const CostLedger& ledger, std::ostream& out) {
    out << "date,transfer,transfer_cost,holding_cost,shortage_cost,balance\n";
    for (std::size_t t = 0; t < ledger.days.size(); ++t) {
        const auto& d = ledger.days[t];
        if (ledger.dates.empty()) {
            out << t + 1;
        } else {
            out << format_date(ledger.dates[t]);
        }
        out << ',' << fmt_num(d.transfer) << ',' << fmt_num(d.transfer_cost) << ',' << fmt_num(d.holding_cost)
            << ',' << fmt_num(d.shortage_cost) << ',' << fmt_num(d.balance) << '\n';
    }
}

std::string_view to_string(ScenarioGroup group) {
    switch (group) {
        case ScenarioGroup::MostLikely: return "most_likely";
        case ScenarioGroup::VaryingShortage: return "varying_shortage";
        case ScenarioGroup::VariableCost: return "variable_cost";
    }
    return "unknown";
}

ScenarioGroup parse_scenario_group(std::string_view text) {
    for (auto g : {ScenarioGroup::MostLikely, ScenarioGroup::VaryingShortage, ScenarioGroup::VariableCost}) {
        if (text == to_string(g)) return g;
    }
    throw ValidationError("unknown cost scenario group '" + std::string(text) + "'");
}

std::vector<CostStructure> cost_scenarios(ScenarioGroup group) {
    std::vector<CostStructure> out;
    switch (group) {
        case ScenarioGroup::MostLikely:
            for (int q : {10, 15, 20}) {
                for (int g0 = 1; g0 <= 5; ++g0) {
                    out.push_back({"q" + std::to_string(q) + "_f" + std::to_string(g0), q / 100.0, 0.30,
                                   double(g0), double(g0), 0.0, 0.0});
                }
            }
            break;
        case ScenarioGroup::VaryingShortage:
            for (int u : {10, 20, 40}) {
                out.push_back({"u" + std::to_string(u), 0.15, u / 100.0, 3.0, 3.0, 0.0, 0.0});
            }
            break;
        case ScenarioGroup::VariableCost:
            for (const auto& [label, g1] : {std::pair{"0.1", 0.0001}, {"0.2", 0.0002}, {"0.4", 0.0004}}) {
                out.push_back({std::string("v") + label, 0.15, 0.30, 3.0, 3.0, g1, g1});
            }
            break;
    }
    return out;
}

std::vector<CostStructure> cost_scenarios() {
    std::vector<CostStructure> out;
    for (auto g : {ScenarioGroup::MostLikely, ScenarioGroup::VaryingShortage, ScenarioGroup::VariableCost}) {
        auto part = cost_scenarios(g);
        out.insert(out.end(), part.begin(), part.end());
    }
    return out;
}

}  // namespace cashcast
