#include "cashcast/analysis.hpp"

#include "cashcast/error.hpp"
#include "cashcast/numfmt.hpp"
#include "cashcast/stats.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>

namespace cashcast {

namespace {

struct Totals {
    double candidate = 0.0;
    double mean = 0.0;
    std::size_t days = 0;
};

}  // namespace

SavingsReport compare_savings(std::span<const double> values, const ForecastProvider& candidate,
                              std::span<const CostStructure> costs, const CompareOptions& options,
                              std::string label) {
    if (costs.empty()) throw ValidationError("compare_savings needs at least one cost structure");
    if (options.risk_levels.empty()) throw ValidationError("compare_savings needs at least one risk level");
    for (const auto& c : costs) c.validate();
    CVOptions cv{options.g, options.H, OriginMethod::FixedOrigin, options.stride, true};
    const auto origins = cv_origins(values.size(), cv);
    const std::size_t H = options.H;
    const std::size_t R = options.risk_levels.size();
    std::vector<Totals> totals(R * costs.size());

    for (std::size_t i : origins) {
        const std::size_t train_end = options.g + i - 1;
        const auto train = values.first(train_end);
        const auto actual = values.subspan(train_end, H);
        const auto yhat = candidate(0, train_end, H);
        if (yhat.size() != H) throw ValidationError("forecast provider returned the wrong number of values");
        const std::vector<double> ybar(H, stats::mean(train));
        for (std::size_t r = 0; r < R; ++r) {
            const auto params = derive_parameters(train, options.risk_levels[r]);
            for (std::size_t s = 0; s < costs.size(); ++s) {
                auto& t = totals[r * costs.size() + s];
                t.candidate += simulate(actual, yhat, params, costs[s], params.d, options.simulation).total_cost();
                t.mean += simulate(actual, ybar, params, costs[s], params.d, options.simulation).total_cost();
                t.days += H;
            }
        }
    }

    SavingsReport report;
    report.label = std::move(label);
    report.g = options.g;
    report.H = H;
    report.origin_count = origins.size();
    for (std::size_t r = 0; r < R; ++r) {
        for (std::size_t s = 0; s < costs.size(); ++s) {
            const auto& t = totals[r * costs.size() + s];
            SavingsRecord rec;
            rec.scenario = costs[s].name;
            rec.risk = options.risk_levels[r];
            rec.cost_candidate = t.candidate / static_cast<double>(t.days);
            rec.cost_mean = t.mean / static_cast<double>(t.days);
            rec.saving_abs = rec.cost_mean - rec.cost_candidate;
            rec.saving_rel = rec.cost_mean > 0.0 ? 1.0 - rec.cost_candidate / rec.cost_mean : 0.0;
            report.records.push_back(std::move(rec));
        }
    }
    return report;
}

SavingsReport compare_savings(const CashFlowSeries& series, const ModelSpec& candidate,
                              std::span<const CostStructure> costs, const CompareOptions& options) {
    return compare_savings(series.values(), model_provider(series, candidate), costs, options,
                           std::string(to_string(candidate.family)));
}

void write_savings_csv(const SavingsReport& report, std::ostream& out) {
    out << "scenario,risk,cost_candidate,cost_mean,saving_abs,saving_pct\n";
    for (const auto& r : report.records) {
        out << r.scenario << ',' << fmt_num(r.risk) << ',' << fmt_num(r.cost_candidate) << ','
            << fmt_num(r.cost_mean) << ',' << fmt_num(r.saving_abs) << ',' << fmt_num(100.0 * r.saving_rel)
            << '\n';
    }
}

std::vector<double> synthesize_forecasts(std::span<const double> actuals, double sigma, std::uint64_t seed) {
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw ValidationError("sigma must be finite and nonnegative");
    std::vector<double> out(actuals.begin(), actuals.end());
    if (sigma == 0.0) return out;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, sigma);
    for (double& v : out) v += noise(rng);
    return out;
}

std::vector<double> default_sigma_grid(std::span<const double> values, std::size_t g) {
    if (g < 2 || g > values.size()) throw ValidationError("default sigma grid needs 2 <= g <= T");
    const double sd = stats::stddev(values.first(g));
    std::vector<double> grid;
    for (int k = 0; k <= 15; ++k) grid.push_back(0.1 * k * sd);
    return grid;
}

std::vector<SweepPoint> accuracy_savings_sweep(std::span<const double> values, std::span<const double> sigma_grid,
                                               std::span<const CostStructure> costs, const CompareOptions& options,
                                               std::uint64_t seed) {
    if (sigma_grid.empty()) throw ValidationError("sigma grid is empty");
    for (std::size_t k = 0; k < sigma_grid.size(); ++k) {
        if (!(sigma_grid[k] >= 0.0)) throw ValidationError("sigma grid values must be nonnegative");
        if (k > 0 && sigma_grid[k] < sigma_grid[k - 1]) throw ValidationError("sigma grid must be sorted ascending");
    }
    const CVOptions cv{options.g, options.H, OriginMethod::FixedOrigin, options.stride, true};
    std::vector<SweepPoint> points;
    for (std::size_t k = 0; k < sigma_grid.size(); ++k) {
        SweepPoint p;
        p.sigma = sigma_grid[k];
        p.seed = seed + k;
        p.risk_levels = options.risk_levels;
        const auto synthetic = synthesize_forecasts(values, p.sigma, p.seed);
        const ForecastProvider provider = [&synthetic](std::size_t, std::size_t end, std::size_t count) {
            return std::vector<double>(synthetic.begin() + static_cast<std::ptrdiff_t>(end),
                                       synthetic.begin() + static_cast<std::ptrdiff_t>(end + count));
        };
        p.epsilon_bar = cross_validate(values, cv, provider).mean_epsilon;
        const auto report = compare_savings(values, provider, costs, options, "synthetic");
        for (double risk : options.risk_levels) {
            double cand = 0.0, mean = 0.0, abs_sum = 0.0;
            std::size_t n = 0;
            for (const auto& r : report.records) {
                if (r.risk != risk) continue;
                cand += r.cost_candidate;
                mean += r.cost_mean;
                abs_sum += r.saving_abs;
                ++n;
            }
            p.savings_rel.push_back(mean > 0.0 ? 1.0 - cand / mean : 0.0);
            p.savings_abs.push_back(abs_sum / static_cast<double>(n));
        }
        points.push_back(std::move(p));
    }
    return points;
}

void write_sweep_csv(std::span<const SweepPoint> points, std::ostream& out) {
    out << "sigma,epsilon_bar,risk,savings_pct\n";
    for (const auto& p : points) {
        for (std::size_t r = 0; r < p.risk_levels.size(); ++r) {
            out << fmt_num(p.sigma) << ',' << fmt_num(p.epsilon_bar) << ',' << fmt_num(p.risk_levels[r]) << ','
                << fmt_num(100.0 * p.savings_rel[r]) << '\n';
        }
    }
}

namespace {

std::string tick_label(double v) {
    std::ostringstream os;
    os.precision(3);
    os << v;
    return os.str();
}

}  // namespace

void write_sweep_svg(std::span<const SweepPoint> points, std::ostream& out, std::span<const ReferenceLine> references,
                     const std::string& comment) {
    constexpr double W = 720, Hpx = 480, left = 70, right = 150, top = 30, bottom = 60;
    const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

    double x_max = 0.0, y_min = 0.0, y_max = 0.0;
    for (const auto& p : points) {
        x_max = std::max(x_max, p.epsilon_bar);
        for (double s : p.savings_rel) {
            y_min = std::min(y_min, 100.0 * s);
            y_max = std::max(y_max, 100.0 * s);
        }
    }
    for (const auto& r : references) x_max = std::max(x_max, r.epsilon_bar);
    x_max = x_max > 0.0 ? x_max * 1.05 : 1.0;
    if (y_max <= y_min) y_max = y_min + 1.0;
    const double pad = 0.05 * (y_max - y_min);
    y_min -= pad;
    y_max += pad;
    const double pw = W - left - right, ph = Hpx - top - bottom;
    auto sx = [&](double x) { return left + pw * x / x_max; };
    auto sy = [&](double y) { return top + ph * (1.0 - (y - y_min) / (y_max - y_min)); };

    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    if (!comment.empty()) out << "<!-- " << comment << " -->\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << Hpx
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 5; ++k) {
        const double xv = x_max * k / 5.0, yv = y_min + (y_max - y_min) * k / 5.0;
        out << "<text x=\"" << sx(xv) << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\">"
            << tick_label(xv) << "</text>\n";
        out << "<text x=\"" << left - 6 << "\" y=\"" << sy(yv) + 4 << "\" text-anchor=\"end\">" << tick_label(yv)
            << "</text>\n";
    }
    if (y_min < 0.0 && y_max > 0.0) {
        out << "<line x1=\"" << left << "\" y1=\"" << sy(0) << "\" x2=\"" << left + pw << "\" y2=\"" << sy(0)
            << "\" stroke=\"#999\" stroke-dasharray=\"2,2\"/>\n";
    }
    out << "<text x=\"" << left + pw / 2 << "\" y=\"" << Hpx - 15
        << "\" text-anchor=\"middle\">mean error ratio (epsilon bar)</text>\n";
    out << "<text transform=\"translate(18," << top + ph / 2
        << ") rotate(-90)\" text-anchor=\"middle\">savings (%)</text>\n";

    const std::size_t R = points.empty() ? 0 : points.front().risk_levels.size();
    for (std::size_t r = 0; r < R; ++r) {
        std::vector<std::pair<double, double>> xy;
        for (const auto& p : points) xy.emplace_back(p.epsilon_bar, 100.0 * p.savings_rel[r]);
        std::stable_sort(xy.begin(), xy.end(), [](auto a, auto b) { return a.first < b.first; });
        out << "<polyline fill=\"none\" stroke=\"" << colors[r % 6] << "\" stroke-width=\"2\" points=\"";
        for (std::size_t i = 0; i < xy.size(); ++i) {
            out << (i ? " " : "") << sx(xy[i].first) << ',' << sy(xy[i].second);
        }
        out << "\"/>\n";
        const double ly = top + 20 + 18 * static_cast<double>(r);
        out << "<line x1=\"" << left + pw + 10 << "\" y1=\"" << ly << "\" x2=\"" << left + pw + 30 << "\" y2=\""
            << ly << "\" stroke=\"" << colors[r % 6] << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << left + pw + 35 << "\" y=\"" << ly + 4 << "\">risk "
            << tick_label(100.0 * points.front().risk_levels[r]) << "%</text>\n";
    }
    for (const auto& ref : references) {
        out << "<line x1=\"" << sx(ref.epsilon_bar) << "\" y1=\"" << top << "\" x2=\"" << sx(ref.epsilon_bar)
            << "\" y2=\"" << top + ph << "\" stroke=\"#555\" stroke-dasharray=\"6,4\"/>\n";
        out << "<text x=\"" << sx(ref.epsilon_bar) + 4 << "\" y=\"" << top + 14 << "\">" << ref.label << "</text>\n";
    }
    out << "</svg>\n";
}

void render_sweep(std::span<const SweepPoint> points, const std::filesystem::path& directory, bool with_plot,
                  std::span<const ReferenceLine> references, const std::string& header_comment) {
    if (points.size() < 2) throw ValidationError("rendering a sweep needs at least two points");
    std::ofstream csv(directory / "sweep.csv");
    if (!csv) throw IoError("cannot write " + (directory / "sweep.csv").string());
    if (!header_comment.empty()) csv << "# " << header_comment << '\n';
    write_sweep_csv(points, csv);
    if (!csv) throw IoError("failed writing " + (directory / "sweep.csv").string());
    if (with_plot) {
        std::ofstream svg(directory / "sweep.svg");
        if (!svg) throw IoError("cannot write " + (directory / "sweep.svg").string());
        write_sweep_svg(points, svg, references, header_comment);
    }
}

namespace {

double interpolate(const std::vector<std::pair<double, double>>& xy, double x) {
    if (x <= xy.front().first) return xy.front().second;
    if (x >= xy.back().first) return xy.back().second;
    const auto it = std::lower_bound(xy.begin(), xy.end(), x, [](auto p, double v) { return p.first < v; });
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    if (hi.first == lo.first) return hi.second;
    return lo.second + (hi.second - lo.second) * (x - lo.first) / (hi.first - lo.first);
}

}  // namespace

std::vector<ImprovementDecision> improvement_decision(std::span<const SweepPoint> points, double epsilon_from,
                                                      double epsilon_to, double improvement_cost_per_day) {
    if (points.empty()) throw ValidationError("improvement decision needs sweep points");
    std::vector<ImprovementDecision> out;
    for (std::size_t r = 0; r < points.front().risk_levels.size(); ++r) {
        std::vector<std::pair<double, double>> xy;
        for (const auto& p : points) xy.emplace_back(p.epsilon_bar, p.savings_abs[r]);
        std::stable_sort(xy.begin(), xy.end(), [](auto a, auto b) { return a.first < b.first; });
        ImprovementDecision d;
        d.risk = points.front().risk_levels[r];
        d.saving_from = interpolate(xy, epsilon_from);
        d.saving_to = interpolate(xy, epsilon_to);
        d.gain = d.saving_to - d.saving_from;
        d.improvement_cost = improvement_cost_per_day;
        d.worthwhile = d.gain > improvement_cost_per_day;
        out.push_back(d);
    }
    return out;
}

std::string decision_line(const ImprovementDecision& d, double epsilon_from, double epsilon_to) {
    std::ostringstream os;
    os << "risk " << fmt_num(d.risk) << ": epsilon_bar " << fmt_num(epsilon_from) << " -> " << fmt_num(epsilon_to)
       << " saves " << fmt_num(d.gain) << " per day against improvement cost " << fmt_num(d.improvement_cost)
       << " per day: " << (d.worthwhile ? "improve" : "keep current model");
    return os.str();
}

}  // namespace cashcast
