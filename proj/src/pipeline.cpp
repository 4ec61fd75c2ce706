#include "cashcast/pipeline.hpp"

#include "cashcast/error.hpp"
#include "cashcast/models/model_io.hpp"
#include "cashcast/numfmt.hpp"

#include <json.hpp>
#include <spdlog/spdlog.h>

#include <fstream>

namespace cashcast {

std::string_view to_string(Command command) {
    switch (command) {
        case Command::Summarize: return "summarize";
        case Command::Derive: return "derive";
        case Command::CV: return "cv";
        case Command::Compare: return "compare";
        case Command::Sweep: return "sweep";
    }
    return "unknown";
}

Command parse_command(std::string_view text) {
    for (auto c : {Command::Summarize, Command::Derive, Command::CV, Command::Compare, Command::Sweep}) {
        if (text == to_string(c)) return c;
    }
    throw ValidationError("unknown command '" + std::string(text) + "'");
}

OutputFormat parse_output_format(std::string_view text) {
    if (text == "csv") return OutputFormat::Csv;
    if (text == "csv+plot") return OutputFormat::CsvPlot;
    throw ValidationError("unknown output format '" + std::string(text) + "', expected csv or csv+plot");
}

namespace {

ModelSpec seeded(ModelSpec spec, std::uint64_t master) {
    if (spec.family == Family::RBF) spec.seed = sub_seed(master, SeedStream::KMedoids);
    if (spec.family == Family::RandomForest) spec.seed = sub_seed(master, SeedStream::Bootstrap);
    return spec;
}

class OutputFile {
public:
    OutputFile(const PipelineConfig& config, const std::string& name, RunResult& result)
        : path_(config.output_dir / name), out_(path_) {
        if (!out_) throw IoError("cannot write " + path_.string());
        out_ << "# " << header_line(config) << '\n';
        result.files.push_back(path_);
    }
    ~OutputFile() noexcept(false) {
        out_.flush();
        if (!out_ && std::uncaught_exceptions() == 0) throw IoError("failed writing " + path_.string());
    }
    std::ostream& stream() { return out_; }

private:
    std::filesystem::path path_;
    std::ofstream out_;
};

void run_summarize(const PipelineConfig& config, RunResult& result) {
    const auto series = load_input(config);
    OutputFile file(config, "summary.csv", result);
    file.stream() << "dataset,length,mean,stddev,kurtosis\n"
                  << summary_csv_row(config.dataset_name, summarize(series)) << '\n';
}

void run_derive(const PipelineConfig& config, RunResult& result) {
    const auto series = load_input(config);
    OutputFile file(config, config.dataset_name + "_" + std::string(to_string(config.variant)) + ".csv", result);
    write_series(series, file.stream());
}

void run_cv(const PipelineConfig& config, RunResult& result) {
    const auto series = load_input(config);
    const auto spec = resolve_model(config, series);
    const CVOptions options{config.g_for(series.size()), config.horizon,
                            config.fixed_origin ? OriginMethod::FixedOrigin : OriginMethod::RollingOrigin,
                            config.fold_stride, false};
    spdlog::info("cross validating {} on {} observations, g={}, H={}", to_string(spec.family), series.size(),
                 options.g, options.H);
    const auto report = cross_validate(series, spec, options);
    {
        OutputFile file(config, "epsilon.csv", result);
        write_report_csv(report, file.stream());
    }
    {
        OutputFile file(config, "cv_summary.csv", result);
        file.stream() << "model,inputs,parameters,epsilon_bar,stddev\n"
                      << to_string(spec.family) << ',' << spec.inputs_label() << ',' << spec.parameters_label()
                      << ',' << fmt_num(report.mean_epsilon) << ',' << fmt_num(report.epsilon_stddev) << '\n';
    }
    if (config.save_model) {
        const auto g = options.g;
        const auto model = fit_model(spec, series.dates().first(g), series.values().first(g));
        auto doc = nlohmann::json::parse(serialize_model(model));
        doc["run"] = header_line(config);
        const auto path = config.output_dir / "model.json";
        std::ofstream out(path);
        if (!out) throw IoError("cannot write " + path.string());
        out << doc.dump(1) << '\n';
        result.files.push_back(path);
    }
}

CompareOptions compare_options(const PipelineConfig& config, std::size_t T) {
    CompareOptions options;
    options.g = config.g_for(T);
    options.H = config.horizon;
    options.stride = config.fold_stride;
    options.risk_levels = config.risk_levels;
    options.simulation = config.simulation;
    return options;
}

void run_compare(const PipelineConfig& config, RunResult& result) {
    const auto series = load_input(config);
    const auto spec = resolve_model(config, series);
    const auto options = compare_options(config, series.size());
    spdlog::info("comparing {} against the mean forecaster over {} cost structures", to_string(spec.family),
                 config.cost_structures.size());
    const auto report = compare_savings(series, spec, config.cost_structures, options);
    OutputFile file(config, "savings.csv", result);
    write_savings_csv(report, file.stream());
}

void run_sweep(const PipelineConfig& config, OutputFormat format, RunResult& result) {
    const auto series = load_input(config);
    const auto options = compare_options(config, series.size());
    const auto grid =
        config.sigma_grid.empty() ? default_sigma_grid(series.values(), options.g) : config.sigma_grid;
    spdlog::info("sweeping {} noise levels", grid.size());
    const auto points = accuracy_savings_sweep(series.values(), grid, config.cost_structures, options,
                                               sub_seed(config.seed, SeedStream::Sweep));
    {
        OutputFile file(config, "sweep.csv", result);
        write_sweep_csv(points, file.stream());
    }
    if (format == OutputFormat::CsvPlot) {
        if (points.size() < 2) throw ValidationError("a sweep plot needs at least two sigma values");
        const auto path = config.output_dir / "sweep.svg";
        std::ofstream svg(path);
        if (!svg) throw IoError("cannot write " + path.string());
        write_sweep_svg(points, svg, config.reference_epsilon, header_line(config));
        result.files.push_back(path);
    }
    if (config.improvement) {
        const auto& imp = *config.improvement;
        OutputFile file(config, "decision.txt", result);
        for (const auto& d : improvement_decision(points, imp.from_epsilon, imp.to_epsilon, imp.cost_per_day)) {
            const auto line = decision_line(d, imp.from_epsilon, imp.to_epsilon);
            spdlog::info("{}", line);
            file.stream() << line << '\n';
        }
    }
}

}  // namespace

CashFlowSeries load_input(const PipelineConfig& config) {
    if (config.input.empty()) throw ConfigError("input", "is required");
    if (!std::filesystem::exists(config.input)) {
        throw IoError("input file " + config.input.string() + " does not exist");
    }
    const auto raw = load_series(config.input);
    return derive_variant(raw, config.variant, sub_seed(config.seed, SeedStream::Variant));
}

ModelSpec resolve_model(const PipelineConfig& config, const CashFlowSeries& series) {
    if (config.grid.empty()) return seeded(config.model, config.seed);
    std::vector<ModelSpec> candidates;
    for (const auto& c : config.grid) candidates.push_back(seeded(c, config.seed));
    const auto search = parameter_search(series, candidates, config.g_fraction);
    spdlog::info("parameter search chose {} {} (R^2 {})", to_string(search.spec.family),
                 search.spec.parameters_label(), search.r_squared[search.chosen]);
    return search.spec;
}

RunResult run(Command command, const PipelineConfig& config, OutputFormat format) {
    RunResult result;
    try {
        std::filesystem::create_directories(config.output_dir);
        switch (command) {
            case Command::Summarize: run_summarize(config, result); break;
            case Command::Derive: run_derive(config, result); break;
            case Command::CV: run_cv(config, result); break;
            case Command::Compare: run_compare(config, result); break;
            case Command::Sweep: run_sweep(config, format, result); break;
        }
    } catch (const std::exception& e) {
        result.exit_code = 1;
        result.error = e.what();
        spdlog::error("{}: {}", to_string(command), e.what());
    }
    return result;
}

}  // namespace cashcast
