// cashcast command line: summarize, derive, cv, compare, sweep.

#include "cashcast/config.hpp"
#include "cashcast/error.hpp"
#include "cashcast/pipeline.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <optional>

int main(int argc, char** argv) {
    auto logger = spdlog::stderr_color_mt("cashcast");
    spdlog::set_default_logger(logger);
    spdlog::set_level(spdlog::level::info);
    if (const char* level = std::getenv("CASHCAST_LOG_LEVEL")) {
        spdlog::set_level(spdlog::level::from_str(level));
    }

    CLI::App app{"Forecast accuracy and cash management cost analysis"};
    app.require_subcommand(1);
    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::string format = "csv";

    for (const char* name : {"summarize", "derive", "cv", "compare", "sweep"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "YAML configuration file")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", out_dir, "Output directory (overrides output_dir)");
        sub->add_option("--seed", seed, "Master seed (overrides seed)");
        sub->add_option("--format", format, "csv or csv+plot")->check(CLI::IsMember({"csv", "csv+plot"}));
    }
    CLI11_PARSE(app, argc, argv);

    const auto command = cashcast::parse_command(app.get_subcommands().front()->get_name());
    cashcast::PipelineConfig config;
    try {
        config = cashcast::load_config(config_path);
    } catch (const std::exception& e) {
        spdlog::error("invalid configuration: {}", e.what());
        return 2;
    }
    if (!out_dir.empty()) config.output_dir = out_dir;
    if (seed) config.seed = *seed;

    const auto result = cashcast::run(command, config, cashcast::parse_output_format(format));
    for (const auto& f : result.files) spdlog::info("wrote {}", f.string());
    return result.exit_code;
}
