// Command-line front end: validates configs, tabulates codifferences and
// their bounds, runs rate tables, Monte Carlo cross-checks, exponential-series
// covariances, and the mixing verdict.

#include <cstdint>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "shiftmix/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"weighted shift mixing analysis"};
    app.require_subcommand(1);

    shiftmix::cli::CommonOptions opts;
    std::int64_t n_max = -1;
    std::int64_t seed = -1;
    int workers = -1;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opts.config_path, "path to the JSON config")
            ->required();
        sub->add_option("--out-dir", opts.out_dir, "directory for report files");
        sub->add_option("--n-max", n_max, "override config n_max");
        sub->add_option("--seed", seed, "override config mc.seed");
        sub->add_option("--workers", workers, "override config mc.workers");
    };

    const char* names[] = {"validate", "codiff",    "bound",         "rate-table",
                           "mc",       "series-in", "mixing-verdict"};
    for (const char* name : names) add_common(app.add_subcommand(name));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : shiftmix::cli::kBadConfig;
    }

    if (n_max >= 0) opts.n_max_override = n_max;
    if (seed >= 0) opts.seed_override = static_cast<std::uint64_t>(seed);
    if (workers >= 1) opts.workers_override = workers;

    return shiftmix::cli::run_command(app.get_subcommands().front()->get_name(), opts);
}
