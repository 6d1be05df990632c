#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "shiftmix/bounds.hpp"
#include "shiftmix/codiff.hpp"
#include "shiftmix/errors.hpp"
#include "shiftmix/mc.hpp"
#include "shiftmix/measures.hpp"
#include "shiftmix/mixing.hpp"
#include "shiftmix/report.hpp"
#include "shiftmix/serialize.hpp"

namespace shiftmix::cli {

// Exit codes: 0 success, 1 validation failure, 2 numerical failure (including
// a codifference value exceeding its emitted bound), 3 malformed config/usage.
enum ExitCode : int {
    kOk = 0,
    kValidationFailure = 1,
    kNumericalFailure = 2,
    kBadConfig = 3,
};

struct CommonOptions {
    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::int64_t> n_max_override;
    std::optional<std::uint64_t> seed_override;
    std::optional<int> workers_override;
};

namespace detail {

inline ExperimentConfig load(const CommonOptions& opts) {
    ExperimentConfig cfg = load_config(opts.config_path);
    if (opts.n_max_override.has_value()) cfg.n_max = *opts.n_max_override;
    if (opts.seed_override.has_value()) {
        if (!cfg.mc.has_value()) cfg.mc = MCConfig{};
        cfg.mc->seed = *opts.seed_override;
    }
    if (opts.workers_override.has_value()) {
        if (!cfg.mc.has_value()) cfg.mc = MCConfig{};
        cfg.mc->workers = *opts.workers_override;
    }
    return cfg;
}

inline void check_config_semantics(const ExperimentConfig& cfg) {
    cfg.measure.require_valid();
    if (cfg.op.domain() != cfg.measure.domain()) {
        throw ValidationError("operator and measure index domains differ");
    }
    for (const Functional& probe : cfg.probes) {
        if (probe.domain() != cfg.measure.domain()) {
            throw ValidationError("probe index domain differs from the measure's");
        }
    }
}

// Probe pair convention: x = probes[0], y = probes[1] if present else probes[0].
inline std::pair<const Functional*, const Functional*> probe_pair(
    const ExperimentConfig& cfg) {
    const Functional* x = &cfg.probes.front();
    const Functional* y = cfg.probes.size() > 1 ? &cfg.probes[1] : x;
    return {x, y};
}

inline double pair_bound(const MeasureSpec& m, const Functional& x, const Functional& y,
                         CodiffKind kind) {
    switch (m.family()) {
        case MeasureFamily::CompoundPoisson:
            return levy_bound(m, x, y, m.index_p(), kind);
        case MeasureFamily::SymmetricAlphaStable:
            return control_bound(m, x, y, m.index_p(), Cutoff::automatic(), kind);
        case MeasureFamily::TemperedStable:
            return temp_bound(m, x, y, kind);
    }
    throw ValidationError("unknown measure family");
}

// n-dependent closed-form rate when the configuration matches a rate model;
// NaN otherwise.
inline double rate_value(const ExperimentConfig& cfg, std::int64_t n) {
    const MeasureSpec& m = cfg.measure;
    if (n < 1) return std::numeric_limits<double>::quiet_NaN();
    try {
        switch (m.family()) {
            case MeasureFamily::CompoundPoisson: {
                const SeqSpec& lam = m.cp().lambda;
                if (lam.kind() != SeqKind::PowerLaw) break;
                return poisson_rate(lam.value0(), lam.gamma(), m.cp().p, n);
            }
            case MeasureFamily::SymmetricAlphaStable: {
                if (cfg.op.direction() != Direction::ForwardOnZ) break;
                const RateParams rp = cfg.op.rate_params();
                return stable_shift_rate(rp, m.stable().alpha, m.stable().p, n).sum_bound;
            }
            case MeasureFamily::TemperedStable: {
                const auto& t = m.tempered();
                if (t.k.kind() != SeqKind::PowerLaw) break;
                return temp_rate(t.k.value0(), t.k.gamma(), t.p, n, t.alpha, t.a_minus,
                                 t.a_plus, t.lam_minus, t.lam_plus);
            }
        }
    } catch (const NumericError&) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    return std::numeric_limits<double>::quiet_NaN();
}

inline void emit(const ExperimentConfig& cfg, const CommonOptions& opts,
                 const std::string& command, const std::vector<ReportRow>& rows) {
    std::filesystem::create_directories(opts.out_dir);
    const std::filesystem::path base =
        std::filesystem::path(opts.out_dir) / command;
    if (cfg.outputs.csv) {
        write_text_file((base.string() + ".csv"), rows_to_csv(rows));
    }
    if (cfg.outputs.json) {
        write_text_file((base.string() + ".json"),
                        report_to_json(command, to_json(cfg), rows).dump(2) + "\n");
    }
    if (cfg.outputs.svg) {
        write_text_file((base.string() + ".svg"), rows_to_svg(rows, command));
    }
}

inline MCConfig require_mc(const ExperimentConfig& cfg, const std::string& command) {
    if (!cfg.mc.has_value()) {
        throw ConfigError("config.mc section is required by the " + command + " command");
    }
    return *cfg.mc;
}

} // namespace detail

// --- validate ---------------------------------------------------------------
inline int cmd_validate(const CommonOptions& opts) {
    const ExperimentConfig cfg = detail::load(opts);
    const ValidityReport report = cfg.measure.validate();
    ordered_json out{{"command", "validate"},
                     {"config", to_json(cfg)},
                     {"measure_ok", report.ok},
                     {"failures", report.failures}};
    bool ok = report.ok;
    try {
        detail::check_config_semantics(cfg);
    } catch (const ValidationError& e) {
        ok = false;
        out["failures"].push_back(e.what());
    }
    out["ok"] = ok;
    std::cout << (ok ? "valid" : "invalid") << "\n";
    for (const auto& f : out["failures"]) {
        std::cout << "  - " << f.get<std::string>() << "\n";
    }
    if (cfg.outputs.json) {
        std::filesystem::create_directories(opts.out_dir);
        write_text_file(
            (std::filesystem::path(opts.out_dir) / "validate.json").string(),
            out.dump(2) + "\n");
    }
    return ok ? kOk : kValidationFailure;
}

// --- codiff ------------------------------------------------------------------
inline int cmd_codiff(const CommonOptions& opts) {
    const ExperimentConfig cfg = detail::load(opts);
    detail::check_config_semantics(cfg);
    const auto [x, y] = detail::probe_pair(cfg);
    std::vector<ReportRow> rows;
    for (std::int64_t n = 0; n <= cfg.n_max; ++n) {
        const Functional shifted = cfg.op.adjoint_power(n, *y);
        const complexd eq = codiff_equal(cfg.measure, *x, shifted).value;
        const complexd neq = codiff_notequal(cfg.measure, *x, shifted).value;
        ReportRow row;
        row.n = n;
        row.codiff_eq_re = eq.real();
        row.codiff_eq_im = eq.imag();
        row.codiff_neq_re = neq.real();
        row.codiff_neq_im = neq.imag();
        rows.push_back(row);
    }
    detail::emit(cfg, opts, "codiff", rows);
    std::cout << "codiff: wrote " << rows.size() << " rows\n";
    return kOk;
}

// --- bound -------------------------------------------------------------------
inline int cmd_bound(const CommonOptions& opts) {
    const ExperimentConfig cfg = detail::load(opts);
    detail::check_config_semantics(cfg);
    const auto [x, y] = detail::probe_pair(cfg);
    std::vector<ReportRow> rows;
    for (std::int64_t n = 0; n <= cfg.n_max; ++n) {
        const Functional shifted = cfg.op.adjoint_power(n, *y);
        const complexd eq = codiff_equal(cfg.measure, *x, shifted).value;
        const complexd neq = codiff_notequal(cfg.measure, *x, shifted).value;
        const double bound_eq =
            detail::pair_bound(cfg.measure, *x, shifted, CodiffKind::Equal);
        const double bound_neq =
            detail::pair_bound(cfg.measure, *x, shifted, CodiffKind::NotEqual);
        // Emission gate: a bound violation is a numerical failure, not data.
        if (std::abs(eq) > bound_eq * (1.0 + 1e-9) + 1e-300 ||
            std::abs(neq) > bound_neq * (1.0 + 1e-9) + 1e-300) {
            throw NumericError("codifference exceeds its bound at n=" +
                               std::to_string(n) + "; refusing to emit");
        }
        ReportRow row;
        row.n = n;
        row.codiff_eq_re = eq.real();
        row.codiff_eq_im = eq.imag();
        row.codiff_neq_re = neq.real();
        row.codiff_neq_im = neq.imag();
        row.bound = std::max(bound_eq, bound_neq);
        row.rate_formula = detail::rate_value(cfg, n);
        rows.push_back(row);
    }
    detail::emit(cfg, opts, "bound", rows);
    std::cout << "bound: wrote " << rows.size() << " rows\n";
    return kOk;
}

// --- rate-table ---------------------------------------------------------------
inline int cmd_rate_table(const CommonOptions& opts) {
    const ExperimentConfig cfg = detail::load(opts);
    detail::check_config_semantics(cfg);
    const MeasureSpec& m = cfg.measure;
    std::vector<double> shift_bound;
    switch (m.family()) {
        case MeasureFamily::CompoundPoisson:
            shift_bound = poisson_shift_bound_table(m.cp().lambda, m.cp().p, cfg.n_max);
            break;
        case MeasureFamily::TemperedStable: {
            const auto& t = m.tempered();
            shift_bound = temp_shift_bound_table(t.k, t.alpha, t.a_minus, t.a_plus,
                                                 t.lam_minus, t.lam_plus, t.p, cfg.n_max);
            break;
        }
        case MeasureFamily::SymmetricAlphaStable:
            break; // the pre-rate sum appears in the rate_formula column
    }
    std::vector<ReportRow> rows;
    for (std::int64_t n = 0; n <= cfg.n_max; ++n) {
        ReportRow row;
        row.n = n;
        if (!shift_bound.empty()) row.bound = shift_bound[static_cast<std::size_t>(n)];
        row.rate_formula = detail::rate_value(cfg, n);
        rows.push_back(row);
    }
    detail::emit(cfg, opts, "rate_table", rows);
    std::cout << "rate-table: wrote " << rows.size() << " rows\n";
    return kOk;
}

// --- mc ------------------------------------------------------------------------
// Monte Carlo route to the equal-kind codifference: three characteristic
// function estimates combined as log cf(x - y~) - log cf(x) - log cf(-y~).
inline int cmd_mc(const CommonOptions& opts) {
    const ExperimentConfig cfg = detail::load(opts);
    detail::check_config_semantics(cfg);
    const MCConfig mc = detail::require_mc(cfg, "mc");
    const auto [x, y] = detail::probe_pair(cfg);
    std::vector<ReportRow> rows;
    for (std::int64_t n = 0; n <= cfg.n_max; ++n) {
        const Functional shifted = cfg.op.adjoint_power(n, *y);
        const complexd eq = codiff_equal(cfg.measure, *x, shifted).value;
        const complexd neq = codiff_notequal(cfg.measure, *x, shifted).value;
        const Functional minus_y = -shifted;
        const Functional sum = *x + minus_y;
        const std::uint32_t s0 = static_cast<std::uint32_t>(3 * n);
        const MCEstimate e_sum =
            estimate_cf(cfg.measure, sum, mc.samples, RngSpec{mc.seed, s0}, mc.workers);
        const MCEstimate e_x = estimate_cf(cfg.measure, *x, mc.samples,
                                           RngSpec{mc.seed, s0 + 1}, mc.workers);
        const MCEstimate e_my = estimate_cf(cfg.measure, minus_y, mc.samples,
                                            RngSpec{mc.seed, s0 + 2}, mc.workers);
        if (std::abs(e_sum.value) == 0.0 || std::abs(e_x.value) == 0.0 ||
            std::abs(e_my.value) == 0.0) {
            throw NumericError("mc: an estimated characteristic function vanished; "
                               "cannot take its logarithm");
        }
        const complexd mc_codiff =
            std::log(e_sum.value) - std::log(e_x.value) - std::log(e_my.value);
        const double mc_se = std::sqrt(
            std::pow(e_sum.std_error / std::abs(e_sum.value), 2) +
            std::pow(e_x.std_error / std::abs(e_x.value), 2) +
            std::pow(e_my.std_error / std::abs(e_my.value), 2));
        ReportRow row;
        row.n = n;
        row.codiff_eq_re = eq.real();
        row.codiff_eq_im = eq.imag();
        row.codiff_neq_re = neq.real();
        row.codiff_neq_im = neq.imag();
        row.mc_value = mc_codiff.real();
        row.mc_stderr = mc_se;
        rows.push_back(row);
    }
    detail::emit(cfg, opts, "mc", rows);
    std::cout << "mc: wrote " << rows.size() << " rows (" << mc.samples
              << " samples per estimate)\n";
    return kOk;
}

// --- series-in -------------------------------------------------------------------
// Exact I_n for exponential-series observables; the real/imaginary parts are
// written to the codiff_eq columns (documented convention).
inline int cmd_series_in(const CommonOptions& opts) {
    const ExperimentConfig cfg = detail::load(opts);
    detail::check_config_semantics(cfg);
    if (!cfg.series.has_value()) {
        throw ConfigError("config.series section is required by the series-in command");
    }
    const double p = cfg.measure.index_p();
    const auto build = [&](const SeriesObservableSpec& spec) {
        return geometric_observable(spec.a0, spec.ratio, spec.sign, spec.base, cfg.op, p,
                                    spec.tail_tol);
    };
    const ExpSeriesObservable f = build(cfg.series->f);
    const ExpSeriesObservable g = build(cfg.series->g);
    std::vector<ReportRow> rows;
    for (std::int64_t n = 0; n <= cfg.n_max; ++n) {
        const complexd in = exact_In(cfg.measure, cfg.op, f, g, n);
        ReportRow row;
        row.n = n;
        row.codiff_eq_re = in.real();
        row.codiff_eq_im = in.imag();
        if (cfg.mc.has_value()) {
            const MCEstimate est = estimate_In(
                cfg.measure, cfg.op, f, g, n, cfg.mc->samples,
                RngSpec{cfg.mc->seed, static_cast<std::uint32_t>(n)}, cfg.mc->workers);
            row.mc_value = est.value.real();
            row.mc_stderr = est.std_error;
        }
        rows.push_back(row);
    }
    detail::emit(cfg, opts, "series_in", rows);
    std::cout << "series-in: wrote " << rows.size() << " rows\n";
    return kOk;
}

// --- mixing-verdict ----------------------------------------------------------------
inline int cmd_mixing_verdict(const CommonOptions& opts) {
    const ExperimentConfig cfg = detail::load(opts);
    detail::check_config_semantics(cfg);
    const MixingVerdict verdict =
        mixing_verdict(cfg.measure, cfg.op, cfg.probes, cfg.n_max, cfg.tolerance);
    ordered_json out{{"command", "mixing-verdict"},
                     {"config", to_json(cfg)},
                     {"verdict", to_string(verdict.verdict)},
                     {"detail", verdict.detail}};
    if (verdict.witness.has_value()) {
        out["witness"] = ordered_json{
            {"probe", to_json(verdict.witness->probe)},
            {"scale", verdict.witness->scale},
            {"value", {verdict.witness->value.real(), verdict.witness->value.imag()}}};
    }
    std::cout << to_string(verdict.verdict) << ": " << verdict.detail << "\n";
    if (verdict.witness.has_value()) {
        std::cout << "witness scale " << verdict.witness->scale << ", value ("
                  << verdict.witness->value.real() << ", "
                  << verdict.witness->value.imag() << ")\n";
    }
    if (cfg.outputs.json) {
        std::filesystem::create_directories(opts.out_dir);
        write_text_file(
            (std::filesystem::path(opts.out_dir) / "mixing_verdict.json").string(),
            out.dump(2) + "\n");
    }
    return kOk;
}

// Dispatch with the documented exit-code mapping.
inline int run_command(const std::string& command, const CommonOptions& opts) {
    try {
        if (command == "validate") return cmd_validate(opts);
        if (command == "codiff") return cmd_codiff(opts);
        if (command == "bound") return cmd_bound(opts);
        if (command == "rate-table") return cmd_rate_table(opts);
        if (command == "mc") return cmd_mc(opts);
        if (command == "series-in") return cmd_series_in(opts);
        if (command == "mixing-verdict") return cmd_mixing_verdict(opts);
        std::cerr << "unknown command: " << command << "\n";
        return kBadConfig;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kBadConfig;
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kValidationFailure;
    } catch (const NumericError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kNumericalFailure;
    }
}

} // namespace shiftmix::cli
