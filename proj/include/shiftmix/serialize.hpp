#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "shiftmix/codiff.hpp"
#include "shiftmix/errors.hpp"
#include "shiftmix/measures.hpp"
#include "shiftmix/seqspace.hpp"
#include "shiftmix/shifts.hpp"

namespace shiftmix {

using ordered_json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Experiment configuration model.
// ---------------------------------------------------------------------------
struct MCConfig {
    std::int64_t samples = 10000;
    std::uint64_t seed = 0;
    int workers = 1;
};

struct OutputConfig {
    bool csv = true;
    bool json = true;
    bool svg = true;
};

struct SeriesObservableSpec {
    complexd a0{1.0, 0.0};
    double ratio = 0.5;
    SignFn sign = SignFn::Re;
    Functional base = Functional(Domain::N);
    double tail_tol = 1e-10;
};

struct SeriesConfig {
    SeriesObservableSpec f;
    SeriesObservableSpec g;
};

struct ExperimentConfig {
    MeasureSpec measure;
    WeightedShiftOperator op;
    std::vector<Functional> probes;
    std::int64_t n_max = 100;
    double tolerance = 1e-6;
    std::optional<MCConfig> mc;
    OutputConfig outputs;
    std::optional<SeriesConfig> series;
};

// ---------------------------------------------------------------------------
// Field helpers: descriptive ConfigError on missing keys or wrong types.
// ---------------------------------------------------------------------------
namespace detail {

inline const ordered_json& require_field(const ordered_json& j, const char* key,
                                         const std::string& where) {
    auto it = j.find(key);
    if (it == j.end()) {
        throw ConfigError(where + ": missing required field \"" + key + "\"");
    }
    return *it;
}

inline double require_number(const ordered_json& j, const char* key,
                             const std::string& where) {
    const ordered_json& field = require_field(j, key, where);
    if (!field.is_number()) {
        throw ConfigError(where + "." + key + " must be a number");
    }
    return field.get<double>();
}

inline std::int64_t require_integer(const ordered_json& j, const char* key,
                                    const std::string& where) {
    const ordered_json& field = require_field(j, key, where);
    if (!field.is_number_integer()) {
        throw ConfigError(where + "." + key + " must be an integer");
    }
    return field.get<std::int64_t>();
}

inline std::string require_string(const ordered_json& j, const char* key,
                                  const std::string& where) {
    const ordered_json& field = require_field(j, key, where);
    if (!field.is_string()) {
        throw ConfigError(where + "." + key + " must be a string");
    }
    return field.get<std::string>();
}

inline void require_object(const ordered_json& j, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
}

} // namespace detail

// ---------------------------------------------------------------------------
// Domain / sign function names.
// ---------------------------------------------------------------------------
inline ordered_json domain_to_json(Domain d) { return d == Domain::N ? "N" : "Z"; }

inline Domain domain_from_json(const ordered_json& j, const std::string& where) {
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "N") return Domain::N;
        if (s == "Z") return Domain::Z;
    }
    throw ConfigError(where + ": domain must be \"N\" or \"Z\"");
}

inline const char* sign_to_string(SignFn s) {
    switch (s) {
        case SignFn::Re: return "re";
        case SignFn::MinusRe: return "-re";
        case SignFn::Im: return "im";
        case SignFn::MinusIm: return "-im";
    }
    return "?";
}

inline SignFn sign_from_string(const std::string& s, const std::string& where) {
    if (s == "re") return SignFn::Re;
    if (s == "-re") return SignFn::MinusRe;
    if (s == "im") return SignFn::Im;
    if (s == "-im") return SignFn::MinusIm;
    throw ConfigError(where + ": sign must be one of \"re\", \"-re\", \"im\", \"-im\"");
}

// ---------------------------------------------------------------------------
// Functional <-> {"domain": ..., "coeffs": [[index, re, im], ...]}
// ---------------------------------------------------------------------------
inline ordered_json to_json(const Functional& f) {
    ordered_json coeffs = ordered_json::array();
    for (const auto& [index, value] : f.coeffs()) {
        coeffs.push_back({index, value.real(), value.imag()});
    }
    return ordered_json{{"domain", domain_to_json(f.domain())}, {"coeffs", coeffs}};
}

inline Functional functional_from_json(const ordered_json& j, const std::string& where) {
    detail::require_object(j, where);
    const Domain domain = domain_from_json(detail::require_field(j, "domain", where), where);
    const ordered_json& coeffs = detail::require_field(j, "coeffs", where);
    if (!coeffs.is_array()) throw ConfigError(where + ".coeffs must be an array");
    Functional f(domain);
    for (const ordered_json& entry : coeffs) {
        if (!entry.is_array() || entry.size() != 3 || !entry[0].is_number_integer() ||
            !entry[1].is_number() || !entry[2].is_number()) {
            throw ConfigError(where + ".coeffs entries must be [index, re, im] triples");
        }
        try {
            f.add(entry[0].get<std::int64_t>(),
                  complexd{entry[1].get<double>(), entry[2].get<double>()});
        } catch (const ValidationError& e) {
            throw ConfigError(where + ".coeffs: " + e.what());
        }
    }
    return f;
}

// ---------------------------------------------------------------------------
// WeightRule <-> {"kind": ..., fields}
// ---------------------------------------------------------------------------
inline ordered_json to_json(const WeightRule& rule) {
    switch (rule.kind) {
        case WeightKind::PowerRatioUnitFirst:
            return ordered_json{{"kind", "power_ratio_unit_first"},
                                {"gamma", rule.gamma},
                                {"p", rule.p}};
        case WeightKind::PowerRatio:
            return ordered_json{{"kind", "power_ratio"}, {"gamma", rule.gamma},
                                {"p", rule.p}};
        case WeightKind::Constant:
            return ordered_json{{"kind", "constant"}, {"value", rule.c}};
        case WeightKind::HeadThenConstant: {
            ordered_json head = ordered_json::array();
            for (double w : rule.head) head.push_back(w);
            return ordered_json{{"kind", "head_then_constant"}, {"head", head},
                                {"tail", rule.tail}};
        }
        case WeightKind::TwoSided: {
            ordered_json overrides = ordered_json::array();
            for (const auto& [index, w] : rule.overrides) {
                overrides.push_back({index, w});
            }
            return ordered_json{{"kind", "two_sided"},
                                {"overrides", overrides},
                                {"left_tail", rule.left_tail},
                                {"right_tail", rule.right_tail}};
        }
    }
    throw ValidationError("unknown weight kind");
}

inline WeightRule weights_from_json(const ordered_json& j, const std::string& where) {
    detail::require_object(j, where);
    const std::string kind = detail::require_string(j, "kind", where);
    try {
        if (kind == "power_ratio_unit_first") {
            return WeightRule::power_ratio_unit_first(
                detail::require_number(j, "gamma", where),
                detail::require_number(j, "p", where));
        }
        if (kind == "power_ratio") {
            return WeightRule::power_ratio(detail::require_number(j, "gamma", where),
                                           detail::require_number(j, "p", where));
        }
        if (kind == "constant") {
            return WeightRule::constant(detail::require_number(j, "value", where));
        }
        if (kind == "head_then_constant") {
            const ordered_json& head_json = detail::require_field(j, "head", where);
            if (!head_json.is_array()) {
                throw ConfigError(where + ".head must be an array of numbers");
            }
            std::vector<double> head;
            for (const ordered_json& w : head_json) {
                if (!w.is_number()) {
                    throw ConfigError(where + ".head must be an array of numbers");
                }
                head.push_back(w.get<double>());
            }
            return WeightRule::head_then_constant(std::move(head),
                                                  detail::require_number(j, "tail", where));
        }
        if (kind == "two_sided") {
            const ordered_json& ov_json = detail::require_field(j, "overrides", where);
            if (!ov_json.is_array()) {
                throw ConfigError(where + ".overrides must be an array of [index, value]");
            }
            std::map<std::int64_t, double> overrides;
            for (const ordered_json& entry : ov_json) {
                if (!entry.is_array() || entry.size() != 2 ||
                    !entry[0].is_number_integer() || !entry[1].is_number()) {
                    throw ConfigError(where +
                                      ".overrides entries must be [index, value] pairs");
                }
                overrides[entry[0].get<std::int64_t>()] = entry[1].get<double>();
            }
            return WeightRule::two_sided(std::move(overrides),
                                         detail::require_number(j, "left_tail", where),
                                         detail::require_number(j, "right_tail", where));
        }
    } catch (const ValidationError& e) {
        throw ConfigError(where + ": " + e.what());
    }
    throw ConfigError(where + ": unknown weight kind \"" + kind + "\"");
}

// ---------------------------------------------------------------------------
// Operator <-> {"direction": ..., "weights"|"domain"}
// ---------------------------------------------------------------------------
inline ordered_json to_json(const WeightedShiftOperator& T) {
    switch (T.direction()) {
        case Direction::BackwardOnN:
            return ordered_json{{"direction", "backwardN"}, {"weights", to_json(T.weights())}};
        case Direction::ForwardOnZ:
            return ordered_json{{"direction", "forwardZ"}, {"weights", to_json(T.weights())}};
        case Direction::Identity:
            return ordered_json{{"direction", "identity"},
                                {"domain", domain_to_json(T.domain())}};
    }
    throw ValidationError("unknown operator direction");
}

inline WeightedShiftOperator operator_from_json(const ordered_json& j,
                                                const std::string& where) {
    detail::require_object(j, where);
    const std::string direction = detail::require_string(j, "direction", where);
    try {
        if (direction == "identity") {
            return WeightedShiftOperator::identity(domain_from_json(
                detail::require_field(j, "domain", where), where + ".domain"));
        }
        const WeightRule rule =
            weights_from_json(detail::require_field(j, "weights", where), where + ".weights");
        if (direction == "backwardN") {
            return WeightedShiftOperator(Direction::BackwardOnN, rule);
        }
        if (direction == "forwardZ") {
            return WeightedShiftOperator(Direction::ForwardOnZ, rule);
        }
    } catch (const ValidationError& e) {
        throw ConfigError(where + ": " + e.what());
    }
    throw ConfigError(where +
                      ": direction must be \"backwardN\", \"forwardZ\" or \"identity\"");
}

// ---------------------------------------------------------------------------
// SeqSpec <-> {"kind": ..., fields}
// ---------------------------------------------------------------------------
inline ordered_json to_json(const SeqSpec& s) {
    switch (s.kind()) {
        case SeqKind::PowerLaw:
            return ordered_json{{"kind", "power_law"},
                                {"value0", s.value0()},
                                {"gamma", s.gamma()},
                                {"p", s.p()}};
        case SeqKind::Geometric:
            return ordered_json{{"kind", "geometric"}, {"c", s.value0()},
                                {"r", s.ratio()}};
        case SeqKind::FromWeights:
            return ordered_json{{"kind", "from_weights"},
                                {"k0", s.value0()},
                                {"weights", to_json(s.rule())}};
        case SeqKind::Explicit: {
            ordered_json head = ordered_json::array();
            for (double v : s.head()) head.push_back(v);
            return ordered_json{{"kind", "explicit"}, {"head", head},
                                {"tail_ratio", s.ratio()}};
        }
    }
    throw ValidationError("unknown sequence kind");
}

inline SeqSpec seq_from_json(const ordered_json& j, const std::string& where) {
    detail::require_object(j, where);
    const std::string kind = detail::require_string(j, "kind", where);
    try {
        if (kind == "power_law") {
            return SeqSpec::power_law(detail::require_number(j, "value0", where),
                                      detail::require_number(j, "gamma", where),
                                      detail::require_number(j, "p", where));
        }
        if (kind == "geometric") {
            return SeqSpec::geometric(detail::require_number(j, "c", where),
                                      detail::require_number(j, "r", where));
        }
        if (kind == "from_weights") {
            return SeqSpec::from_weights(
                detail::require_number(j, "k0", where),
                weights_from_json(detail::require_field(j, "weights", where),
                                  where + ".weights"));
        }
        if (kind == "explicit") {
            const ordered_json& head_json = detail::require_field(j, "head", where);
            if (!head_json.is_array()) {
                throw ConfigError(where + ".head must be an array of numbers");
            }
            std::vector<double> head;
            for (const ordered_json& v : head_json) {
                if (!v.is_number()) {
                    throw ConfigError(where + ".head must be an array of numbers");
                }
                head.push_back(v.get<double>());
            }
            double tail_ratio = 0.0;
            if (j.contains("tail_ratio")) {
                tail_ratio = detail::require_number(j, "tail_ratio", where);
            }
            return SeqSpec::explicit_values(std::move(head), tail_ratio);
        }
    } catch (const ValidationError& e) {
        throw ConfigError(where + ": " + e.what());
    }
    throw ConfigError(where + ": unknown sequence kind \"" + kind + "\"");
}

// ---------------------------------------------------------------------------
// MeasureSpec <-> {"family": ..., fields, "gaussian_diag"?}
// ---------------------------------------------------------------------------
inline ordered_json to_json(const MeasureSpec& m) {
    ordered_json j;
    switch (m.family()) {
        case MeasureFamily::CompoundPoisson:
            j = ordered_json{{"family", "compound_poisson"},
                             {"lambda", to_json(m.cp().lambda)},
                             {"p", m.cp().p}};
            break;
        case MeasureFamily::SymmetricAlphaStable:
            j = ordered_json{{"family", "symmetric_alpha_stable"},
                             {"alpha", m.stable().alpha},
                             {"k", to_json(m.stable().k)},
                             {"p", m.stable().p}};
            break;
        case MeasureFamily::TemperedStable: {
            const auto& t = m.tempered();
            j = ordered_json{{"family", "tempered_stable"}, {"alpha", t.alpha},
                             {"a_minus", t.a_minus},     {"a_plus", t.a_plus},
                             {"lam_minus", t.lam_minus}, {"lam_plus", t.lam_plus},
                             {"k", to_json(t.k)},        {"p", t.p}};
            break;
        }
    }
    if (m.gaussian_diag().has_value()) {
        j["gaussian_diag"] = to_json(*m.gaussian_diag());
    }
    return j;
}

inline MeasureSpec measure_from_json(const ordered_json& j, const std::string& where) {
    detail::require_object(j, where);
    const std::string family = detail::require_string(j, "family", where);
    std::optional<MeasureSpec> m;
    try {
        if (family == "compound_poisson") {
            m = MeasureSpec::compound_poisson(
                seq_from_json(detail::require_field(j, "lambda", where), where + ".lambda"),
                detail::require_number(j, "p", where));
        } else if (family == "symmetric_alpha_stable") {
            m = MeasureSpec::symmetric_alpha_stable(
                detail::require_number(j, "alpha", where),
                seq_from_json(detail::require_field(j, "k", where), where + ".k"),
                detail::require_number(j, "p", where));
        } else if (family == "tempered_stable") {
            m = MeasureSpec::tempered_stable(
                detail::require_number(j, "alpha", where),
                detail::require_number(j, "a_minus", where),
                detail::require_number(j, "a_plus", where),
                detail::require_number(j, "lam_minus", where),
                detail::require_number(j, "lam_plus", where),
                seq_from_json(detail::require_field(j, "k", where), where + ".k"),
                detail::require_number(j, "p", where));
        } else {
            throw ConfigError(where + ": unknown measure family \"" + family + "\"");
        }
        if (j.contains("gaussian_diag")) {
            m->with_gaussian_diag(seq_from_json(j["gaussian_diag"],
                                                where + ".gaussian_diag"));
        }
    } catch (const ValidationError& e) {
        throw ConfigError(where + ": " + e.what());
    }
    return *m;
}

// ---------------------------------------------------------------------------
// Series observable spec <-> {"a0": [re, im], "ratio": r, "sign": s, "base": f}
// ---------------------------------------------------------------------------
inline ordered_json to_json(const SeriesObservableSpec& s) {
    return ordered_json{{"a0", {s.a0.real(), s.a0.imag()}},
                        {"ratio", s.ratio},
                        {"sign", sign_to_string(s.sign)},
                        {"base", to_json(s.base)},
                        {"tail_tol", s.tail_tol}};
}

inline SeriesObservableSpec series_obs_from_json(const ordered_json& j,
                                                 const std::string& where) {
    detail::require_object(j, where);
    const ordered_json& a0 = detail::require_field(j, "a0", where);
    if (!a0.is_array() || a0.size() != 2 || !a0[0].is_number() || !a0[1].is_number()) {
        throw ConfigError(where + ".a0 must be a [re, im] pair");
    }
    SeriesObservableSpec out;
    out.a0 = complexd{a0[0].get<double>(), a0[1].get<double>()};
    out.ratio = detail::require_number(j, "ratio", where);
    out.sign = sign_from_string(detail::require_string(j, "sign", where), where + ".sign");
    out.base = functional_from_json(detail::require_field(j, "base", where),
                                    where + ".base");
    if (j.contains("tail_tol")) out.tail_tol = detail::require_number(j, "tail_tol", where);
    return out;
}

// ---------------------------------------------------------------------------
// ExperimentConfig <-> full config document.
// ---------------------------------------------------------------------------
inline ordered_json to_json(const ExperimentConfig& cfg) {
    ordered_json j{{"measure", to_json(cfg.measure)},
                   {"operator", to_json(cfg.op)},
                   {"probes", ordered_json::array()},
                   {"n_max", cfg.n_max},
                   {"tolerance", cfg.tolerance}};
    for (const Functional& probe : cfg.probes) j["probes"].push_back(to_json(probe));
    if (cfg.mc.has_value()) {
        j["mc"] = ordered_json{{"samples", cfg.mc->samples},
                               {"seed", cfg.mc->seed},
                               {"workers", cfg.mc->workers}};
    }
    j["outputs"] = ordered_json{{"csv", cfg.outputs.csv},
                                {"json", cfg.outputs.json},
                                {"svg", cfg.outputs.svg}};
    if (cfg.series.has_value()) {
        j["series"] = ordered_json{{"f", to_json(cfg.series->f)},
                                   {"g", to_json(cfg.series->g)}};
    }
    return j;
}

inline ExperimentConfig config_from_json(const ordered_json& j) {
    detail::require_object(j, "config");
    MeasureSpec measure =
        measure_from_json(detail::require_field(j, "measure", "config"), "config.measure");
    WeightedShiftOperator op = operator_from_json(
        detail::require_field(j, "operator", "config"), "config.operator");
    std::vector<Functional> probes;
    const ordered_json& probes_json = detail::require_field(j, "probes", "config");
    if (!probes_json.is_array() || probes_json.empty()) {
        throw ConfigError("config.probes must be a non-empty array");
    }
    for (std::size_t i = 0; i < probes_json.size(); ++i) {
        probes.push_back(functional_from_json(
            probes_json[i], "config.probes[" + std::to_string(i) + "]"));
    }
    ExperimentConfig cfg{std::move(measure), std::move(op),  std::move(probes),
                         100,                1e-6,           std::nullopt,
                         OutputConfig{},     std::nullopt};
    cfg.n_max = detail::require_integer(j, "n_max", "config");
    if (cfg.n_max < 0) throw ConfigError("config.n_max must be nonnegative");
    cfg.tolerance = detail::require_number(j, "tolerance", "config");
    if (!(cfg.tolerance > 0.0)) throw ConfigError("config.tolerance must be positive");
    if (j.contains("mc")) {
        const ordered_json& mc = j["mc"];
        detail::require_object(mc, "config.mc");
        MCConfig m;
        m.samples = detail::require_integer(mc, "samples", "config.mc");
        if (m.samples < 2) throw ConfigError("config.mc.samples must be at least 2");
        m.seed = static_cast<std::uint64_t>(
            detail::require_integer(mc, "seed", "config.mc"));
        if (mc.contains("workers")) {
            m.workers = static_cast<int>(detail::require_integer(mc, "workers",
                                                                 "config.mc"));
            if (m.workers < 1 || m.workers > 64) {
                throw ConfigError("config.mc.workers must lie in [1, 64]");
            }
        }
        cfg.mc = m;
    }
    if (j.contains("outputs")) {
        const ordered_json& out = j["outputs"];
        detail::require_object(out, "config.outputs");
        auto flag = [&](const char* key, bool fallback) {
            if (!out.contains(key)) return fallback;
            if (!out[key].is_boolean()) {
                throw ConfigError(std::string("config.outputs.") + key +
                                  " must be a boolean");
            }
            return out[key].get<bool>();
        };
        cfg.outputs.csv = flag("csv", true);
        cfg.outputs.json = flag("json", true);
        cfg.outputs.svg = flag("svg", true);
    }
    if (j.contains("series")) {
        const ordered_json& series = j["series"];
        detail::require_object(series, "config.series");
        SeriesConfig sc;
        sc.f = series_obs_from_json(detail::require_field(series, "f", "config.series"),
                                    "config.series.f");
        sc.g = series_obs_from_json(detail::require_field(series, "g", "config.series"),
                                    "config.series.g");
        cfg.series = std::move(sc);
    }
    return cfg;
}

// Parses config text; JSON syntax errors carry the 1-based line computed from
// the parser's byte offset.
inline ExperimentConfig parse_config(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        std::size_t line = 1;
        const std::size_t limit = std::min(text.size(), e.byte);
        for (std::size_t i = 0; i < limit; ++i) {
            if (text[i] == '\n') ++line;
        }
        throw ConfigError(std::string("invalid JSON: ") + e.what(),
                          static_cast<int>(line));
    }
    return config_from_json(j);
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

} // namespace shiftmix
