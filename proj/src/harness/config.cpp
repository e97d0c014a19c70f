#include "risloc/harness/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "risloc/errors.hpp"

namespace risloc {

using nlohmann::json;

namespace {

std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

// Typed reader over one JSON object that remembers which keys it consumed.
class Reader {
public:
    Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
    }

    const json* find(const std::string& key) {
        seen_.insert(key);
        auto it = j_.find(key);
        return it == j_.end() ? nullptr : &*it;
    }

    void number(const std::string& key, double& out) {
        if (const json* v = find(key)) {
            if (!v->is_number()) throw ConfigError(join(path_, key), "expected a number");
            out = v->get<double>();
        }
    }

    void integer(const std::string& key, int& out) {
        if (const json* v = find(key)) {
            if (!v->is_number_integer()) throw ConfigError(join(path_, key), "expected an integer");
            out = v->get<int>();
        }
    }

    void seed(const std::string& key, std::uint64_t& out) {
        if (const json* v = find(key)) {
            if (!v->is_number_unsigned()) throw ConfigError(join(path_, key), "expected a non-negative integer");
            out = v->get<std::uint64_t>();
        }
    }

    void boolean(const std::string& key, bool& out) {
        if (const json* v = find(key)) {
            if (!v->is_boolean()) throw ConfigError(join(path_, key), "expected true or false");
            out = v->get<bool>();
        }
    }

    void string(const std::string& key, std::string& out) {
        if (const json* v = find(key)) {
            if (!v->is_string()) throw ConfigError(join(path_, key), "expected a string");
            out = v->get<std::string>();
        }
    }

    void point(const std::string& key, Vec2& out) {
        if (const json* v = find(key)) {
            if (!v->is_array() || v->size() != 2 || !(*v)[0].is_number() || !(*v)[1].is_number())
                throw ConfigError(join(path_, key), "expected [x, y]");
            out = {(*v)[0].get<double>(), (*v)[1].get<double>()};
        }
    }

    void numbers(const std::string& key, std::vector<double>& out) {
        if (const json* v = find(key)) {
            if (!v->is_array()) throw ConfigError(join(path_, key), "expected a list of numbers");
            out.clear();
            for (std::size_t i = 0; i < v->size(); ++i) {
                if (!(*v)[i].is_number())
                    throw ConfigError(join(path_, key) + "[" + std::to_string(i) + "]", "expected a number");
                out.push_back((*v)[i].get<double>());
            }
        }
    }

    void integers(const std::string& key, std::vector<int>& out) {
        if (const json* v = find(key)) {
            if (!v->is_array()) throw ConfigError(join(path_, key), "expected a list of integers");
            out.clear();
            for (std::size_t i = 0; i < v->size(); ++i) {
                if (!(*v)[i].is_number_integer())
                    throw ConfigError(join(path_, key) + "[" + std::to_string(i) + "]", "expected an integer");
                out.push_back((*v)[i].get<int>());
            }
        }
    }

    template <class Enum>
    void choice(const std::string& key, Enum& out, std::initializer_list<std::pair<const char*, Enum>> options) {
        std::string s;
        string(key, s);
        if (s.empty()) return;
        for (const auto& [name, value] : options) {
            if (s == name) {
                out = value;
                return;
            }
        }
        std::string allowed;
        for (const auto& [name, value] : options) allowed += (allowed.empty() ? "" : ", ") + std::string(name);
        throw ConfigError(join(path_, key), "unknown value '" + s + "' (expected one of " + allowed + ")");
    }

    /// Calls fn(Reader&) on a nested object when present.
    template <class Fn>
    void child(const std::string& key, Fn&& fn) {
        if (const json* v = find(key)) {
            Reader r(*v, join(path_, key));
            fn(r);
            r.finish();
        }
    }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!seen_.count(it.key())) throw ConfigError(join(path_, it.key()), "unknown key");
    }

    const std::string& path() const { return path_; }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

const std::initializer_list<std::pair<const char*, DelayMode>> kDelayModes{
    {"integer", DelayMode::Integer}, {"fractional", DelayMode::Fractional}};
const std::initializer_list<std::pair<const char*, GainPolicy>> kGainPolicies{
    {"unit", GainPolicy::UnitRandomPhase}, {"free_space", GainPolicy::FreeSpace}};
const std::initializer_list<std::pair<const char*, AoaSolver>> kSolvers{
    {"ridge", AoaSolver::Ridge}, {"matched", AoaSolver::Matched}, {"nlms", AoaSolver::Nlms}};

template <class Enum>
std::string name_of(Enum e, std::initializer_list<std::pair<const char*, Enum>> options) {
    for (const auto& [name, value] : options)
        if (value == e) return name;
    return "?";
}

json point_json(const Vec2& p) { return json::array({p.x(), p.y()}); }

}  // namespace

Scenario default_scenario() {
    Scenario s;
    s.layout.ap = {45.0, 250.0};
    s.layout.ris = {0.0, 500.0};
    s.layout.pr = {300.0, 950.0};
    s.layout.cell_width = 1000.0;
    s.layout.cell_height = 1000.0;
    s.layout.ris_boresight_deg = 0.0;
    s.layout.pr_boresight_deg = bearing_deg(s.layout.pr, s.layout.ris);
    return s;
}

Scenario SweepConfig::resolved_base() const {
    Scenario s = base;
    if (pr_boresight_auto) s.layout.pr_boresight_deg = bearing_deg(s.layout.pr, s.layout.ris);
    return s;
}

void SweepConfig::validate() const {
    if (trials < 1) throw ConfigError("sweep.trials", "must be >= 1");
    if (threads < 0) throw ConfigError("sweep.threads", "must be >= 0");
    if (snr_db.empty()) throw ConfigError("sweep.snr_db", "must not be empty");
    if (ris_elements.empty()) throw ConfigError("sweep.M", "must not be empty");
    if (target_counts.empty()) throw ConfigError("sweep.K", "must not be empty");
    for (std::size_t i = 0; i < snr_db.size(); ++i)
        if (!std::isfinite(snr_db[i]))
            throw ConfigError("sweep.snr_db[" + std::to_string(i) + "]", "must be finite");
    for (std::size_t i = 0; i < ris_elements.size(); ++i)
        if (ris_elements[i] < 2)
            throw ConfigError("sweep.M[" + std::to_string(i) + "]", "must be >= 2");
    for (std::size_t i = 0; i < target_counts.size(); ++i)
        if (target_counts[i] < 0)
            throw ConfigError("sweep.K[" + std::to_string(i) + "]", "must be >= 0");
    if (!(epsilon_m > 0.0)) throw ConfigError("metrics.epsilon_m", "must be positive");

    try {
        estimator.validate();
    } catch (const InvalidParameterError& e) {
        throw ConfigError("estimator", e.what());
    }
    try {
        scene.validate();
    } catch (const ConfigError& e) {
        throw ConfigError("scene." + e.field(), e.what());
    }
    Scenario s = resolved_base();
    s.targets.clear();
    s.target_los.clear();
    try {
        s.layout.validate();
    } catch (const InvalidParameterError& e) {
        throw ConfigError("scenario.layout", e.what());
    }
    for (int m : ris_elements) {
        s.ris_elements = m;
        try {
            s.validate();
        } catch (const Error& e) {
            throw ConfigError("scenario", e.what());
        }
    }
}

SweepConfig parse_config(const json& j) {
    SweepConfig c;
    Reader root(j, "");
    root.child("scenario", [&](Reader& r) {
        Scenario& s = c.base;
        r.child("layout", [&](Reader& l) {
            l.point("ap", s.layout.ap);
            l.point("ris", s.layout.ris);
            l.point("pr", s.layout.pr);
            l.number("cell_width", s.layout.cell_width);
            l.number("cell_height", s.layout.cell_height);
            l.number("ris_boresight_deg", s.layout.ris_boresight_deg);
            if (const json* v = l.find("pr_boresight_deg")) {
                if (v->is_string() && v->get<std::string>() == "auto") {
                    c.pr_boresight_auto = true;
                } else if (v->is_number()) {
                    c.pr_boresight_auto = false;
                    s.layout.pr_boresight_deg = v->get<double>();
                } else {
                    throw ConfigError("scenario.layout.pr_boresight_deg", "expected a number or \"auto\"");
                }
            }
        });
        r.integer("pr_antennas", s.pr_antennas);
        r.integer("epochs_aoa", s.epochs_aoa);
        r.integer("epochs_toa", s.epochs_toa);
        r.integer("zc_length", s.zc_length);
        r.integer("zc_root", s.zc_root);
        r.number("f_samp_hz", s.f_samp);
        r.boolean("ap_los", s.ap_los);
        r.boolean("target_los", c.target_los);
        r.child("channel", [&](Reader& ch) {
            ch.choice("delay_mode", s.channel.delay_mode, kDelayModes);
            ch.boolean("awgn", s.channel.awgn);
            ch.boolean("ris_noise", s.channel.ris_noise);
            ch.number("ris_snr_db", s.channel.ris_snr_db);
            ch.choice("gain_policy", s.channel.gain_policy, kGainPolicies);
            ch.number("carrier_hz", s.channel.carrier_hz);
        });
    });
    root.child("estimator", [&](Reader& r) {
        EstimatorParams& e = c.estimator;
        r.number("g_theta", e.aoa.g_theta);
        r.number("g_tau", e.g_tau);
        r.number("grid_step_deg", e.aoa.grid_step_deg);
        r.number("grid_limit_deg", e.aoa.grid_limit_deg);
        r.numbers("scan_grid_deg", e.aoa.scan_grid);
        r.number("min_separation_deg", e.aoa.min_separation_deg);
        r.choice("solver", e.aoa.solver, kSolvers);
        r.number("regularization", e.aoa.regularization);
        r.integer("nlms_passes", e.aoa.nlms_passes);
        r.number("nlms_step", e.aoa.nlms_step);
        r.boolean("refine", e.aoa.refine);
        r.integer("toa_min_separation_lags", e.toa_min_separation_lags);
        r.integer("relay_guard_samples", e.relay_guard_samples);
        r.integer("null_refinement_iterations", e.null_refinement_iterations);
    });
    root.child("scene", [&](Reader& r) {
        SceneConstraints& s = c.scene;
        r.number("sector_limit_deg", s.sector_limit_deg);
        r.number("min_bearing_separation_sine", s.min_bearing_separation_sine);
        r.number("min_bearing_separation_deg", s.min_bearing_separation_deg);
        r.number("co_bearing_tolerance_deg", s.co_bearing_tolerance_deg);
        r.number("co_bearing_probability", s.co_bearing_probability);
        r.number("min_delay_separation_samples", s.min_delay_separation_samples);
        r.number("ap_guard_sine", s.ap_guard_sine);
        r.number("max_bistatic_angle_deg", s.max_bistatic_angle_deg);
        r.number("delay_window_guard_samples", s.delay_window_guard_samples);
        r.integer("max_rejections", s.max_rejections);
    });
    root.child("sweep", [&](Reader& r) {
        r.numbers("snr_db", c.snr_db);
        r.integers("M", c.ris_elements);
        r.integers("K", c.target_counts);
        r.integer("trials", c.trials);
        r.seed("master_seed", c.master_seed);
        r.integer("threads", c.threads);
    });
    root.child("metrics", [&](Reader& r) {
        r.number("epsilon_m", c.epsilon_m);
        r.boolean("strict_srp", c.strict_srp);
    });
    root.child("output", [&](Reader& r) {
        r.string("csv", c.output_csv);
        r.boolean("record_runtime", c.record_runtime);
    });
    root.finish();
    return c;
}

SweepConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file " + path);
    json j;
    try {
        j = json::parse(in, nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw ConfigError("<file>", std::string("malformed JSON: ") + e.what());
    }
    return parse_config(j);
}

json to_json(const SweepConfig& c) {
    const Scenario& s = c.base;
    json layout = {
        {"ap", point_json(s.layout.ap)},
        {"ris", point_json(s.layout.ris)},
        {"pr", point_json(s.layout.pr)},
        {"cell_width", s.layout.cell_width},
        {"cell_height", s.layout.cell_height},
        {"ris_boresight_deg", s.layout.ris_boresight_deg},
    };
    if (c.pr_boresight_auto)
        layout["pr_boresight_deg"] = "auto";
    else
        layout["pr_boresight_deg"] = s.layout.pr_boresight_deg;

    const EstimatorParams& e = c.estimator;
    const SceneConstraints& sc = c.scene;
    json j = {
        {"scenario",
         {{"layout", layout},
          {"pr_antennas", s.pr_antennas},
          {"epochs_aoa", s.epochs_aoa},
          {"epochs_toa", s.epochs_toa},
          {"zc_length", s.zc_length},
          {"zc_root", s.zc_root},
          {"f_samp_hz", s.f_samp},
          {"ap_los", s.ap_los},
          {"target_los", c.target_los},
          {"channel",
           {{"delay_mode", name_of(s.channel.delay_mode, kDelayModes)},
            {"awgn", s.channel.awgn},
            {"ris_noise", s.channel.ris_noise},
            {"ris_snr_db", s.channel.ris_snr_db},
            {"gain_policy", name_of(s.channel.gain_policy, kGainPolicies)},
            {"carrier_hz", s.channel.carrier_hz}}}}},
        {"estimator",
         {{"g_theta", e.aoa.g_theta},
          {"g_tau", e.g_tau},
          {"grid_step_deg", e.aoa.grid_step_deg},
          {"grid_limit_deg", e.aoa.grid_limit_deg},
          {"scan_grid_deg", e.aoa.scan_grid},
          {"min_separation_deg", e.aoa.min_separation_deg},
          {"solver", name_of(e.aoa.solver, kSolvers)},
          {"regularization", e.aoa.regularization},
          {"nlms_passes", e.aoa.nlms_passes},
          {"nlms_step", e.aoa.nlms_step},
          {"refine", e.aoa.refine},
          {"toa_min_separation_lags", e.toa_min_separation_lags},
          {"relay_guard_samples", e.relay_guard_samples},
          {"null_refinement_iterations", e.null_refinement_iterations}}},
        {"scene",
         {{"sector_limit_deg", sc.sector_limit_deg},
          {"min_bearing_separation_sine", sc.min_bearing_separation_sine},
          {"min_bearing_separation_deg", sc.min_bearing_separation_deg},
          {"co_bearing_tolerance_deg", sc.co_bearing_tolerance_deg},
          {"co_bearing_probability", sc.co_bearing_probability},
          {"min_delay_separation_samples", sc.min_delay_separation_samples},
          {"ap_guard_sine", sc.ap_guard_sine},
          {"max_bistatic_angle_deg", sc.max_bistatic_angle_deg},
          {"delay_window_guard_samples", sc.delay_window_guard_samples},
          {"max_rejections", sc.max_rejections}}},
        {"sweep",
         {{"snr_db", c.snr_db},
          {"M", c.ris_elements},
          {"K", c.target_counts},
          {"trials", c.trials},
          {"master_seed", c.master_seed},
          {"threads", c.threads}}},
        {"metrics", {{"epsilon_m", c.epsilon_m}, {"strict_srp", c.strict_srp}}},
        {"output", {{"csv", c.output_csv}, {"record_runtime", c.record_runtime}}},
    };
    return j;
}

void apply_override(json& j, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ConfigError(assignment, "override must look like key.path=value");
    const std::string key = assignment.substr(0, eq);
    const std::string text = assignment.substr(eq + 1);

    json value;
    try {
        value = json::parse(text);
    } catch (const json::parse_error&) {
        value = text;
    }

    json* node = &j;
    std::stringstream ss(key);
    std::string part;
    std::vector<std::string> parts;
    while (std::getline(ss, part, '.')) {
        if (part.empty()) throw ConfigError(key, "empty path component");
        parts.push_back(part);
    }
    for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
        if (!node->is_object()) throw ConfigError(key, "'" + parts[i] + "' is not an object");
        node = &(*node)[parts[i]];
        if (node->is_null()) *node = json::object();
    }
    if (!node->is_object()) throw ConfigError(key, "parent is not an object");
    (*node)[parts.back()] = value;
}

}  // namespace risloc
