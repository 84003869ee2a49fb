#include "outagekit/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "outagekit/error.hpp"

namespace outagekit {

namespace {

// section.key -> default (empty string: no default)
const std::vector<std::pair<std::string, std::string>> kKeys = {
    {"model.type", "ppp"},
    {"model.intensity", "1"},
    {"model.dimension", "2"},
    {"model.parent_intensity", ""},
    {"model.hardcore_radius", "0"},
    {"model.mean_daughters", "4"},
    {"model.sigma", "1"},
    {"model.spacing", "1"},
    {"mac.type", "aloha"},
    {"mac.eta", "0.1"},
    {"mac.b", "1"},
    {"channel.alpha", "4"},
    {"channel.pathloss", "singular"},
    {"channel.theta", "1"},
    {"channel.distance", ""},
    {"channel.orientation", "receiver"},
    {"channel.noise_power", "0"},
    {"channel.tx_power", "1"},
    {"sweep.eta", ""},
    {"sweep.eta_max", ""},
    {"sweep.eta_min", ""},
    {"sweep.points", "8"},
    {"sweep.replications", "100000"},
    {"sweep.seed", "1"},
    {"sweep.estimator", "auto"},
    {"sweep.threads", "1"},
    {"sweep.far_field", "true"},
    {"sweep.window_side", "0"},
    {"sweep.fit_eta_min", ""},
    {"sweep.fit_eta_max", ""},
    {"output.directory", "out"},
};

std::string upper(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return s;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

class Values {
public:
    explicit Values(std::map<std::string, std::string> v) : v_(std::move(v)) {}

    bool has(const std::string& key) const { return !raw(key).empty(); }
    std::string raw(const std::string& key) const {
        const auto it = v_.find(key);
        return it == v_.end() ? std::string() : it->second;
    }
    std::string text(const std::string& key) const { return lower(raw(key)); }

    double number(const std::string& key) const { return parse_number(raw(key), key); }
    std::optional<double> maybe(const std::string& key) const {
        if (!has(key)) return std::nullopt;
        return number(key);
    }
    long long integer(const std::string& key) const {
        const double x = number(key);
        if (x != std::floor(x) || std::abs(x) > 9e15) {
            throw ConfigParseError(key + " must be an integer, got '" + raw(key) + "'");
        }
        return static_cast<long long>(x);
    }
    std::uint64_t unsigned_integer(const std::string& key) const {
        const auto s = raw(key);
        std::uint64_t v = 0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size()) {
            throw ConfigParseError(key + " must be a non-negative integer, got '" + s + "'");
        }
        return v;
    }
    bool boolean(const std::string& key) const {
        const auto s = text(key);
        if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
        if (s == "false" || s == "0" || s == "no" || s == "off") return false;
        throw ConfigParseError(key + " must be a boolean, got '" + raw(key) + "'");
    }
    std::vector<double> list(const std::string& key) const {
        std::vector<double> out;
        std::stringstream ss(raw(key));
        std::string item;
        while (std::getline(ss, item, ',')) {
            out.push_back(parse_number(trim(item), key));
        }
        return out;
    }

    static double parse_number(const std::string& s, const std::string& key) {
        const auto t = trim(s);
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
        if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
            throw ConfigParseError(key + " must be a number, got '" + s + "'");
        }
        return v;
    }

private:
    std::map<std::string, std::string> v_;
};

NodeModel build_model(const Values& v) {
    const auto type = v.text("model.type");
    if (type == "ppp") {
        return PppModel{v.number("model.intensity"), static_cast<int>(v.integer("model.dimension"))};
    }
    if (type == "matern") {
        const double h = v.number("model.hardcore_radius");
        const double parent = v.has("model.parent_intensity") ? v.number("model.parent_intensity")
                                                              : matern_parent_intensity(v.number("model.intensity"), h);
        return MaternModel{parent, h};
    }
    if (type == "thomas") {
        ClusterSpec c;
        c.parent_intensity = v.has("model.parent_intensity") ? v.number("model.parent_intensity") : 0.1;
        c.mean_daughters = v.number("model.mean_daughters");
        c.sigma = v.number("model.sigma");
        return ThomasModel{c};
    }
    if (type == "lattice") {
        return LatticeModel{static_cast<int>(v.integer("model.dimension")), v.number("model.spacing")};
    }
    throw ConfigParseError("model.type must be ppp, matern, thomas or lattice, got '" + v.raw("model.type") + "'");
}

MacScheme build_mac(const Values& v, const NodeModel& model) {
    const auto type = v.text("mac.type");
    const double eta = v.number("mac.eta");
    if (type == "aloha") return Aloha{eta};
    if (type == "csma") return CsmaMatern{eta};
    if (type == "cluster") return ClusterMac{v.number("mac.b"), eta};
    const int d = model_dimension(model);
    if (type == "tdma") return with_eta(TdmaLattice{1, d}, eta);
    if (type == "unreasonable_tdma") return with_eta(UnreasonableTdma{2}, eta);
    throw ConfigParseError("mac.type must be aloha, csma, tdma, cluster or unreasonable_tdma, got '" +
                           v.raw("mac.type") + "'");
}

}  // namespace

std::vector<std::pair<std::string, std::string>> config_keys() { return kKeys; }

EnvLookup process_environment() {
    return [](const std::string& name) -> std::optional<std::string> {
        if (const char* s = std::getenv(name.c_str())) {
            return std::string(s);
        }
        return std::nullopt;
    };
}

RunConfig parse_config(std::string_view text, const EnvLookup& env) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        std::istringstream is{std::string(text)};
        pt::read_ini(is, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigParseError(std::string("config syntax: ") + e.what());
    }
    std::map<std::string, std::string> values;
    for (const auto& [key, def] : kKeys) {
        values[key] = def;
    }
    for (const auto& [section, body] : tree) {
        if (body.empty() && !body.data().empty()) {
            throw ConfigParseError("key '" + section + "' must sit inside a section");
        }
        for (const auto& [key, node] : body) {
            const auto full = lower(section) + "." + lower(key);
            if (!values.count(full)) {
                throw ConfigParseError("unknown config key '" + section + "." + key + "'");
            }
            values[full] = trim(node.data());
        }
    }
    if (env) {
        for (const auto& [key, def] : kKeys) {
            auto name = key;
            std::replace(name.begin(), name.end(), '.', '_');
            if (auto over = env("OUTAGEKIT_" + upper(name))) {
                values[key] = trim(*over);
            }
        }
    }
    const Values v(std::move(values));

    RunConfig cfg;
    cfg.model = build_model(v);
    cfg.mac = build_mac(v, cfg.model);
    PathLossKind kind{};
    try {
        kind = parse_pathloss_kind(v.text("channel.pathloss"));
    } catch (const ParameterError& e) {
        throw ConfigParseError(e.what());
    }
    cfg.pathloss = PathLoss(kind, v.number("channel.alpha"));
    cfg.link.theta = v.number("channel.theta");
    cfg.link.distance = v.maybe("channel.distance");
    const auto orient = v.text("channel.orientation");
    if (orient == "receiver") {
        cfg.link.orientation = Orientation::ReceiverTypical;
    } else if (orient == "transmitter") {
        cfg.link.orientation = Orientation::TransmitterTypical;
    } else {
        throw ConfigParseError("channel.orientation must be receiver or transmitter");
    }
    const double w = v.number("channel.noise_power");
    if (w != 0.0) {
        cfg.link.noise = Noise{w, v.number("channel.tx_power")};
    }

    auto& s = cfg.sweep;
    if (v.has("sweep.eta")) {
        s.eta_grid = v.list("sweep.eta");
    } else if (v.has("sweep.eta_max") || v.has("sweep.eta_min")) {
        if (!v.has("sweep.eta_max") || !v.has("sweep.eta_min")) {
            throw ConfigParseError("sweep.eta_max and sweep.eta_min go together");
        }
        s.eta_grid = log_grid(v.number("sweep.eta_max"), v.number("sweep.eta_min"),
                              static_cast<std::size_t>(std::max(2LL, v.integer("sweep.points"))));
    }
    const auto reps = v.integer("sweep.replications");
    if (reps < 1) {
        throw ConfigParseError("sweep.replications must be positive");
    }
    s.replications = static_cast<std::size_t>(reps);
    s.seed = v.unsigned_integer("sweep.seed");
    try {
        s.estimator = parse_estimator_kind(v.text("sweep.estimator"));
    } catch (const ParameterError& e) {
        throw ConfigParseError(e.what());
    }
    const auto threads = v.integer("sweep.threads");
    if (threads < 0) {
        throw ConfigParseError("sweep.threads must be >= 0");
    }
    s.threads = static_cast<unsigned>(threads);
    s.far_field = v.boolean("sweep.far_field");
    s.window_side = v.number("sweep.window_side");
    if (v.has("sweep.fit_eta_min") || v.has("sweep.fit_eta_max")) {
        FitWindow fw;
        fw.eta_min = v.maybe("sweep.fit_eta_min").value_or(0.0);
        fw.eta_max = v.maybe("sweep.fit_eta_max").value_or(1.0);
        s.fit_window = fw;
    }
    cfg.output_directory = v.raw("output.directory");
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path, const EnvLookup& env) {
    std::ifstream is(path);
    if (!is) {
        throw ConfigParseError("cannot read config file " + path.string());
    }
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_config(ss.str(), env);
}

void RunConfig::validate() const {
    outagekit::validate(model);
    outagekit::validate(mac);
    pathloss.check_dimension(model_dimension(model));
    link.validate(pathloss);
    if (const auto* t = std::get_if<TdmaLattice>(&mac); t && t->dimension != model_dimension(model)) {
        throw ParameterError("TDMA dimension must match the lattice dimension");
    }
    // Throws NotImplementedError for combinations the sampler lacks.
    const Scenario scenario(model, mac);
    (void)scenario;
    for (double eta : sweep.eta_grid) {
        if (!(eta > 0.0 && eta <= 1.0)) {
            throw ParameterError("sweep eta values must lie in (0, 1]");
        }
    }
    if (sweep.window_side < 0.0) {
        throw ParameterError("sweep.window_side must be >= 0");
    }
    if (sweep.fit_window && !(sweep.fit_window->eta_min < sweep.fit_window->eta_max)) {
        throw ParameterError("fit window needs fit_eta_min < fit_eta_max");
    }
}

std::vector<double> RunConfig::resolved_grid() const {
    if (!sweep.eta_grid.empty()) {
        return sweep.eta_grid;
    }
    const int d = model_dimension(model);
    if (std::holds_alternative<TdmaLattice>(mac) || std::holds_alternative<UnreasonableTdma>(mac)) {
        std::vector<double> grid;
        for (int m = 2; m <= 9; ++m) {
            grid.push_back(std::pow(static_cast<double>(m), -d));
        }
        return grid;
    }
    double top = 0.1;
    try {
        const auto a = gamma_kappa_for(model, mac, link, pathloss);
        if (a.gamma > 0.0 && a.kappa > 0.0) {
            top = std::min(eta_max(a.gamma, a.kappa), 0.1);
        }
    } catch (const NotImplementedError&) {
    }
    return log_grid(top, top / 30.0, 8);
}

SweepConfig RunConfig::sweep_config() const {
    SweepConfig c;
    c.model = model;
    c.mac = mac;
    c.link = link;
    c.pathloss = pathloss;
    c.eta_grid = resolved_grid();
    c.estimator.replications = sweep.replications;
    c.estimator.seed = sweep.seed;
    c.estimator.kind = sweep.estimator;
    c.estimator.threads = sweep.threads;
    c.estimator.far_field = sweep.far_field;
    c.estimator.window_side = sweep.window_side;
    return c;
}

}  // namespace outagekit
