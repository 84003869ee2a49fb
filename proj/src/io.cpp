#include "outagekit/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "outagekit/error.hpp"

namespace outagekit {

namespace {

double parse_double(std::string_view text, const std::string& context) {
    double v = 0.0;
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    while (first < last && *first == ' ') ++first;
    while (last > first && (last[-1] == ' ' || last[-1] == '\r')) --last;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) {
        throw ConfigParseError("not a number in " + context + ": '" + std::string(text) + "'");
    }
    return v;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        out.push_back(line.substr(start, pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

ModelTag parse_model_tag(const std::string& s) {
    for (ModelTag t : {ModelTag::Ppp, ModelTag::MaternII, ModelTag::Thomas, ModelTag::Lattice, ModelTag::DerivedByMac}) {
        if (to_string(t) == s) return t;
    }
    throw ConfigParseError("unknown model tag '" + s + "'");
}

}  // namespace

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 9);
    if (ec != std::errc()) {
        throw Error("number formatting failed");
    }
    return std::string(buf, ptr);
}

std::ofstream open_output(const std::filesystem::path& path) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) {
            throw Error("cannot create directory " + path.parent_path().string() + ": " + ec.message());
        }
    }
    std::ofstream os(path, std::ios::binary);
    if (!os) {
        throw Error("cannot open " + path.string() + " for writing");
    }
    return os;
}

Curve to_curve(const SweepResult& sweep, std::string label) {
    Curve c;
    c.label = label.empty() ? sweep.model + " + " + sweep.scheme : std::move(label);
    c.scheme = sweep.scheme;
    c.alpha = sweep.alpha;
    c.theta = sweep.theta;
    c.seed = sweep.seed;
    for (const auto& p : sweep.points) {
        c.rows.push_back({p.eta, p.p_success, p.std_err, p.n_reps, to_string(p.estimator)});
    }
    return c;
}

std::optional<Curve> exact_curve(const SweepResult& sweep, std::string label) {
    Curve c = to_curve(sweep, std::move(label));
    for (std::size_t i = 0; i < c.rows.size(); ++i) {
        if (i >= sweep.exact.size() || std::isnan(sweep.exact[i])) {
            return std::nullopt;
        }
        c.rows[i] = {c.rows[i].eta, sweep.exact[i], 0.0, 0, "closed_form"};
    }
    return c;
}

void write_curve_csv(std::ostream& os, const Curve& curve) {
    os << "eta,p_success,std_err,n_reps,estimator,scheme,alpha,theta,seed\n";
    for (const auto& r : curve.rows) {
        os << format_number(r.eta) << ',' << format_number(r.p_success) << ',' << format_number(r.std_err) << ','
           << r.n_reps << ',' << r.estimator << ',' << curve.scheme << ',' << format_number(curve.alpha) << ','
           << format_number(curve.theta) << ',' << curve.seed << '\n';
    }
}

void write_sweep_csv(std::ostream& os, const SweepResult& sweep) { write_curve_csv(os, to_curve(sweep)); }

void write_asymptotic_csv(std::ostream& os, const std::vector<AsymptoticRow>& rows) {
    os << "scheme,gamma,kappa,provenance,alpha,theta\n";
    for (const auto& r : rows) {
        os << r.result.scheme << ',' << format_number(r.result.gamma) << ',' << format_number(r.result.kappa) << ','
           << to_string(r.result.provenance) << ',' << format_number(r.alpha) << ',' << format_number(r.theta)
           << '\n';
    }
}

void write_envelope_csv(std::ostream& os, const std::vector<EnvelopePoint>& envelope) {
    os << "eta,lower,upper\n";
    for (const auto& e : envelope) {
        os << format_number(e.eta) << ',' << format_number(e.lower) << ',' << format_number(e.upper) << '\n';
    }
}

void write_table_csv(std::ostream& os, const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        os << (i ? "," : "") << header[i];
    }
    os << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            os << (i ? "," : "") << format_number(row[i]);
        }
        os << '\n';
    }
}

void write_key_values(const std::filesystem::path& path, const KeyValueList& entries) {
    auto os = open_output(path);
    for (const auto& [k, v] : entries) {
        os << k << " = " << v << '\n';
    }
}

KeyValueList read_key_values(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) {
        throw Error("cannot open " + path.string());
    }
    KeyValueList out;
    std::string line;
    while (std::getline(is, line)) {
        const auto t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw ConfigParseError("expected key = value in " + path.string() + ": '" + t + "'");
        }
        out.emplace_back(trim(std::string_view(t).substr(0, eq)), trim(std::string_view(t).substr(eq + 1)));
    }
    return out;
}

void write_pattern_csv(const std::filesystem::path& path, const PointPattern& pattern, const std::vector<bool>* active) {
    if (active && active->size() != pattern.size()) {
        throw ParameterError("active flags must match the pattern size");
    }
    const int d = pattern.window.dimension;
    {
        auto os = open_output(path);
        os << "x";
        if (d >= 2) os << ",y";
        if (d >= 3) os << ",z";
        if (active) os << ",active";
        os << '\n';
        for (std::size_t i = 0; i < pattern.size(); ++i) {
            const auto& p = pattern.points[i];
            os << format_number(p[0]);
            for (int k = 1; k < d; ++k) os << ',' << format_number(p[k]);
            if (active) os << ',' << ((*active)[i] ? 1 : 0);
            os << '\n';
        }
    }
    KeyValueList meta{
        {"model", to_string(pattern.model)},
        {"dimension", std::to_string(d)},
        {"intensity", format_number(pattern.intensity)},
        {"seed", std::to_string(pattern.seed)},
        {"points", std::to_string(pattern.size())},
        {"edge", pattern.window.toroidal() ? "toroidal" : "guard_band"},
        {"guard", format_number(pattern.window.guard)},
    };
    for (int k = 0; k < d; ++k) {
        meta.emplace_back("side" + std::to_string(k), format_number(pattern.window.side[k]));
    }
    for (const auto& [k, v] : pattern.params) {
        meta.emplace_back("param." + k, format_number(v));
    }
    if (pattern.lattice_spacing > 0.0) {
        meta.emplace_back("lattice_spacing", format_number(pattern.lattice_spacing));
    }
    write_key_values(path.string() + ".meta", meta);
}

PointPattern read_pattern_csv(const std::filesystem::path& path) {
    PointPattern pat;
    const auto meta = read_key_values(path.string() + ".meta");
    const auto ctx = path.string() + ".meta";
    for (const auto& [k, v] : meta) {
        if (k == "model") pat.model = parse_model_tag(v);
        else if (k == "dimension") pat.window.dimension = static_cast<int>(parse_double(v, ctx));
        else if (k == "intensity") pat.intensity = parse_double(v, ctx);
        else if (k == "seed") pat.seed = std::stoull(v);
        else if (k == "edge") pat.window.edge = v == "toroidal" ? EdgeMode::Toroidal : EdgeMode::GuardBand;
        else if (k == "guard") pat.window.guard = parse_double(v, ctx);
        else if (k.rfind("side", 0) == 0) pat.window.side.at(std::stoul(k.substr(4))) = parse_double(v, ctx);
        else if (k.rfind("param.", 0) == 0) pat.params.emplace_back(k.substr(6), parse_double(v, ctx));
        else if (k == "lattice_spacing") pat.lattice_spacing = parse_double(v, ctx);
    }
    std::ifstream is(path);
    if (!is) {
        throw Error("cannot open " + path.string());
    }
    std::string line;
    std::getline(is, line);
    const auto header = split(trim(line), ',');
    const int d = pat.window.dimension;
    if (static_cast<int>(header.size()) < d) {
        throw ConfigParseError("pattern header has fewer columns than the dimension");
    }
    while (std::getline(is, line)) {
        const auto t = trim(line);
        if (t.empty()) continue;
        const auto cols = split(t, ',');
        if (cols.size() != header.size()) {
            throw ConfigParseError("ragged row in " + path.string());
        }
        Point p{0.0, 0.0, 0.0};
        for (int k = 0; k < d; ++k) p[k] = parse_double(cols[k], path.string());
        pat.points.push_back(p);
    }
    return pat;
}

}  // namespace outagekit
