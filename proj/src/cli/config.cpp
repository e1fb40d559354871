#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include "nlv/cli.hpp"
#include "nlv/errors.hpp"

#ifndef NLV_VERSION
#define NLV_VERSION "dev"
#endif

namespace nlv::cli {

namespace {

std::string trim(std::string s) {
    auto ws = [](unsigned char c) { return std::isspace(c) != 0; };
    s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), ws));
    s.erase(std::find_if_not(s.rbegin(), s.rend(), ws).base(), s.end());
    return s;
}

double parse_number(const std::string& text) {
    const std::string t = trim(text);
    double value = 0.0;
    const auto* end = t.data() + t.size();
    const auto [ptr, ec] = std::from_chars(t.data(), end, value);
    if (t.empty() || ec != std::errc() || ptr != end || !std::isfinite(value)) {
        throw ConfigError("'" + t + "' is not a number");
    }
    return value;
}

std::uint64_t parse_u64(const std::string& text) {
    const std::string t = trim(text);
    std::uint64_t value = 0;
    const auto* end = t.data() + t.size();
    const auto [ptr, ec] = std::from_chars(t.data(), end, value);
    if (t.empty() || ec != std::errc() || ptr != end) {
        throw ConfigError("'" + t + "' is not an unsigned 64-bit integer");
    }
    return value;
}

bool parse_bool(const std::string& text) {
    const std::string t = trim(text);
    if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
    if (t == "false" || t == "0" || t == "no" || t == "off") return false;
    throw ConfigError("'" + t + "' is not a boolean");
}

// Shortest text that parses back to the same double.
std::string fmt_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string fmt_vector(const sphere::UnitVector& v) {
    return fmt_double(v.x()) + "," + fmt_double(v.y()) + "," + fmt_double(v.z());
}

}  // namespace

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_number(item));
    if (out.empty()) throw ConfigError("empty list");
    return out;
}

sphere::UnitVector parse_vector(const std::string& text) {
    const auto v = parse_list(text);
    if (v.size() != 3) throw ConfigError("'" + text + "' is not a 3-vector");
    try {
        return sphere::UnitVector(v[0], v[1], v[2]);
    } catch (const InvalidArgument& e) {
        throw ConfigError("'" + text + "' is not a unit vector");
    }
}

StateSpec parse_state_spec(const std::string& spec) {
    const std::string s = trim(spec);
    const auto colon = s.find(':');
    const std::string name = s.substr(0, colon);
    const std::string args = colon == std::string::npos ? "" : s.substr(colon + 1);
    auto want = [&](std::size_t n) {
        if (n == 0) {
            if (!args.empty()) throw ConfigError("state '" + name + "' takes no parameters");
            return std::vector<double>{};
        }
        if (args.empty()) throw ConfigError("state '" + name + "' needs parameters");
        auto v = parse_list(args);
        if (v.size() != n) {
            throw ConfigError("state '" + name + "' needs " + std::to_string(n) + " parameter(s)");
        }
        return v;
    };

    try {
        if (name == "singlet") {
            want(0);
            return {quantum::singlet(), "singlet"};
        }
        if (name == "mixed") {
            want(0);
            return {quantum::maximally_mixed(), "mixed"};
        }
        if (name == "werner") {
            const auto v = want(1);
            return {quantum::werner(v[0]), "werner:" + fmt_double(v[0])};
        }
        if (name == "colored_noise") {
            const auto v = want(1);
            return {quantum::colored_noise(v[0]), "colored_noise:" + fmt_double(v[0])};
        }
        if (name == "bell_diagonal") {
            const auto t = want(3);
            return {quantum::bell_diagonal(t[0], t[1], t[2]),
                    "bell_diagonal:" + fmt_double(t[0]) + "," + fmt_double(t[1]) + "," +
                        fmt_double(t[2])};
        }
        if (name == "visibilities") {
            const auto v = want(3);
            return {quantum::from_visibilities(v[0], v[1], v[2]),
                    "visibilities:" + fmt_double(v[0]) + "," + fmt_double(v[1]) + "," +
                        fmt_double(v[2])};
        }
    } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("invalid state parameters: ") + e.what());
    }
    throw ConfigError("unknown state '" + name + "'");
}

simulate::ExperimentConfig parse_config(std::istream& in, const std::string& source) {
    simulate::ExperimentConfig config;
    std::optional<sphere::UnitVector> n1, s1, n2, s2;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        const std::string where = source + ":" + std::to_string(line_no);
        if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        try {
            if (key == "pair_rate") {
                config.pair_rate = parse_number(value);
            } else if (key == "accidental_rate") {
                config.accidental_rate = parse_number(value);
            } else if (key == "integration_time") {
                config.integration_time = parse_number(value);
            } else if (key == "state") {
                auto spec = parse_state_spec(value);
                config.state = std::move(spec.state);
                config.state_descriptor = spec.descriptor;
            } else if (key == "visibilities") {
                auto spec = parse_state_spec("visibilities:" + value);
                config.state = std::move(spec.state);
                config.state_descriptor = spec.descriptor;
            } else if (key == "seed") {
                config.rng_seed = parse_u64(value);
            } else if (key == "subtract_accidentals") {
                config.subtract_accidentals = parse_bool(value);
            } else if (key == "plane1_normal") {
                n1 = parse_vector(value);
            } else if (key == "plane1_seed") {
                s1 = parse_vector(value);
            } else if (key == "plane2_normal") {
                n2 = parse_vector(value);
            } else if (key == "plane2_seed") {
                s2 = parse_vector(value);
            } else {
                throw ConfigError("unknown key");
            }
        } catch (const ConfigError& e) {
            throw ConfigError(where + ": field '" + key + "': " + e.what());
        }
    }

    try {
        const auto defaults = sphere::default_frames();
        config.frames = {
            sphere::PlaneFrame(n1.value_or(defaults.first.normal()),
                               s1.value_or(defaults.first.seed())),
            sphere::PlaneFrame(n2.value_or(defaults.second.normal()),
                               s2.value_or(defaults.second.seed()))};
        config.validate();
    } catch (const InvalidArgument& e) {
        throw ConfigError(source + ": " + e.what());
    }
    return config;
}

simulate::ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    return parse_config(in, path);
}

std::string render_config(const simulate::ExperimentConfig& c) {
    std::ostringstream out;
    out << "pair_rate = " << fmt_double(c.pair_rate) << '\n'
        << "accidental_rate = " << fmt_double(c.accidental_rate) << '\n'
        << "integration_time = " << fmt_double(c.integration_time) << '\n'
        << "state = " << c.state_descriptor << '\n'
        << "seed = " << c.rng_seed << '\n'
        << "subtract_accidentals = " << (c.subtract_accidentals ? "true" : "false") << '\n'
        << "plane1_normal = " << fmt_vector(c.frames.first.normal()) << '\n'
        << "plane1_seed = " << fmt_vector(c.frames.first.seed()) << '\n'
        << "plane2_normal = " << fmt_vector(c.frames.second.normal()) << '\n'
        << "plane2_seed = " << fmt_vector(c.frames.second.seed()) << '\n';
    return out.str();
}

RunManifest make_manifest(const std::string& command, const std::string& config_snapshot,
                          std::uint64_t seed) {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return {command, config_snapshot, seed, NLV_VERSION, buf};
}

}  // namespace nlv::cli
