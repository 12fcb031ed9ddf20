#include "nstorus/run_config.hpp"

#include <charconv>
#include <fstream>

namespace nstorus {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::string strip_comment(const std::string& s) {
    std::size_t pos = std::min(s.find('#'), s.find(';'));
    return pos == std::string::npos ? s : s.substr(0, pos);
}

double to_double(const std::string& key, const std::string& value) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc{} || ptr != value.data() + value.size())
        throw ConfigError(key + ": expected a number, got '" + value + "'");
    return v;
}

int to_int(const std::string& key, const std::string& value) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc{} || ptr != value.data() + value.size())
        throw ConfigError(key + ": expected an integer, got '" + value + "'");
    return v;
}

std::uint64_t to_u64(const std::string& key, const std::string& value) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc{} || ptr != value.data() + value.size())
        throw ConfigError(key + ": expected an unsigned integer, got '" + value + "'");
    return v;
}

std::vector<double> to_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= value.size()) {
        std::size_t comma = value.find(',', start);
        std::string item = trim(comma == std::string::npos ? value.substr(start)
                                                           : value.substr(start, comma - start));
        if (!item.empty()) out.push_back(to_double(key, item));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (out.empty()) throw ConfigError(key + ": empty list");
    return out;
}

ConvolutionPath to_path(const std::string& key, const std::string& value) {
    if (value == "padded") return ConvolutionPath::padded_transform;
    if (value == "direct") return ConvolutionPath::direct;
    throw ConfigError(key + ": expected 'padded' or 'direct', got '" + value + "'");
}

void assign(RunConfig& cfg, const std::string& section, const std::string& key,
            const std::string& value) {
    const std::string full = section + "." + key;
    if (section == "solver") {
        if (key == "truncation") cfg.truncation = to_int(full, value);
        else if (key == "nu") cfg.nu = to_double(full, value);
        else if (key == "horizon") cfg.horizon = to_double(full, value);
        else if (key == "picard_tol") cfg.picard_tol = to_double(full, value);
        else if (key == "max_iterations") cfg.max_iterations = to_int(full, value);
        else if (key == "convolution") cfg.path = to_path(full, value);
        else throw ConfigError("unknown key " + full);
    } else if (section == "grid") {
        if (key == "ratio") cfg.grid.ratio = to_double(full, value);
        else if (key == "min_step_frac") cfg.grid.min_step_frac = to_double(full, value);
        else if (key == "max_step_frac") cfg.grid.max_step_frac = to_double(full, value);
        else throw ConfigError("unknown key " + full);
    } else if (section == "initial") {
        if (key == "kind") {
            if (value != "taylor_green" && value != "shear" && value != "random")
                throw ConfigError(full + ": unknown initial condition '" + value + "'");
            cfg.initial_kind = value;
        } else if (key == "amplitude") cfg.amplitude = to_double(full, value);
        else if (key == "seed") cfg.seed = to_u64(full, value);
        else throw ConfigError("unknown key " + full);
    } else if (section == "majorant") {
        if (key == "a") cfg.majorant_a = to_double(full, value);
        else if (key == "tol") cfg.majorant_tol = to_double(full, value);
        else if (key == "max_iterations") cfg.majorant_max_iterations = to_int(full, value);
        else throw ConfigError("unknown key " + full);
    } else if (section == "certify") {
        if (key == "slack") cfg.slack = to_double(full, value);
        else if (key == "decay_cushion") cfg.decay_cushion = to_double(full, value);
        else throw ConfigError("unknown key " + full);
    } else if (section == "experiment") {
        if (key == "amplitudes") cfg.amplitudes = to_list(full, value);
        else if (key == "t_max") cfg.t_max = to_double(full, value);
        else if (key == "rel_width") cfg.rel_width = to_double(full, value);
        else if (key == "c_cal") cfg.c_cal = to_double(full, value);
        else if (key == "probe_pairs") cfg.probe_pairs = to_int(full, value);
        else if (key == "probe_times") cfg.probe_times = to_int(full, value);
        else if (key == "probe_bound_factor") cfg.probe_bound_factor = to_double(full, value);
        else throw ConfigError("unknown key " + full);
    } else if (section == "output") {
        if (key == "directory") cfg.directory = value;
        else if (key == "frame_stride") cfg.frame_stride = to_int(full, value);
        else throw ConfigError("unknown key " + full);
    } else {
        throw ConfigError("unknown section [" + section + "]");
    }
}

}  // namespace

RunConfig parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path.string() + ": cannot open config file");

    RunConfig cfg;
    std::string line, section;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string text = trim(strip_comment(line));
        if (text.empty()) continue;
        if (text.front() == '[') {
            if (text.back() != ']')
                throw ConfigError(path.string() + ":" + std::to_string(line_no) +
                                  ": malformed section header");
            section = trim(text.substr(1, text.size() - 2));
            if (section.empty())
                throw ConfigError(path.string() + ":" + std::to_string(line_no) +
                                  ": empty section name");
            continue;
        }
        std::size_t eq = text.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path.string() + ":" + std::to_string(line_no) +
                              ": expected key = value");
        if (section.empty())
            throw ConfigError(path.string() + ":" + std::to_string(line_no) +
                              ": key outside any [section]");
        std::string key = trim(text.substr(0, eq));
        std::string value = trim(text.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError(path.string() + ":" + std::to_string(line_no) +
                              ": empty key or value");
        assign(cfg, section, key, value);
    }
    return cfg;
}

void apply_override(RunConfig& cfg, const std::string& assignment) {
    std::size_t eq = assignment.find('=');
    if (eq == std::string::npos)
        throw ConfigError("override '" + assignment + "': expected section.key=value");
    std::string target = trim(assignment.substr(0, eq));
    std::string value = trim(assignment.substr(eq + 1));
    std::size_t dot = target.find('.');
    if (dot == std::string::npos || dot == 0 || dot + 1 == target.size())
        throw ConfigError("override '" + assignment + "': expected section.key=value");
    if (value.empty()) throw ConfigError("override '" + assignment + "': empty value");
    assign(cfg, target.substr(0, dot), target.substr(dot + 1), value);
}

RunConfig load_config(const std::filesystem::path& path,
                      std::span<const std::string> overrides) {
    RunConfig cfg = parse_config_file(path);
    for (const auto& assignment : overrides) apply_override(cfg, assignment);
    return cfg;
}

}  // namespace nstorus
