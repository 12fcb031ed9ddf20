#include "nstorus/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <system_error>
#include <vector>

#include "json.hpp"

namespace nstorus::io {

namespace {

using nlohmann::json;

void fail(const std::filesystem::path& path, const std::string& what) {
    throw std::runtime_error(path.string() + ": " + what);
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);  // binary: no platform newline games
    if (!out) fail(path, "cannot open for writing");
    return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(path, "cannot open for reading");
    return in;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

int parse_int(const std::string& s, const std::filesystem::path& path) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) fail(path, "bad integer field '" + s + "'");
    return v;
}

double parse_double(const std::string& s, const std::filesystem::path& path) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) fail(path, "bad number field '" + s + "'");
    return v;
}

struct ScalarRow {
    WaveVector k;
    Complex c;
};

struct VectorRow {
    int component;
    WaveVector k;
    Complex c;
};

int inferred_truncation(int seen_max, int forced) {
    if (forced > 0) return forced;
    return std::max(seen_max, 1);
}

}  // namespace

std::string format_double(double value) {
    char buf[40];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
    return std::string(buf, ptr);
}

void write_scalar_csv(const std::filesystem::path& path, const SpectralScalarField& f) {
    auto out = open_out(path);
    out << "k1,k2,k3,re,im\n";
    f.for_each_nonzero([&](const WaveVector& k, Complex c) {
        out << k.k1 << ',' << k.k2 << ',' << k.k3 << ',' << format_double(c.real()) << ','
            << format_double(c.imag()) << '\n';
    });
    if (!out) fail(path, "write failed");
}

SpectralScalarField read_scalar_csv(const std::filesystem::path& path, int truncation) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line) || split_csv(line) != std::vector<std::string>{"k1", "k2", "k3", "re", "im"})
        fail(path, "missing scalar CSV header");

    std::vector<ScalarRow> rows;
    int seen = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto parts = split_csv(line);
        if (parts.size() != 5) fail(path, "expected 5 fields per row");
        ScalarRow row;
        row.k = {parse_int(parts[0], path), parse_int(parts[1], path), parse_int(parts[2], path)};
        row.c = Complex(parse_double(parts[3], path), parse_double(parts[4], path));
        if (row.k.is_zero()) fail(path, "k = 0 row in zero-mean field");
        seen = std::max(seen, row.k.norm_max());
        rows.push_back(row);
    }
    SpectralScalarField f(inferred_truncation(seen, truncation));
    for (const auto& row : rows) {
        if (!f.in_range(row.k)) fail(path, "mode outside the requested truncation");
        f.set_coeff(row.k, row.c);
    }
    return f;
}

void write_vector_csv(const std::filesystem::path& path, const SpectralVectorField& v) {
    auto out = open_out(path);
    out << "component,k1,k2,k3,re,im\n";
    for (int j = 0; j < 3; ++j)
        v.component(j).for_each_nonzero([&](const WaveVector& k, Complex c) {
            out << (j + 1) << ',' << k.k1 << ',' << k.k2 << ',' << k.k3 << ','
                << format_double(c.real()) << ',' << format_double(c.imag()) << '\n';
        });
    if (!out) fail(path, "write failed");
}

SpectralVectorField read_vector_csv(const std::filesystem::path& path, int truncation) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line) ||
        split_csv(line) != std::vector<std::string>{"component", "k1", "k2", "k3", "re", "im"})
        fail(path, "missing vector CSV header");

    std::vector<VectorRow> rows;
    int seen = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto parts = split_csv(line);
        if (parts.size() != 6) fail(path, "expected 6 fields per row");
        VectorRow row;
        row.component = parse_int(parts[0], path);
        if (row.component < 1 || row.component > 3) fail(path, "component must be 1, 2 or 3");
        row.k = {parse_int(parts[1], path), parse_int(parts[2], path), parse_int(parts[3], path)};
        row.c = Complex(parse_double(parts[4], path), parse_double(parts[5], path));
        if (row.k.is_zero()) fail(path, "k = 0 row in zero-mean field");
        seen = std::max(seen, row.k.norm_max());
        rows.push_back(row);
    }
    SpectralVectorField v(inferred_truncation(seen, truncation));
    for (const auto& row : rows) {
        if (!v.component(0).in_range(row.k)) fail(path, "mode outside the requested truncation");
        v.component(row.component - 1).set_coeff(row.k, row.c);
    }
    return v;
}

void write_majorant_csv(const std::filesystem::path& path, const MajorantTrajectory& traj) {
    if (traj.frames.size() != traj.grid.size())
        throw std::invalid_argument("write_majorant_csv: frame count does not match the grid");
    auto out = open_out(path);
    out << "t,k1,k2,k3,V\n";
    for (std::size_t j = 0; j < traj.grid.size(); ++j) {
        const std::string t = format_double(traj.grid[j]);
        traj.frames[j].for_each_mode([&](const WaveVector& k, double v) {
            if (v == 0.0) return;
            out << t << ',' << k.k1 << ',' << k.k2 << ',' << k.k3 << ',' << format_double(v)
                << '\n';
        });
    }
    if (!out) fail(path, "write failed");
}

MajorantTrajectory read_majorant_csv(const std::filesystem::path& path, int truncation) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line) ||
        split_csv(line) != std::vector<std::string>{"t", "k1", "k2", "k3", "V"})
        fail(path, "missing majorant CSV header");

    struct Row {
        double t;
        WaveVector k;
        double v;
    };
    std::vector<Row> rows;
    int seen = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto parts = split_csv(line);
        if (parts.size() != 5) fail(path, "expected 5 fields per row");
        Row row;
        row.t = parse_double(parts[0], path);
        row.k = {parse_int(parts[1], path), parse_int(parts[2], path), parse_int(parts[3], path)};
        row.v = parse_double(parts[4], path);
        if (row.k.is_zero()) fail(path, "k = 0 row in zero-mean envelope");
        seen = std::max(seen, row.k.norm_max());
        rows.push_back(row);
    }

    MajorantTrajectory traj;
    const int n = inferred_truncation(seen, truncation);
    for (const auto& row : rows) {
        if (traj.grid.empty() || traj.grid.back() != row.t) {
            if (!traj.grid.empty() && row.t < traj.grid.back())
                fail(path, "checkpoint times must be nondecreasing");
            traj.grid.push_back(row.t);
            traj.frames.emplace_back(n);
        }
        traj.frames.back().set_value(row.k, row.v);
    }
    return traj;
}

namespace {

std::string checkpoint_name(std::size_t index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "checkpoint_%05zu.csv", index);
    return buf;
}

}  // namespace

void write_trajectory(const std::filesystem::path& dir, const VelocityTrajectory& traj,
                      int stride) {
    if (traj.frames.size() != traj.grid.size())
        throw std::invalid_argument("write_trajectory: frame count does not match the grid");
    if (stride < 1) throw std::invalid_argument("write_trajectory: stride must be >= 1");
    std::filesystem::create_directories(dir);

    json manifest;
    manifest["nu"] = traj.nu;
    manifest["N"] = traj.frames.empty() ? 0 : traj.frames[0].truncation();
    manifest["picard_iterations"] = traj.picard_iterations;
    manifest["converged"] = traj.converged;
    manifest["grid"] = json::array();
    manifest["files"] = json::array();

    std::size_t written = 0;
    for (std::size_t j = 0; j < traj.frames.size(); ++j) {
        bool keep = j % std::size_t(stride) == 0 || j + 1 == traj.frames.size();
        if (!keep) continue;
        std::string name = checkpoint_name(written++);
        write_vector_csv(dir / name, traj.frames[j]);
        manifest["grid"].push_back(traj.grid[j]);
        manifest["files"].push_back(name);
    }

    auto out = open_out(dir / "manifest.json");
    out << manifest.dump(2) << '\n';
    if (!out) fail(dir / "manifest.json", "write failed");
}

VelocityTrajectory read_trajectory(const std::filesystem::path& dir) {
    auto in = open_in(dir / "manifest.json");
    json manifest = json::parse(in, nullptr, true);

    VelocityTrajectory traj;
    traj.nu = manifest.at("nu").get<double>();
    traj.picard_iterations = manifest.at("picard_iterations").get<int>();
    traj.converged = manifest.at("converged").get<bool>();
    const int n = manifest.at("N").get<int>();

    auto grid = manifest.at("grid");
    auto files = manifest.at("files");
    if (grid.size() != files.size()) fail(dir / "manifest.json", "grid/files length mismatch");
    for (std::size_t j = 0; j < grid.size(); ++j) {
        traj.grid.push_back(grid[j].get<double>());
        traj.frames.push_back(read_vector_csv(dir / files[j].get<std::string>(), n));
    }
    return traj;
}

void write_majorant_dump(const std::filesystem::path& dir, const MajorantTrajectory& traj) {
    std::filesystem::create_directories(dir);
    write_majorant_csv(dir / "majorant.csv", traj);
    json manifest;
    manifest["nu"] = traj.nu;
    manifest["a"] = traj.a_const;
    manifest["N"] = traj.frames.empty() ? 0 : traj.frames[0].truncation();
    manifest["checkpoints"] = traj.grid.size();
    auto out = open_out(dir / "majorant_manifest.json");
    out << manifest.dump(2) << '\n';
    if (!out) fail(dir / "majorant_manifest.json", "write failed");
}

namespace {

json to_json(const CheckpointCertificate& cert) {
    json j;
    j["t"] = cert.t;
    j["h1"] = cert.h1;
    j["divergence_residual"] = cert.divergence_residual;
    j["majorant_ok"] = cert.majorant_ok;
    j["worst_ratio"] = cert.worst_ratio;
    j["worst_mode"] = {cert.worst_mode.k1, cert.worst_mode.k2, cert.worst_mode.k3};
    j["decay_ratio"] = cert.decay_ratio;
    if (std::isfinite(cert.analyticity_radius))
        j["analyticity_radius"] = cert.analyticity_radius;
    else
        j["analyticity_radius"] = nullptr;  // underdetermined fit
    j["certified_radius"] = cert.certified_radius;
    j["meets_reference"] = cert.meets_reference;
    return j;
}

}  // namespace

void write_report_json(const std::filesystem::path& path, const CertificationReport& report) {
    json j;
    j["majorant_certified"] = report.majorant_certified;
    j["decay_certified"] = report.decay_certified;
    j["global_small_data"] = report.global_small_data;
    j["decay_ratio"] = report.decay_ratio;
    j["slack"] = report.slack;
    j["floor"] = report.floor;
    j["decay_cushion"] = report.decay_cushion;
    j["checkpoints"] = json::array();
    for (const auto& cert : report.checkpoints) j["checkpoints"].push_back(to_json(cert));

    auto out = open_out(path);
    out << j.dump(2) << '\n';
    if (!out) fail(path, "write failed");
}

std::string report_summary(const CertificationReport& report) {
    std::ostringstream out;
    out << "checkpoints: " << report.checkpoints.size() << '\n';
    out << "majorant certified: " << (report.majorant_certified ? "yes" : "no") << '\n';
    out << "decay certified: " << (report.decay_certified ? "yes" : "no")
        << " (sup ratio " << format_double(report.decay_ratio) << ", cushion "
        << format_double(report.decay_cushion) << ")\n";
    out << "global small-data certificate: " << (report.global_small_data ? "yes" : "no") << '\n';
    if (!report.checkpoints.empty()) {
        const auto* worst = &report.checkpoints.front();
        for (const auto& cert : report.checkpoints)
            if (cert.worst_ratio > worst->worst_ratio) worst = &cert;
        out << "tightest envelope margin: ratio " << format_double(worst->worst_ratio) << " at t="
            << format_double(worst->t) << " mode (" << worst->worst_mode.k1 << ','
            << worst->worst_mode.k2 << ',' << worst->worst_mode.k3 << ")\n";
        const auto& last = report.checkpoints.back();
        out << "final checkpoint: t=" << format_double(last.t) << " H1="
            << format_double(last.h1) << " certified radius "
            << format_double(last.certified_radius) << '\n';
    }
    return out.str();
}

void write_report_text(const std::filesystem::path& path, const CertificationReport& report) {
    auto out = open_out(path);
    out << report_summary(report);
    if (!out) fail(path, "write failed");
}

void write_probe_json(const std::filesystem::path& path, const SingularSetProbe& probe) {
    json rows = json::array();
    for (const auto& row : probe.rows) {
        json r;
        r["amplitude"] = row.amplitude;
        r["initial_h1"] = row.initial_h1;
        r["majorant_t_lo"] = row.bracket.t_lo;
        if (std::isfinite(row.bracket.t_hi))
            r["majorant_t_hi"] = row.bracket.t_hi;
        else
            r["majorant_t_hi"] = nullptr;  // no failure below t_max
        r["majorant_unbounded"] = row.bracket.unbounded;
        r["mild_status"] = to_string(row.mild_status);
        r["mild_horizon"] = row.mild_horizon;
        r["energy_growth"] = row.energy_growth;
        r["energy_nonincreasing"] = row.energy_nonincreasing;
        rows.push_back(r);
    }
    json j;
    j["rows"] = rows;
    auto out = open_out(path);
    out << j.dump(2) << '\n';
    if (!out) fail(path, "write failed");
}

}  // namespace nstorus::io
