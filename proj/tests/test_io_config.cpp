#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "nstorus/initial_conditions.hpp"
#include "nstorus/io.hpp"
#include "nstorus/run_config.hpp"

using namespace nstorus;
namespace fs = std::filesystem;

namespace {

fs::path test_dir() {
    fs::path dir = fs::temp_directory_path() / "nstorus_io_tests";
    fs::create_directories(dir);
    return dir;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string parse_failure(const fs::path& path) {
    try {
        parse_config_file(path);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("format_double emits shortest exact decimal forms") {
    CHECK(io::format_double(1.0) == "1");
    CHECK(io::format_double(0.5) == "0.5");
    CHECK(io::format_double(-0.25) == "-0.25");
    CHECK(io::format_double(0.0) == "0");

    for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 6.02214076e23,
                     std::numeric_limits<double>::denorm_min()}) {
        std::string s = io::format_double(v);
        double back = 0.0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), back);
        REQUIRE(ec == std::errc{});
        REQUIRE(ptr == s.data() + s.size());
        CHECK(back == v);
    }
}

TEST_CASE("scalar CSV pins its row format and skips zeros") {
    SpectralScalarField f(2);
    f.set_coeff(WaveVector{-1, 2, 0}, Complex(1.5, -0.25));
    f.set_coeff(WaveVector{1, 0, 0}, Complex(2.0, 0.0));
    auto path = test_dir() / "scalar_format.csv";
    io::write_scalar_csv(path, f);
    CHECK(read_text(path) ==
          "k1,k2,k3,re,im\n"
          "-1,2,0,1.5,-0.25\n"
          "1,0,0,2,0\n");
}

TEST_CASE("scalar CSV round-trips a random field exactly") {
    auto f = random_hermitian_scalar(42, 1.0, 3);
    auto path = test_dir() / "scalar_roundtrip.csv";
    io::write_scalar_csv(path, f);
    auto g = io::read_scalar_csv(path);
    REQUIRE(g.truncation() == 3);
    auto fd = f.data();
    auto gd = g.data();
    for (std::size_t i = 0; i < fd.size(); ++i) CHECK(fd[i] == gd[i]);

    // Forcing a larger cube embeds; forcing a smaller one is an error.
    auto wide = io::read_scalar_csv(path, 5);
    CHECK(wide.truncation() == 5);
    f.for_each_nonzero([&](const WaveVector& k, Complex c) { CHECK(wide.coeff(k) == c); });
    CHECK_THROWS_AS(io::read_scalar_csv(path, 2), std::runtime_error);
}

TEST_CASE("scalar CSV rejects malformed content") {
    auto dir = test_dir();
    write_text(dir / "zero_row.csv", "k1,k2,k3,re,im\n0,0,0,1,0\n");
    CHECK_THROWS_AS(io::read_scalar_csv(dir / "zero_row.csv"), std::runtime_error);
    write_text(dir / "bad_header.csv", "a,b,c\n");
    CHECK_THROWS_AS(io::read_scalar_csv(dir / "bad_header.csv"), std::runtime_error);
    write_text(dir / "short_row.csv", "k1,k2,k3,re,im\n1,0,0,1\n");
    CHECK_THROWS_AS(io::read_scalar_csv(dir / "short_row.csv"), std::runtime_error);
    write_text(dir / "bad_number.csv", "k1,k2,k3,re,im\n1,0,0,x,0\n");
    CHECK_THROWS_AS(io::read_scalar_csv(dir / "bad_number.csv"), std::runtime_error);
    CHECK_THROWS_AS(io::read_scalar_csv(dir / "does_not_exist.csv"), std::runtime_error);
}

TEST_CASE("vector CSV round-trips component-major") {
    // Truncation 1 so the reader's inferred truncation matches the original.
    SpectralVectorField v(1);
    v.component(0).set_coeff(WaveVector{1, 0, 0}, Complex(0.5, 0.0));
    v.component(1).set_coeff(WaveVector{0, 1, 0}, Complex(0.0, -0.25));
    auto path = test_dir() / "vector_format.csv";
    io::write_vector_csv(path, v);
    CHECK(read_text(path) ==
          "component,k1,k2,k3,re,im\n"
          "1,1,0,0,0.5,0\n"
          "2,0,1,0,0,-0.25\n");

    auto w = io::read_vector_csv(path);
    REQUIRE(w.truncation() == 1);
    for (int j = 0; j < 3; ++j) {
        auto a = v.component(j).data();
        auto b = w.component(j).data();
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
    }

    auto solen = random_solenoidal(7, 2.0, 4);
    io::write_vector_csv(path, solen);
    auto back = io::read_vector_csv(path);
    REQUIRE(back.truncation() == 4);
    for (int j = 0; j < 3; ++j) {
        auto a = solen.component(j).data();
        auto b = back.component(j).data();
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
    }

    write_text(test_dir() / "bad_comp.csv", "component,k1,k2,k3,re,im\n4,1,0,0,1,0\n");
    CHECK_THROWS_AS(io::read_vector_csv(test_dir() / "bad_comp.csv"), std::runtime_error);
}

TEST_CASE("envelope trajectory CSV round-trips") {
    MajorantTrajectory traj;
    traj.grid = {0.0, 0.125, 0.25};
    traj.nu = 0.5;
    for (int j = 0; j < 3; ++j) {
        MajorantField frame(2);
        frame.set_value(WaveVector{1, 1, 0}, 0.75 / double(j + 1));
        frame.set_value(WaveVector{-2, 0, 1}, 0.0625 * double(j + 1));
        traj.frames.push_back(frame);
    }
    auto path = test_dir() / "majorant.csv";
    io::write_majorant_csv(path, traj);
    auto back = io::read_majorant_csv(path);
    REQUIRE(back.grid == traj.grid);
    REQUIRE(back.frames.size() == 3);
    for (int j = 0; j < 3; ++j) {
        CHECK(back.frames[j].value(WaveVector{1, 1, 0}) == traj.frames[j].value(WaveVector{1, 1, 0}));
        CHECK(back.frames[j].value(WaveVector{-2, 0, 1}) ==
              traj.frames[j].value(WaveVector{-2, 0, 1}));
    }

    write_text(test_dir() / "backwards.csv", "t,k1,k2,k3,V\n0.5,1,0,0,1\n0.25,1,0,0,1\n");
    CHECK_THROWS_AS(io::read_majorant_csv(test_dir() / "backwards.csv"), std::runtime_error);
}

TEST_CASE("velocity trajectory directory round-trips with striding") {
    VelocityTrajectory traj;
    traj.grid = {0.0, 0.1, 0.2, 0.3};
    traj.nu = 0.75;
    traj.picard_iterations = 5;
    traj.converged = true;
    for (int j = 0; j < 4; ++j) {
        SpectralVectorField frame(2);
        frame.component(0).set_coeff(WaveVector{1, 0, 0}, Complex(0.5 / (j + 1), 0.25 * j));
        frame.component(2).set_coeff(WaveVector{0, -1, 2}, Complex(-0.125, 0.0625 * j));
        traj.frames.push_back(frame);
    }

    auto dir = test_dir() / "traj_full";
    io::write_trajectory(dir, traj);
    auto back = io::read_trajectory(dir);
    CHECK(back.grid == traj.grid);
    CHECK(back.nu == traj.nu);
    CHECK(back.picard_iterations == 5);
    CHECK(back.converged);
    REQUIRE(back.frames.size() == 4);
    for (int j = 0; j < 4; ++j)
        for (int comp = 0; comp < 3; ++comp) {
            auto a = traj.frames[j].component(comp).data();
            auto b = back.frames[j].component(comp).data();
            for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
        }

    // Stride 2 on 4 frames keeps indices 0, 2 and the final frame.
    auto strided_dir = test_dir() / "traj_strided";
    io::write_trajectory(strided_dir, traj, 2);
    auto strided = io::read_trajectory(strided_dir);
    CHECK(strided.grid == TimeGrid{0.0, 0.2, 0.3});
    CHECK(fs::exists(strided_dir / "checkpoint_00000.csv"));
    CHECK(fs::exists(strided_dir / "checkpoint_00002.csv"));
    CHECK_FALSE(fs::exists(strided_dir / "checkpoint_00003.csv"));

    CHECK_THROWS_AS(io::write_trajectory(dir, traj, 0), std::invalid_argument);
    traj.frames.pop_back();
    CHECK_THROWS_AS(io::write_trajectory(dir, traj), std::invalid_argument);
}

TEST_CASE("report JSON encodes an unbounded radius as null") {
    CertificationReport report;
    report.majorant_certified = true;
    report.decay_certified = true;
    report.global_small_data = true;
    report.decay_ratio = 0.875;
    report.slack = 1.0 + 1e-6;
    report.floor = 1e-13;
    report.decay_cushion = 1.01;

    CheckpointCertificate a;
    a.t = 0.0;
    a.analyticity_radius = std::numeric_limits<double>::infinity();
    a.meets_reference = true;
    CheckpointCertificate b;
    b.t = 0.5;
    b.h1 = 0.25;
    b.majorant_ok = true;
    b.worst_ratio = 0.5;
    b.worst_mode = WaveVector{1, -2, 0};
    b.analyticity_radius = 1.25;
    b.certified_radius = 0.25;
    b.meets_reference = true;
    report.checkpoints = {a, b};

    auto path = test_dir() / "report.json";
    io::write_report_json(path, report);
    std::ifstream in(path);
    auto j = nlohmann::json::parse(in);
    CHECK(j.at("majorant_certified").get<bool>());
    CHECK(j.at("decay_ratio").get<double>() == 0.875);
    REQUIRE(j.at("checkpoints").size() == 2);
    CHECK(j.at("checkpoints")[0].at("analyticity_radius").is_null());
    CHECK(j.at("checkpoints")[1].at("analyticity_radius").get<double>() == 1.25);
    CHECK(j.at("checkpoints")[1].at("worst_mode") == nlohmann::json({1, -2, 0}));

    auto summary = io::report_summary(report);
    CHECK(summary.find("majorant certified: yes") != std::string::npos);
    CHECK(summary.find("global small-data certificate: yes") != std::string::npos);
    CHECK(summary.find("final checkpoint: t=0.5") != std::string::npos);
}

TEST_CASE("probe JSON encodes a never-failing bracket as null") {
    SingularSetProbe probe;
    SingularProbeRow clear;
    clear.amplitude = 0.5;
    clear.bracket.t_lo = 1.0;
    clear.bracket.t_hi = std::numeric_limits<double>::infinity();
    clear.bracket.unbounded = true;
    clear.mild_status = SolveStatus::converged;
    SingularProbeRow tight;
    tight.amplitude = 8.0;
    tight.bracket.t_lo = 0.05;
    tight.bracket.t_hi = 0.0505;
    probe.rows = {clear, tight};

    auto path = test_dir() / "probe.json";
    io::write_probe_json(path, probe);
    std::ifstream in(path);
    auto j = nlohmann::json::parse(in);
    REQUIRE(j.at("rows").size() == 2);
    CHECK(j.at("rows")[0].at("majorant_t_hi").is_null());
    CHECK(j.at("rows")[0].at("mild_status").get<std::string>() == "converged");
    CHECK(j.at("rows")[1].at("majorant_t_hi").get<double>() == 0.0505);
}

TEST_CASE("config files parse every section") {
    auto path = test_dir() / "full.ini";
    write_text(path,
               "# full exercise\n"
               "[solver]\n"
               "truncation = 4\n"
               "nu = 0.5          ; inline comment\n"
               "horizon = 0.25\n"
               "picard_tol = 1e-10\n"
               "max_iterations = 30\n"
               "convolution = direct\n"
               "\n"
               "[grid]\n"
               "ratio = 1.2\n"
               "min_step_frac = 1e-4\n"
               "max_step_frac = 5e-3\n"
               "\n"
               "[initial]\n"
               "kind = random\n"
               "amplitude = 0.75\n"
               "seed = 99\n"
               "\n"
               "[majorant]\n"
               "a = 2.5\n"
               "tol = 1e-11\n"
               "max_iterations = 50\n"
               "\n"
               "[certify]\n"
               "slack = 1.000001\n"
               "decay_cushion = 1.02\n"
               "\n"
               "[experiment]\n"
               "amplitudes = 0.5, 1, 2.0\n"
               "t_max = 1.5\n"
               "rel_width = 0.02\n"
               "c_cal = 0.125\n"
               "probe_pairs = 7\n"
               "probe_times = 5\n"
               "probe_bound_factor = 2.5\n"
               "\n"
               "[output]\n"
               "directory = results/run1\n"
               "frame_stride = 4\n");

    auto cfg = parse_config_file(path);
    CHECK(cfg.truncation == 4);
    CHECK(cfg.nu == 0.5);
    CHECK(cfg.horizon == 0.25);
    CHECK(cfg.picard_tol == 1e-10);
    CHECK(cfg.max_iterations == 30);
    CHECK(cfg.path == ConvolutionPath::direct);
    CHECK(cfg.grid.ratio == 1.2);
    CHECK(cfg.grid.min_step_frac == 1e-4);
    CHECK(cfg.grid.max_step_frac == 5e-3);
    CHECK(cfg.initial_kind == "random");
    CHECK(cfg.amplitude == 0.75);
    CHECK(cfg.seed == 99);
    CHECK(cfg.majorant_a == 2.5);
    CHECK(cfg.majorant_tol == 1e-11);
    CHECK(cfg.majorant_max_iterations == 50);
    CHECK(cfg.slack == 1.000001);
    CHECK(cfg.decay_cushion == 1.02);
    CHECK(cfg.amplitudes == std::vector<double>{0.5, 1.0, 2.0});
    CHECK(cfg.t_max == 1.5);
    CHECK(cfg.rel_width == 0.02);
    CHECK(cfg.c_cal == 0.125);
    CHECK(cfg.probe_pairs == 7);
    CHECK(cfg.probe_times == 5);
    CHECK(cfg.probe_bound_factor == 2.5);
    CHECK(cfg.directory == "results/run1");
    CHECK(cfg.frame_stride == 4);
}

TEST_CASE("config errors carry enough context to fix the file") {
    auto dir = test_dir();

    write_text(dir / "unknown_key.ini", "[solver]\nbogus = 3\n");
    CHECK_THROWS_AS(parse_config_file(dir / "unknown_key.ini"), ConfigError);
    CHECK(parse_failure(dir / "unknown_key.ini").find("solver.bogus") != std::string::npos);

    write_text(dir / "unknown_section.ini", "[turbulence]\nx = 1\n");
    CHECK(parse_failure(dir / "unknown_section.ini").find("[turbulence]") != std::string::npos);

    write_text(dir / "orphan_key.ini", "x = 1\n");
    CHECK(parse_failure(dir / "orphan_key.ini").find(":1:") != std::string::npos);

    write_text(dir / "no_equals.ini", "[solver]\ntruncation 4\n");
    CHECK(parse_failure(dir / "no_equals.ini").find(":2:") != std::string::npos);

    write_text(dir / "bad_number.ini", "[solver]\nnu = fast\n");
    CHECK(parse_failure(dir / "bad_number.ini").find("solver.nu") != std::string::npos);

    write_text(dir / "bad_header.ini", "[solver\nnu = 1\n");
    CHECK(parse_failure(dir / "bad_header.ini").find("malformed section header") !=
          std::string::npos);

    write_text(dir / "bad_kind.ini", "[initial]\nkind = pumpkin\n");
    CHECK(parse_failure(dir / "bad_kind.ini").find("pumpkin") != std::string::npos);

    write_text(dir / "bad_path.ini", "[solver]\nconvolution = fast\n");
    CHECK(parse_failure(dir / "bad_path.ini").find("expected 'padded' or 'direct'") !=
          std::string::npos);

    write_text(dir / "empty_list.ini", "[experiment]\namplitudes = ,\n");
    CHECK(parse_failure(dir / "empty_list.ini").find("empty list") != std::string::npos);

    CHECK_THROWS_AS(parse_config_file(dir / "missing.ini"), ConfigError);
}

TEST_CASE("command-line overrides patch a parsed config") {
    RunConfig cfg;
    apply_override(cfg, "solver.nu=2.5");
    CHECK(cfg.nu == 2.5);
    apply_override(cfg, "experiment.amplitudes=1,2,4");
    CHECK(cfg.amplitudes == std::vector<double>{1.0, 2.0, 4.0});
    apply_override(cfg, "output.directory=elsewhere");
    CHECK(cfg.directory == "elsewhere");
    apply_override(cfg, " solver.truncation = 6 ");
    CHECK(cfg.truncation == 6);

    CHECK_THROWS_AS(apply_override(cfg, "nonsense"), ConfigError);
    CHECK_THROWS_AS(apply_override(cfg, "solver.nu="), ConfigError);
    CHECK_THROWS_AS(apply_override(cfg, "nu=3"), ConfigError);
    CHECK_THROWS_AS(apply_override(cfg, ".nu=3"), ConfigError);
    CHECK_THROWS_AS(apply_override(cfg, "solver.=3"), ConfigError);
    CHECK_THROWS_AS(apply_override(cfg, "solver.bogus=3"), ConfigError);

    auto path = test_dir() / "base.ini";
    write_text(path, "[solver]\nnu = 1.5\ntruncation = 3\n");
    std::vector<std::string> overrides{"solver.nu=0.25"};
    auto loaded = load_config(path, overrides);
    CHECK(loaded.nu == 0.25);
    CHECK(loaded.truncation == 3);
}
