#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "beamfamily/autocorr.hpp"
#include "beamfamily/cli.hpp"
#include "beamfamily/errors.hpp"
#include "beamfamily/io.hpp"

#include <json.hpp>
#include "support.hpp"

using namespace beamfamily;
using namespace beamfamily::testing;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        static int counter = 0;
        path = fs::temp_directory_path() / ("beamfam_test_" + std::to_string(::getpid()) + "_" +
                                            std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string operator/(const std::string& name) const { return (path / name).string(); }
};

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string spec_path() { return std::string(BEAMFAMILY_DATA_DIR) + "/sector_m10.json"; }

}  // namespace

TEST_CASE("number formatting") {
    CHECK(io::format_number(0.0) == "0");
    CHECK(io::format_number(-0.0) == "0");
    CHECK(io::format_number(1.0) == "1");
    CHECK(io::format_number(-2.5) == "-2.5");
    CHECK(io::format_number(1.0 / 3.0) == "0.333333333333");
    CHECK(io::format_number(1.5e-17) == "1.5e-17");
    CHECK(io::format_number(123456789012345.0) == "1.23456789012e+14");
    CHECK(io::format_number(-INFINITY) == "-inf");
}

TEST_CASE("beam vector documents") {
    std::mt19937_64 rng(61);
    const auto w = random_beam(rng, 6, 0.45);
    const auto back = io::parse_beam_vector(io::beam_vector_json(w));
    CHECK(back.geometry() == w.geometry());
    CHECK(max_abs_diff(back.weights(), w.weights()) <= 1e-11 * w.norm());
    // formatting is a fixed point after one round trip
    CHECK(io::beam_vector_json(io::parse_beam_vector(io::beam_vector_json(back))) == io::beam_vector_json(back));

    CHECK_THROWS_AS(io::parse_beam_vector(R"({"m": 3, "spacing": 0.5, "re": [1, 2], "im": [0, 0, 0]})"), ParseError);
    CHECK_THROWS_AS(io::parse_beam_vector(R"({"m": 2, "spacing": 0.5, "re": [1, 2]})"), ParseError);
    CHECK_THROWS_AS(io::parse_beam_vector(R"({"m": 2, "spacing": -1, "re": [1, 2], "im": [0, 0]})"), ParseError);
    CHECK_THROWS_AS(io::parse_beam_vector("not json"), ParseError);
    CHECK_THROWS_AS(io::read_beam_vector("/nonexistent/file.json"), ParseError);
}

TEST_CASE("family documents") {
    std::mt19937_64 rng(62);
    const auto fam = enumerate_family(random_generic_beam(rng, 4));
    const auto back = io::parse_family(io::family_json(fam));
    REQUIRE(back.distinct_count == fam.distinct_count);
    for (std::size_t i = 0; i < fam.members.size(); ++i) {
        CHECK(back.masks[i] == fam.masks[i]);
        CHECK(max_abs_diff(back.members[i].weights(), fam.members[i].weights()) <= 1e-11 * fam.mother.norm());
    }
    std::string bad = io::family_json(fam);
    bad.replace(bad.find("\"distinct_count\": 8"), 19, "\"distinct_count\": 9");
    CHECK_THROWS_AS(io::parse_family(bad), ParseError);
}

TEST_CASE("design spec documents") {
    const auto spec = io::read_design_spec(spec_path());
    CHECK(spec.geometry.element_count() == 10);
    CHECK(spec.out_sector.size() == 2);
    CHECK(spec.phase.amplitude == doctest::Approx(2.0 * kPi));
    const auto again = io::parse_design_spec(io::design_spec_json(spec));
    CHECK(io::design_spec_json(again) == io::design_spec_json(spec));

    const auto implicit = io::parse_design_spec(R"({"m": 8, "spacing": 0.5, "sector": [-20, 10], "total_power": 8})");
    REQUIRE(implicit.out_sector.size() == 2);
    CHECK(implicit.out_sector[0].hi_deg == -25.0);
    CHECK(implicit.out_sector[1].lo_deg == 15.0);
    CHECK(implicit.delta == 0.1);
    CHECK_THROWS_AS(io::parse_design_spec(R"({"m": 8, "spacing": 0.5, "sector": [-20, 10, 3], "total_power": 8})"), ParseError);
    CHECK_THROWS_AS(io::parse_design_spec(R"({"m": 8, "spacing": 0.5, "sector": [-20, 10], "total_power": -1})"), ParseError);
}

TEST_CASE("pattern and profile CSV") {
    const BeamVector w(ArrayGeometry(2, 0.5), CVector{1.0, 0.0});
    std::ostringstream csv;
    io::write_pattern_csv(csv, {beampattern(w, std::vector<double>{-90.0, 0.0})});
    CHECK(csv.str() == "theta_deg,power_linear,power_db\n-90,1,0\n0,1,0\n");

    std::ostringstream two;
    io::write_pattern_csv(two, {beampattern(w, std::vector<double>{0.0}), beampattern(w.scaled(0.5), std::vector<double>{0.0})});
    CHECK(two.str() == "theta_deg,power_linear_1,power_db_1,power_linear_2,power_db_2\n0,1,0,0.25,-6.02059991328\n");

    PowerProfile p{{2.0, 0.0}, 1.0, 2.0};
    std::ostringstream prof;
    io::write_profile_csv(prof, p);
    CHECK(prof.str() == "element,power_linear,power_db_rel_avg\n1,2,3.01029995664\n2,0,-inf\n");
}

TEST_CASE("cli design") {
    TempDir dir;
    auto r = run({"design", "--method", "spheroidal", "--spec", spec_path(), "--out", dir / "wsph.json"});
    REQUIRE(r.code == 0);
    const auto w = io::read_beam_vector(dir / "wsph.json");
    double dev_plus = 0.0, dev_minus = 0.0;
    for (std::size_t i = 0; i < 10; ++i) {
        dev_plus = std::max(dev_plus, std::abs(w[i] - kTableMother[i]));
        dev_minus = std::max(dev_minus, std::abs(w[i] + kTableMother[i]));
    }
    CHECK(std::min(dev_plus, dev_minus) <= 5e-2);
    CHECK(fs::exists(dir / "wsph.json.manifest.json"));

    r = run({"design", "--method", "cvx", "--spec", spec_path(), "--out", dir / "wcvx.json"});
    REQUIRE(r.code == 0);
    const auto c = io::read_beam_vector(dir / "wcvx.json");
    const auto spec = io::read_design_spec(spec_path());
    CHECK(20.0 * std::log10(max_response(c, outsector_grid(spec))) <= -19.5);

    CHECK(run({"design", "--method", "spheroidal", "--spec", dir / "missing.json", "--out", dir / "x.json"}).code == 2);
    io::write_text(dir / "broken.json", "{\"m\": 10}");
    CHECK(run({"design", "--method", "spheroidal", "--spec", dir / "broken.json", "--out", dir / "x.json"}).code == 2);
    CHECK(run({"design", "--method", "magic", "--spec", spec_path(), "--out", dir / "x.json"}).code == 2);
    io::write_text(dir / "flat.json", R"({"m": 6, "spacing": 1e-7, "sector": [-80, 80], "out_sector": [[85, 90]], "total_power": 1})");
    CHECK(run({"design", "--method", "spheroidal", "--spec", dir / "flat.json", "--out", dir / "x.json"}).code == 3);
}

TEST_CASE("cli enumerate and verify") {
    TempDir dir;
    io::write_beam_vector(dir / "w2.json", BeamVector(ArrayGeometry(2, 0.5), CVector{1.0, 2.0}));
    auto r = run({"enumerate", "--in", dir / "w2.json", "--out", dir / "fam2.json"});
    CHECK(r.code == 0);
    CHECK(r.out == "2\n");

    io::write_beam_vector(dir / "bad.json", BeamVector(ArrayGeometry(3, 0.5), CVector{1.0, 2.0, 0.0}));
    r = run({"enumerate", "--in", dir / "bad.json", "--out", dir / "x.json"});
    CHECK(r.code == 4);
    CHECK(r.err.find("trim") != std::string::npos);

    std::mt19937_64 rng(63);
    const auto w = random_generic_beam(rng, 6);
    io::write_beam_vector(dir / "w.json", w);
    REQUIRE(run({"enumerate", "--in", dir / "w.json", "--out", dir / "fam.json"}).code == 0);
    const auto fam = io::read_family(dir / "fam.json");
    io::write_beam_vector(dir / "member.json", fam.members[17]);
    CHECK(run({"verify", dir / "w.json", dir / "member.json"}).code == 0);
    io::write_beam_vector(dir / "scaled.json", w.scaled(1.001));
    r = run({"verify", dir / "w.json", dir / "scaled.json"});
    CHECK(r.code == 1);
    CHECK(r.out.find("max_lag_deviation") != std::string::npos);
    io::write_beam_vector(dir / "m5.json", random_generic_beam(rng, 5));
    CHECK(run({"verify", dir / "w.json", dir / "m5.json"}).code == 2);
    CHECK(run({"--tol", "1e-2", "verify", dir / "w.json", dir / "scaled.json"}).code == 0);
}

TEST_CASE("cli pattern and select") {
    TempDir dir;
    std::mt19937_64 rng(64);
    const auto w = random_generic_beam(rng, 5).scaled(1.0);
    const auto mother = w.scaled(std::sqrt(5.0) / w.norm());
    io::write_beam_vector(dir / "w.json", mother);
    REQUIRE(run({"enumerate", "--in", dir / "w.json", "--out", dir / "fam.json"}).code == 0);
    auto r = run({"select", "--family", dir / "fam.json", "-k", "4", "--power", "5", "--out", dir / "sel.json",
                  "--profile", dir / "profile.csv"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("uniformity_before") != std::string::npos);
    CHECK(io::read_text(dir / "profile.csv").rfind("element,power_linear,power_db_rel_avg\n", 0) == 0);

    // member from the selected set: pattern = mother / 4
    const auto doc = nlohmann::json::parse(io::read_text(dir / "sel.json"));
    io::write_text(dir / "chosen.json", doc.at("members").at(0).at("vector").dump());
    REQUIRE(run({"pattern", "--in", dir / "w.json", "--in", dir / "chosen.json", "--out", dir / "p.csv"}).code == 0);
    std::istringstream csv(io::read_text(dir / "p.csv"));
    std::string line;
    std::getline(csv, line);
    CHECK(line == "theta_deg,power_linear_1,power_db_1,power_linear_2,power_db_2");
    int rows = 0;
    while (std::getline(csv, line)) {
        double th, p1, d1, p2, d2;
        char c;
        std::istringstream row(line);
        row >> th >> c >> p1 >> c >> d1 >> c >> p2 >> c >> d2;
        CHECK(std::abs(p2 - p1 / 4.0) <= 1e-8 * std::max(p1, 1e-3));
        ++rows;
    }
    CHECK(rows == 721);

    CHECK(run({"select", "--family", dir / "fam.json", "-k", "600", "--power", "5", "--out", dir / "s.json"}).code == 2);
    CHECK(run({"select", "--family", dir / "fam.json", "-k", "2", "--power", "5", "--metric", "l1", "--out", dir / "s.json"}).code == 2);
    CHECK(run({"pattern", "--in", dir / "w.json", "--out", dir / "e.csv", "--angles", ""}).code == 2);
    CHECK(run({"pattern", "--in", dir / "w.json", "--out", dir / "e.csv", "--step", "0"}).code == 2);
    CHECK(run({"pattern", "--in", dir / "missing.json", "--out", dir / "e.csv"}).code == 2);
    REQUIRE(run({"pattern", "--in", dir / "w.json", "--out", dir / "few.csv", "--angles", "-10,0,10"}).code == 0);
    CHECK(io::read_text(dir / "few.csv").find("\n0,") != std::string::npos);

    // replay reproduces the output byte for byte
    const std::string before = io::read_text(dir / "sel.json");
    fs::remove(dir / "sel.json");
    REQUIRE(run({"replay", dir / "sel.json.manifest.json"}).code == 0);
    CHECK(io::read_text(dir / "sel.json") == before);
}

TEST_CASE("cli usage errors") {
    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"verify", "only-one"}).code == 2);
    CHECK(run({"--help"}).code == 0);
}
