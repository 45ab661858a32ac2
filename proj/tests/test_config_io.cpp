#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "helpers.hpp"
#include "thermel/config.hpp"
#include "thermel/io.hpp"

using namespace thermel;
using namespace thermel::testing;

namespace {

const char* kMinimal =
    "[grid]\n"
    "n1 = 8\n"
    "n2 = 8\n"
    "n3 = 8\n"
    "\n"
    "[sigma]\n"
    "kind = constant\n"
    "sigma0 = 1.0\n"
    "\n"
    "[boundary]\n"
    "mode = electric\n"
    "e1 = 0.1\n";

}  // namespace

TEST_CASE("minimal config parses with documented defaults") {
    RunConfig cfg = parse_config(kMinimal);
    CHECK(cfg.cells == std::array<int, 3>{8, 8, 8});
    CHECK(cfg.extent == std::array<double, 3>{1.0, 1.0, 1.0});
    CHECK(cfg.mode == BoundaryMode::Electric);
    CHECK(cfg.joule == JouleMode::Pointwise);
    CHECK(cfg.e_const[0] == 0.1);
    CHECK(cfg.picard.theta == 1.0);
    CHECK(cfg.write_fields);
    ProblemSpec spec = cfg.make_problem();
    spec.validate();
}

TEST_CASE("comments, blanks, and section ordering are accepted") {
    RunConfig cfg = parse_config(
        "# leading comment\n[boundary]\nmode = electric ; trailing\n\n[grid]\nn1=4\nn2=4\nn3=4\n"
        "[sigma]\nkind = sigmoid\nsigma1 = 0.5\nsigma2 = 2\ns0 = 0\nw = 1\n");
    CHECK(cfg.sigma.sigma_min() == 0.5);
    CHECK(cfg.sigma.sigma_max() == 2.0);
}

TEST_CASE("errors carry line numbers and key paths") {
    SUBCASE("unknown key") {
        CHECK_THROWS_WITH_AS(parse_config(std::string(kMinimal) + "banana = 1\n"),
                             doctest::Contains("[boundary].banana"), ConfigError);
    }
    SUBCASE("unknown section") {
        CHECK_THROWS_WITH_AS(parse_config(std::string(kMinimal) + "[fruit]\n"),
                             doctest::Contains("unknown section [fruit]"), ConfigError);
    }
    SUBCASE("duplicate key reports both lines") {
        try {
            parse_config("[grid]\nn1 = 4\nn1 = 8\nn2 = 4\nn3 = 4\n[sigma]\nkind = constant\n"
                         "[boundary]\nmode = electric\n");
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find("line 3") != std::string::npos);
            CHECK(std::string(e.what()).find("duplicate key [grid].n1") != std::string::npos);
        }
    }
    SUBCASE("missing required section") {
        CHECK_THROWS_WITH_AS(parse_config("[grid]\nn1=4\nn2=4\nn3=4\n[sigma]\nkind=constant\n"),
                             doctest::Contains("missing required section [boundary]"),
                             ConfigError);
    }
    SUBCASE("malformed number names the key") {
        CHECK_THROWS_WITH_AS(parse_config("[grid]\nn1 = four\nn2=4\nn3=4\n[sigma]\nkind=constant\n"
                                          "[boundary]\nmode=electric\n"),
                             doctest::Contains("[grid].n1"), ConfigError);
    }
}

TEST_CASE("non-positive lower conductivity bound is rejected, citing the key") {
    CHECK_THROWS_WITH_AS(
        parse_config("[grid]\nn1=4\nn2=4\nn3=4\n[sigma]\nkind = sigmoid\nsigma1 = 0\nsigma2 = 2\n"
                     "[boundary]\nmode = electric\n"),
        doctest::Contains("[sigma].sigma1"), ConfigError);
}

TEST_CASE("incompatible tangential flux is rejected with the boundary sum") {
    CHECK_THROWS_WITH_AS(
        parse_config("[grid]\nn1=4\nn2=4\nn3=4\n[sigma]\nkind=constant\n[boundary]\n"
                     "mode = tangential\nh0 = uniform\nh0_amplitude = 1\n"),
        doctest::Contains("boundary integral = 6"), ConfigError);
}

TEST_CASE("chi flux preset is compatible and carries its analytic curl") {
    RunConfig cfg = parse_config(
        "[grid]\nn1=8\nn2=8\nn3=8\n[sigma]\nkind=constant\n[boundary]\nmode = tangential\n"
        "h0 = chi\nh0_amplitude = 0.5\n");
    ProblemSpec spec = cfg.make_problem();
    spec.validate();
    REQUIRE(spec.curl_h0.has_value());
    CHECK(norm2_edges(*spec.curl_h0) > 0.0);
}

TEST_CASE("picard damping is validated") {
    CHECK_THROWS_WITH_AS(parse_config(std::string(kMinimal) + "[picard]\ntheta = 1.5\n"),
                         doctest::Contains("[picard].theta"), ConfigError);
}

TEST_CASE("csv serialization follows the quoting rules") {
    std::string csv = to_csv({{"a", "b,c", "d\"e"}, {"1", "2", "line\nbreak"}});
    CHECK(csv == "a,\"b,c\",\"d\"\"e\"\r\n1,2,\"line\nbreak\"\r\n");
}

TEST_CASE("fmt_double round-trips through 17 significant digits") {
    for (double v : {0.1, 1.0 / 3.0, 2.0947425835080176, -1e-300, 0.0}) {
        CHECK(std::stod(fmt_double(v)) == v);
    }
}

TEST_CASE("atomic writes land complete and leave no temp file") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "thermel_io_test";
    fs::remove_all(dir);
    std::string path = (dir / "sub" / "x.csv").string();
    write_file_atomic(path, "hello\r\n");
    std::ifstream in(path, std::ios::binary);
    std::string got((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(got == "hello\r\n");
    CHECK_FALSE(fs::exists(path + ".tmp"));
    // overwrite is atomic too
    write_file_atomic(path, "bye\r\n");
    std::ifstream in2(path, std::ios::binary);
    std::string got2((std::istreambuf_iterator<char>(in2)), std::istreambuf_iterator<char>());
    CHECK(got2 == "bye\r\n");
    fs::remove_all(dir);
}

TEST_CASE("vtk output has the documented structured-points header") {
    Grid g(2, 3, 4, 1.0, 1.5, 2.0);
    NodeField u = sample_nodes(g, [](std::array<double, 3> x) { return x[0]; });
    std::string vtk = vtk_structured_points(g, "title", {{"temperature", &u}}, {});
    CHECK(vtk.find("# vtk DataFile Version 3.0\ntitle\nASCII\nDATASET STRUCTURED_POINTS\n") == 0);
    CHECK(vtk.find("DIMENSIONS 3 4 5") != std::string::npos);
    CHECK(vtk.find("SPACING 0.5 0.5 0.5") != std::string::npos);
    CHECK(vtk.find("POINT_DATA 60") != std::string::npos);
    CHECK(vtk.find("SCALARS temperature double 1\nLOOKUP_TABLE default\n") != std::string::npos);
}

TEST_CASE("edge averaging to nodes is exact for constant fields") {
    Grid g(4, 4, 4);
    EdgeField e(g);
    for (int c = 0; c < 3; ++c)
        for (double& v : e.comp(c)) v = double(c + 1);
    auto comps = edge_to_node_components(e);
    for (int c = 0; c < 3; ++c)
        for (double v : comps[c].data()) CHECK(v == doctest::Approx(double(c + 1)));
}

TEST_CASE("raw dumps round-trip with their sidecar description") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "thermel_raw_test";
    fs::remove_all(dir);
    Grid g(3, 4, 5);
    NodeField u = random_nodes(g, 77);
    std::string path = (dir / "u.f64").string();
    write_raw_node(path, u);
    std::ifstream in(path, std::ios::binary);
    std::vector<double> back(u.data().size());
    in.read(reinterpret_cast<char*>(back.data()), std::streamsize(back.size() * sizeof(double)));
    REQUIRE(bool(in));
    CHECK(back == u.data());
    std::ifstream side(path + ".txt");
    std::string txt((std::istreambuf_iterator<char>(side)), std::istreambuf_iterator<char>());
    CHECK(txt.find("dims 4 5 6") != std::string::npos);
    CHECK(txt.find("little-endian float64") != std::string::npos);
    fs::remove_all(dir);
}
