#include <unistd.h>

#include <cstdint>
#include <filesystem>
#include <string>

#include "doctest.h"
#include "torun/generators.hpp"
#include "torun/io.hpp"
#include "torun/plot.hpp"
#include "torun/solver.hpp"
#include "torun/uniformizer.hpp"

using namespace torun;

namespace {

// per-case scratch directory, removed on scope exit
struct TempDir {
    std::filesystem::path path;

    explicit TempDir(const char* tag) {
        path = std::filesystem::temp_directory_path() /
               (std::string("torun_test_") + tag + "_" + std::to_string(::getpid()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }

    std::string file(const char* name) const { return (path / name).string(); }
};

PeriodicField random_field(int n, double period, std::uint64_t seed) {
    PeriodicField out(PeriodicGrid(n, period));
    Rng rng(seed);
    for (cd& v : out.values) v = cd(rng.next_symmetric(), rng.next_symmetric());
    return out;
}

} // namespace

TEST_CASE("json writer emits canonical bytes") {
    JsonWriter w;
    w.begin_object();
    w.key("a").value(1);
    w.key("b").begin_array().value(1.5).value("x").end_array();
    w.key("c").begin_object().key("d").value(true).end_object();
    w.key("z").value(cd(1.0, -2.0));
    w.end_object();
    CHECK(w.str() == R"({"a":1,"b":[1.5,"x"],"c":{"d":true},"z":[1,-2]})");
}

TEST_CASE("json writer escapes strings and flattens non-finite numbers") {
    JsonWriter w;
    w.begin_array();
    w.value("a\"b\\c\n\x01");
    w.value(std::nan(""));
    w.end_array();
    CHECK(w.str() == "[\"a\\\"b\\\\c\\n\\u0001\",null]");
}

TEST_CASE("doubles render with 17 significant digits") {
    CHECK(format_double(2.0) == "2");
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(1.0 / 3.0) == "0.33333333333333331");
    CHECK(format_double(-0.0) == "-0");
}

TEST_CASE("fnv hashing matches the reference vectors") {
    CHECK(fnv1a64("") == 14695981039346656037ull);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
    CHECK(fnv1a64("foobar") == 0x85944171f73967e8ull);
}

TEST_CASE("atomic writes land complete and are readable") {
    const TempDir dir("atomic");
    const std::string path = dir.file("x.txt");
    write_file_atomic(path, "first");
    CHECK(read_file(path) == "first");
    write_file_atomic(path, "second");
    CHECK(read_file(path) == "second");
    CHECK(!std::filesystem::exists(path + ".tmp"));

    CHECK_THROWS_AS(write_file_atomic("/nonexistent-dir/x.txt", "y"), invalid_input);
    CHECK_THROWS_AS(read_file(dir.file("missing.txt")), invalid_input);
}

TEST_CASE("field files round-trip bit-exactly") {
    const TempDir dir("roundtrip");
    const PeriodicField field = random_field(16, 3.5, 2024);
    const std::string header = dir.file("f.json");
    write_field(header, field, FieldKind::F);

    CHECK(std::filesystem::file_size(dir.file("f.bin")) == 16u * 16u * 16u);

    const FieldFile back = read_field(header);
    CHECK(back.kind == FieldKind::F);
    CHECK(back.field.grid == field.grid);
    CHECK(back.field.values == field.values);
}

TEST_CASE("field headers are canonical json lines") {
    const TempDir dir("header");
    const std::string header = dir.file("psi.json");
    write_field(header, PeriodicField(PeriodicGrid(4, 2.0)), FieldKind::PSI);
    CHECK(read_file(header) ==
          "{\"version\":1,\"n\":4,\"period\":2,\"kind\":\"psi\","
          "\"layout\":\"row-major\",\"encoding\":\"f64le-interleaved\"}\n");
}

TEST_CASE("field readers reject malformed inputs") {
    const TempDir dir("reject");
    const std::string header = dir.file("f.json");
    write_field(header, random_field(8, kTwoPi, 7), FieldKind::MU);

    SUBCASE("truncated payload") {
        std::string payload = read_file(dir.file("f.bin"));
        payload.resize(payload.size() - 8);
        write_file_atomic(dir.file("f.bin"), payload);
        CHECK_THROWS_WITH_AS(read_field(header),
                             doctest::Contains("payload size mismatch"), invalid_input);
    }
    SUBCASE("header grid disagrees with the payload") {
        write_file_atomic(header,
                          "{\"version\":1,\"n\":16,\"period\":6.28,\"kind\":\"mu\","
                          "\"layout\":\"row-major\",\"encoding\":\"f64le-interleaved\"}\n");
        CHECK_THROWS_AS(read_field(header), invalid_input);
    }
    SUBCASE("unsupported version") {
        write_file_atomic(header,
                          "{\"version\":2,\"n\":8,\"period\":6.28,\"kind\":\"mu\","
                          "\"layout\":\"row-major\",\"encoding\":\"f64le-interleaved\"}\n");
        CHECK_THROWS_AS(read_field(header), invalid_input);
    }
    SUBCASE("unknown kind") {
        write_file_atomic(header,
                          "{\"version\":1,\"n\":8,\"period\":6.28,\"kind\":\"junk\","
                          "\"layout\":\"row-major\",\"encoding\":\"f64le-interleaved\"}\n");
        CHECK_THROWS_AS(read_field(header), invalid_input);
    }
    SUBCASE("missing key") {
        write_file_atomic(header, "{\"version\":1,\"n\":8}\n");
        CHECK_THROWS_AS(read_field(header), invalid_input);
    }
    SUBCASE("wrongly typed key") {
        write_file_atomic(header,
                          "{\"version\":1,\"n\":\"eight\",\"period\":6.28,\"kind\":\"mu\","
                          "\"layout\":\"row-major\",\"encoding\":\"f64le-interleaved\"}\n");
        CHECK_THROWS_WITH_AS(read_field(header),
                             doctest::Contains("n must be an integer"), invalid_input);
    }
    SUBCASE("wrongly typed period") {
        write_file_atomic(header,
                          "{\"version\":1,\"n\":8,\"period\":\"tau\",\"kind\":\"mu\","
                          "\"layout\":\"row-major\",\"encoding\":\"f64le-interleaved\"}\n");
        CHECK_THROWS_WITH_AS(read_field(header),
                             doctest::Contains("malformed field header"), invalid_input);
    }
    SUBCASE("not json at all") {
        write_file_atomic(header, "P6 4 3 255");
        CHECK_THROWS_WITH_AS(read_field(header),
                             doctest::Contains("malformed field header"), invalid_input);
    }
    SUBCASE("non-finite payload sample") {
        std::string payload = read_file(dir.file("f.bin"));
        // little-endian quiet NaN into the first real part
        const unsigned char nan_bytes[8] = {0, 0, 0, 0, 0, 0, 0xf8, 0x7f};
        for (int i = 0; i < 8; ++i) payload[i] = static_cast<char>(nan_bytes[i]);
        write_file_atomic(dir.file("f.bin"), payload);
        CHECK_THROWS_AS(read_field(header), invalid_input);
    }
}

TEST_CASE("payload paths derive from the header path") {
    CHECK(payload_path_for("out/f.json") == "out/f.bin");
    CHECK_THROWS_AS(payload_path_for("f.txt"), invalid_input);
    CHECK_THROWS_AS(payload_path_for(".json"), invalid_input);
}

TEST_CASE("non-finite fields refuse to serialize") {
    const TempDir dir("nonfinite");
    PeriodicField bad(PeriodicGrid(4, 1.0));
    bad.values[5] = cd(std::nan(""), 0.0);
    CHECK_THROWS_AS(write_field(dir.file("f.json"), bad, FieldKind::F), invalid_input);
}

TEST_CASE("heatmap rendering is pinned to its golden bytes") {
    std::vector<double> ramp(12);
    for (int k = 0; k < 12; ++k) ramp[k] = k / 11.0;
    const std::string ppm = render_heatmap_ppm(ramp, 3, 4, 0.0, 1.0);
    CHECK(ppm.size() == 47);
    CHECK(ppm.compare(0, 11, "P6\n4 3\n255\n") == 0);
    CHECK(fnv1a64(ppm) == 0x023af7e3c5af1b28ull);

    CHECK(render_heatmap_ppm(ramp, 3, 4, 0.0, 1.0) == ppm);
    CHECK_THROWS_AS(render_heatmap_ppm(ramp, 5, 4, 0.0, 1.0), invalid_input);
    CHECK_THROWS_AS(render_heatmap_ppm(ramp, 3, 4, 1.0, 0.0), invalid_input);
}

TEST_CASE("grid plot rendering is pinned to its golden bytes") {
    const PeriodicGrid grid(16, kTwoPi);
    const BeltramiCoefficient mu(constant_field(grid, cd(0.5, 0.0)));
    SolverLimits limits;
    limits.tol = 1e-12;
    const UniformizingForm form = build_uniformizing_form(solve_neumann(mu, limits).f, mu);
    const TorusLattice lat = lattice(form);

    const std::string svg = render_grid_svg(form, lat, 8, 64);
    CHECK(svg.size() == 17387);
    CHECK(fnv1a64(svg) == 0x57bf3ecb51feb9edull);
    CHECK(render_grid_svg(form, lat, 8, 64) == svg);

    CHECK_THROWS_AS(render_grid_svg(form, lat, 0, 64), invalid_input);
    CHECK_THROWS_AS(render_grid_svg(form, lat, 8, 1), invalid_input);
}
