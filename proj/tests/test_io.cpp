#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>

#include <gtest/gtest.h>

#include "generators.hpp"
#include "resonet/io/config.hpp"
#include "resonet/io/files.hpp"
#include "resonet/io/json_io.hpp"
#include "resonet/io/touchstone.hpp"

using namespace resonet;
namespace fs = std::filesystem;

namespace {

const FilterSpec xband4{4, 10e9, 0.5e9, 0.04321};

errc code_of(auto&& f) {
    try {
        f();
    } catch (const error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error raised";
    return errc::numerical_failure;
}

FrequencyResponse xband_sweep(int points = 201) {
    const auto d = io::synthesize_design(xband4);
    return sweep(d.matrix, d.spec, 9e9, 11e9, points);
}

class TempDir {
public:
    TempDir() {
        path_ = fs::temp_directory_path() /
                ("resonet-io-" + std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        fs::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    const fs::path& path() const { return path_; }

private:
    fs::path path_;
};

} // namespace

TEST(DesignFile, RoundTripIsExact) {
    for (const FilterSpec& s : {xband4, FilterSpec{8, 10e9, 0.5e9, 0.04321}, FilterSpec{4, 300e9, 6e9, 0.04321}}) {
        const auto d = io::synthesize_design(s);
        const auto back = io::parse_design(io::serialize_design(d));
        EXPECT_TRUE(back == d);
    }
}

TEST(DesignFileProperty, RandomDesignsRoundTrip) {
    gen::Rng rng(71);
    for (int trial = 0; trial < 200; ++trial) {
        io::DesignFile d = io::synthesize_design(gen::spec(rng));
        d.matrix = gen::dense_matrix(rng, d.spec.order);
        if (rng.coin()) d.polynomials.reset();
        else d.polynomials = extract_polynomials(d.matrix);
        if (rng.coin())
            d.optimization = io::OptimizationRecord{rng.integer(0, 99), rng.uniform(0, 1), rng.uniform(0, 1e-9), rng.coin()};
        const auto back = io::parse_design(io::serialize_design(d));
        ASSERT_TRUE(back == d) << "trial " << trial;
    }
}

TEST(DesignFile, Diagnostics) {
    const std::string good = io::serialize_design(io::synthesize_design(xband4));
    auto json = io::json::parse(good);

    EXPECT_EQ(code_of([] { (void)io::parse_design("{ not json"); }), errc::parse_error);
    EXPECT_EQ(code_of([] { (void)io::parse_design(R"({"format": "something-else"})"); }), errc::parse_error);

    auto missing = json;
    missing["spec"].erase("order");
    try {
        (void)io::parse_design(missing.dump());
        FAIL();
    } catch (const error& e) {
        EXPECT_EQ(e.code(), errc::parse_error);
        EXPECT_NE(std::string(e.what()).find("spec.order"), std::string::npos) << e.what();
    }

    auto wrong_type = json;
    wrong_type["spec"]["f0"] = "ten GHz";
    EXPECT_EQ(code_of([&] { (void)io::parse_design(wrong_type.dump()); }), errc::parse_error);

    auto asym = json;
    asym["matrix"]["m"][0][1] = 0.5;
    EXPECT_EQ(code_of([&] { (void)io::parse_design(asym.dump()); }), errc::parse_error);

    auto ragged = json;
    ragged["matrix"]["m"][1] = io::json::array({0.0});
    EXPECT_EQ(code_of([&] { (void)io::parse_design(ragged.dump()); }), errc::parse_error);
}

TEST(Touchstone, WriterLayout) {
    const auto r = xband_sweep(5);
    const std::string text = io::write_touchstone(r);
    EXPECT_NE(text.find("\n# GHz S RI R 50\n"), std::string::npos);
    std::istringstream in(text);
    std::string line;
    int rows = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '!' || line[0] == '#') continue;
        std::istringstream cols(line);
        std::vector<double> v;
        for (double x; cols >> x;) v.push_back(x);
        ASSERT_EQ(v.size(), 9u);
        EXPECT_NEAR(v[0], r.grid[rows] / 1e9, 1e-12);
        EXPECT_EQ(v[3], v[5]); // S21 == S12
        EXPECT_EQ(v[4], v[6]);
        ++rows;
    }
    EXPECT_EQ(rows, 5);
}

TEST(Touchstone, RoundTrip) {
    const auto r = xband_sweep(1001);
    const auto back = io::parse_touchstone(io::write_touchstone(r));
    ASSERT_EQ(back.size(), r.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        EXPECT_NEAR(back.grid[i], r.grid[i], 1e-12 * r.grid[i]);
        EXPECT_LE(std::abs(back.s11[i] - r.s11[i]), 1e-12);
        EXPECT_LE(std::abs(back.s21[i] - r.s21[i]), 1e-12);
        EXPECT_LE(std::abs(back.s22[i] - r.s22[i]), 1e-12);
    }
}

TEST(Touchstone, ReaderFormatsAndUnits) {
    const std::string ma = "! magnitude/angle\n# MHz S MA R 50\n"
                           "1000 0.5 90 0.8 -45\n  0.8 -45 0.5 0\n" // wrapped row
                           "2000 1 180 0 0 0 0 1 0 ! trailing comment\n";
    const auto r = io::parse_touchstone(ma);
    ASSERT_EQ(r.size(), 2u);
    EXPECT_DOUBLE_EQ(r.grid[0], 1e9);
    EXPECT_NEAR(std::abs(r.s11[0] - cplx(0.0, 0.5)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(r.s21[0] - std::polar(0.8, -std::numbers::pi / 4)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(r.s11[1] - cplx(-1.0, 0.0)), 0.0, 1e-15);

    const auto db = io::parse_touchstone("# Hz S DB R 50\n5 -20 0 -6 90 -6 90 -20 0\n");
    EXPECT_DOUBLE_EQ(db.grid[0], 5.0);
    EXPECT_NEAR(std::abs(db.s11[0]), 0.1, 1e-15);
    EXPECT_NEAR(db.s21[0].imag(), std::pow(10.0, -6.0 / 20.0), 1e-15);

    const auto dflt = io::parse_touchstone("1 0.1 0 0.9 0 0.9 0 0.1 0\n"); // GHz MA by default
    EXPECT_DOUBLE_EQ(dflt.grid[0], 1e9);
}

TEST(Touchstone, ReaderErrors) {
    EXPECT_EQ(code_of([] { (void)io::parse_touchstone("# GHz S RI R 50\n1 2 3\n"); }), errc::parse_error);
    EXPECT_EQ(code_of([] { (void)io::parse_touchstone("# GHz S RI R 50\n1 0 0 0 0 0 0 0 x\n"); }), errc::parse_error);
    EXPECT_EQ(code_of([] { (void)io::parse_touchstone("# GHz Y RI R 50\n"); }), errc::parse_error);
    EXPECT_EQ(code_of([] { (void)io::parse_touchstone("! nothing\n"); }), errc::parse_error);
    EXPECT_EQ(code_of([] {
                  (void)io::parse_touchstone("2 0 0 0 0 0 0 0 0\n1 0 0 0 0 0 0 0 0\n");
              }),
              errc::parse_error);
}

TEST(Csv, LayoutAndRoundTrip) {
    const auto r = xband_sweep(301);
    const std::string text = io::write_csv(r);
    EXPECT_EQ(text.substr(0, text.find('\n')), "freq_hz,s11_re,s11_im,s21_re,s21_im");
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 302);
    const auto back = io::parse_csv(text);
    ASSERT_EQ(back.size(), r.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        EXPECT_EQ(back.grid[i], r.grid[i]);
        EXPECT_EQ(back.s11[i], r.s11[i]);
        EXPECT_EQ(back.s21[i], r.s21[i]);
    }
    EXPECT_TRUE(back.s22.empty());
}

TEST(Csv, Errors) {
    EXPECT_EQ(code_of([] { (void)io::parse_csv("f,a,b,c,d\n1,0,0,0,0\n"); }), errc::parse_error);
    EXPECT_EQ(code_of([] { (void)io::parse_csv("freq_hz,s11_re,s11_im,s21_re,s21_im\n1,0,0\n"); }),
              errc::parse_error);
    EXPECT_EQ(code_of([] { (void)io::parse_csv("freq_hz,s11_re,s11_im,s21_re,s21_im\n"); }), errc::parse_error);
}

TEST(ParseResponse, SniffsFormat) {
    const auto r = xband_sweep(11);
    EXPECT_TRUE(io::parse_response(io::write_csv(r)).s22.empty());
    EXPECT_FALSE(io::parse_response(io::write_touchstone(r)).s22.empty());
}

TEST(FilterConfig, Parsing) {
    const auto s = io::parse_filter_config(R"({"order": 4, "f0": 10e9, "bandwidth": 0.5e9, "ripple_db": 0.04321})");
    EXPECT_TRUE(s == xband4);
    const auto y = io::parse_filter_config(R"({"order": 4, "f0": 300e9, "fbw": 0.02, "ripple_db": 0.04321})");
    EXPECT_DOUBLE_EQ(y.bandwidth, 6e9);

    try {
        (void)io::parse_filter_config(R"({"f0": 10e9, "bandwidth": 0.5e9, "ripple_db": 0.1})");
        FAIL();
    } catch (const error& e) {
        EXPECT_EQ(e.code(), errc::parse_error);
        EXPECT_NE(std::string(e.what()).find("order"), std::string::npos);
    }
    EXPECT_EQ(code_of([] { (void)io::parse_filter_config(R"({"order": 4.5, "f0": 1, "fbw": 0.1, "ripple_db": 0.1})"); }),
              errc::parse_error);
    EXPECT_EQ(code_of([] {
                  (void)io::parse_filter_config(R"({"order": 4, "f0": 1, "fbw": 0.1, "bandwidth": 0.1, "ripple_db": 0.1})");
              }),
              errc::parse_error);
    EXPECT_EQ(code_of([] { (void)io::parse_filter_config("{\n  \"order\": 4,\n  oops\n}"); }), errc::parse_error);
}

TEST(FilterConfig, BundledDesignsParse) {
    for (const char* name : {"xband-4pole", "xband-8pole", "yband-4pole"}) {
        const auto path = fs::path(RESONET_DATA_DIR) / "designs" / (std::string(name) + ".json");
        const auto s = io::parse_filter_config(io::read_text_file(path));
        EXPECT_NO_THROW(s.validate()) << name;
    }
}

TEST(OptimizerConfig, ParsingAndFreeParameters) {
    const auto c = io::parse_optimizer_config(R"({"max_iter": 10, "free": ["couplings", "qe", "m1,3"]})");
    EXPECT_EQ(c.max_iter, 10);
    EXPECT_EQ(c.tol, 1e-10);
    const auto p = io::resolve_free_parameters(c.free, 4);
    ASSERT_EQ(p.size(), 6u);
    EXPECT_EQ(p.back(), FreeParameter::coupling(0, 2));
    EXPECT_EQ(io::resolve_free_parameters({"couplings", "couplings"}, 4).size(), 3u);
    EXPECT_EQ(io::resolve_free_parameters({"diagonal"}, 5).size(), 5u);

    io::OptimizerConfig zero;
    zero.max_iter = 0;
    EXPECT_EQ(code_of([&] { zero.validate(); }), errc::invalid_specification);
    EXPECT_EQ(code_of([] { (void)io::resolve_free_parameters({"m1,9"}, 4); }), errc::invalid_specification);
    EXPECT_EQ(code_of([] { (void)io::resolve_free_parameters({"bogus"}, 4); }), errc::invalid_specification);
    EXPECT_EQ(code_of([] { (void)io::parse_optimizer_config(R"({"max_iter": "many"})"); }), errc::parse_error);
}

TEST(Files, AtomicWriteAndErrors) {
    TempDir dir;
    const auto target = dir.path() / "out.txt";
    io::write_text_atomic(target, "hello\n");
    EXPECT_EQ(io::read_text_file(target), "hello\n");
    io::write_text_atomic(target, "again\n");
    EXPECT_EQ(io::read_text_file(target), "again\n");
    EXPECT_EQ(fs::directory_iterator(dir.path())->path(), target); // no temp file left

    const auto bad = dir.path() / "missing" / "out.txt";
    EXPECT_EQ(code_of([&] { io::write_text_atomic(bad, "x"); }), errc::io_error);
    EXPECT_FALSE(fs::exists(bad));
    EXPECT_EQ(code_of([&] { (void)io::read_text_file(dir.path() / "nope"); }), errc::io_error);
}
