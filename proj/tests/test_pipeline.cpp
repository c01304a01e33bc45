#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "json.hpp"
#include "ltip/crf.hpp"
#include "ltip/io.hpp"
#include "ltip/pipeline.hpp"
#include "ltip/pyramid.hpp"
#include "ltip/synthetic.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace ltip;
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

fs::path workdir(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "ltip_pipeline_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

// Writes a small synthetic bracket named frame<i>_t<time>.png plus times.txt.
std::vector<fs::path> write_bracket(const fs::path& dir, int w = 40, int h = 32, int n = 3) {
    const auto times = exposure_series(n, 1.0 / 16.0, 2.0);
    const auto frames = synthetic_bracket(synthetic_scene(w, h, 7), times);
    std::vector<fs::path> paths;
    for (int i = 0; i < n; ++i) {
        std::ostringstream name;
        name << "frame" << i << "_t" << times[i] << ".png";
        paths.push_back(dir / name.str());
        encode_png(paths.back(), frames[i].image());
    }
    std::ofstream(dir / "times.txt") << serialize_exposure_times(times);
    return paths;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

int cli(const std::string& args) {
    const std::string cmd = std::string(LTIP_HDR_PATH) + " " + args + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Settings, AppliesAndValidates) {
    RunConfig c;
    apply_setting(c, "model", "parametric");
    apply_setting(c, "m", "2");
    EXPECT_EQ(c.fusion.algebra.model(), Model::parametric_ltip);
    EXPECT_EQ(c.fusion.algebra.exponent(), 2.0);
    apply_setting(c, "mode", "pyramid");
    apply_setting(c, "levels", "4");
    apply_setting(c, "mu", "0.5");
    apply_setting(c, "lut", "true");
    EXPECT_EQ(c.fusion.mode, FusionMode::pyramid);
    EXPECT_EQ(c.fusion.levels, 4);
    EXPECT_EQ(c.fusion.weight_params.mu, 0.5);
    EXPECT_TRUE(c.fusion.use_lut);
    apply_setting(c, "levels", "auto");
    EXPECT_EQ(c.fusion.levels, 0);

    EXPECT_THROW(apply_setting(c, "colour", "1"), InputError);
    EXPECT_THROW(apply_setting(c, "mu", "abc"), InputError);
    EXPECT_THROW(apply_setting(c, "m", "-1"), InputError);
    EXPECT_THROW(apply_setting(c, "model", "tanh"), InputError);
    EXPECT_THROW(apply_setting(c, "mode", "wavelet"), InputError);
    EXPECT_THROW(apply_setting(c, "lut", "maybe"), InputError);
}

TEST(Settings, ConfigFileThenOverride) {
    const auto dir = workdir("config");
    std::ofstream(dir / "run.cfg") << "# comment\nmodel = lip\n\nmu=0.4   # trailing\nsigma2=0.1\n";
    RunConfig c;
    load_config_file(c, dir / "run.cfg");
    EXPECT_EQ(c.fusion.algebra.model(), Model::classical_lip);
    EXPECT_EQ(c.fusion.weight_params.mu, 0.4);
    EXPECT_EQ(c.fusion.weight_params.sigma2, 0.1);
    apply_setting(c, "mu", "0.3");
    EXPECT_EQ(c.fusion.weight_params.mu, 0.3);

    std::ofstream(dir / "bad.cfg") << "model\n";
    EXPECT_THROW(load_config_file(c, dir / "bad.cfg"), InputError);
}

TEST(Times, RoundTrip) {
    const std::vector<double> times{1.0 / 3.0, 0.015625, 2.5, 1e-4};
    std::istringstream in(serialize_exposure_times(times));
    EXPECT_EQ(parse_exposure_times(in), times);
    std::istringstream bad("0.5\n-1\n");
    EXPECT_THROW(parse_exposure_times(bad), InputError);
    std::istringstream junk("0.5x\n");
    EXPECT_THROW(parse_exposure_times(junk), InputError);
}

TEST(Times, FromNames) {
    EXPECT_EQ(exposure_time_from_name("a/frame_t0.25.png"), 0.25);
    EXPECT_EQ(exposure_time_from_name("img-t1-60.jpg"), 1.0 / 60.0);
    EXPECT_EQ(exposure_time_from_name("t4.png"), 4.0);
    EXPECT_FALSE(exposure_time_from_name("frame.png").has_value());
    EXPECT_FALSE(exposure_time_from_name("shot_t0.png").has_value());
    EXPECT_FALSE(exposure_time_from_name("light.png").has_value());
}

TEST(Inputs, DirectoryExpansionIsSorted) {
    const auto dir = workdir("expand");
    write_bracket(dir);
    std::ofstream(dir / "notes.txt") << "x";
    const std::vector<std::string> args{dir.string()};
    const auto files = expand_inputs(args);
    ASSERT_EQ(files.size(), 3u);
    EXPECT_TRUE(std::is_sorted(files.begin(), files.end()));
}

TEST(Inputs, LoadFramesAttachesTimes) {
    const auto dir = workdir("load");
    const auto paths = write_bracket(dir);
    RunConfig c;
    c.inputs = paths;
    c.times_source = TimesSource::filename;
    const auto frames = load_frames(c);
    ASSERT_EQ(frames.size(), 3u);
    EXPECT_NEAR(frames[1].exposure_time(), 0.25, 1e-12);

    c.times_source = TimesSource::metadata;
    c.times_file = dir / "times.txt";
    EXPECT_NEAR(load_frames(c)[2].exposure_time(), 1.0, 1e-12);

    encode_png(dir / "odd.png", Image(8, 8, 3));
    c.inputs.push_back(dir / "odd.png");
    EXPECT_THROW(load_frames(c), InputError);
}

TEST(RunFuse, ReportEchoesParameters) {
    const auto dir = workdir("report");
    RunConfig c;
    c.inputs = write_bracket(dir);
    c.output = dir / "out.png";
    c.report = dir / "report.json";
    apply_setting(c, "mode", "pyramid");
    std::ostringstream diag;
    ASSERT_EQ(run_fuse(c, diag), kExitOk);
    const json j = json::parse(slurp(c.report));
    EXPECT_EQ(j["params"]["model"], "ltip");
    EXPECT_EQ(j["params"]["mode"], "pyramid");
    EXPECT_EQ(j["params"]["levels"], "auto");
    EXPECT_EQ(j["params"]["resolved_levels"], auto_levels(40, 32));
    EXPECT_EQ(j["params"]["mu"], 0.37);
    EXPECT_EQ(j["params"]["quality"]["a"], 0.8012);
    EXPECT_EQ(j["frames"], 3);
    EXPECT_TRUE(j["s"].is_null());
    EXPECT_TRUE(j["n"].is_number());
    EXPECT_TRUE(fs::exists(c.output));
}

TEST(Cli, ExitCodes) {
    const auto dir = workdir("cli_exit");
    write_bracket(dir);
    EXPECT_EQ(cli("fuse --in " + dir.string() + " --out " + (dir / "o.png").string()), 0);
    EXPECT_EQ(cli("fuse --in " + (dir / "missing").string() + " --out " + (dir / "o.png").string()), 1);
    EXPECT_EQ(cli("fuse --in " + dir.string()), 1);
    EXPECT_EQ(cli("fuse --in " + dir.string() + " --out " + (dir / "o.png").string() + " --mu nope"), 1);
    EXPECT_EQ(cli("irradiance --in " + dir.string() + " --out " + (dir / "e.pfm").string()), 1);
    EXPECT_EQ(cli("verify --in " + dir.string() + " --times " + (dir / "times.txt").string()), 1);
    EXPECT_EQ(cli("bogus"), 1);
}

TEST(Cli, ParametricOneMatchesLtipByteForByte) {
    const auto dir = workdir("cli_m1");
    write_bracket(dir);
    const auto a = dir / "a.png", b = dir / "b.png";
    ASSERT_EQ(cli("fuse --in " + dir.string() + " --out " + a.string() + " --model ltip --m 1"), 0);
    ASSERT_EQ(cli("fuse --in " + dir.string() + " --out " + b.string() + " --model parametric --m 1"), 0);
    EXPECT_EQ(slurp(a), slurp(b));
}

TEST(Cli, RealFlatFusionIsTheWeightedAverage) {
    const auto dir = workdir("cli_real");
    const auto paths = write_bracket(dir, 33, 21, 4);
    const auto out = dir / "real.png";
    ASSERT_EQ(cli("fuse --in " + dir.string() + " --out " + out.string() + " --mode flat --model real"), 0);

    std::vector<Image> frames;
    for (const auto& p : paths) frames.push_back(decode_image(p));
    const auto w = ltip::testing::oracle_weights(frames, 0.37, 0.2);
    const auto got = read_raw(out);
    int off_by_one = 0;
    for (int y = 0; y < 21; ++y) {
        for (int x = 0; x < 33; ++x) {
            for (int c = 0; c < 3; ++c) {
                double v = 0.0;
                for (std::size_t k = 0; k < frames.size(); ++k) v += w[k](x, y) * frames[k](x, y, c);
                const int expect = quantize8(std::min(v, 1.0 - kClampMargin));
                const int code = got.samples[(static_cast<std::size_t>(y) * 33 + x) * 3 + c];
                ASSERT_LE(std::abs(code - expect), 1);
                off_by_one += code != expect;
            }
        }
    }
    // Codes can only disagree when the exact value sits on a rounding boundary.
    EXPECT_LE(off_by_one, 2);
}

TEST(Cli, VerifyAndIrradiance) {
    const auto dir = workdir("cli_verify");
    write_bracket(dir);
    EXPECT_EQ(cli("verify --in " + dir.string() + " --report " + (dir / "v.json").string()), 0);
    const json v = json::parse(slurp(dir / "v.json"));
    EXPECT_TRUE(v["pass"].get<bool>());
    EXPECT_LE(v["max_abs_difference"].get<double>(), 1e-8);

    EXPECT_EQ(cli("irradiance --in " + dir.string() + " --times-from-names --out " + (dir / "e.pfm").string()), 0);
    const auto e = read_pfm(dir / "e.pfm");
    EXPECT_EQ(e.width(), 40);
    for (int c = 0; c < 3; ++c) {
        for (double x : e.channel(c).values()) EXPECT_GE(x, 0.0);
    }
}

TEST(Cli, MetricsAgainstItself) {
    const auto dir = workdir("cli_metrics");
    write_bracket(dir);
    const auto out = dir / "f.png";
    ASSERT_EQ(cli("fuse --in " + dir.string() + " --out " + out.string()), 0);
    ASSERT_EQ(cli("metrics --test " + out.string() + " --baseline " + out.string() + " --report " +
                  (dir / "m.json").string()),
              0);
    const json m = json::parse(slurp(dir / "m.json"));
    EXPECT_EQ(m["rmse"].get<double>(), 0.0);
    EXPECT_EQ(m["log_rmse"], "-inf");
    EXPECT_NEAR(m["ssim"].get<double>(), 1.0, 1e-9);
    EXPECT_EQ(cli("metrics --test " + out.string()), 1);
}

TEST(Cli, CrfRecoversGain) {
    const auto dir = workdir("cli_crf");
    const auto alg = Algebra::ltip();
    CrfCurve curve{"synthetic k=2", {}, {}};
    for (int i = 0; i <= 100; ++i) {
        const double e = i / 100.0;
        curve.irradiance.push_back(e);
        curve.intensity.push_back(alg.phi_inv(2.0 * e));
    }
    {
        std::ofstream out(dir / "dorf.txt");
        write_dorf(out, std::span<const CrfCurve>(&curve, 1));
    }
    ASSERT_EQ(cli("crf --dorf " + (dir / "dorf.txt").string() + " --report " + (dir / "c.json").string()), 0);
    const json c = json::parse(slurp(dir / "c.json"));
    EXPECT_NEAR(c["best"]["gain"].get<double>(), 2.0, 1e-3);
    EXPECT_LE(c["best"]["rmse"].get<double>(), 1e-6);
}
