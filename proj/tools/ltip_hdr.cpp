// ltip_hdr: exposure fusion and irradiance tools over logarithmic-type image algebras.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "ltip/io.hpp"
#include "ltip/pipeline.hpp"
#include "ltip/synthetic.hpp"

namespace {

using ltip::RunConfig;

/// Flags that map onto apply_setting() keys. Values stay unset unless given so
/// that a config file can supply them.
struct SettingFlags {
    std::vector<std::pair<std::string, std::optional<std::string>>> values;

    void bind(CLI::App* app, const std::vector<std::pair<std::string, std::string>>& flags) {
        values.reserve(flags.size());
        for (const auto& [key, help] : flags) values.emplace_back(key, std::nullopt);
        for (auto& [key, value] : values) {
            std::string name = "--" + key;
            for (auto& ch : name) {
                if (ch == '_') ch = '-';
            }
            app->add_option(name, value, lookup(flags, key));
        }
    }

    void apply(RunConfig& config) const {
        for (const auto& [key, value] : values) {
            if (value) ltip::apply_setting(config, key, *value);
        }
    }

private:
    static std::string lookup(const std::vector<std::pair<std::string, std::string>>& flags, const std::string& key) {
        for (const auto& [k, help] : flags) {
            if (k == key) return help;
        }
        return {};
    }
};

const std::vector<std::pair<std::string, std::string>> kModelFlags = {
    {"model", "ltip | lip | parametric | real"},
    {"m", "exponent of the parametric model"},
};

const std::vector<std::pair<std::string, std::string>> kFusionFlags = {
    {"mode", "pyramid | flat"},
    {"levels", "auto or a positive level count"},
    {"mu", "well-exposedness centre"},
    {"sigma2", "well-exposedness variance"},
    {"wc", "contrast exponent"},
    {"ws", "saturation exponent"},
    {"we", "well-exposedness exponent"},
    {"lut_resolution", "samples per look-up table"},
    {"threads", "worker threads, 0 = hardware concurrency"},
};

const std::vector<std::pair<std::string, std::string>> kQualityFlags = {
    {"a", "quality mixing weight"},
    {"alpha", "structural fidelity exponent"},
    {"beta", "naturalness exponent"},
};

struct Common {
    std::string config_file;
    std::vector<std::string> inputs;
    std::string times_file;
    bool times_from_names = false;
    SettingFlags settings;
    bool lut = false;
};

void add_inputs(CLI::App* app, Common& c, bool with_times) {
    app->add_option("--in", c.inputs, "input directory or frame files")->required();
    if (with_times) {
        auto* file = app->add_option("--times", c.times_file, "exposure times file, one value per line");
        auto* names = app->add_flag("--times-from-names", c.times_from_names,
                                    "read exposure times from '_t<sec>' or '_t<num>-<den>' file name suffixes");
        file->excludes(names);
    }
}

RunConfig resolve(const Common& c) {
    RunConfig config;
    if (!c.config_file.empty()) ltip::load_config_file(config, c.config_file);
    c.settings.apply(config);
    if (c.lut) ltip::apply_setting(config, "lut", "true");
    if (!c.inputs.empty()) config.inputs = ltip::expand_inputs(c.inputs);
    if (!c.times_file.empty()) {
        config.times_source = ltip::TimesSource::metadata;
        config.times_file = c.times_file;
    } else if (c.times_from_names) {
        config.times_source = ltip::TimesSource::filename;
    }
    return config;
}

int run_synth(const std::string& dir, int width, int height, int frames, unsigned seed, double base, double stops) {
    if (width < 2 || height < 2 || frames < 1) throw ltip::InputError("synth: need width, height >= 2 and frames >= 1");
    std::filesystem::create_directories(dir);
    const auto scene = ltip::synthetic_scene(width, height, seed);
    const auto times = ltip::exposure_series(static_cast<std::size_t>(frames), base, stops);
    const auto bracket = ltip::synthetic_bracket(scene, times);
    const std::string timing = ltip::serialize_exposure_times(times);
    std::istringstream lines(timing);
    std::string t;
    for (std::size_t i = 0; i < bracket.size() && std::getline(lines, t); ++i) {
        const std::string name = "frame" + std::to_string(i) + "_t" + t + ".png";
        ltip::encode_png(std::filesystem::path(dir) / name, bracket[i].image());
    }
    std::ofstream(std::filesystem::path(dir) / "times.txt") << timing;
    ltip::write_pfm(std::filesystem::path(dir) / "scene.pfm", scene);
    return ltip::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exposure fusion and irradiance tools over logarithmic-type image algebras"};
    app.require_subcommand(1);

    Common fuse_opts;
    std::string fuse_out, fuse_report, fuse_baseline, fuse_hdr;
    auto* fuse = app.add_subcommand("fuse", "fuse an exposure bracket into one displayable image");
    add_inputs(fuse, fuse_opts, false);
    fuse->add_option("--out", fuse_out, "output PNG (or .pfm for float output)")->required();
    fuse->add_option("--report", fuse_report, "write a JSON quality report");
    fuse->add_option("--baseline", fuse_baseline, "reference image for the report");
    fuse->add_option("--hdr", fuse_hdr, "reference irradiance PFM for the report");
    fuse->add_option("--config", fuse_opts.config_file, "key=value configuration file");
    fuse->add_flag("--lut", fuse_opts.lut, "evaluate the transforms through look-up tables");
    auto fuse_flags = kModelFlags;
    fuse_flags.insert(fuse_flags.end(), kFusionFlags.begin(), kFusionFlags.end());
    fuse_flags.insert(fuse_flags.end(), kQualityFlags.begin(), kQualityFlags.end());
    fuse_opts.settings.bind(fuse, fuse_flags);

    Common irr_opts;
    std::string irr_out;
    auto* irr = app.add_subcommand("irradiance", "merge a bracket into a relative irradiance map");
    add_inputs(irr, irr_opts, true);
    irr->add_option("--out", irr_out, "output PFM")->required();
    irr->add_option("--config", irr_opts.config_file, "key=value configuration file");
    auto irr_flags = kModelFlags;
    irr_flags.insert(irr_flags.end(), kFusionFlags.begin(), kFusionFlags.end());
    irr_opts.settings.bind(irr, irr_flags);

    Common verify_opts;
    std::string verify_report;
    auto* verify = app.add_subcommand("verify", "check exposure fusion against the tone-mapped irradiance route");
    add_inputs(verify, verify_opts, true);
    verify->add_option("--report", verify_report, "write a JSON result");
    verify->add_option("--config", verify_opts.config_file, "key=value configuration file");
    auto verify_flags = kModelFlags;
    verify_flags.insert(verify_flags.end(), kFusionFlags.begin(), kFusionFlags.end());
    verify_flags.emplace_back("tol", "pass threshold on the max absolute difference");
    verify_opts.settings.bind(verify, verify_flags);

    Common metrics_opts;
    std::string metrics_test, metrics_baseline, metrics_hdr, metrics_report;
    auto* metrics = app.add_subcommand("metrics", "score an image against a baseline or an HDR reference");
    metrics->add_option("--test", metrics_test, "image to score")->required();
    auto* mb = metrics->add_option("--baseline", metrics_baseline, "reference image");
    auto* mh = metrics->add_option("--hdr", metrics_hdr, "reference irradiance PFM");
    mb->excludes(mh);
    metrics->add_option("--report", metrics_report, "write the JSON report here instead of stderr");
    metrics->add_option("--config", metrics_opts.config_file, "key=value configuration file");
    metrics_opts.settings.bind(metrics, kQualityFlags);

    Common crf_opts;
    std::string crf_dorf, crf_report;
    auto* crf = app.add_subcommand("crf", "fit the model response to DoRF camera response curves");
    crf->add_option("--dorf", crf_dorf, "DoRF text file")->required();
    crf->add_option("--report", crf_report, "write the JSON report here instead of stderr");
    crf_opts.settings.bind(crf, kModelFlags);

    std::string synth_dir;
    int synth_w = 64, synth_h = 48, synth_n = 5;
    unsigned synth_seed = 1;
    double synth_base = 1.0 / 64.0, synth_stops = 2.0;
    auto* synth = app.add_subcommand("synth", "write a synthetic bracket, its times file and scene.pfm");
    synth->add_option("--out", synth_dir, "output directory")->required();
    synth->add_option("--width", synth_w, "frame width");
    synth->add_option("--height", synth_h, "frame height");
    synth->add_option("--frames", synth_n, "number of exposures");
    synth->add_option("--seed", synth_seed, "scene seed");
    synth->add_option("--base", synth_base, "shortest exposure time");
    synth->add_option("--stops", synth_stops, "stops between exposures");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ltip::kExitOk : ltip::kExitInputError;
    }

    try {
        if (fuse->parsed()) {
            RunConfig config = resolve(fuse_opts);
            config.output = fuse_out;
            config.report = fuse_report;
            config.baseline = fuse_baseline;
            config.hdr_reference = fuse_hdr;
            return ltip::run_fuse(config, std::cerr);
        }
        if (irr->parsed()) {
            RunConfig config = resolve(irr_opts);
            config.output = irr_out;
            return ltip::run_irradiance(config, std::cerr);
        }
        if (verify->parsed()) {
            RunConfig config = resolve(verify_opts);
            config.report = verify_report;
            return ltip::run_verify(config, std::cout, std::cerr);
        }
        if (metrics->parsed()) {
            RunConfig config = resolve(metrics_opts);
            config.test_image = metrics_test;
            config.baseline = metrics_baseline;
            config.hdr_reference = metrics_hdr;
            config.report = metrics_report;
            return ltip::run_metrics(config, std::cerr);
        }
        if (crf->parsed()) {
            RunConfig config = resolve(crf_opts);
            config.dorf = crf_dorf;
            config.report = crf_report;
            return ltip::run_crf(config, std::cerr);
        }
        if (synth->parsed()) {
            return run_synth(synth_dir, synth_w, synth_h, synth_n, synth_seed, synth_base, synth_stops);
        }
    } catch (...) {
        return ltip::report_failure(std::cerr);
    }
    return ltip::kExitInternalError;
}
