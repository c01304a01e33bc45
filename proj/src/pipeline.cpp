#include "ltip/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <regex>
#include <sstream>

#include "json.hpp"
#include "ltip/crf.hpp"
#include "ltip/io.hpp"
#include "ltip/parallel.hpp"

namespace ltip {

namespace {

using nlohmann::json;

double parse_double(const std::string& key, const std::string& value) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(value, &used);
    } catch (const std::exception&) {
        throw InputError("setting '" + key + "': '" + value + "' is not a number");
    }
    if (used != value.size() || !std::isfinite(v)) {
        throw InputError("setting '" + key + "': '" + value + "' is not a number");
    }
    return v;
}

long parse_int(const std::string& key, const std::string& value) {
    const double v = parse_double(key, value);
    if (v != std::floor(v) || std::abs(v) > 1e9) throw InputError("setting '" + key + "': expected an integer");
    return static_cast<long>(v);
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "1" || value == "true" || value == "on" || value == "yes") return true;
    if (value == "0" || value == "false" || value == "off" || value == "no") return false;
    throw InputError("setting '" + key + "': expected true/false");
}

Algebra algebra_for(Model model, double m) {
    switch (model) {
        case Model::ltip: return Algebra::ltip();
        case Model::classical_lip: return Algebra::classical_lip(1.0);
        case Model::parametric_ltip: return Algebra::parametric(m);
        case Model::real_baseline: return Algebra::real_baseline();
    }
    return Algebra::ltip();
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

bool is_image_file(const std::filesystem::path& p) {
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

json number_or_null(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json params_json(const RunConfig& c, std::optional<int> resolved_levels) {
    const auto& f = c.fusion;
    json p;
    p["model"] = std::string(to_string(f.algebra.model()));
    p["m"] = f.algebra.exponent();
    p["D"] = f.algebra.upper_bound();
    p["mode"] = std::string(to_string(f.mode));
    p["levels"] = f.levels == 0 ? json("auto") : json(f.levels);
    if (resolved_levels) p["resolved_levels"] = *resolved_levels;
    p["mu"] = f.weight_params.mu;
    p["sigma2"] = f.weight_params.sigma2;
    p["wc"] = f.weight_params.wc_exponent;
    p["ws"] = f.weight_params.ws_exponent;
    p["we"] = f.weight_params.we_exponent;
    p["lut"] = f.use_lut;
    p["lut_resolution"] = f.lut_resolution;
    p["clamp_margin"] = kClampMargin;
    p["quality"] = {{"a", c.quality.a}, {"alpha", c.quality.alpha}, {"beta", c.quality.beta}};
    p["naturalness"] = {{"mean_center", c.naturalness.mean_center},
                        {"mean_spread", c.naturalness.mean_spread},
                        {"std_center", c.naturalness.std_center},
                        {"std_spread", c.naturalness.std_spread},
                        {"source", "implementation default, not a published constant"}};
    return p;
}

json report_json(const QualityReport& r) {
    json j;
    j["s"] = number_or_null(r.s);
    j["n"] = r.n;
    j["q"] = number_or_null(r.q);
    j["rmse"] = number_or_null(r.rmse);
    if (r.log_rmse && std::isinf(*r.log_rmse)) {
        j["log_rmse"] = "-inf";
    } else {
        j["log_rmse"] = number_or_null(r.log_rmse);
    }
    j["ssim"] = number_or_null(r.ssim);
    return j;
}

void write_json(const std::filesystem::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << j.dump(2) << "\n";
    if (!out) throw IoError("failed writing " + path.string());
}

void write_image(const std::filesystem::path& path, const Image& image) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (ext == ".pfm") {
        write_pfm(path, image);
    } else {
        encode_png(path, image);
    }
}

std::vector<Image> images_of(const std::vector<ExposedFrame>& frames) {
    std::vector<Image> images;
    images.reserve(frames.size());
    for (const auto& f : frames) images.push_back(f.image());
    return images;
}

IrradianceMap load_hdr_reference(const std::filesystem::path& path) {
    try {
        return IrradianceMap(read_pfm(path));
    } catch (const std::invalid_argument& e) {
        throw InputError(path.string() + ": " + e.what());
    }
}

}  // namespace

std::vector<std::filesystem::path> expand_inputs(std::span<const std::string> args) {
    std::vector<std::filesystem::path> out;
    for (const auto& a : args) {
        const std::filesystem::path p(a);
        if (std::filesystem::is_directory(p)) {
            std::vector<std::filesystem::path> files;
            for (const auto& entry : std::filesystem::directory_iterator(p)) {
                if (entry.is_regular_file() && is_image_file(entry.path())) files.push_back(entry.path());
            }
            std::sort(files.begin(), files.end());
            if (files.empty()) throw InputError("no PNG/JPEG files in " + p.string());
            out.insert(out.end(), files.begin(), files.end());
        } else {
            out.push_back(p);
        }
    }
    if (out.empty()) throw InputError("no input frames given");
    return out;
}

std::vector<double> parse_exposure_times(std::istream& in) {
    std::vector<double> times;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty()) continue;
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
        if (ec != std::errc() || ptr != t.data() + t.size() || !(v > 0.0) || !std::isfinite(v)) {
            throw InputError("exposure times line " + std::to_string(line_no) + ": '" + t +
                             "' is not a positive decimal");
        }
        times.push_back(v);
    }
    return times;
}

std::string serialize_exposure_times(std::span<const double> times) {
    std::string out;
    char buf[64];
    for (const double t : times) {
        const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, t);
        out.append(buf, ptr);
        out.push_back('\n');
    }
    return out;
}

std::optional<double> exposure_time_from_name(const std::filesystem::path& path) {
    static const std::regex pattern(R"((?:^|[_\-.])t(\d+(?:\.\d+)?)(?:-(\d+(?:\.\d+)?))?$)");
    const std::string stem = path.stem().string();
    std::smatch m;
    if (!std::regex_search(stem, m, pattern)) return std::nullopt;
    double t = std::stod(m[1].str());
    if (m[2].matched) {
        const double den = std::stod(m[2].str());
        if (!(den > 0.0)) return std::nullopt;
        t /= den;
    }
    if (!(t > 0.0)) return std::nullopt;
    return t;
}

void apply_setting(RunConfig& c, const std::string& raw_key, const std::string& raw_value) {
    const std::string key = trim(raw_key);
    const std::string value = trim(raw_value);
    auto& f = c.fusion;
    auto& w = f.weight_params;
    try {
        if (key == "model") {
            c.model = parse_model(value);
            f.algebra = algebra_for(c.model, c.m);
        } else if (key == "m") {
            const double m = parse_double(key, value);
            if (!(m > 0.0)) throw InputError("setting 'm': exponent must be positive");
            c.m = m;
            f.algebra = algebra_for(c.model, c.m);
        } else if (key == "mode") {
            f.mode = parse_fusion_mode(value);
        } else if (key == "levels") {
            if (value == "auto") {
                f.levels = 0;
            } else {
                const long n = parse_int(key, value);
                if (n < 1) throw InputError("setting 'levels': expected auto or a positive integer");
                f.levels = static_cast<int>(n);
            }
        } else if (key == "mu") {
            w.mu = parse_double(key, value);
        } else if (key == "sigma2") {
            w.sigma2 = parse_double(key, value);
        } else if (key == "wc") {
            w.wc_exponent = parse_double(key, value);
        } else if (key == "ws") {
            w.ws_exponent = parse_double(key, value);
        } else if (key == "we") {
            w.we_exponent = parse_double(key, value);
        } else if (key == "lut") {
            f.use_lut = parse_bool(key, value);
        } else if (key == "lut_resolution") {
            const long n = parse_int(key, value);
            if (n < static_cast<long>(kMinLutResolution)) {
                throw InputError("setting 'lut_resolution': must be at least " + std::to_string(kMinLutResolution));
            }
            f.lut_resolution = static_cast<std::size_t>(n);
        } else if (key == "threads") {
            const long n = parse_int(key, value);
            f.threads = n <= 0 ? default_thread_count() : static_cast<int>(n);
        } else if (key == "tol") {
            c.tolerance = parse_double(key, value);
        } else if (key == "a") {
            c.quality.a = parse_double(key, value);
        } else if (key == "alpha") {
            c.quality.alpha = parse_double(key, value);
        } else if (key == "beta") {
            c.quality.beta = parse_double(key, value);
        } else if (key == "n_mean_center") {
            c.naturalness.mean_center = parse_double(key, value);
        } else if (key == "n_mean_spread") {
            c.naturalness.mean_spread = parse_double(key, value);
        } else if (key == "n_std_center") {
            c.naturalness.std_center = parse_double(key, value);
        } else if (key == "n_std_spread") {
            c.naturalness.std_spread = parse_double(key, value);
        } else {
            throw InputError("unknown setting '" + key + "'");
        }
    } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
    }
}

void load_config_file(RunConfig& config, const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot read config file " + path.string());
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (trim(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw InputError(path.string() + ":" + std::to_string(line_no) + ": expected key=value");
        }
        apply_setting(config, line.substr(0, eq), line.substr(eq + 1));
    }
}

std::vector<ExposedFrame> load_frames(const RunConfig& config) {
    if (config.inputs.empty()) throw InputError("no input frames given");
    std::vector<double> times(config.inputs.size(), 1.0);
    if (config.times_source == TimesSource::metadata) {
        std::ifstream in(config.times_file);
        if (!in) throw InputError("cannot read exposure times file " + config.times_file.string());
        times = parse_exposure_times(in);
        if (times.size() != config.inputs.size()) {
            throw InputError("exposure times file lists " + std::to_string(times.size()) + " values for " +
                             std::to_string(config.inputs.size()) + " frames");
        }
    } else if (config.times_source == TimesSource::filename) {
        for (std::size_t i = 0; i < config.inputs.size(); ++i) {
            const auto t = exposure_time_from_name(config.inputs[i]);
            if (!t) throw InputError("no exposure time in file name " + config.inputs[i].filename().string());
            times[i] = *t;
        }
    }
    std::vector<ExposedFrame> frames;
    frames.reserve(config.inputs.size());
    for (std::size_t i = 0; i < config.inputs.size(); ++i) {
        frames.emplace_back(decode_image(config.inputs[i]), times[i]);
    }
    for (std::size_t i = 1; i < frames.size(); ++i) {
        if (!frames[i].image().same_shape(frames[0].image())) {
            throw InputError(config.inputs[i].string() + " does not match the size of " + config.inputs[0].string());
        }
    }
    return frames;
}

int run_fuse(const RunConfig& config, std::ostream& diag) {
    if (config.output.empty()) throw InputError("fuse: --out is required");
    if (!config.baseline.empty() && !config.hdr_reference.empty()) {
        throw InputError("fuse: give at most one of --baseline and --hdr");
    }
    config.fusion.weight_params.validate();
    const std::vector<Image> images = images_of(load_frames(config));

    FusionConfig fusion = config.fusion;
    if (fusion.use_lut) {
        fusion.tables = TransformTables::build(fusion.algebra, fusion.lut_resolution);
        diag << "lut: " << fusion.tables->phi.summary() << "\n";
        diag << "lut: " << fusion.tables->phi_inv.summary() << "\n";
    }
    const Image fused = fuse(images, fusion);
    write_image(config.output, fused);

    if (!config.report.empty()) {
        QualityReport r;
        if (!config.hdr_reference.empty()) {
            r = score_against_hdr(fused, load_hdr_reference(config.hdr_reference), config.quality, config.naturalness);
        } else if (!config.baseline.empty()) {
            r = score_against_baseline(fused, decode_image(config.baseline), config.naturalness);
        } else {
            r.n = statistical_naturalness(fused, config.naturalness);
        }
        json j = report_json(r);
        std::optional<int> levels;
        if (fusion.mode == FusionMode::pyramid) levels = fusion.resolved_levels(fused.width(), fused.height());
        j["params"] = params_json(config, levels);
        j["frames"] = images.size();
        write_json(config.report, j);
    }
    return kExitOk;
}

int run_irradiance(const RunConfig& config, std::ostream& diag) {
    if (config.output.empty()) throw InputError("irradiance: --out is required");
    if (config.times_source == TimesSource::uniform) {
        throw InputError("irradiance: exposure times are required (--times <file> or --times-from-names)");
    }
    const auto frames = load_frames(config);
    const std::vector<Image> images = images_of(frames);
    const WeightStack weights = compute_weights(images, config.fusion.weight_params, config.fusion.threads);
    std::vector<IrradianceMap> maps;
    maps.reserve(frames.size());
    for (const auto& f : frames) maps.push_back(recover_irradiance(f, config.fusion.algebra));
    const IrradianceMap merged = merge_irradiance(maps, weights);
    write_pfm(config.output, merged.values());
    diag << "irradiance: merged " << frames.size() << " frames into " << config.output.string() << "\n";
    return kExitOk;
}

int run_verify(const RunConfig& config, std::ostream& out, std::ostream& diag) {
    const auto frames = load_frames(config);
    const double diff = verify_equivalence(frames, config.fusion);
    const bool pass = diff <= config.tolerance;
    out << "max |exposure fusion - tone-mapped irradiance fusion| = " << diff << " (tolerance " << config.tolerance
        << "): " << (pass ? "PASS" : "FAIL") << "\n";
    if (!config.report.empty()) {
        json j;
        j["max_abs_difference"] = diff;
        j["tolerance"] = config.tolerance;
        j["pass"] = pass;
        j["frames"] = frames.size();
        j["params"] = params_json(config, std::nullopt);
        write_json(config.report, j);
    }
    if (!pass) diag << "verify: equivalence check failed\n";
    return pass ? kExitOk : kExitVerificationFailure;
}

int run_metrics(const RunConfig& config, std::ostream& diag) {
    if (config.test_image.empty()) throw InputError("metrics: --test is required");
    if (config.baseline.empty() == config.hdr_reference.empty()) {
        throw InputError("metrics: give exactly one of --baseline and --hdr");
    }
    const Image test = decode_image(config.test_image);
    QualityReport r;
    if (!config.hdr_reference.empty()) {
        r = score_against_hdr(test, load_hdr_reference(config.hdr_reference), config.quality, config.naturalness);
    } else {
        r = score_against_baseline(test, decode_image(config.baseline), config.naturalness);
    }
    json j = report_json(r);
    j["params"] = params_json(config, std::nullopt);
    if (config.report.empty()) {
        diag << j.dump(2) << "\n";
    } else {
        write_json(config.report, j);
    }
    return kExitOk;
}

int run_crf(const RunConfig& config, std::ostream& diag) {
    if (config.dorf.empty()) throw InputError("crf: --dorf is required");
    DorfContents contents;
    try {
        contents = load_dorf(config.dorf);
    } catch (const std::runtime_error& e) {
        throw InputError(e.what());
    }
    for (const auto& w : contents.warnings) diag << "crf: warning: " << w << "\n";
    const CrfReport report = compare_crf(contents.curves, config.fusion.algebra);

    auto fit_json = [](const CrfFit& f) { return json{{"name", f.name}, {"gain", f.gain}, {"rmse", f.rmse}}; };
    json j;
    j["model"] = config.fusion.algebra.describe();
    j["fitted_model"] = "g(E) = phi_inv(gain * E)";
    j["curves"] = json::array();
    for (const auto& f : report.fits) j["curves"].push_back(fit_json(f));
    j["average"] = fit_json(report.average);
    j["best"] = fit_json(report.fits[report.best]);
    j["mean_rmse"] = report.mean_rmse;
    j["warnings"] = contents.warnings;
    if (config.report.empty()) {
        diag << j.dump(2) << "\n";
    } else {
        write_json(config.report, j);
    }
    diag << "crf: " << report.fits.size() << " curves, best match '" << report.fits[report.best].name
         << "' (rmse " << report.fits[report.best].rmse << "), average curve rmse " << report.average.rmse << "\n";
    return kExitOk;
}

int report_failure(std::ostream& diag) {
    try {
        throw;
    } catch (const EquivalenceError& e) {
        diag << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const InputError& e) {
        diag << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const IoError& e) {
        diag << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::invalid_argument& e) {
        diag << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::domain_error& e) {
        diag << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::exception& e) {
        diag << "internal error: " << e.what() << "\n";
        return kExitInternalError;
    } catch (...) {
        diag << "internal error: unknown exception\n";
        return kExitInternalError;
    }
}

}  // namespace ltip
