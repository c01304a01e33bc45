#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ltip/fusion.hpp"
#include "ltip/irradiance.hpp"
#include "ltip/metrics.hpp"

namespace ltip {

enum ExitCode : int {
    kExitOk = 0,
    kExitInputError = 1,
    kExitVerificationFailure = 2,
    kExitInternalError = 3,
};

class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class TimesSource {
    uniform,   ///< every frame gets 1.0
    metadata,  ///< one positive decimal per line, in frame order
    filename,  ///< "_t<seconds>" or "_t<num>-<den>" at the end of the file stem
};

struct RunConfig {
    /// Model and exponent as configured; fusion.algebra is rebuilt from them
    /// whenever either changes through apply_setting().
    Model model = Model::ltip;
    double m = 1.0;
    std::vector<std::filesystem::path> inputs;
    TimesSource times_source = TimesSource::uniform;
    std::filesystem::path times_file;
    FusionConfig fusion;
    QualityWeights quality;
    NaturalnessParams naturalness;
    std::filesystem::path output;
    std::filesystem::path report;
    std::filesystem::path baseline;
    std::filesystem::path hdr_reference;
    std::filesystem::path test_image;
    std::filesystem::path dorf;
    double tolerance = 1e-8;
};

/// Directories expand to their PNG/JPEG files in name order; files are kept as given.
std::vector<std::filesystem::path> expand_inputs(std::span<const std::string> args);

std::vector<double> parse_exposure_times(std::istream& in);
std::string serialize_exposure_times(std::span<const double> times);
std::optional<double> exposure_time_from_name(const std::filesystem::path& path);

/// Applies one key=value setting (model, m, mode, levels, mu, sigma2, wc, ws,
/// we, lut, lut_resolution, threads, tol, a, alpha, beta). Throws InputError.
void apply_setting(RunConfig& config, const std::string& key, const std::string& value);

/// Flat key=value file; '#' starts a comment.
void load_config_file(RunConfig& config, const std::filesystem::path& path);

/// Decodes every input and attaches exposure times per the configured source.
std::vector<ExposedFrame> load_frames(const RunConfig& config);

/// Subcommand bodies. Diagnostics go to diag; each returns an ExitCode.
int run_fuse(const RunConfig& config, std::ostream& diag);
int run_irradiance(const RunConfig& config, std::ostream& diag);
int run_verify(const RunConfig& config, std::ostream& out, std::ostream& diag);
int run_metrics(const RunConfig& config, std::ostream& diag);
int run_crf(const RunConfig& config, std::ostream& diag);

/// Maps an in-flight exception to an exit code and prints it.
int report_failure(std::ostream& diag);

}  // namespace ltip
