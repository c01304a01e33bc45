#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "ltip/crf.hpp"
#include "ltip/irradiance.hpp"
#include "support.hpp"

using namespace ltip;
using ltip::testing::max_abs_diff;

namespace {

std::vector<ExposedFrame> unit_frames(const std::vector<Image>& images) {
    std::vector<ExposedFrame> out;
    for (const auto& i : images) out.emplace_back(i, 1.0);
    return out;
}

CrfCurve model_curve(const std::string& name, double k, const Algebra& a, int samples = 1024) {
    CrfCurve c{name, {}, {}};
    for (int i = 0; i < samples; ++i) {
        const double e = static_cast<double>(i) / (samples - 1);
        c.irradiance.push_back(e);
        c.intensity.push_back(a.phi_inv(k * e));
    }
    return c;
}

}  // namespace

TEST(Irradiance, RecoverExamples) {
    const auto a = Algebra::ltip();
    const auto zero = recover_irradiance(ExposedFrame(Image(3, 3, 3, 0.0), 0.25), a);
    for (int c = 0; c < 3; ++c) {
        for (double v : zero.values().channel(c).values()) EXPECT_EQ(v, 0.0);
    }
    EXPECT_EQ(recover_irradiance(ExposedFrame(Image(1, 1, 1, 0.5), 1.0), a).values()(0, 0, 0), 1.0);
    EXPECT_EQ(recover_irradiance(ExposedFrame(Image(1, 1, 1, 0.5), 2.0), a).values()(0, 0, 0), 0.5);
    EXPECT_THROW(ExposedFrame(Image(1, 1, 1), 0.0), std::invalid_argument);
    EXPECT_THROW(ExposedFrame(Image(1, 1, 1), -1.0), std::invalid_argument);
}

TEST(Irradiance, MergeExamples) {
    const std::vector<IrradianceMap> two{IrradianceMap(Image(1, 1, 1, 1.0)), IrradianceMap(Image(1, 1, 1, 3.0))};
    EXPECT_EQ(merge_irradiance(two, WeightStack({Plane(1, 1, 1.0), Plane(1, 1, 1.0)})).values()(0, 0, 0), 2.0);
    const std::vector<IrradianceMap> other{IrradianceMap(Image(1, 1, 1, 0.0)), IrradianceMap(Image(1, 1, 1, 4.0))};
    EXPECT_EQ(merge_irradiance(other, WeightStack({Plane(1, 1, 3.0), Plane(1, 1, 1.0)})).values()(0, 0, 0), 1.0);
    EXPECT_THROW(IrradianceMap(Image(1, 1, 1, -1.0)), std::invalid_argument);
    EXPECT_THROW(merge_irradiance(two, WeightStack({Plane(1, 1, 1.0)})), DimensionError);
}

TEST(Irradiance, MergeIsConvex) {
    std::mt19937_64 rng(1);
    std::exponential_distribution<double> e(0.5);
    std::vector<IrradianceMap> maps;
    std::vector<Plane> weights;
    for (int i = 0; i < 4; ++i) {
        Image img(10, 10, 3);
        for (int c = 0; c < 3; ++c) {
            for (double& v : img.channel(c).values()) v = e(rng);
        }
        maps.emplace_back(std::move(img));
        Plane w(10, 10);
        for (double& v : w.values()) v = e(rng);
        weights.push_back(std::move(w));
    }
    const auto merged = merge_irradiance(maps, WeightStack(std::move(weights)));
    for (int c = 0; c < 3; ++c) {
        for (int y = 0; y < 10; ++y) {
            for (int x = 0; x < 10; ++x) {
                double lo = 1e300, hi = 0.0;
                for (const auto& m : maps) {
                    lo = std::min(lo, m.values()(x, y, c));
                    hi = std::max(hi, m.values()(x, y, c));
                }
                EXPECT_GE(merged.values()(x, y, c), lo * (1 - 1e-15));
                EXPECT_LE(merged.values()(x, y, c), hi * (1 + 1e-15));
            }
        }
    }
}

TEST(Irradiance, TonemapExamples) {
    const auto a = Algebra::ltip();
    Image e(3, 1, 1);
    e(0, 0, 0) = 0.0;
    e(1, 0, 0) = 1.0;
    e(2, 0, 0) = 2.0;
    const auto f = tonemap_ltip(IrradianceMap(e), a);
    EXPECT_EQ(f(0, 0, 0), 0.0);
    EXPECT_EQ(f(1, 0, 0), 0.5);
    EXPECT_NEAR(f(2, 0, 0), 2.0 / 3.0, 1e-15);
}

TEST(Irradiance, TonemapOfRecoverIsIdentity) {
    std::mt19937_64 rng(2);
    for (const auto& a : ltip::testing::bounded_models()) {
        const auto img = ltip::testing::random_image(16, 16, 3, rng);
        EXPECT_LT(max_abs_diff(tonemap_ltip(recover_irradiance(ExposedFrame(img, 1.0), a), a), img), 1e-12)
            << a.describe();
    }
}

TEST(Equivalence, RandomWeightsBothRoutesAgree) {
    // Exposure fusion with closed-form operations against the irradiance
    // route, on arbitrary positive weights rather than the quality measures.
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const auto a = Algebra::ltip();
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<Image> frames{ltip::testing::random_image(32, 32, 3, rng), ltip::testing::random_image(32, 32, 3, rng)};
        std::vector<Plane> maps;
        for (int i = 0; i < 2; ++i) {
            Plane p(32, 32);
            for (double& v : p.values()) v = u(rng);
            maps.push_back(std::move(p));
        }
        const WeightStack raw(maps);
        FusionConfig c;
        const auto fused = fuse_flat(frames, normalize_stack(raw), c, FlatRoute::direct_operations);
        std::vector<IrradianceMap> e;
        for (const auto& f : frames) e.push_back(recover_irradiance(ExposedFrame(f, 1.0), a));
        EXPECT_LE(max_abs_diff(fused, tonemap_ltip(merge_irradiance(e, raw), a)), 1e-8);
    }
}

TEST(Equivalence, VerifyOnBrackets) {
    std::mt19937_64 rng(4);
    for (int n : {1, 2, 3, 5}) {
        const auto frames = unit_frames(ltip::testing::random_bracket(32, 24, n, rng));
        const double d = verify_equivalence(frames, {});
        EXPECT_LE(d, n == 1 ? 1e-12 : 1e-8) << n;
    }
}

TEST(Equivalence, RealBaselineIsExact) {
    std::mt19937_64 rng(5);
    FusionConfig c;
    c.algebra = Algebra::real_baseline();
    EXPECT_LE(verify_equivalence(unit_frames(ltip::testing::random_bracket(20, 20, 3, rng)), c), 1e-12);
}

TEST(Equivalence, OtherModels) {
    std::mt19937_64 rng(6);
    for (const auto& a : ltip::testing::bounded_models()) {
        FusionConfig c;
        c.algebra = a;
        EXPECT_LE(verify_equivalence(unit_frames(ltip::testing::random_bracket(16, 16, 3, rng)), c), 1e-8)
            << a.describe();
    }
}

TEST(Equivalence, RejectsNonUnitExposure) {
    std::mt19937_64 rng(7);
    auto images = ltip::testing::random_bracket(8, 8, 2, rng);
    std::vector<ExposedFrame> frames{ExposedFrame(images[0], 1.0), ExposedFrame(images[1], 0.5)};
    EXPECT_THROW(verify_equivalence(frames, {}), EquivalenceError);
}

TEST(Dorf, ParsesRecordsWithContinuationLines) {
    std::istringstream in(
        "camera one\n"
        "graph\n"
        "I =\n"
        "0 0.5\n"
        "1\n"
        "B =\n"
        "0 0.25 1\n"
        "camera two\n"
        "graph\n"
        "I = 0 1\n"
        "B = 0 1\n");
    const auto d = parse_dorf(in);
    ASSERT_EQ(d.curves.size(), 2u);
    EXPECT_EQ(d.curves[0].name, "camera one");
    EXPECT_EQ(d.curves[0].irradiance, (std::vector<double>{0.0, 0.5, 1.0}));
    EXPECT_EQ(d.curves[0].intensity, (std::vector<double>{0.0, 0.25, 1.0}));
    EXPECT_EQ(d.curves[1].intensity.size(), 2u);
    EXPECT_TRUE(d.warnings.empty());
}

TEST(Dorf, SkipsInvalidCurves) {
    std::istringstream in(
        "falling\ngraph\nI = 0 0.5 1\nB = 0 0.8 0.3\n"
        "short\ngraph\nI = 0 0.5 1\nB = 0 1\n"
        "good\ngraph\nI = 0 1\nB = 0 1\n");
    const auto d = parse_dorf(in);
    ASSERT_EQ(d.curves.size(), 1u);
    EXPECT_EQ(d.curves[0].name, "good");
    EXPECT_EQ(d.warnings.size(), 2u);
}

TEST(Dorf, EmptyInputFails) {
    std::istringstream in("");
    try {
        parse_dorf(in);
        FAIL() << "expected an error";
    } catch (const std::runtime_error& e) {
        EXPECT_NE(std::string(e.what()).find("zero parseable curves"), std::string::npos);
    }
}

TEST(Dorf, WriteThenParseRoundTrips) {
    const auto a = Algebra::ltip();
    const std::vector<CrfCurve> curves{model_curve("k2", 2.0, a, 1024), model_curve("k5", 5.0, a, 17)};
    std::stringstream s;
    write_dorf(s, curves);
    const auto d = parse_dorf(s);
    ASSERT_EQ(d.curves.size(), 2u);
    EXPECT_EQ(d.curves[0].irradiance.size(), 1024u);
    EXPECT_EQ(d.curves[0].intensity, curves[0].intensity);
    EXPECT_EQ(d.curves[1].name, "k5");
}

TEST(Crf, RecoversGain) {
    const auto a = Algebra::ltip();
    for (double k : {0.5, 2.0, 5.0}) {
        const auto fit = fit_gain(model_curve("m", k, a), a);
        EXPECT_NEAR(fit.gain, k, 1e-6);
        EXPECT_LE(fit.rmse, 1e-6);
    }
}

TEST(Crf, ShapeMismatchHasPositiveError) {
    const auto a = Algebra::ltip();
    CrfCurve constant{"constant", {0.0, 0.5, 1.0}, {0.5, 0.5, 0.5}};
    EXPECT_GT(fit_gain(constant, a).rmse, 0.0);
    CrfCurve identity{"identity", {}, {}};
    for (int i = 0; i <= 100; ++i) {
        identity.irradiance.push_back(i / 100.0);
        identity.intensity.push_back(i / 100.0);
    }
    EXPECT_GT(fit_gain(identity, a).rmse, 1e-3);
}

TEST(Crf, GainScalesInverselyWithIrradianceAxis) {
    const auto a = Algebra::ltip();
    CrfCurve gamma{"gamma", {}, {}};
    for (int i = 0; i <= 256; ++i) {
        gamma.irradiance.push_back(i / 256.0);
        gamma.intensity.push_back(std::pow(i / 256.0, 1.0 / 2.2));
    }
    const double k = fit_gain(gamma, a).gain;
    for (double c : {0.5, 3.0}) {
        CrfCurve scaled = gamma;
        for (double& e : scaled.irradiance) e *= c;
        EXPECT_NEAR(fit_gain(scaled, a).gain, k / c, 1e-4);
    }
}

TEST(Crf, CompareReportsBestAndAverage) {
    const auto a = Algebra::ltip();
    CrfCurve off = model_curve("off", 3.0, a, 64);
    for (double& v : off.intensity) v = std::sqrt(v);
    const std::vector<CrfCurve> curves{off, model_curve("exact", 3.0, a, 64)};
    const auto r = compare_crf(curves, a);
    ASSERT_EQ(r.fits.size(), 2u);
    EXPECT_EQ(r.best, 1u);
    EXPECT_EQ(r.average.name, "average");
    EXPECT_NEAR(r.mean_rmse, (r.fits[0].rmse + r.fits[1].rmse) / 2.0, 1e-15);
    const auto avg = average_curve(curves);
    EXPECT_NEAR(avg.intensity[10], (curves[0].intensity[10] + curves[1].intensity[10]) / 2.0, 1e-15);
}
