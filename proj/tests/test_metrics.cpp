#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "stegodct/errors.hpp"
#include "stegodct/metrics.hpp"
#include "testutil.hpp"

using namespace stegodct;
using testutil::Rng;

namespace {

// Naive direct-summation oracles, written straight from the formulas and kept
// independent of the library implementations.

double oracle_mse(const Image& c, const Image& s) {
    double sum = 0.0;
    for (std::size_t i = 0; i < c.samples.size(); ++i) {
        const double d = double(c.samples[i]) - double(s.samples[i]);
        sum += d * d;
    }
    return sum / double(c.samples.size());
}

double oracle_psnr(const Image& c, const Image& s) {
    double xi = 0.0;
    for (auto v : c.samples) xi = std::max(xi, double(v));
    for (auto v : s.samples) xi = std::max(xi, double(v));
    const double mse = oracle_mse(c, s);
    if (mse == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(xi * xi / mse);
}

double oracle_uiqi(const Image& c, const Image& s) {
    const double n = double(c.samples.size());
    double mc = 0.0, ms = 0.0;
    for (std::size_t i = 0; i < c.samples.size(); ++i) mc += double(c.samples[i]);
    for (std::size_t i = 0; i < s.samples.size(); ++i) ms += double(s.samples[i]);
    mc /= n;
    ms /= n;
    double vc = 0.0, vs = 0.0, cov = 0.0;
    for (std::size_t i = 0; i < c.samples.size(); ++i) {
        const double dc = double(c.samples[i]) - mc;
        const double ds = double(s.samples[i]) - ms;
        vc += dc * dc;
        vs += ds * ds;
        cov += dc * ds;
    }
    vc /= n - 1.0;
    vs /= n - 1.0;
    cov /= n - 1.0;
    if (vc + vs == 0.0) return mc == ms ? 1.0 : 0.0;
    if (mc * mc + ms * ms == 0.0) return 0.0;
    return (4.0 * cov / (vc + vs)) * (mc * ms / (mc * mc + ms * ms));
}

double oracle_if(const Image& c, const Image& s) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < c.samples.size(); ++i) {
        const double d = double(c.samples[i]) - double(s.samples[i]);
        num += d * d;
        den += double(c.samples[i]) * double(c.samples[i]);
    }
    return 1.0 - num / den;
}

double oracle_re(const Image& c, const Image& s) {
    double hc[256] = {}, hs[256] = {};
    for (auto v : c.samples) hc[v] += 1.0;
    for (auto v : s.samples) hs[v] += 1.0;
    const double n = double(c.samples.size());
    double re = 0.0;
    for (int b = 0; b < 256; ++b) {
        if (hc[b] == 0.0) continue;
        const double pc = hc[b] / n;
        const double ps = hs[b] == 0.0 ? 1e-10 : hs[b] / n;
        re += pc * std::fabs(std::log(pc / ps));
    }
    return re;
}

Image constant_image(int w, int h, int c, std::uint8_t v) {
    return Image{w, h, c, std::vector<std::uint8_t>(std::size_t(w) * h * c, v)};
}

void expect_close(double got, double want, const char* label) {
    const double tol = 1e-12 * std::max(1.0, std::fabs(want));
    EXPECT_NEAR(got, want, tol) << label;
}

}  // namespace

TEST(Psnr, IdenticalImagesAreInfinite) {
    Rng rng(51);
    const Image img = testutil::random_image(rng, 32, 32, 3);
    const PsnrResult r = psnr(img, img);
    EXPECT_EQ(r.mse, 0.0);
    EXPECT_TRUE(std::isinf(r.psnr_db));
}

TEST(Psnr, SingleFlippedSampleOnZeroCover) {
    Image cover = constant_image(512, 512, 3, 0);
    Image stego = cover;
    stego.samples[12345] = 1;
    const PsnrResult r = psnr(cover, stego);
    EXPECT_DOUBLE_EQ(r.xi, 1.0);
    EXPECT_DOUBLE_EQ(r.mse, 1.0 / 786432.0);
    EXPECT_NEAR(r.psnr_db, 10.0 * std::log10(786432.0), 1e-12);
    EXPECT_NEAR(r.psnr_db, 58.957, 5e-4);
}

TEST(Psnr, MatchesOracle) {
    Rng rng(62);
    for (int trial = 0; trial < 100; ++trial) {
        const Image a = testutil::random_image(rng, 24, 16, 3);
        Image b = a;
        for (std::size_t i = 0; i < b.samples.size(); ++i) {
            if (rng.below(6) == 0) b.samples[i] = rng.byte();
        }
        const PsnrResult r = psnr(a, b);
        expect_close(r.mse, oracle_mse(a, b), "mse");
        if (std::isinf(r.psnr_db)) {
            EXPECT_TRUE(std::isinf(oracle_psnr(a, b)));
        } else {
            expect_close(r.psnr_db, oracle_psnr(a, b), "psnr");
        }
    }
}

TEST(Psnr, IsSymmetric) {
    Rng rng(52);
    const Image a = testutil::random_image(rng, 24, 24, 1);
    const Image b = testutil::random_image(rng, 24, 24, 1);
    const PsnrResult ab = psnr(a, b);
    const PsnrResult ba = psnr(b, a);
    EXPECT_EQ(ab.mse, ba.mse);
    EXPECT_EQ(ab.xi, ba.xi);
    EXPECT_EQ(ab.psnr_db, ba.psnr_db);
}

TEST(Psnr, RejectsGeometryMismatch) {
    Rng rng(53);
    const Image a = testutil::random_image(rng, 16, 16, 1);
    const Image b = testutil::random_image(rng, 16, 16, 3);
    EXPECT_THROW(psnr(a, b), Error);
}

TEST(Uiqi, IdentityAndDegenerateRules) {
    Rng rng(54);
    const Image img = testutil::random_image(rng, 32, 32, 3);
    EXPECT_EQ(uiqi(img, img), 1.0);

    // Identical constants: the identical-images limit applies.
    EXPECT_EQ(uiqi(constant_image(16, 16, 1, 10), constant_image(16, 16, 1, 10)), 1.0);
    // Different constants: zero variance denominator, not identical.
    EXPECT_EQ(uiqi(constant_image(16, 16, 1, 10), constant_image(16, 16, 1, 20)), 0.0);
}

TEST(Uiqi, StaysInRangeAndMatchesOracle) {
    Rng rng(55);
    for (int trial = 0; trial < 100; ++trial) {
        const Image a = testutil::random_image(rng, 24, 16, 3);
        Image b = a;
        for (std::size_t i = 0; i < b.samples.size(); ++i) {
            if (rng.below(4) == 0) b.samples[i] = rng.byte();
        }
        const double got = uiqi(a, b);
        expect_close(got, oracle_uiqi(a, b), "uiqi");
        EXPECT_GE(got, -1.0);
        EXPECT_LE(got, 1.0);
    }
}

TEST(ImageFidelity, KnownValues) {
    Rng rng(56);
    const Image img = testutil::random_image(rng, 32, 32, 1);
    EXPECT_EQ(image_fidelity(img, img), 1.0);

    const Image ones = constant_image(16, 16, 1, 1);
    const Image zeros = constant_image(16, 16, 1, 0);
    EXPECT_EQ(image_fidelity(ones, zeros), 0.0);

    EXPECT_THROW(image_fidelity(zeros, ones), Error);  // all-zero cover
}

TEST(ImageFidelity, MatchesOracle) {
    Rng rng(57);
    for (int trial = 0; trial < 100; ++trial) {
        const Image a = testutil::random_image(rng, 16, 24, 3);
        const Image b = testutil::random_image(rng, 16, 24, 3);
        expect_close(image_fidelity(a, b), oracle_if(a, b), "image_fidelity");
    }
}

TEST(RelativeEntropy, IdentityAndDisjointSupport) {
    Rng rng(58);
    const Image img = testutil::random_image(rng, 32, 32, 3);
    EXPECT_EQ(relative_entropy(img, img), 0.0);

    // All cover mass in one bin, all stego mass elsewhere: the eps floor
    // yields |log(1/1e-10)| = 10 log(10).
    const Image zeros = constant_image(16, 16, 1, 0);
    const Image ones = constant_image(16, 16, 1, 1);
    EXPECT_NEAR(relative_entropy(zeros, ones), 10.0 * std::log(10.0), 1e-12);
    EXPECT_NEAR(relative_entropy(zeros, ones), 23.026, 1e-3);
}

TEST(RelativeEntropy, NonNegativeAndMatchesOracle) {
    Rng rng(59);
    for (int trial = 0; trial < 100; ++trial) {
        const Image a = testutil::random_image(rng, 16, 16, 3);
        Image b = a;
        for (std::size_t i = 0; i < b.samples.size(); ++i) {
            if (rng.below(3) == 0) b.samples[i] = rng.byte();
        }
        const double got = relative_entropy(a, b);
        expect_close(got, oracle_re(a, b), "relative_entropy");
        EXPECT_GE(got, 0.0);
    }
}

TEST(Metrics, ReportBundlesAllValues) {
    Rng rng(60);
    const Image a = testutil::random_image(rng, 16, 16, 3);
    const Image b = testutil::random_image(rng, 16, 16, 3);
    const MetricsReport m = compute_metrics(a, b);
    const PsnrResult p = psnr(a, b);
    EXPECT_EQ(m.psnr_db, p.psnr_db);
    EXPECT_EQ(m.mse, p.mse);
    EXPECT_EQ(m.xi, p.xi);
    EXPECT_EQ(m.uiqi, uiqi(a, b));
    EXPECT_EQ(m.image_fidelity, image_fidelity(a, b));
    EXPECT_EQ(m.relative_entropy, relative_entropy(a, b));
}

TEST(Boxplot, TextbookFiveNumberSummary) {
    const std::vector<double> v = {1, 2, 3, 4, 5};
    const BoxplotSummary s = boxplot_summary(v);
    EXPECT_EQ(s.q1, 2.0);
    EXPECT_EQ(s.median, 3.0);
    EXPECT_EQ(s.q3, 4.0);
    EXPECT_EQ(s.iqr, 2.0);
    EXPECT_EQ(s.lower_fence, -1.0);
    EXPECT_EQ(s.upper_fence, 7.0);
    EXPECT_TRUE(s.outliers.empty());
}

TEST(Boxplot, DetectsOutlierBeyondCollapsedFences) {
    const std::vector<double> v = {1, 1, 1, 1, 100};
    const BoxplotSummary s = boxplot_summary(v);
    EXPECT_EQ(s.q1, 1.0);
    EXPECT_EQ(s.q3, 1.0);
    EXPECT_EQ(s.iqr, 0.0);
    ASSERT_EQ(s.outliers.size(), 1u);
    EXPECT_EQ(s.outliers[0], 100.0);
}

TEST(Boxplot, SingletonAndEmpty) {
    const std::vector<double> one = {7.5};
    const BoxplotSummary s = boxplot_summary(one);
    EXPECT_EQ(s.q1, 7.5);
    EXPECT_EQ(s.median, 7.5);
    EXPECT_EQ(s.q3, 7.5);
    EXPECT_TRUE(s.outliers.empty());

    EXPECT_THROW(boxplot_summary(std::vector<double>{}), Error);
}

TEST(Boxplot, PermutationInvariant) {
    Rng rng(61);
    std::vector<double> v(101);
    for (auto& x : v) x = double(rng.below(1000)) / 7.0;
    const BoxplotSummary a = boxplot_summary(v);
    std::vector<double> shuffled = v;
    for (std::size_t i = shuffled.size(); i > 1; --i) {
        std::swap(shuffled[i - 1], shuffled[rng.below(i)]);
    }
    const BoxplotSummary b = boxplot_summary(shuffled);
    EXPECT_EQ(a.q1, b.q1);
    EXPECT_EQ(a.median, b.median);
    EXPECT_EQ(a.q3, b.q3);
    EXPECT_EQ(a.outliers, b.outliers);
}
