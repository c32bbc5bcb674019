#include <cmath>

#include <gtest/gtest.h>

#include "generators.hpp"
#include "resonet/extraction.hpp"
#include "resonet/response.hpp"

using namespace resonet;

namespace {

/// Two synchronously tuned resonators coupled by m12. Both ports are weakly
/// coupled and 400:1 apart, which keeps the peaks of |S21| near -20 dB.
FrequencyResponse coupled_pair(double m12, double fbw, double f_lo, double f_hi, int points) {
    RealMatrix m = RealMatrix::Zero(2, 2);
    m(0, 1) = m(1, 0) = m12;
    const CouplingMatrix cm(m, 50.0, 20000.0);
    const FilterSpec s{2, 10e9, fbw * 10e9, 0.1};
    return sweep(cm, s, f_lo, f_hi, points);
}

/// One resonator loaded by Q_e at the input; the output port is 400 times weaker.
FrequencyResponse loaded_resonator(double qe, const FilterSpec& s, double f_lo, double f_hi,
                                   int points) {
    const double q1 = qe * s.fbw();
    return sweep(CouplingMatrix::zero(1, q1, 400.0 * q1), s, f_lo, f_hi, points);
}

} // namespace

TEST(ExtractK, Formula) {
    const PeakPair p{9.77e9, 10.23e9};
    const double a = 9.77 * 9.77, b = 10.23 * 10.23;
    EXPECT_NEAR(extract_k(p), (b - a) / (b + a), 1e-15);
    EXPECT_EQ(extract_k(p), extract_k({p.f_p2, p.f_p1}));
    EXPECT_EQ(extract_k({10e9, 10e9}), 0.0);
    EXPECT_THROW((void)extract_k({0.0, 10e9}), error);
}

TEST(ParabolicVertex, ExactOnParabola) {
    const auto y = [](double x) { return 3.0 - 2.0 * (x - 1.37) * (x - 1.37); };
    const auto [xv, yv] = detail::parabolic_vertex(1.0, y(1.0), 1.5, y(1.5), 2.0, y(2.0));
    EXPECT_NEAR(xv, 1.37, 1e-12);
    EXPECT_NEAR(yv, 3.0, 1e-12);
    // collinear samples fall back to the middle point
    const auto [x2, y2] = detail::parabolic_vertex(0.0, 0.0, 1.0, 1.0, 2.0, 2.0);
    EXPECT_EQ(x2, 1.0);
    EXPECT_EQ(y2, 1.0);
}

TEST(FindPeaks, CoupledPairRecoversDesignCoupling) {
    // m12 = 0.92 at FBW 0.05 is k = 0.046.
    const auto r = coupled_pair(0.92, 0.05, 8.2e9, 12.4e9, 4001);
    const double step = (12.4e9 - 8.2e9) / 4000.0;
    const PeakPair p = find_peak_pair(r);
    EXPECT_NEAR(extract_k(p), 0.046, 2.0 * step / 10e9 + 1e-4);
    // peaks sit where the prototype predicts Ω = ±m12
    EXPECT_NEAR(p.f_p1, bandpass_frequency({2, 10e9, 0.5e9, 0.1}, -0.92), 2.0 * step);
    EXPECT_NEAR(p.f_p2, bandpass_frequency({2, 10e9, 0.5e9, 0.1}, 0.92), 2.0 * step);
}

TEST(ExtractK, ScaleInvariantAndMonotone) {
    const PeakPair p{9.6e9, 10.3e9};
    for (const double c : {0.25, 2.0, 1024.0}) EXPECT_EQ(extract_k({c * p.f_p1, c * p.f_p2}), extract_k(p));
    EXPECT_NEAR(extract_k({3.7 * p.f_p1, 3.7 * p.f_p2}), extract_k(p), 1e-15);
    EXPECT_NEAR(extract_k({std::sqrt(0.95), std::sqrt(1.05)}), 0.05, 1e-15);
    double prev = -1.0;
    for (double r = 1.0; r < 1.5; r += 0.01) { // ratio f_p2/f_p1 at fixed geometric mean
        const double k = extract_k({10e9 / std::sqrt(r), 10e9 * std::sqrt(r)});
        EXPECT_GT(k, prev);
        prev = k;
    }
}

TEST(FindPeaks, MonotoneResponseHasNone) {
    FrequencyResponse r;
    for (int i = 0; i < 50; ++i) {
        r.grid.push_back(1e9 + i * 1e6);
        r.s11.emplace_back(0.0);
        r.s21.emplace_back(0.01 * i);
    }
    EXPECT_TRUE(find_peaks(r).empty());
}

TEST(FindPeaks, PairPeaksAreWeak) {
    const auto r = coupled_pair(0.92, 0.05, 8.2e9, 12.4e9, 4001);
    double top = 0.0;
    for (const cplx v : r.s21) top = std::max(top, std::abs(v));
    EXPECT_LE(to_db(top), -20.0 + 0.05);
    EXPECT_EQ(find_peaks(r).size(), 2u);
}

TEST(FindPeaks, SeparationGrowsWithCoupling) {
    double prev = 0.0;
    for (double m12 = 0.3; m12 < 2.0; m12 += 0.2) {
        const auto p = find_peak_pair(coupled_pair(m12, 0.05, 8.2e9, 12.4e9, 4001));
        EXPECT_GT(p.f_p2 - p.f_p1, prev);
        prev = p.f_p2 - p.f_p1;
    }
}

TEST(FindPeaks, SingleResonatorHasOnePeak) {
    const FilterSpec s{4, 10e9, 0.5e9, 0.04321};
    const auto r = loaded_resonator(18.628, s, 8.2e9, 12.4e9, 4001);
    const auto peaks = find_peaks(r);
    ASSERT_EQ(peaks.size(), 1u);
    EXPECT_NEAR(peaks[0], s.f0, (12.4e9 - 8.2e9) / 4000.0);
    try {
        (void)find_peak_pair(r);
        FAIL() << "pair found in single-resonator response";
    } catch (const insufficient_peaks_error& e) {
        EXPECT_EQ(e.found(), 1u);
        EXPECT_EQ(e.required(), 2u);
        EXPECT_EQ(e.code(), errc::insufficient_peaks);
    }
}

TEST(FindPeaks, IgnoresInsignificantRipple) {
    FrequencyResponse r;
    for (int i = 0; i < 201; ++i) {
        const double x = i / 200.0;
        r.grid.push_back(1e9 + x * 1e9);
        const double bump = std::exp(-std::pow((x - 0.5) / 0.05, 2));
        r.s11.emplace_back(0.0);
        r.s21.emplace_back(bump + 0.001 * std::sin(200.0 * x)); // wiggle far below 1 %
    }
    EXPECT_EQ(find_peaks(r).size(), 1u);
    EXPECT_THROW((void)find_peaks(r, 2), insufficient_peaks_error);
}

TEST(ExtractQe, SingleResonatorXBand) {
    const FilterSpec s{4, 10e9, 0.5e9, 0.04321};
    const auto r = loaded_resonator(18.628, s, 8.2e9, 12.4e9, 4001);
    const double qe = extract_qe(r, s.f0);
    EXPECT_NEAR(qe, 18.628, 0.02 * 18.628);
}

TEST(ExtractQe, SingleResonatorYBand) {
    const FilterSpec s{4, 300e9, 6e9, 0.04321};
    const auto r = loaded_resonator(46.57, s, 220e9, 325e9, 4001);
    EXPECT_NEAR(extract_qe(r, s.f0), 46.57, 0.02 * 46.57);
}

TEST(ExtractQe, PeakIsWeaklyCoupledToOutput) {
    const FilterSpec s{4, 10e9, 0.5e9, 0.04321};
    const auto r = loaded_resonator(18.628, s, 8.2e9, 12.4e9, 4001);
    double top = 0.0;
    for (const cplx v : r.s21) top = std::max(top, std::abs(v));
    EXPECT_LE(to_db(top), -20.0);
}

TEST(ExtractQe, SpanTooNarrow) {
    const FilterSpec s{4, 10e9, 0.5e9, 0.04321};
    const auto r = loaded_resonator(18.628, s, 9.9e9, 10.1e9, 101);
    try {
        (void)extract_qe(r, s.f0);
        FAIL() << "3 dB points outside the grid went unnoticed";
    } catch (const error& e) {
        EXPECT_EQ(e.code(), errc::insufficient_span);
    }
}

TEST(ExtractionProperty, CouplingRoundTripOverRange) {
    // Peaks at Ω = ±m map to f0 (±x/2 + sqrt(1 + x²/4)) with x = FBW m, so the
    // peak formula returns x sqrt(4 + x²) / (2 + x²) rather than x itself.
    const double lo = 8.2e9, hi = 12.4e9;
    const int points = 4001;
    const double grid_k = (hi - lo) / (points - 1) / 10e9;
    for (int i = 1; i <= 10; ++i) {
        const double k = 0.01 * i;
        const double image = k * std::sqrt(4.0 + k * k) / (2.0 + k * k);
        const auto r = coupled_pair(k / 0.05, 0.05, lo, hi, points);
        EXPECT_NEAR(extract_k(find_peak_pair(r)), image, 2.0 * grid_k) << "k=" << k;
    }
}
