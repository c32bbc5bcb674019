#pragma once

// Inverse problems of the coupled-resonator design flow: coupling coefficients
// from the splitting of two resonant peaks, and external Q from the loaded
// 3 dB bandwidth of a singly loaded resonator.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "resonet/error.hpp"
#include "resonet/response.hpp"

namespace resonet {

struct PeakPair {
    double f_p1 = 0.0; ///< lower peak, Hz
    double f_p2 = 0.0; ///< upper peak, Hz
};

/// k = |f_p2² - f_p1²| / (f_p2² + f_p1²). The sign (electric vs magnetic
/// coupling) cannot be recovered from magnitude data.
[[nodiscard]] inline double extract_k(const PeakPair& peaks) {
    if (!(peaks.f_p1 > 0.0) || !(peaks.f_p2 > 0.0))
        fail(errc::invalid_specification, "peak frequencies must be positive");
    const double a = peaks.f_p1 * peaks.f_p1;
    const double b = peaks.f_p2 * peaks.f_p2;
    return std::abs(b - a) / (b + a);
}

struct Peak {
    double frequency = 0.0;
    double magnitude = 0.0; ///< refined |S21| at the vertex
    std::size_t index = 0;  ///< grid sample nearest the vertex
};

namespace detail {

/// Vertex of the parabola through three (x, y) samples; falls back to the
/// middle sample when the points are collinear.
[[nodiscard]] inline std::pair<double, double> parabolic_vertex(double x0, double y0, double x1,
                                                                double y1, double x2, double y2) {
    const double d0 = (y1 - y0) / (x1 - x0);
    const double d1 = (y2 - y1) / (x2 - x1);
    const double curv = (d1 - d0) / (x2 - x0);
    if (!(curv < 0.0)) return {x1, y1};
    // Newton form: y = y0 + d0 (x - x0) + curv (x - x0)(x - x1)
    const double xv = std::clamp(0.5 * (x0 + x1) - d0 / (2.0 * curv), x0, x2);
    const double yv = y0 + d0 * (xv - x0) + curv * (xv - x0) * (xv - x1);
    return {xv, yv};
}

} // namespace detail

/// Strict local maxima of |S21| whose topographic prominence is at least
/// `relative_prominence` of the largest sample, refined by 3-point parabolic
/// interpolation. Sorted by frequency.
[[nodiscard]] inline std::vector<Peak> find_peak_details(const FrequencyResponse& resp,
                                                         double relative_prominence = 0.01) {
    resp.validate();
    const std::size_t n = resp.size();
    if (n < 3) fail(errc::invalid_specification, "peak search needs at least 3 grid points");
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = std::abs(resp.s21[i]);
    const double top = *std::max_element(y.begin(), y.end());

    std::vector<Peak> peaks;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (!(y[i] > y[i - 1] && y[i] >= y[i + 1])) continue;
        // Plateau handling: accept the left end of an equal run only if it drops after.
        std::size_t j = i;
        while (j + 1 < n && y[j + 1] == y[i]) ++j;
        if (j + 1 >= n || !(y[j + 1] < y[i])) continue;

        double left_base = y[i];
        for (std::size_t l = i; l-- > 0;) {
            if (y[l] > y[i]) break;
            left_base = std::min(left_base, y[l]);
        }
        double right_base = y[i];
        for (std::size_t r = j + 1; r < n; ++r) {
            if (y[r] > y[i]) break;
            right_base = std::min(right_base, y[r]);
        }
        const double prominence = y[i] - std::max(left_base, right_base);
        if (prominence >= relative_prominence * top) {
            const auto [xv, yv] = detail::parabolic_vertex(resp.grid[i - 1], y[i - 1], resp.grid[i],
                                                           y[i], resp.grid[i + 1], y[i + 1]);
            peaks.push_back({xv, yv, i});
        }
        i = j;
    }
    return peaks;
}

/// Peak frequencies; throws insufficient_peaks_error when fewer than
/// `required` are found.
[[nodiscard]] inline std::vector<double> find_peaks(const FrequencyResponse& resp,
                                                    std::size_t required = 0,
                                                    double relative_prominence = 0.01) {
    const auto details = find_peak_details(resp, relative_prominence);
    if (details.size() < required) throw insufficient_peaks_error(details.size(), required);
    std::vector<double> out;
    out.reserve(details.size());
    for (const auto& p : details) out.push_back(p.frequency);
    return out;
}

/// The two most pronounced resonances, ordered by frequency.
[[nodiscard]] inline PeakPair find_peak_pair(const FrequencyResponse& resp) {
    auto details = find_peak_details(resp);
    if (details.size() < 2) throw insufficient_peaks_error(details.size(), 2);
    std::sort(details.begin(), details.end(),
              [](const Peak& a, const Peak& b) { return a.magnitude > b.magnitude; });
    const double a = details[0].frequency;
    const double b = details[1].frequency;
    return {std::min(a, b), std::max(a, b)};
}

struct LoadedBandwidth {
    double f_peak = 0.0;
    double f_low = 0.0;  ///< lower -3 dB point
    double f_high = 0.0; ///< upper -3 dB point
};

/// Locates the -3 dB points of |S21| around its largest peak by linear
/// interpolation between grid samples.
[[nodiscard]] inline LoadedBandwidth loaded_bandwidth(const FrequencyResponse& resp) {
    resp.validate();
    const std::size_t n = resp.size();
    if (n < 3) fail(errc::invalid_specification, "Q extraction needs at least 3 grid points");
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = std::abs(resp.s21[i]);
    const std::size_t ip =
        static_cast<std::size_t>(std::max_element(y.begin(), y.end()) - y.begin());
    if (ip == 0 || ip + 1 == n)
        fail(errc::insufficient_span, "resonance peak lies at the edge of the grid");

    const auto [f_peak, y_peak] = detail::parabolic_vertex(resp.grid[ip - 1], y[ip - 1],
                                                           resp.grid[ip], y[ip], resp.grid[ip + 1],
                                                           y[ip + 1]);
    const double level = y_peak / std::sqrt(2.0);
    const auto interp = [&](std::size_t above, std::size_t below) {
        const double t = (y[above] - level) / (y[above] - y[below]);
        return resp.grid[above] + t * (resp.grid[below] - resp.grid[above]);
    };

    std::size_t l = ip;
    while (l > 0 && y[l - 1] > level) --l;
    if (l == 0) fail(errc::insufficient_span, "lower 3 dB point lies outside the grid");
    std::size_t r = ip;
    while (r + 1 < n && y[r + 1] > level) ++r;
    if (r + 1 == n) fail(errc::insufficient_span, "upper 3 dB point lies outside the grid");
    return {f_peak, interp(l, l - 1), interp(r, r + 1)};
}

/// Q_e = f0 / Δf_3dB of a singly loaded resonator (other port weakly coupled).
[[nodiscard]] inline double extract_qe(const FrequencyResponse& resp, double f0) {
    if (!(f0 > 0.0)) fail(errc::invalid_specification, "center frequency must be positive");
    const LoadedBandwidth bw = loaded_bandwidth(resp);
    return f0 / (bw.f_high - bw.f_low);
}

} // namespace resonet
