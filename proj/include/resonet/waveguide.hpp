#pragma once

// Rectangular waveguide TE10 dispersion and the band presets used by the
// X-band and Y-band designs. SI units throughout (meters, Hz).

#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "resonet/error.hpp"

namespace resonet {

inline constexpr double speed_of_light = 299'792'458.0; // m/s

struct WaveguideSpec {
    std::string name;
    double a = 0.0;          ///< broad wall, m
    double b = 0.0;          ///< narrow wall, m
    double band_start = 0.0; ///< Hz
    double band_stop = 0.0;  ///< Hz

    void validate() const;
    friend bool operator==(const WaveguideSpec&, const WaveguideSpec&) = default;
};

/// TE10 cutoff f_c = c / 2a (λ_c = 2a).
[[nodiscard]] inline double cutoff_frequency(double a) {
    if (!(a > 0.0) || !std::isfinite(a))
        fail(errc::invalid_specification, "waveguide width must be positive");
    return speed_of_light / (2.0 * a);
}

/// λg = λ0 / sqrt(1 - (f_c/f)²); throws below_cutoff in the evanescent regime.
[[nodiscard]] inline double guided_wavelength(double a, double f) {
    const double fc = cutoff_frequency(a);
    if (!(f > fc))
        fail(errc::below_cutoff, std::to_string(f / 1e9) + " GHz is at or below the TE10 cutoff " +
                                     std::to_string(fc / 1e9) + " GHz");
    const double r = fc / f;
    return (speed_of_light / f) / std::sqrt(1.0 - r * r);
}

inline void WaveguideSpec::validate() const {
    if (!(a > b && b > 0.0))
        fail(errc::invalid_specification, name + ": waveguide needs a > b > 0");
    if (!(band_start > cutoff_frequency(a)))
        fail(errc::invalid_specification, name + ": usable band starts below TE10 cutoff");
    if (!(band_stop > band_start)) fail(errc::invalid_specification, name + ": empty band");
}

/// Built-in presets. WR3 uses a = 0.762 mm, which reproduces the 196.71 GHz
/// cutoff of the Y-band designs; the standard WR-3 wall (0.8636 mm) would
/// give 173.6 GHz.
[[nodiscard]] inline const std::vector<WaveguideSpec>& builtin_presets() {
    static const std::vector<WaveguideSpec> presets = {
        {"WG16", 22.86e-3, 10.16e-3, 8.2e9, 12.4e9},
        {"WR3", 0.762e-3, 0.4318e-3, 220e9, 325e9},
    };
    return presets;
}

[[nodiscard]] inline WaveguideSpec find_preset(const std::vector<WaveguideSpec>& presets,
                                               std::string_view name) {
    for (const auto& p : presets)
        if (p.name == name) return p;
    std::string names;
    for (const auto& p : presets) names += (names.empty() ? "" : ", ") + p.name;
    fail(errc::unknown_preset,
         "unknown waveguide preset '" + std::string(name) + "' (available: " + names + ")");
}

[[nodiscard]] inline WaveguideSpec band_preset(std::string_view name) {
    return find_preset(builtin_presets(), name);
}

} // namespace resonet
