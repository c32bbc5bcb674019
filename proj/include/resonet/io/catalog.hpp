#pragma once

// Waveguide preset catalog. The file lists presets in mm and GHz:
//
//   { "presets": [ { "name": "WG16", "a": 22.86, "b": 10.16, "band": [8.2, 12.4] } ] }

#include <string>
#include <string_view>
#include <vector>

#include "resonet/io/json_io.hpp"
#include "resonet/waveguide.hpp"

namespace resonet::io {

[[nodiscard]] inline std::vector<WaveguideSpec> parse_waveguide_catalog(
    std::string_view text, std::string_view source = "waveguide catalog") {
    const json j = parse_json(text, source);
    const auto entries = require<std::vector<json>>(j, "presets", "");
    std::vector<WaveguideSpec> out;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const std::string ctx = "presets[" + std::to_string(i) + "]";
        const auto band = require<std::vector<double>>(entries[i], "band", ctx);
        if (band.size() != 2) fail(errc::parse_error, "'" + ctx + ".band' must be [start, stop]");
        WaveguideSpec w{require<std::string>(entries[i], "name", ctx),
                        require<double>(entries[i], "a", ctx) * 1e-3,
                        require<double>(entries[i], "b", ctx) * 1e-3, band[0] * 1e9, band[1] * 1e9};
        try {
            w.validate();
        } catch (const error& e) {
            fail(errc::parse_error, std::string(source) + ": " + e.what());
        }
        out.push_back(std::move(w));
    }
    if (out.empty()) fail(errc::parse_error, std::string(source) + ": no presets");
    return out;
}

} // namespace resonet::io
