#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace resonet {

/// Error classes raised by the library. The CLI maps each to an exit code.
enum class errc {
    invalid_specification,
    singular_frequency,
    numerical_failure,
    no_passband,
    insufficient_peaks,
    insufficient_span,
    below_cutoff,
    unknown_preset,
    parse_error,
    io_error,
};

class error : public std::runtime_error {
public:
    error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

    [[nodiscard]] errc code() const noexcept { return code_; }

private:
    errc code_;
};

class insufficient_peaks_error : public error {
public:
    insufficient_peaks_error(std::size_t found, std::size_t required)
        : error(errc::insufficient_peaks,
                "found " + std::to_string(found) + " resonant peak(s), need " +
                    std::to_string(required)),
          found_(found),
          required_(required) {}

    [[nodiscard]] std::size_t found() const noexcept { return found_; }
    [[nodiscard]] std::size_t required() const noexcept { return required_; }

private:
    std::size_t found_;
    std::size_t required_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }

} // namespace resonet
