#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gevent {

enum class Errc {
    invalid_argument,   // precondition / usage
    io,                 // file could not be opened or written
    bad_magic,
    bad_version,
    unknown_method,
    truncated,
    dimension_mismatch,
    corrupt,            // inconsistent file contents (pad bits, flags, trailing bytes)
    malformed_stream,   // stream or segment invariant broken
    numeric,            // NaN input, undefined calibration
};

std::string_view errc_name(Errc code);

// Process exit status for a failure of this kind: 2 usage, 3 format, 4 invariant.
int exit_status(Errc code);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool ok, const std::string& what) {
    if (!ok) fail(Errc::invalid_argument, what);
}

}  // namespace gevent
