#include "gevent/error.hpp"

namespace gevent {

std::string_view errc_name(Errc code) {
    switch (code) {
    case Errc::invalid_argument: return "invalid_argument";
    case Errc::io: return "io";
    case Errc::bad_magic: return "bad_magic";
    case Errc::bad_version: return "bad_version";
    case Errc::unknown_method: return "unknown_method";
    case Errc::truncated: return "truncated";
    case Errc::dimension_mismatch: return "dimension_mismatch";
    case Errc::corrupt: return "corrupt";
    case Errc::malformed_stream: return "malformed_stream";
    case Errc::numeric: return "numeric";
    }
    return "unknown";
}

int exit_status(Errc code) {
    switch (code) {
    case Errc::invalid_argument:
        return 2;
    case Errc::io:
    case Errc::bad_magic:
    case Errc::bad_version:
    case Errc::unknown_method:
    case Errc::truncated:
    case Errc::dimension_mismatch:
    case Errc::corrupt:
        return 3;
    case Errc::malformed_stream:
    case Errc::numeric:
        return 4;
    }
    return 4;
}

}  // namespace gevent
