#include "rr/parallel.hpp"

#include <cstdlib>
#include <string>

#include "rr/errors.hpp"

namespace rr {

unsigned resolve_threads(unsigned requested)
{
    if (requested > 0) return requested;
    if (const char* env = std::getenv("ROBUST_RATES_THREADS"); env && *env) {
        std::size_t pos = 0;
        long v = 0;
        try {
            v = std::stol(env, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos != std::string(env).size() || v < 1) {
            throw ValidationError("ROBUST_RATES_THREADS must be a positive integer");
        }
        return static_cast<unsigned>(v);
    }
    return 1;
}

} // namespace rr
