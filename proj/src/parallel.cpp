#include "kuramoto/parallel.hpp"

#include <cstdlib>
#include <string>

namespace kuramoto {

std::size_t configured_threads() {
    static const std::size_t threads = [] {
        const char* env = std::getenv("KURAMOTO_THREADS");
        if (env == nullptr) return std::size_t{1};
        try {
            const long value = std::stol(env);
            return value > 0 ? static_cast<std::size_t>(value) : std::size_t{1};
        } catch (const std::exception&) {
            return std::size_t{1};
        }
    }();
    return threads;
}

}  // namespace kuramoto
