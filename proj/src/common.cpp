#include "evolop/common.hpp"

#include <cstdlib>
#include <thread>

namespace evolop {

int thread_budget() {
    static const int budget = [] {
        int n = static_cast<int>(std::thread::hardware_concurrency());
        if (n <= 0) n = 1;
        if (const char* env = std::getenv("EVOLOP_THREADS")) {
            char* end = nullptr;
            long v = std::strtol(env, &end, 10);
            if (end != env && v >= 1) n = static_cast<int>(v);
        }
        return n;
    }();
    return budget;
}

bool all_finite(const Matrix& m) {
    return m.allFinite();
}

}  // namespace evolop
