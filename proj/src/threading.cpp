#include "mlg/threading.hpp"

#include <charconv>
#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mlg {

namespace {
int hardware_default = 0;
}

int apply_thread_cap_from_env() {
#ifdef _OPENMP
    if (hardware_default == 0) hardware_default = omp_get_max_threads();
    const char* env = std::getenv("MLG_THREADS");
    if (env != nullptr && *env != '\0') {
        int n = 0;
        const std::string value(env);
        auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), n);
        if (ec == std::errc{} && ptr == value.data() + value.size() && n > 0) {
            omp_set_num_threads(n);
        } else {
            omp_set_num_threads(hardware_default);  // 0 or garbage: auto
        }
    }
    return omp_get_max_threads();
#else
    return 1;
#endif
}

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

void set_threads(int n) {
#ifdef _OPENMP
    if (hardware_default == 0) hardware_default = omp_get_max_threads();
    omp_set_num_threads(n > 0 ? n : hardware_default);
#else
    (void)n;
#endif
}

}  // namespace mlg
