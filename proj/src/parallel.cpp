#include "rsplit/parallel.hpp"

#ifdef _OPENMP
#include <omp.h>
#include <thread>
#endif

namespace rsplit {

#ifdef _OPENMP
void set_thread_cap(int k) {
    if (k <= 0) k = static_cast<int>(std::thread::hardware_concurrency());
    if (k > 0) omp_set_num_threads(k);
}
int max_threads() { return omp_get_max_threads(); }
#else
void set_thread_cap(int) {}
int max_threads() { return 1; }
#endif

}  // namespace rsplit
