#include "bolab/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>
#include <vector>

namespace bolab::fft {
namespace {

struct PlanCache {
    std::mutex mutex;
    std::map<std::pair<std::size_t, int>, fftw_plan> plans;

    ~PlanCache() {
        for (auto& [key, plan] : plans) fftw_destroy_plan(plan);
    }

    fftw_plan get(std::size_t n, int direction) {
        std::lock_guard<std::mutex> lock(mutex);
        auto key = std::make_pair(n, direction);
        auto it = plans.find(key);
        if (it != plans.end()) return it->second;
        std::vector<cplx> a(n), b(n);
        fftw_plan p = fftw_plan_dft_1d(static_cast<int>(n), reinterpret_cast<fftw_complex*>(a.data()),
                                       reinterpret_cast<fftw_complex*>(b.data()), direction,
                                       FFTW_ESTIMATE | FFTW_UNALIGNED);
        plans.emplace(key, p);
        return p;
    }
};

PlanCache& cache() {
    static PlanCache c;
    return c;
}

void run(const cplx* in, cplx* out, std::size_t n, int direction) {
    if (n == 0) return;
    fftw_plan p = cache().get(n, direction);
    if (in == out) {
        std::vector<cplx> tmp(in, in + n);
        fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(tmp.data()), reinterpret_cast<fftw_complex*>(out));
    } else {
        fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)),
                         reinterpret_cast<fftw_complex*>(out));
    }
}

}  // namespace

void forward(const cplx* in, cplx* out, std::size_t n) { run(in, out, n, FFTW_FORWARD); }
void backward(const cplx* in, cplx* out, std::size_t n) { run(in, out, n, FFTW_BACKWARD); }

}  // namespace bolab::fft
