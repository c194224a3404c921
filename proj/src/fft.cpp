#include "tvsst/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace tvsst {

namespace {

// Plans are cached per (size, direction). Plan creation is not thread-safe in
// FFTW, so the cache is guarded; execution on caller buffers is safe.
// FFTW_UNALIGNED lets fftw_execute_dft run on arbitrarily aligned memory.
class PlanCache {
public:
    fftw_plan get(std::size_t n, int sign) {
        std::lock_guard<std::mutex> lock(mutex_);
        auto& map = (sign == FFTW_FORWARD) ? forward_ : backward_;
        auto it = map.find(n);
        if (it != map.end()) return it->second;
        std::vector<std::complex<double>> tmp_in(n), tmp_out(n);
        fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n),
                                          reinterpret_cast<fftw_complex*>(tmp_in.data()),
                                          reinterpret_cast<fftw_complex*>(tmp_out.data()), sign,
                                          FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (plan == nullptr) throw std::runtime_error("fft: plan creation failed");
        map.emplace(n, plan);
        return plan;
    }

private:
    std::mutex mutex_;
    std::unordered_map<std::size_t, fftw_plan> forward_, backward_;
};

PlanCache& cache() {
    static PlanCache c;
    return c;
}

Eigen::VectorXcd run(const Eigen::VectorXcd& x, int sign) {
    if (x.size() == 0) throw std::invalid_argument("fft: empty input");
    auto n = static_cast<std::size_t>(x.size());
    Eigen::VectorXcd out(x.size());
    fftw_plan plan = cache().get(n, sign);
    fftw_execute_dft(plan,
                     reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(x.data())),
                     reinterpret_cast<fftw_complex*>(out.data()));
    return out;
}

}  // namespace

Eigen::VectorXcd fft(const Eigen::VectorXcd& x) { return run(x, FFTW_FORWARD); }

Eigen::VectorXcd ifft(const Eigen::VectorXcd& x) {
    Eigen::VectorXcd out = run(x, FFTW_BACKWARD);
    out /= static_cast<double>(x.size());
    return out;
}

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

}  // namespace tvsst
