#include "fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace nclab::detail {

namespace {

// The FFTW planner is not reentrant.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

class Plan {
public:
    Plan(int n, int Q, int sign) : size_(1) {
        std::vector<int> dims(n, Q);
        for (int i = 0; i < n; ++i) size_ *= static_cast<std::size_t>(Q);
        std::lock_guard lock(planner_mutex());
        buf_ = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * size_));
        if (!buf_) throw std::bad_alloc();
        plan_ = fftw_plan_dft(n, dims.data(), buf_, buf_, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
        if (!plan_) {
            fftw_free(buf_);
            throw std::runtime_error("FFTW planning failed");
        }
    }
    ~Plan() {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan_);
        fftw_free(buf_);
    }
    Plan(const Plan&) = delete;
    Plan& operator=(const Plan&) = delete;

    void run(std::span<std::complex<double>> data) {
        std::memcpy(buf_, data.data(), sizeof(fftw_complex) * size_);
        fftw_execute(plan_);
        std::memcpy(static_cast<void*>(data.data()), buf_, sizeof(fftw_complex) * size_);
    }

private:
    std::size_t size_;
    fftw_complex* buf_ = nullptr;
    fftw_plan plan_ = nullptr;
};

}  // namespace

void fft_cube(std::span<std::complex<double>> data, int n, int Q, int sign) {
    std::size_t expected = 1;
    for (int i = 0; i < n; ++i) expected *= static_cast<std::size_t>(Q);
    if (data.size() != expected) throw std::invalid_argument("fft_cube: buffer size does not match Q^n");
    thread_local std::map<std::tuple<int, int, int>, std::unique_ptr<Plan>> cache;
    auto& slot = cache[{n, Q, sign}];
    if (!slot) slot = std::make_unique<Plan>(n, Q, sign);
    slot->run(data);
}

}  // namespace nclab::detail
