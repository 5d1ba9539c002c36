#ifndef FMLAB_DETAIL_FFT_HPP
#define FMLAB_DETAIL_FFT_HPP

#include <complex>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>
#include <vector>

#include <fftw3.h>

namespace fmlab::detail {

/// Thin FFTW wrapper. Plans are created once per (rank, n, sign) under a lock
/// and executed through the new-array interface, which is thread-safe.
class FftPlans {
 public:
  static FftPlans& instance() {
    static FftPlans p;
    return p;
  }

  FftPlans(const FftPlans&) = delete;
  FftPlans& operator=(const FftPlans&) = delete;

  ~FftPlans() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  /// Unnormalized in-place transform of `data`, laid out row-major as n^rank.
  /// sign = -1 is the forward (e^{-2 pi i k n / N}) transform.
  void execute(std::vector<std::complex<double>>& data, int rank, int n, int sign) {
    fftw_plan plan = get(rank, n, sign);
    auto* p = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(plan, p, p);
  }

 private:
  FftPlans() = default;

  fftw_plan get(int rank, int n, int sign) {
    std::lock_guard lock(mutex_);
    auto key = std::make_tuple(rank, n, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    std::size_t total = 1;
    for (int r = 0; r < rank; ++r) total *= static_cast<std::size_t>(n);
    std::vector<std::complex<double>> scratch(total);
    auto* p = reinterpret_cast<fftw_complex*>(scratch.data());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fftw_plan plan = nullptr;
    if (rank == 1)
      plan = fftw_plan_dft_1d(n, p, p, sign, flags);
    else if (rank == 2)
      plan = fftw_plan_dft_2d(n, n, p, p, sign, flags);
    if (!plan) throw std::runtime_error("fftw: plan creation failed");
    plans_.emplace(key, plan);
    return plan;
  }

  std::mutex mutex_;
  std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

inline void fft_forward(std::vector<std::complex<double>>& data, int rank, int n) {
  FftPlans::instance().execute(data, rank, n, FFTW_FORWARD);
}

inline void fft_backward(std::vector<std::complex<double>>& data, int rank, int n) {
  FftPlans::instance().execute(data, rank, n, FFTW_BACKWARD);
}

}  // namespace fmlab::detail

#endif  // FMLAB_DETAIL_FFT_HPP
