#ifndef CHUR_FFT_HPP
#define CHUR_FFT_HPP

#include <complex>
#include <cstddef>
#include <map>
#include <mutex>
#include <span>
#include <utility>
#include <vector>

#include <fftw3.h>

namespace chur::fft {

using cplx = std::complex<double>;

enum class Direction { forward, backward };

namespace detail {

// Plans are created once per (size, direction) and reused through the
// new-array execute interface, which is safe to call concurrently. Plan
// creation itself is not thread safe in FFTW and goes through the mutex.
class PlanCache {
public:
  static PlanCache &instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(std::size_t n, Direction dir) {
    std::lock_guard lock(mutex_);
    auto key = std::make_pair(n, dir == Direction::forward);
    if (auto it = plans_.find(key); it != plans_.end())
      return it->second;
    auto *in = fftw_alloc_complex(n);
    auto *out = fftw_alloc_complex(n);
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), in, out,
                                      dir == Direction::forward ? FFTW_FORWARD
                                                                : FFTW_BACKWARD,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(in);
    fftw_free(out);
    plans_.emplace(key, plan);
    return plan;
  }

  PlanCache(const PlanCache &) = delete;
  PlanCache &operator=(const PlanCache &) = delete;

  ~PlanCache() {
    for (auto &[key, plan] : plans_)
      fftw_destroy_plan(plan);
  }

private:
  PlanCache() = default;
  std::mutex mutex_;
  std::map<std::pair<std::size_t, bool>, fftw_plan> plans_;
};

} // namespace detail

/// Unnormalized DFT: out[k] = sum_j in[j] exp(-+2 pi i j k / n).
/// Forward uses the minus sign. `in` and `out` may alias.
inline void transform(std::span<const cplx> in, std::span<cplx> out,
                      Direction dir) {
  const std::size_t n = in.size();
  if (n == 0)
    return;
  if (in.data() == out.data()) {
    // cached plans are out-of-place
    std::vector<cplx> copy(in.begin(), in.end());
    transform(copy, out, dir);
    return;
  }
  fftw_plan plan = detail::PlanCache::instance().get(n, dir);
  // fftw_execute_dft does not modify the input for out-of-place complex
  // transforms, the const_cast only satisfies its signature.
  auto *src = reinterpret_cast<fftw_complex *>(const_cast<cplx *>(in.data()));
  auto *dst = reinterpret_cast<fftw_complex *>(out.data());
  fftw_execute_dft(plan, src, dst);
}

inline std::vector<cplx> transform(std::span<const cplx> in, Direction dir) {
  std::vector<cplx> out(in.size());
  transform(in, out, dir);
  return out;
}

} // namespace chur::fft

#endif // CHUR_FFT_HPP
