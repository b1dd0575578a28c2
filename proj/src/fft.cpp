#include "rhsolve/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>

namespace rhsolve::fft {

namespace {

struct PlanPair {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
};

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [n, p] : plans_) {
      fftw_destroy_plan(p.fwd);
      fftw_destroy_plan(p.bwd);
    }
  }

  PlanPair get(int n) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = plans_.find(n);
    if (it != plans_.end()) return it->second;
    // Planning needs scratch arrays; FFTW_ESTIMATE leaves them untouched and
    // gives deterministic plans, FFTW_UNALIGNED lets us run on std::vector data.
    std::vector<cplx> in(n), out(n);
    auto* pin = reinterpret_cast<fftw_complex*>(in.data());
    auto* pout = reinterpret_cast<fftw_complex*>(out.data());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    PlanPair p;
    p.fwd = fftw_plan_dft_1d(n, pin, pout, FFTW_FORWARD, flags);
    p.bwd = fftw_plan_dft_1d(n, pin, pout, FFTW_BACKWARD, flags);
    plans_.emplace(n, p);
    return p;
  }

 private:
  std::mutex mutex_;
  std::map<int, PlanPair> plans_;
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

std::vector<cplx> run(std::span<const cplx> x, bool fwd) {
  const int n = static_cast<int>(x.size());
  std::vector<cplx> in(x.begin(), x.end());
  std::vector<cplx> out(n);
  if (n == 0) return out;
  const PlanPair p = cache().get(n);
  fftw_execute_dft(fwd ? p.fwd : p.bwd, reinterpret_cast<fftw_complex*>(in.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
  return out;
}

}  // namespace

std::vector<cplx> forward(std::span<const cplx> x) { return run(x, true); }
std::vector<cplx> backward(std::span<const cplx> x) { return run(x, false); }

}  // namespace rhsolve::fft
