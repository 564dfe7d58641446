#include "qclab/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

namespace qclab::fft {
namespace {

// Plans are created once per (rank, size, direction) with FFTW_UNALIGNED so
// they can be executed on arbitrary std::vector storage.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(int rank, std::size_t n, int sign) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto key = std::make_tuple(rank, n, sign);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    std::size_t total = rank == 1 ? n : n * n;
    std::vector<cplx> scratch(total);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    fftw_plan plan = rank == 1
                         ? fftw_plan_dft_1d(static_cast<int>(n), buf, buf, sign,
                                            FFTW_ESTIMATE | FFTW_UNALIGNED)
                         : fftw_plan_dft_2d(static_cast<int>(n), static_cast<int>(n), buf, buf,
                                            sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (plan == nullptr) throw Error("fft", "FFTW plan creation failed");
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<int, std::size_t, int>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

std::vector<cplx> run_1d(std::span<const cplx> data, int sign) {
  std::vector<cplx> out(data.begin(), data.end());
  if (out.empty()) return out;
  fftw_plan plan = cache().get(1, out.size(), sign);
  auto* buf = reinterpret_cast<fftw_complex*>(out.data());
  fftw_execute_dft(plan, buf, buf);
  return out;
}

void run_2d(std::vector<cplx>& data, std::size_t n, int sign) {
  if (data.size() != n * n) throw Error("invalid_argument", "2d transform size mismatch");
  fftw_plan plan = cache().get(2, n, sign);
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, buf, buf);
}

}  // namespace

std::vector<cplx> forward(std::span<const cplx> data) { return run_1d(data, FFTW_FORWARD); }
std::vector<cplx> backward(std::span<const cplx> data) { return run_1d(data, FFTW_BACKWARD); }

void forward_2d(std::vector<cplx>& data, std::size_t n) { run_2d(data, n, FFTW_FORWARD); }
void backward_2d(std::vector<cplx>& data, std::size_t n) { run_2d(data, n, FFTW_BACKWARD); }

}  // namespace qclab::fft
