#include "beltrami/transform.hpp"

#include <cstring>
#include <map>
#include <memory>
#include <mutex>

#include <fftw3.h>

namespace beltrami::detail {
namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// One pair of plans plus aligned scratch per grid size and thread. FFTW planning
// is not thread-safe; execution on distinct buffers is.
class FftPlan {
 public:
  explicit FftPlan(int n) : n_(n) {
    const std::size_t nr = std::size_t(n) * n * n;
    const std::size_t nc = std::size_t(n) * n * (n / 2 + 1);
    real_ = fftw_alloc_real(nr);
    cplx_ = fftw_alloc_complex(nc);
    std::lock_guard lock(planner_mutex());
    const unsigned flags = n >= 64 ? FFTW_MEASURE : FFTW_ESTIMATE;
    fwd_ = fftw_plan_dft_r2c_3d(n, n, n, real_, cplx_, flags);
    bwd_ = fftw_plan_dft_c2r_3d(n, n, n, cplx_, real_, flags);
  }
  ~FftPlan() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
    fftw_free(real_);
    fftw_free(cplx_);
  }
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;

  double* real() { return real_; }
  Complex* cplx() { return reinterpret_cast<Complex*>(cplx_); }
  void forward() { fftw_execute(fwd_); }
  void backward() { fftw_execute(bwd_); }
  int n() const { return n_; }

 private:
  int n_;
  double* real_ = nullptr;
  fftw_complex* cplx_ = nullptr;
  fftw_plan fwd_ = nullptr;
  fftw_plan bwd_ = nullptr;
};

FftPlan& plan_for(int n) {
  thread_local std::map<int, std::unique_ptr<FftPlan>> cache;
  auto& p = cache[n];
  if (!p) p = std::make_unique<FftPlan>(n);
  return *p;
}

// (-1)^(m1+m2+m3) shifts the origin to the box centre.
inline double parity(int l1, int i2, int i3) { return ((l1 + i2 + i3) & 1) ? -1.0 : 1.0; }

}  // namespace

void forward_component(const GridSpec& g, const Eigen::ArrayXd& in, Eigen::ArrayXcd& out) {
  auto& p = plan_for(g.n);
  std::memcpy(p.real(), in.data(), sizeof(double) * g.physical_size());
  p.forward();
  out.resize(Eigen::Index(g.spectral_size()));
  const double scale = 1.0 / double(g.physical_size());
  const Complex* src = p.cplx();
  const int n = g.n, nh = g.nh();
  std::size_t idx = 0;
  for (int i3 = 0; i3 < n; ++i3)
    for (int i2 = 0; i2 < n; ++i2)
      for (int l1 = 0; l1 < nh; ++l1, ++idx) out[Eigen::Index(idx)] = src[idx] * (scale * parity(l1, i2, i3));
}

void inverse_component(const GridSpec& g, const Eigen::ArrayXcd& in, Eigen::ArrayXd& out) {
  auto& p = plan_for(g.n);
  Complex* dst = p.cplx();
  const int n = g.n, nh = g.nh();
  std::size_t idx = 0;
  for (int i3 = 0; i3 < n; ++i3)
    for (int i2 = 0; i2 < n; ++i2)
      for (int l1 = 0; l1 < nh; ++l1, ++idx) dst[idx] = in[Eigen::Index(idx)] * parity(l1, i2, i3);
  p.backward();
  out.resize(Eigen::Index(g.physical_size()));
  std::memcpy(out.data(), p.real(), sizeof(double) * g.physical_size());
}

}  // namespace beltrami::detail
