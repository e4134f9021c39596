#include "ptt/fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace ptt {

namespace {

// One c2c plan pair per grid size, reused for every transform. FFTW_ESTIMATE
// keeps plan selection independent of runtime measurements.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  struct Plans {
    fftw_plan forward;
    fftw_plan backward;
    std::vector<cplx> buf;
  };

  Plans& get(int n) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = plans_.find(n);
    if (it != plans_.end()) return *it->second;
    auto p = std::make_unique<Plans>();
    p->buf.resize(static_cast<std::size_t>(n) * n * n);
    auto* data = reinterpret_cast<fftw_complex*>(p->buf.data());
    p->forward =
        fftw_plan_dft_3d(n, n, n, data, data, FFTW_FORWARD, FFTW_ESTIMATE);
    p->backward =
        fftw_plan_dft_3d(n, n, n, data, data, FFTW_BACKWARD, FFTW_ESTIMATE);
    if (!p->forward || !p->backward)
      throw std::runtime_error("fftw plan creation failed");
    return *plans_.emplace(n, std::move(p)).first->second;
  }

  std::mutex mu_;

 private:
  std::map<int, std::unique_ptr<Plans>> plans_;
};

}  // namespace

std::vector<double> to_physical(const SpectralScalarField& f) {
  const Grid& g = f.grid();
  auto& plans = PlanCache::instance().get(g.n);
  std::lock_guard<std::mutex> lock(PlanCache::instance().mu_);
  std::copy(f.coeffs().begin(), f.coeffs().end(), plans.buf.begin());
  fftw_execute(plans.backward);
  std::vector<double> out(g.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = plans.buf[i].real();
  return out;
}

SpectralScalarField to_spectral(const Grid& g, std::span<const double> values) {
  if (values.size() != g.size())
    throw std::invalid_argument("to_spectral: size mismatch");
  auto& plans = PlanCache::instance().get(g.n);
  std::lock_guard<std::mutex> lock(PlanCache::instance().mu_);
  for (std::size_t i = 0; i < values.size(); ++i)
    plans.buf[i] = cplx(values[i], 0.0);
  fftw_execute(plans.forward);
  SpectralScalarField out(g);
  const double norm = 1.0 / static_cast<double>(g.size());
  auto coeffs = out.coeffs();
  for (std::size_t i = 0; i < coeffs.size(); ++i)
    coeffs[i] = plans.buf[i] * norm;
  return out;
}

PhysicalVector to_physical(const SpectralVectorField& f) {
  PhysicalVector out;
  for (int i = 0; i < 3; ++i) out.comp[i] = to_physical(f[i]);
  return out;
}

PhysicalTensor to_physical(const SpectralTensorField& f) {
  PhysicalTensor out;
  for (int i = 0; i < SpectralTensorField::n_comp; ++i)
    out.comp[i] = to_physical(f.comp[i]);
  return out;
}

}  // namespace ptt
