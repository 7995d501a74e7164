#include <atomic>
#include <stdexcept>

#include "kernels.hpp"

namespace gestgait {

namespace {

// -1 means no override.
std::atomic<int> g_override{-1};

bool cpu_has_avx2() noexcept {
#if defined(GESTGAIT_HAVE_AVX2)
  static const bool has = [] {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") != 0;
  }();
  return has;
#else
  return false;
#endif
}

}  // namespace

std::string_view to_string(KernelKind k) noexcept {
  switch (k) {
    case KernelKind::Scalar: return "scalar";
    case KernelKind::Avx2: return "avx2";
  }
  return "?";
}

bool kernel_available(KernelKind k) noexcept {
  switch (k) {
    case KernelKind::Scalar: return true;
    case KernelKind::Avx2: return cpu_has_avx2();
  }
  return false;
}

KernelKind active_kernel() noexcept {
  const int forced = g_override.load(std::memory_order_relaxed);
  if (forced >= 0) return static_cast<KernelKind>(forced);
  return cpu_has_avx2() ? KernelKind::Avx2 : KernelKind::Scalar;
}

void set_kernel_override(std::optional<KernelKind> kind) noexcept {
  if (kind && !kernel_available(*kind)) kind = KernelKind::Scalar;
  g_override.store(kind ? static_cast<int>(*kind) : -1, std::memory_order_relaxed);
}

void measure_batch(std::span<const HandFrame> frames, std::span<HandMeasurements> out) {
  measure_batch(frames, out, active_kernel());
}

void measure_batch(std::span<const HandFrame> frames, std::span<HandMeasurements> out,
                   KernelKind kind) {
  if (out.size() < frames.size()) {
    throw std::invalid_argument("measure_batch: output span too small");
  }
  out = out.first(frames.size());
  switch (kind) {
#if defined(GESTGAIT_HAVE_AVX2)
    case KernelKind::Avx2:
      if (cpu_has_avx2()) {
        kernels::measure_avx2(frames, out);
        return;
      }
      break;
#endif
    default:
      break;
  }
  kernels::measure_scalar(frames, out);
}

}  // namespace gestgait
