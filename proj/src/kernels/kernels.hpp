#pragma once

#include <span>

#include "gestgait/measure.hpp"

namespace gestgait::kernels {

void measure_scalar(std::span<const HandFrame> frames, std::span<HandMeasurements> out) noexcept;

#if defined(GESTGAIT_HAVE_AVX2)
void measure_avx2(std::span<const HandFrame> frames, std::span<HandMeasurements> out) noexcept;
#endif

}  // namespace gestgait::kernels
