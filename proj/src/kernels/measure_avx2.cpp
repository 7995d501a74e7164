// AVX2 measurement kernel: four frames per iteration, one frame per lane.
// Mirrors the scalar reference operation for operation (no FMA) so results
// are bit-identical; only atan2 runs per lane through libm.

#include <immintrin.h>

#include <cmath>
#include <cstddef>
#include <numbers>
#include <type_traits>

#include "kernels.hpp"

namespace gestgait::kernels {

namespace {

static_assert(std::is_standard_layout_v<HandFrame>);
static_assert(sizeof(HandFrame) % sizeof(double) == 0);
static_assert(sizeof(Keypoint) == 2 * sizeof(double));

constexpr std::size_t kLanes = 4;
constexpr long long kStride = sizeof(HandFrame) / sizeof(double);

struct Block {
  __m256d u[kPointCount];
  __m256d v[kPointCount];
};

void load_block(const HandFrame* frames, Block& b) noexcept {
  const __m256i idx = _mm256_set_epi64x(3 * kStride, 2 * kStride, kStride, 0);
  for (std::size_t i = 0; i < kPointCount; ++i) {
    const double* base = &frames[0].points[i].u;
    b.u[i] = _mm256_i64gather_pd(base, idx, 8);
    b.v[i] = _mm256_i64gather_pd(base + 1, idx, 8);
  }
}

template <std::size_t N>
__m256d point_in_polygon(const Block& b, const std::array<std::size_t, N>& poly, __m256d pu,
                         __m256d pv) noexcept {
  __m256d inside = _mm256_setzero_pd();
  __m256d on_edge = _mm256_setzero_pd();
  const __m256d zero = _mm256_setzero_pd();
  for (std::size_t i = 0, j = N - 1; i < N; j = i++) {
    const __m256d au = b.u[poly[j]];
    const __m256d av = b.v[poly[j]];
    const __m256d bu = b.u[poly[i]];
    const __m256d bv = b.v[poly[i]];
    const __m256d eu = _mm256_sub_pd(bu, au);
    const __m256d ev = _mm256_sub_pd(bv, av);
    const __m256d du = _mm256_sub_pd(pu, au);
    const __m256d dv = _mm256_sub_pd(pv, av);
    const __m256d cross = _mm256_sub_pd(_mm256_mul_pd(eu, dv), _mm256_mul_pd(ev, du));

    __m256d on = _mm256_cmp_pd(cross, zero, _CMP_EQ_OQ);
    on = _mm256_and_pd(on, _mm256_cmp_pd(_mm256_min_pd(au, bu), pu, _CMP_LE_OQ));
    on = _mm256_and_pd(on, _mm256_cmp_pd(pu, _mm256_max_pd(au, bu), _CMP_LE_OQ));
    on = _mm256_and_pd(on, _mm256_cmp_pd(_mm256_min_pd(av, bv), pv, _CMP_LE_OQ));
    on = _mm256_and_pd(on, _mm256_cmp_pd(pv, _mm256_max_pd(av, bv), _CMP_LE_OQ));
    on_edge = _mm256_or_pd(on_edge, on);

    const __m256d straddles =
        _mm256_xor_pd(_mm256_cmp_pd(av, pv, _CMP_GT_OQ), _mm256_cmp_pd(bv, pv, _CMP_GT_OQ));
    // Lanes with ev == 0 never straddle, so their inf/nan x is masked out.
    const __m256d x = _mm256_add_pd(_mm256_div_pd(_mm256_mul_pd(eu, dv), ev), au);
    const __m256d flip = _mm256_and_pd(straddles, _mm256_cmp_pd(pu, x, _CMP_LT_OQ));
    inside = _mm256_xor_pd(inside, flip);
  }
  return _mm256_or_pd(inside, on_edge);
}

void measure_block(const HandFrame* frames, HandMeasurements* out) noexcept {
  Block b;
  load_block(frames, b);
  for (std::size_t l = 0; l < kLanes; ++l) out[l] = HandMeasurements{};

  const __m256d zero = _mm256_setzero_pd();
  alignas(32) double cross_lanes[kLanes];
  alignas(32) double dot_lanes[kLanes];

  for (std::size_t f = 0; f < kFingerCount; ++f) {
    const JointAngleSpec& s = kJointAngleSpecs[f];
    const __m256d x1 = _mm256_sub_pd(b.u[s.proximal], b.u[s.pivot]);
    const __m256d y1 = _mm256_sub_pd(b.v[s.proximal], b.v[s.pivot]);
    const __m256d x2 = _mm256_sub_pd(b.u[s.distal], b.u[s.pivot]);
    const __m256d y2 = _mm256_sub_pd(b.v[s.distal], b.v[s.pivot]);
    const __m256d n1 = _mm256_add_pd(_mm256_mul_pd(x1, x1), _mm256_mul_pd(y1, y1));
    const __m256d n2 = _mm256_add_pd(_mm256_mul_pd(x2, x2), _mm256_mul_pd(y2, y2));
    const int degenerate = _mm256_movemask_pd(
        _mm256_or_pd(_mm256_cmp_pd(n1, zero, _CMP_EQ_OQ), _mm256_cmp_pd(n2, zero, _CMP_EQ_OQ)));
    const __m256d cross = _mm256_sub_pd(_mm256_mul_pd(x1, y2), _mm256_mul_pd(y1, x2));
    const __m256d dot = _mm256_add_pd(_mm256_mul_pd(x1, x2), _mm256_mul_pd(y1, y2));
    _mm256_store_pd(cross_lanes, cross);
    _mm256_store_pd(dot_lanes, dot);
    for (std::size_t l = 0; l < kLanes; ++l) {
      if (degenerate & (1 << l)) {
        out[l].degenerate_angles |= static_cast<std::uint8_t>(1u << f);
      } else {
        out[l].angle_deg[f] =
            std::atan2(std::fabs(cross_lanes[l]), dot_lanes[l]) * (180.0 / std::numbers::pi);
      }
    }
  }

  for (std::size_t f = 0; f < kFingerCount; ++f) {
    const std::size_t tip = kFingertips[f];
    const int in_inner = _mm256_movemask_pd(point_in_polygon(b, kInnerHull, b.u[tip], b.v[tip]));
    const int in_outer = _mm256_movemask_pd(point_in_polygon(b, kOuterHull, b.u[tip], b.v[tip]));
    for (std::size_t l = 0; l < kLanes; ++l) {
      const bool inner = in_inner & (1 << l);
      const bool outer = in_outer & (1 << l);
      if (inner && !outer) out[l].hull_degenerate = true;
      out[l].membership[f] =
          inner ? Membership::Inner : (outer ? Membership::Between : Membership::Outside);
    }
  }

  alignas(32) double dist_lanes[kLanes];
  for (std::size_t i = 0; i < kFingerCount; ++i) {
    for (std::size_t j = i + 1; j < kFingerCount; ++j) {
      const __m256d du = _mm256_sub_pd(b.u[kFingertips[j]], b.u[kFingertips[i]]);
      const __m256d dv = _mm256_sub_pd(b.v[kFingertips[j]], b.v[kFingertips[i]]);
      const __m256d d = _mm256_sqrt_pd(_mm256_add_pd(_mm256_mul_pd(du, du), _mm256_mul_pd(dv, dv)));
      _mm256_store_pd(dist_lanes, d);
      const std::size_t slot = tip_pair_slot(kFingers[i], kFingers[j]);
      for (std::size_t l = 0; l < kLanes; ++l) out[l].tip_distance[slot] = dist_lanes[l];
    }
  }
}

}  // namespace

void measure_avx2(std::span<const HandFrame> frames, std::span<HandMeasurements> out) noexcept {
  const std::size_t full = frames.size() - frames.size() % kLanes;
  for (std::size_t i = 0; i < full; i += kLanes) {
    measure_block(frames.data() + i, out.data() + i);
  }
  measure_scalar(frames.subspan(full), out.subspan(full));
}

}  // namespace gestgait::kernels
