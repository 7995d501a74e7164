#include "fixtures.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "gestgait/geometry.hpp"

namespace fixtures {

using namespace gestgait;

namespace {

constexpr Keypoint kPalmCenter{620.0, 480.0};

// (pivot, proximal, tip, intermediate joint) per finger; the thumb keeps 3 fixed.
struct Chain {
  std::size_t pivot, proximal, tip, mid;
};
constexpr std::array<Chain, 5> kChains{{
    {2, 0, 4, 3},
    {6, 5, 8, 7},
    {10, 9, 12, 11},
    {14, 13, 16, 15},
    {18, 17, 20, 19},
}};

double dist(Keypoint a, Keypoint b) { return std::hypot(a.u - b.u, a.v - b.v); }

Keypoint place(Keypoint pivot, Keypoint proximal, const FingerSpec& f) {
  const double r = dist(pivot, proximal);
  const double du = (proximal.u - pivot.u) / r;
  const double dv = (proximal.v - pivot.v) / r;
  const double a = f.angle_deg * std::numbers::pi / 180.0;
  auto rotated = [&](double s) {
    const double c = std::cos(s * a);
    const double n = std::sin(s * a);
    return Keypoint{pivot.u + f.length_px * (du * c - dv * n),
                    pivot.v + f.length_px * (du * n + dv * c)};
  };
  const Keypoint plus = rotated(1.0);
  const Keypoint minus = rotated(-1.0);
  switch (f.side) {
    case Side::Plus: return plus;
    case Side::Minus: return minus;
    case Side::Auto: break;
  }
  const bool plus_nearer = dist(plus, kPalmCenter) <= dist(minus, kPalmCenter);
  const bool bent = f.angle_deg < 90.0;
  return plus_nearer == bent ? plus : minus;
}

}  // namespace

std::array<Keypoint, 21> palm() {
  std::array<Keypoint, 21> p{};
  p[0] = {640, 600};
  p[1] = {560, 560};
  p[2] = {510, 500};
  p[3] = {480, 450};
  p[5] = {560, 400};
  p[6] = {555, 340};
  p[9] = {620, 390};
  p[10] = {620, 325};
  p[13] = {680, 400};
  p[14] = {685, 340};
  p[17] = {730, 420};
  p[18] = {740, 370};
  return p;
}

std::array<Keypoint, 21> fist_palm() {
  std::array<Keypoint, 21> p = palm();
  p[6] = {555, 360};
  p[10] = {620, 350};
  p[14] = {685, 360};
  p[18] = {740, 385};
  return p;
}

std::array<Keypoint, 21> landmarks(const HandSpec& spec) { return landmarks(spec, palm()); }

std::array<Keypoint, 21> landmarks(const HandSpec& spec, const std::array<Keypoint, 21>& base) {
  std::array<Keypoint, 21> p = base;
  for (std::size_t f = 0; f < 5; ++f) {
    const Chain& c = kChains[f];
    p[c.tip] = place(p[c.pivot], p[c.proximal], spec[f]);
    if (f > 0) p[c.mid] = {(p[c.pivot].u + p[c.tip].u) / 2, (p[c.pivot].v + p[c.tip].v) / 2};
  }
  return p;
}

HandFrame build(const std::array<Keypoint, 21>& raw, std::int64_t t_ms, FrameSize size) {
  return augment(raw, t_ms, size, 0.95);
}

HandFrame build(const HandSpec& spec, std::int64_t t_ms, FrameSize size) {
  return build(landmarks(spec), t_ms, size);
}

namespace {

// Bent fingers resting inside the inner polygon.
constexpr FingerSpec kThumbIn{40, 80};
constexpr FingerSpec kForeIn{40, 100};
constexpr FingerSpec kMiddleIn{30, 110};
constexpr FingerSpec kRingIn{40, 110};
constexpr FingerSpec kPinkyIn{35, 100};

// Extended fingers beyond the outer polygon.
constexpr FingerSpec kThumbOut{150, 110};
constexpr FingerSpec kForeOut{175, 90};
constexpr FingerSpec kMiddleOut{172, 100};
constexpr FingerSpec kRingOut{170, 95};
constexpr FingerSpec kPinkyOut{165, 75};

}  // namespace

HandSpec gesture_spec(GestureLabel g) {
  using G = GestureLabel;
  switch (g) {
    case G::G0:
      // Drawn on fist_palm().
      return {FingerSpec{40, 80}, FingerSpec{50, 100}, FingerSpec{50, 100, Side::Minus},
              FingerSpec{50, 100}, FingerSpec{40, 90}};
    case G::G1: return {kThumbIn, kForeOut, kMiddleIn, kRingIn, kPinkyIn};
    case G::G2: return {kThumbIn, kForeOut, kMiddleOut, kRingIn, kPinkyIn};
    case G::G3: return {kThumbIn, kForeOut, kMiddleOut, kRingOut, kPinkyIn};
    case G::G4: return {kThumbIn, kForeOut, kMiddleOut, kRingOut, kPinkyOut};
    case G::G5:
      return {FingerSpec{80, 110, Side::Plus}, FingerSpec{175, 90}, FingerSpec{170, 100},
              FingerSpec{170, 95}, FingerSpec{160, 75}};
    case G::G6: return {kThumbOut, kForeIn, kMiddleIn, kRingIn, kPinkyOut};
    case G::G7:
      // Forefinger and middle spread apart so P(4,12) < 2 P(8,12).
      return {FingerSpec{130, 110, Side::Minus}, FingerSpec{165, 90},
              FingerSpec{150, 100, Side::Minus}, kRingIn, kPinkyIn};
    case G::G8: return {kThumbOut, kForeOut, kMiddleIn, kRingIn, kPinkyIn};
    case G::G9: return {kThumbIn, FingerSpec{100, 80}, kMiddleIn, kRingIn, kPinkyIn};
    case G::Love: return {kThumbOut, kForeOut, kMiddleIn, kRingIn, kPinkyOut};
    case G::Rock: return {kThumbIn, kForeOut, kMiddleIn, kRingIn, kPinkyOut};
    case G::Unrecognized: break;
  }
  throw std::invalid_argument("no fixture for Unrecognized");
}

std::array<Keypoint, 21> gesture_landmarks(GestureLabel g) {
  return landmarks(gesture_spec(g), g == GestureLabel::G0 ? fist_palm() : palm());
}

HandFrame gesture(GestureLabel g, std::int64_t t_ms) { return build(gesture_landmarks(g), t_ms); }

std::string_view name(Confusable c) {
  switch (c) {
    case Confusable::TigerClaw: return "tiger-claw";
    case Confusable::Good: return "good";
    case Confusable::Ok: return "ok";
    case Confusable::NaturallyOpen: return "naturally-open";
    case Confusable::Gun: return "gun";
  }
  return "?";
}

std::array<Keypoint, 21> confusable_landmarks(Confusable c) {
  switch (c) {
    case Confusable::TigerClaw:
      // Four fingers hooked at about 100 deg, tips past the outer polygon.
      return landmarks({kThumbIn, FingerSpec{100, 60}, FingerSpec{100, 60}, FingerSpec{100, 60},
                        FingerSpec{100, 50}});
    case Confusable::Good:
      return landmarks({kThumbOut, kForeIn, kMiddleIn, kRingIn, kPinkyIn});
    case Confusable::Ok: {
      // Thumb and forefinger tips meet in a ring; the other three stand up.
      std::array<Keypoint, 21> p =
          landmarks({kThumbOut, FingerSpec{100, 80}, kMiddleOut, kRingOut, kPinkyOut});
      p[4] = p[8];
      return p;
    }
    case Confusable::NaturallyOpen: {
      // The G5 hand with the forefinger relaxed to 165 deg.
      HandSpec spec = gesture_spec(GestureLabel::G5);
      spec[1].angle_deg = 165;
      return landmarks(spec);
    }
    case Confusable::Gun: {
      // Thumb and forefinger out, middle half bent but short of the outer
      // polygon. The thumb length is solved so that P(4,12) = 2.5 P(8,12).
      HandSpec spec{kThumbOut, kForeOut, FingerSpec{70, 50, Side::Minus}, kRingIn, kPinkyIn};
      double lo = 60.0;
      double hi = 600.0;
      for (int i = 0; i < 200; ++i) {
        spec[0].length_px = (lo + hi) / 2;
        const auto p = landmarks(spec);
        const double ratio = dist(p[4], p[12]) / dist(p[8], p[12]);
        (ratio < 2.5 ? lo : hi) = spec[0].length_px;
      }
      return landmarks(spec);
    }
  }
  throw std::invalid_argument("unknown confusable");
}

HandFrame confusable(Confusable c, std::int64_t t_ms) { return build(confusable_landmarks(c), t_ms); }

TraceFrame trace_frame(const std::array<Keypoint, 21>& raw, std::int64_t t_ms, double conf) {
  return TraceFrame{t_ms, raw, conf};
}

std::array<Keypoint, 21> scaled_to_anchor(const std::array<Keypoint, 21>& raw, double anchor_px) {
  const double k = anchor_px / dist(raw[5], raw[17]);
  std::array<Keypoint, 21> out = raw;
  for (Keypoint& p : out) p = {raw[0].u + (p.u - raw[0].u) * k, raw[0].v + (p.v - raw[0].v) * k};
  return out;
}

std::array<Keypoint, 21> centered_on(const std::array<Keypoint, 21>& raw, Keypoint target) {
  const Keypoint anchor{(raw[5].u + raw[17].u) / 2, (raw[5].v + raw[17].v) / 2};
  std::array<Keypoint, 21> out = raw;
  for (Keypoint& p : out) p = {p.u + target.u - anchor.u, p.v + target.v - anchor.v};
  return out;
}

TraceHeader header(double focal_length_px) {
  TraceHeader h;
  h.frame_width = kFrame.width;
  h.frame_height = kFrame.height;
  h.focal_length_px = focal_length_px;
  AnchorProfile profile;
  profile.palm_width_override_cm = 8.0;  // anchor 6 cm
  h.profile = profile;
  return h;
}

}  // namespace fixtures
