#include "gestgait/exo_sim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "json.hpp"

namespace gestgait {

using ojson = nlohmann::ordered_json;

bool JointLimits::contains(const JointPose& p) const noexcept {
  auto in = [](double x, double lo, double hi) { return lo <= x && x <= hi; };
  return in(p.hip_left, hip_min, hip_max) && in(p.hip_right, hip_min, hip_max) &&
         in(p.knee_left, knee_min, knee_max) && in(p.knee_right, knee_min, knee_max);
}

JointPose GaitProfile::sample(double phase) const noexcept {
  if (keyframes.empty()) return {};
  phase = std::clamp(phase, 0.0, 1.0);
  std::size_t i = 0;
  while (i + 2 < keyframes.size() && phase > keyframes[i + 1].phase) ++i;
  if (keyframes.size() == 1) return keyframes.front().pose;

  const Keyframe& a = keyframes[i];
  const Keyframe& b = keyframes[i + 1];
  const double s = (phase - a.phase) / (b.phase - a.phase);
  const double w = (1.0 - std::cos(std::numbers::pi * s)) / 2.0;
  auto lerp = [w](double x, double y) { return x + (y - x) * w; };
  return {lerp(a.pose.hip_left, b.pose.hip_left), lerp(a.pose.knee_left, b.pose.knee_left),
          lerp(a.pose.hip_right, b.pose.hip_right), lerp(a.pose.knee_right, b.pose.knee_right)};
}

void GaitProfile::validate(const JointLimits& limits) const {
  if (name.empty()) throw ProfileError("gait profile without a name");
  if (duration_ms <= 0) throw ProfileError(name + ": duration must be positive");
  if (keyframes.size() < 2) throw ProfileError(name + ": needs at least two keyframes");
  if (keyframes.front().phase != 0.0 || keyframes.back().phase != 1.0) {
    throw ProfileError(name + ": keyframe phases must start at 0 and end at 1");
  }
  for (std::size_t i = 1; i < keyframes.size(); ++i) {
    if (!(keyframes[i].phase > keyframes[i - 1].phase)) {
      throw ProfileError(name + ": keyframe phases must strictly increase");
    }
  }
  for (const Keyframe& k : keyframes) {
    if (!limits.contains(k.pose)) throw ProfileError(name + ": keyframe pose outside joint limits");
  }
}

ProfileLibrary::ProfileLibrary(std::vector<GaitProfile> profiles, const JointLimits& limits) {
  for (GaitProfile& p : profiles) {
    p.validate(limits);
    const std::string key = p.name;
    if (!profiles_.emplace(key, std::move(p)).second) {
      throw ProfileError("duplicate gait profile " + key);
    }
  }
}

namespace {

// Illustrative postures, degrees of flexion.
constexpr JointPose kStand{0, 0, 0, 0};
constexpr JointPose kUnpowered{10, 15, 10, 15};
constexpr JointPose kSit{90, 90, 90, 90};
constexpr JointPose kRightForward{-10, 5, 20, 5};
constexpr JointPose kLeftForward{20, 5, -10, 5};

GaitProfile two_phase(std::string name, JointPose from, JointPose mid, JointPose to,
                      std::int64_t duration_ms) {
  return {std::move(name), {{0.0, from}, {0.5, mid}, {1.0, to}}, duration_ms};
}

std::vector<GaitProfile> default_profiles() {
  std::vector<GaitProfile> p;
  p.push_back({"power_on", {{0.0, kUnpowered}, {1.0, kStand}}, 3000});
  p.push_back(two_phase("stand_to_sit", kStand, {45, 60, 45, 60}, kSit, 3000));
  p.push_back(two_phase("sit_to_stand", kSit, {60, 45, 60, 45}, kStand, 3000));
  p.push_back(two_phase("initial_step_right", kStand, {-5, 5, 35, 45}, kRightForward, 2000));
  p.push_back(two_phase("initial_step_left", kStand, {35, 45, -5, 5}, kLeftForward, 2000));
  p.push_back(two_phase("step_left", kRightForward, {30, 45, 0, 5}, kLeftForward, 2000));
  p.push_back(two_phase("step_right", kLeftForward, {0, 5, 30, 45}, kRightForward, 2000));
  p.push_back(two_phase("retract_right", kRightForward, {-5, 30, 10, 5}, kStand, 2000));
  p.push_back(two_phase("retract_left", kLeftForward, {10, 5, -5, 30}, kStand, 2000));
  p.push_back({"stair_ascent",
               {{0.0, kStand}, {0.3, {0, 5, 60, 80}}, {0.6, {-5, 20, 35, 10}}, {1.0, kStand}},
               4000});
  p.push_back({"stair_descent",
               {{0.0, kStand}, {0.3, {15, 40, 10, 20}}, {0.6, {25, 60, -10, 5}}, {1.0, kStand}},
               4000});
  p.push_back({"obstacle_cross",
               {{0.0, kStand}, {0.3, {0, 5, 70, 95}}, {0.6, {-10, 10, 45, 40}}, {1.0, kStand}},
               4000});
  return p;
}

ojson pose_json(const JointPose& p) {
  return {{"hip_left", p.hip_left},
          {"knee_left", p.knee_left},
          {"hip_right", p.hip_right},
          {"knee_right", p.knee_right}};
}

JointPose pose_from(const ojson& j) {
  return {j.at("hip_left").get<double>(), j.at("knee_left").get<double>(),
          j.at("hip_right").get<double>(), j.at("knee_right").get<double>()};
}

}  // namespace

ProfileLibrary ProfileLibrary::defaults() { return ProfileLibrary(default_profiles()); }

ProfileLibrary ProfileLibrary::from_json(std::string_view text, const JointLimits& limits) {
  std::vector<GaitProfile> profiles;
  try {
    const ojson doc = ojson::parse(text);
    for (const ojson& pj : doc.at("profiles")) {
      GaitProfile p;
      p.name = pj.at("name").get<std::string>();
      p.duration_ms = pj.at("duration_ms").get<std::int64_t>();
      for (const ojson& kj : pj.at("keyframes")) {
        p.keyframes.push_back({kj.at("phase").get<double>(), pose_from(kj.at("pose"))});
      }
      profiles.push_back(std::move(p));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ProfileError(std::string("malformed gait profile document: ") + e.what());
  }
  return ProfileLibrary(std::move(profiles), limits);
}

std::string ProfileLibrary::to_json() const {
  ojson list = ojson::array();
  for (const auto& [name, p] : profiles_) {
    ojson keyframes = ojson::array();
    for (const Keyframe& k : p.keyframes) {
      keyframes.push_back({{"phase", k.phase}, {"pose", pose_json(k.pose)}});
    }
    list.push_back({{"name", name}, {"duration_ms", p.duration_ms}, {"keyframes", keyframes}});
  }
  ojson doc;
  doc["note"] = "Illustrative placeholder trajectories, not clinical gait data.";
  doc["profiles"] = list;
  return doc.dump(2) + "\n";
}

const GaitProfile& ProfileLibrary::at(const std::string& name) const {
  const auto it = profiles_.find(name);
  if (it == profiles_.end()) throw ProfileError("unknown gait profile " + name);
  return it->second;
}

std::string profile_name_for(GaitState from, GaitState to) {
  switch (to) {
    case GaitState::Standing:
      if (from == GaitState::Unpowered) return "power_on";
      if (from == GaitState::Sitting) return "sit_to_stand";
      if (from == GaitState::LeftForward) return "retract_left";
      return "retract_right";
    case GaitState::Sitting: return "stand_to_sit";
    case GaitState::RightForward:
      return from == GaitState::LeftForward ? "step_right" : "initial_step_right";
    case GaitState::LeftForward:
      return from == GaitState::RightForward ? "step_left" : "initial_step_left";
    case GaitState::RightHighStep: return "stair_ascent";
    case GaitState::RightLowStep: return "stair_descent";
    case GaitState::RightObstacle: return "obstacle_cross";
    case GaitState::Unpowered: break;
  }
  throw ProfileError("no trajectory moves into " + std::string(to_string(to)));
}

std::string_view to_string(GaitEventKind k) noexcept {
  switch (k) {
    case GaitEventKind::Started: return "started";
    case GaitEventKind::Progress: return "progress";
    case GaitEventKind::Completed: return "completed";
    case GaitEventKind::Aborted: return "aborted";
  }
  return "?";
}

Execution::Execution(const GaitProfile& profile, double tick_rate_hz)
    : profile_(profile), tick_rate_hz_(tick_rate_hz) {
  if (!(tick_rate_hz > 0.0)) throw std::invalid_argument("tick rate must be positive");
  if (profile.duration_ms <= 0) throw ProfileError(profile.name + ": duration must be positive");
  const double exact = static_cast<double>(profile.duration_ms) * tick_rate_hz / 1000.0;
  intervals_ = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(exact)));
  last_pose_ = profile_.sample(0.0);
  started_ = {0.0, last_pose_, {GaitEventKind::Started, profile_.name, 0.0}};
}

double Execution::time_of(std::size_t k) const noexcept {
  if (k >= intervals_) return static_cast<double>(profile_.duration_ms);
  return static_cast<double>(k) * 1000.0 / tick_rate_hz_;
}

std::optional<double> Execution::peek_time() const noexcept {
  if (finished_) return std::nullopt;
  return time_of(next_index_);
}

std::optional<SimSample> Execution::next() {
  if (finished_) return std::nullopt;
  const std::size_t k = next_index_++;
  const double t = time_of(k);
  if (k >= intervals_) {
    finished_ = true;
    last_pose_ = profile_.sample(1.0);
    return SimSample{t, last_pose_, {GaitEventKind::Completed, profile_.name, 1.0}};
  }
  const double fraction = t / static_cast<double>(profile_.duration_ms);
  last_pose_ = profile_.sample(fraction);
  return SimSample{t, last_pose_, {GaitEventKind::Progress, profile_.name, fraction}};
}

std::optional<SimSample> Execution::abort() {
  if (finished_) return std::nullopt;
  finished_ = true;
  const double t = time_of(next_index_ - 1);
  const double fraction = t / static_cast<double>(profile_.duration_ms);
  return SimSample{t, last_pose_, {GaitEventKind::Aborted, profile_.name, fraction}};
}

std::vector<SimSample> execute(const GaitProfile& profile, double tick_rate_hz) {
  Execution run(profile, tick_rate_hz);
  std::vector<SimSample> out{run.started()};
  while (auto s = run.next()) out.push_back(*s);
  return out;
}

ExoSimulator::ExoSimulator(ProfileLibrary profiles, double tick_rate_hz)
    : profiles_(std::move(profiles)), tick_rate_hz_(tick_rate_hz) {
  if (!(tick_rate_hz > 0.0)) throw std::invalid_argument("tick rate must be positive");
}

SimSample ExoSimulator::start(const std::string& profile, double now_ms) {
  if (run_) throw std::logic_error("exoskeleton is already executing " + run_->profile().name);
  run_.emplace(profiles_.at(profile), tick_rate_hz_);
  run_start_ms_ = now_ms;
  SimSample s = run_->started();
  s.t_ms += now_ms;
  pose_ = s.pose;
  return s;
}

std::vector<SimSample> ExoSimulator::advance_to(double now_ms) {
  std::vector<SimSample> out;
  while (run_) {
    const auto t = run_->peek_time();
    if (!t || run_start_ms_ + *t > now_ms) break;
    SimSample s = *run_->next();
    s.t_ms += run_start_ms_;
    pose_ = s.pose;
    const bool done = s.event.kind == GaitEventKind::Completed;
    out.push_back(std::move(s));
    if (done) run_.reset();
  }
  return out;
}

std::optional<SimSample> ExoSimulator::abort(double now_ms) {
  if (!run_) return std::nullopt;
  auto s = run_->abort();
  run_.reset();
  if (!s) return std::nullopt;
  s->t_ms = std::max(now_ms, s->t_ms + run_start_ms_);
  pose_ = s->pose;
  return s;
}

std::optional<double> ExoSimulator::completion_time() const noexcept {
  if (!run_) return std::nullopt;
  return run_start_ms_ + static_cast<double>(run_->profile().duration_ms);
}

}  // namespace gestgait
