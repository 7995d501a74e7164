#include "gestgait/gait_fsm.hpp"

namespace gestgait {

std::string_view to_string(GaitState s) noexcept {
  switch (s) {
    case GaitState::Unpowered: return "Unpowered";
    case GaitState::Standing: return "Standing";
    case GaitState::Sitting: return "Sitting";
    case GaitState::RightForward: return "RightForward";
    case GaitState::LeftForward: return "LeftForward";
    case GaitState::RightHighStep: return "RightHighStep";
    case GaitState::RightLowStep: return "RightLowStep";
    case GaitState::RightObstacle: return "RightObstacle";
  }
  return "?";
}

std::string_view to_string(WalkMode m) noexcept {
  switch (m) {
    case WalkMode::None: return "None";
    case WalkMode::StepByStep: return "StepByStep";
    case WalkMode::Continuous: return "Continuous";
  }
  return "?";
}

std::optional<GaitState> gait_state_from_string(std::string_view s) noexcept {
  for (GaitState g : kGaitStates) {
    if (to_string(g) == s) return g;
  }
  return std::nullopt;
}

std::string_view to_string(RejectReason r) noexcept {
  switch (r) {
    case RejectReason::Busy: return "Busy";
    case RejectReason::Halted: return "Halted";
    case RejectReason::InvalidTransition: return "InvalidTransition";
  }
  return "?";
}

std::vector<GaitState> GaitPlan::states() const {
  std::vector<GaitState> out = phases;
  if (settle) out.push_back(*settle);
  return out;
}

const std::vector<Transition>& transition_table() {
  using S = GaitState;
  using M = WalkMode;
  using G = GestureLabel;
  static const std::vector<Transition> table{
      {S::Unpowered, M::None, G::G0, {{S::Standing}, {}}, M::None},
      {S::Sitting, M::None, G::Rock, {{S::Standing}, {}}, M::None},
      {S::Standing, M::None, G::Love, {{S::Sitting}, {}}, M::None},
      {S::Standing, M::None, G::G1, {{S::RightForward}, {}}, M::StepByStep},
      {S::RightForward, M::StepByStep, G::G2, {{S::LeftForward}, {}}, M::StepByStep},
      {S::LeftForward, M::StepByStep, G::G3, {{S::RightForward}, {}}, M::StepByStep},
      {S::RightForward, M::StepByStep, G::G4, {{S::Standing}, {}}, M::None},
      {S::Standing, M::None, G::G5, {{S::LeftForward}, {}}, M::Continuous},
      {S::LeftForward, M::Continuous, G::G6, {{S::Standing}, {}}, M::None},
      {S::RightForward, M::Continuous, G::G6, {{S::Standing}, {}}, M::None},
      {S::Standing, M::None, G::G7, {{S::RightHighStep}, S::Standing}, M::None},
      {S::Standing, M::None, G::G8, {{S::RightLowStep}, S::Standing}, M::None},
      {S::Standing, M::None, G::G9, {{S::RightObstacle}, S::Standing}, M::None},
  };
  return table;
}

GaitFsm GaitFsm::at_rest(GaitState state, WalkMode mode) {
  GaitFsm fsm;
  fsm.state_ = state;
  fsm.mode_ = mode;
  return fsm;
}

void GaitFsm::start(const GaitPlan& plan) {
  state_ = plan.phases.front();
  remaining_.assign(plan.phases.begin() + 1, plan.phases.end());
  settle_ = plan.settle;
  executing_ = true;
}

ApplyResult GaitFsm::apply(GestureLabel gesture) {
  if (!is_defined(gesture)) return ApplyResult::reject(RejectReason::InvalidTransition);

  if (halted_) {
    if (gesture != GestureLabel::G0) return ApplyResult::reject(RejectReason::Halted);
    halted_ = false;
    state_ = GaitState::Unpowered;
    mode_ = WalkMode::None;
  }

  if (executing_) {
    if (mode_ == WalkMode::Continuous && gesture == GestureLabel::G6 && !stop_pending_) {
      stop_pending_ = true;
      return ApplyResult::accept({{GaitState::Standing}, {}});
    }
    return ApplyResult::reject(RejectReason::Busy);
  }

  for (const Transition& t : transition_table()) {
    if (t.from == state_ && t.mode == mode_ && t.gesture == gesture) {
      start(t.plan);
      mode_ = t.next_mode;
      return ApplyResult::accept(t.plan);
    }
  }
  return ApplyResult::reject(RejectReason::InvalidTransition);
}

GaitState GaitFsm::on_gait_complete() {
  if (!executing_) return state_;

  if (!remaining_.empty()) {
    state_ = remaining_.front();
    remaining_.erase(remaining_.begin());
    return state_;
  }

  if (mode_ == WalkMode::Continuous) {
    if (stop_pending_) {
      stop_pending_ = false;
      mode_ = WalkMode::None;
      state_ = GaitState::Standing;
    } else {
      state_ = state_ == GaitState::LeftForward ? GaitState::RightForward : GaitState::LeftForward;
    }
    return state_;
  }

  if (settle_) {
    state_ = *settle_;
    settle_.reset();
  }
  executing_ = false;
  return state_;
}

void GaitFsm::estop() noexcept {
  executing_ = false;
  halted_ = true;
  stop_pending_ = false;
  mode_ = WalkMode::None;
  remaining_.clear();
  settle_.reset();
}

FsmSnapshot GaitFsm::snapshot() const noexcept {
  return {state_, mode_, executing_, halted_, stop_pending_};
}

}  // namespace gestgait
