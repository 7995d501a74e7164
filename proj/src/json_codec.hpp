#pragma once

// Internal: nlohmann-based codecs shared by trace, config and session.

#include "gestgait/exo_sim.hpp"
#include "gestgait/gait_fsm.hpp"
#include "gestgait/trace.hpp"
#include "json.hpp"

namespace gestgait::codec {

using ojson = nlohmann::ordered_json;

TraceHeader header_from(const ojson& j);
TraceFrame frame_from(const ojson& j);
ojson header_json(const TraceHeader& h);
ojson frame_json(const TraceFrame& f);

AnchorProfile profile_from(const ojson& j);
ojson profile_json(const AnchorProfile& p);

// Defined in engine.cpp.
ojson pose_json(const JointPose& p);
ojson sample_json(const SimSample& s);
ojson fsm_json(const FsmSnapshot& f);
ojson plan_json(const GaitPlan& p);

}  // namespace gestgait::codec
