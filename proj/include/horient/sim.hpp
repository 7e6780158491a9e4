#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "horient/angle.hpp"
#include "horient/gate.hpp"
#include "horient/model.hpp"
#include "horient/skeleton.hpp"

namespace horient {

/// World frame: x east, y north, angles in degrees counter-clockwise from
/// +x. A person with orientation theta faces (cos theta, sin theta).
struct PersonState {
  double x = 0.0;
  double y = 0.0;
  OrientationDeg theta;
};

struct RobotState {
  double x = 0.0;
  double y = 0.0;
  OrientationDeg heading;
};

struct GoalPose {
  double x = 0.0;
  double y = 0.0;
  OrientationDeg theta;
};

/// Following position relative to the person.
enum class FollowTask { kBackward, kForward };
FollowTask parse_task(const std::string& s);
std::string task_name(FollowTask task);

/// d meters behind the person's back, facing the way the person faces.
GoalPose backward_goal(const PersonState& p, double distance);
/// d meters in front of the person, turned back to face them.
GoalPose forward_goal(const PersonState& p, double distance);
GoalPose goal_for(FollowTask task, const PersonState& p, double distance);

/// Orientation from consecutive position fixes: the motion bearing when the
/// step is at least eps meters, otherwise the previous estimate held.
OrientationDeg cv_orientation(const Eigen::Vector2d& prev,
                              const Eigen::Vector2d& curr,
                              OrientationDeg prev_theta, double eps_m);

struct Command {
  double v = 0.0;      // m/s
  double omega = 0.0;  // rad/s
};

/// Forward-Euler unicycle step.
RobotState step_robot(const RobotState& r, const Command& cmd, double dt);

struct ControllerConfig {
  double v_max = 1.5;
  double omega_max = 2.5;
  int v_samples = 121;  // fine v steps keep the terminal-cost dead band small
  int omega_samples = 21;
  int horizon = 10;
  double dt = 0.15;  // plan 1.5 s out; executed at the control rate regardless
  double w_pos = 1.0;
  double w_heading = 0.1;
  void validate() const;
};

/// Samples a (v, omega) grid, rolls each pair out over the horizon and
/// scores the terminal pose against the goal:
///   w_pos * |pos - goal|^2 + w_heading * heading_error_rad^2
/// Ties keep the earliest grid entry (lowest v index, then omega index).
Command plan_command(const RobotState& r, const GoalPose& goal,
                     const ControllerConfig& cfg);

struct SegmentSpec {
  enum class Kind { kWalk, kSpin, kPause };
  Kind kind = Kind::kPause;
  double speed_mps = 0.0;    // walk
  double heading_deg = 0.0;  // walk
  double rate_dps = 0.0;     // spin
  double duration_s = 0.0;
};

struct NoiseSpec {
  double position_sigma_m = 0.0;
  double skeleton_sigma = 0.0;
};

/// A scripted person: starts at the origin facing 0 degrees; walk segments
/// set the orientation to their heading, spin turns in place, pause holds.
struct Scenario {
  std::string name;
  double duration_s = 0.0;
  std::vector<SegmentSpec> segments;
  OcclusionMode occlusion = OcclusionMode::full();
  NoiseSpec noise;
  std::uint64_t seed = 0;
  void validate() const;
};

Scenario load_scenario(const std::string& path);
PersonState person_state_at(const Scenario& sc, double t);

/// Event times i / rate_hz for i = 0, 1, ... strictly below duration_s.
std::vector<double> event_times(double rate_hz, double duration_s);

enum class SimEstimator { kCv, kModel, kGroundTruth };
SimEstimator parse_sim_estimator(const std::string& s);
std::string sim_estimator_name(SimEstimator e);

struct SimConfig {
  double position_hz = 10.0;     // person position fixes
  double orientation_hz = 25.0;  // orientation estimates
  double control_hz = 20.0;      // robot commands
  double follow_distance_m = 1.0;
  FollowTask task = FollowTask::kBackward;
  ControllerConfig controller;
  int gate_window = 5;
  double cv_eps_m = 0.01;
  double goal_lead_s = 1.5;   // extrapolate fixes to the rollout's end time
  double vel_ema_alpha = 0.5; // smoothing of the finite-difference velocity
  void validate() const;
};

struct SimFrame {
  double t = 0.0;
  PersonState person;   // true state
  RobotState robot;     // before this frame's command
  GoalPose goal;        // ideal goal from the true person state
  double est_theta_deg = 0.0;
  double confidence = 0.0;
};

struct SimResult {
  std::vector<SimFrame> frames;  // one per control event
  double ate_m = 0.0;            // over all frames
};

/// Closed-loop run. Coincident events settle as position fix, then
/// orientation estimate, then control. The robot starts on the initial
/// ideal goal. The goal fed to the planner extrapolates the measured
/// position goal_lead_s ahead with the smoothed velocity; the logged goal
/// and the tracking error always use the true person state.
SimResult run_scenario(const Scenario& sc, SimEstimator estimator,
                       const ModelParams<double>* model, const SimConfig& cfg);

/// Root-mean-square distance between paired positions.
double ate(std::span<const Eigen::Vector2d> actual,
           std::span<const Eigen::Vector2d> reference);

/// RMS tracking error over frames with t >= t_from.
double trajectory_ate(const SimResult& result, double t_from);

/// t,px,py,ptheta,rx,ry,rtheta,gx,gy,gtheta,est_theta,conf
void write_trajectory_csv(const std::string& path, const SimResult& result);

}  // namespace horient
