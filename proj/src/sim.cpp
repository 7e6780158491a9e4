#include "horient/sim.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "horient/errors.hpp"
#include "horient/format.hpp"
#include "horient/rng.hpp"
#include <json.hpp>

namespace horient {

namespace {

using nlohmann::json;

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw ConfigError(std::string(what) + " must be finite");
}

}  // namespace

FollowTask parse_task(const std::string& s) {
  if (s == "backward") return FollowTask::kBackward;
  if (s == "forward") return FollowTask::kForward;
  throw ConfigError("unknown follow task '" + s + "' (expected backward or forward)");
}

std::string task_name(FollowTask task) {
  return task == FollowTask::kBackward ? "backward" : "forward";
}

GoalPose backward_goal(const PersonState& p, double distance) {
  const double th = deg2rad(p.theta.deg());
  return {p.x - distance * std::cos(th), p.y - distance * std::sin(th), p.theta};
}

GoalPose forward_goal(const PersonState& p, double distance) {
  const double th = deg2rad(p.theta.deg());
  return {p.x + distance * std::cos(th), p.y + distance * std::sin(th),
          OrientationDeg(p.theta.deg() + 180.0)};
}

GoalPose goal_for(FollowTask task, const PersonState& p, double distance) {
  return task == FollowTask::kBackward ? backward_goal(p, distance)
                                     : forward_goal(p, distance);
}

OrientationDeg cv_orientation(const Eigen::Vector2d& prev,
                              const Eigen::Vector2d& curr,
                              OrientationDeg prev_theta, double eps_m) {
  const Eigen::Vector2d d = curr - prev;
  if (d.norm() < eps_m) return prev_theta;
  return OrientationDeg(rad2deg(std::atan2(d.y(), d.x())));
}

RobotState step_robot(const RobotState& r, const Command& cmd, double dt) {
  const double h = deg2rad(r.heading.deg());
  RobotState out;
  out.x = r.x + cmd.v * std::cos(h) * dt;
  out.y = r.y + cmd.v * std::sin(h) * dt;
  out.heading = OrientationDeg(r.heading.deg() + rad2deg(cmd.omega * dt));
  return out;
}

void ControllerConfig::validate() const {
  if (!(v_max > 0.0) || !std::isfinite(v_max)) {
    throw ConfigError("controller v_max must be positive");
  }
  if (!(omega_max > 0.0) || !std::isfinite(omega_max)) {
    throw ConfigError("controller omega_max must be positive");
  }
  if (v_samples < 2 || omega_samples < 2) {
    throw ConfigError("controller needs at least 2 samples per axis");
  }
  if (horizon < 1) throw ConfigError("controller horizon must be at least 1");
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw ConfigError("controller dt must be positive");
  }
  if (!(w_pos >= 0.0) || !(w_heading >= 0.0) || !std::isfinite(w_pos) ||
      !std::isfinite(w_heading)) {
    throw ConfigError("controller weights must be non-negative");
  }
}

Command plan_command(const RobotState& r, const GoalPose& goal,
                     const ControllerConfig& cfg) {
  cfg.validate();
  double best_cost = std::numeric_limits<double>::infinity();
  Command best;
  for (int vi = 0; vi < cfg.v_samples; ++vi) {
    const double v =
        -cfg.v_max + 2.0 * cfg.v_max * vi / (cfg.v_samples - 1);
    for (int wi = 0; wi < cfg.omega_samples; ++wi) {
      const double w =
          -cfg.omega_max + 2.0 * cfg.omega_max * wi / (cfg.omega_samples - 1);
      RobotState s = r;
      for (int k = 0; k < cfg.horizon; ++k) s = step_robot(s, {v, w}, cfg.dt);
      const double dx = s.x - goal.x;
      const double dy = s.y - goal.y;
      const double dh = deg2rad(circ_diff(s.heading, goal.theta));
      const double cost = cfg.w_pos * (dx * dx + dy * dy) + cfg.w_heading * dh * dh;
      // strict < keeps the earliest grid entry on ties
      if (cost < best_cost) {
        best_cost = cost;
        best = {v, w};
      }
    }
  }
  return best;
}

void Scenario::validate() const {
  if (!(duration_s > 0.0) || !std::isfinite(duration_s)) {
    throw ConfigError("scenario duration_s must be positive");
  }
  if (segments.empty()) throw ConfigError("scenario needs at least one segment");
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const SegmentSpec& s = segments[i];
    const std::string at = "segment " + std::to_string(i) + ": ";
    if (!(s.duration_s > 0.0) || !std::isfinite(s.duration_s)) {
      throw ConfigError(at + "duration_s must be positive");
    }
    if (s.kind == SegmentSpec::Kind::kWalk) {
      if (!(s.speed_mps >= 0.0) || !std::isfinite(s.speed_mps)) {
        throw ConfigError(at + "speed_mps must be non-negative");
      }
      if (!std::isfinite(s.heading_deg)) {
        throw ConfigError(at + "heading_deg must be finite");
      }
    } else if (s.kind == SegmentSpec::Kind::kSpin) {
      if (!std::isfinite(s.rate_dps)) {
        throw ConfigError(at + "rate_dps must be finite");
      }
    }
  }
  if (!(noise.position_sigma_m >= 0.0) || !std::isfinite(noise.position_sigma_m)) {
    throw ConfigError("noise.position_sigma_m must be non-negative");
  }
  if (!(noise.skeleton_sigma >= 0.0) || !std::isfinite(noise.skeleton_sigma)) {
    throw ConfigError("noise.skeleton_sigma must be non-negative");
  }
}

namespace {

double take_number(const json& obj, const std::string& key, const std::string& at) {
  if (!obj.contains(key)) throw ConfigError(at + "missing key '" + key + "'");
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(at + "'" + key + "' must be a number");
  return v.get<double>();
}

SegmentSpec parse_segment(const json& obj, std::size_t index) {
  const std::string at = "segment " + std::to_string(index) + ": ";
  if (!obj.is_object()) throw ConfigError(at + "must be an object");
  if (!obj.contains("kind") || !obj.at("kind").is_string()) {
    throw ConfigError(at + "missing string key 'kind'");
  }
  const std::string kind = obj.at("kind").get<std::string>();
  SegmentSpec seg;
  std::vector<std::string> allowed = {"kind", "duration_s"};
  if (kind == "walk") {
    seg.kind = SegmentSpec::Kind::kWalk;
    seg.speed_mps = take_number(obj, "speed_mps", at);
    seg.heading_deg = take_number(obj, "heading_deg", at);
    allowed.insert(allowed.end(), {"speed_mps", "heading_deg"});
  } else if (kind == "spin") {
    seg.kind = SegmentSpec::Kind::kSpin;
    seg.rate_dps = take_number(obj, "rate_dps", at);
    allowed.push_back("rate_dps");
  } else if (kind == "pause") {
    seg.kind = SegmentSpec::Kind::kPause;
  } else {
    throw ConfigError(at + "unknown kind '" + kind + "'");
  }
  seg.duration_s = take_number(obj, "duration_s", at);
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end()) {
      throw ConfigError(at + "unknown key '" + it.key() + "'");
    }
  }
  return seg;
}

}  // namespace

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scenario file " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + " is not valid JSON: " + e.what());
  }
  if (!doc.is_object()) throw ConfigError(path + ": top level must be an object");
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    static const char* known[] = {"name",      "duration_s", "segments",
                                  "occlusion_mode", "noise", "seed"};
    if (std::find(std::begin(known), std::end(known), it.key()) == std::end(known)) {
      throw ConfigError(path + ": unknown key '" + it.key() + "'");
    }
  }

  Scenario sc;
  if (doc.contains("name")) {
    if (!doc.at("name").is_string()) throw ConfigError("'name' must be a string");
    sc.name = doc.at("name").get<std::string>();
  }
  sc.duration_s = take_number(doc, "duration_s", "scenario: ");
  if (!doc.contains("segments") || !doc.at("segments").is_array()) {
    throw ConfigError("scenario: missing array key 'segments'");
  }
  const json& segs = doc.at("segments");
  for (std::size_t i = 0; i < segs.size(); ++i) {
    sc.segments.push_back(parse_segment(segs.at(i), i));
  }
  if (doc.contains("occlusion_mode")) {
    if (!doc.at("occlusion_mode").is_string()) {
      throw ConfigError("'occlusion_mode' must be a string");
    }
    try {
      sc.occlusion = OcclusionMode::parse(doc.at("occlusion_mode").get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("'occlusion_mode': ") + e.what());
    }
  }
  if (doc.contains("noise")) {
    const json& n = doc.at("noise");
    if (!n.is_object()) throw ConfigError("'noise' must be an object");
    for (auto it = n.begin(); it != n.end(); ++it) {
      if (it.key() != "position_sigma_m" && it.key() != "skeleton_sigma") {
        throw ConfigError("noise: unknown key '" + it.key() + "'");
      }
    }
    if (n.contains("position_sigma_m")) {
      sc.noise.position_sigma_m = take_number(n, "position_sigma_m", "noise: ");
    }
    if (n.contains("skeleton_sigma")) {
      sc.noise.skeleton_sigma = take_number(n, "skeleton_sigma", "noise: ");
    }
  }
  if (doc.contains("seed")) {
    if (!doc.at("seed").is_number_unsigned()) {
      throw ConfigError("'seed' must be a non-negative integer");
    }
    sc.seed = doc.at("seed").get<std::uint64_t>();
  }
  sc.validate();
  return sc;
}

PersonState person_state_at(const Scenario& sc, double t) {
  if (!std::isfinite(t)) throw InvalidInputError("time must be finite");
  PersonState s;  // origin, facing 0 degrees
  double seg_start = 0.0;
  for (const SegmentSpec& seg : sc.segments) {
    // a walk segment owns the orientation from its first instant
    if (seg.kind == SegmentSpec::Kind::kWalk) {
      s.theta = OrientationDeg(seg.heading_deg);
    }
    const double local = std::min(std::max(t - seg_start, 0.0), seg.duration_s);
    switch (seg.kind) {
      case SegmentSpec::Kind::kWalk: {
        const double h = deg2rad(seg.heading_deg);
        s.x += seg.speed_mps * local * std::cos(h);
        s.y += seg.speed_mps * local * std::sin(h);
        break;
      }
      case SegmentSpec::Kind::kSpin:
        s.theta = OrientationDeg(s.theta.deg() + seg.rate_dps * local);
        break;
      case SegmentSpec::Kind::kPause:
        break;
    }
    seg_start += seg.duration_s;
    if (t < seg_start) break;
  }
  return s;
}

std::vector<double> event_times(double rate_hz, double duration_s) {
  if (!(rate_hz > 0.0) || !std::isfinite(rate_hz)) {
    throw InvalidInputError("event rate must be positive");
  }
  if (!(duration_s > 0.0) || !std::isfinite(duration_s)) {
    throw InvalidInputError("duration must be positive");
  }
  std::vector<double> out;
  for (std::int64_t i = 0;; ++i) {
    const double t = static_cast<double>(i) / rate_hz;
    if (t >= duration_s) break;
    out.push_back(t);
  }
  return out;
}

SimEstimator parse_sim_estimator(const std::string& s) {
  if (s == "cv_baseline") return SimEstimator::kCv;
  if (s == "model") return SimEstimator::kModel;
  if (s == "ground_truth") return SimEstimator::kGroundTruth;
  throw ConfigError("unknown estimator '" + s +
                    "' (expected cv_baseline, model or ground_truth)");
}

std::string sim_estimator_name(SimEstimator e) {
  switch (e) {
    case SimEstimator::kCv: return "cv_baseline";
    case SimEstimator::kModel: return "model";
    case SimEstimator::kGroundTruth: return "ground_truth";
  }
  return "";
}

void SimConfig::validate() const {
  if (!(position_hz > 0.0) || !(orientation_hz > 0.0) || !(control_hz > 0.0)) {
    throw ConfigError("event rates must be positive");
  }
  require_finite(position_hz, "position_hz");
  require_finite(orientation_hz, "orientation_hz");
  require_finite(control_hz, "control_hz");
  if (!(follow_distance_m > 0.0) || !std::isfinite(follow_distance_m)) {
    throw ConfigError("follow_distance_m must be positive");
  }
  controller.validate();
  if (gate_window < 1) throw ConfigError("gate_window must be at least 1");
  if (!(cv_eps_m >= 0.0) || !std::isfinite(cv_eps_m)) {
    throw ConfigError("cv_eps_m must be non-negative");
  }
  if (!(goal_lead_s >= 0.0) || !std::isfinite(goal_lead_s)) {
    throw ConfigError("goal_lead_s must be non-negative");
  }
  if (!(vel_ema_alpha > 0.0) || !(vel_ema_alpha <= 1.0)) {
    throw ConfigError("vel_ema_alpha must be in (0, 1]");
  }
}

namespace {

enum EventKind { kPositionEv = 0, kOrientationEv = 1, kControlEv = 2 };

struct Event {
  double t;
  EventKind kind;
};

std::vector<Event> build_timeline(const SimConfig& cfg, double duration_s) {
  std::vector<Event> ev;
  for (double t : event_times(cfg.position_hz, duration_s)) ev.push_back({t, kPositionEv});
  for (double t : event_times(cfg.orientation_hz, duration_s)) ev.push_back({t, kOrientationEv});
  for (double t : event_times(cfg.control_hz, duration_s)) ev.push_back({t, kControlEv});
  std::stable_sort(ev.begin(), ev.end(), [](const Event& a, const Event& b) {
    if (a.t != b.t) return a.t < b.t;
    return a.kind < b.kind;
  });
  return ev;
}

}  // namespace

SimResult run_scenario(const Scenario& sc, SimEstimator estimator,
                       const ModelParams<double>* model, const SimConfig& cfg) {
  sc.validate();
  cfg.validate();
  if (estimator == SimEstimator::kModel && model == nullptr) {
    throw InvalidInputError("model estimator needs model parameters");
  }

  const double control_dt = 1.0 / cfg.control_hz;
  SimResult result;
  RobotState robot;
  {
    const GoalPose g0 = goal_for(cfg.task, person_state_at(sc, 0.0),
                                 cfg.follow_distance_m);
    robot = {g0.x, g0.y, g0.theta};
  }

  Rng pos_rng(split_seed(sc.seed, "position-noise"));
  const std::uint64_t skel_seed = split_seed(sc.seed, "skeleton-stream");

  bool have_fix = false;
  Eigen::Vector2d fix{0.0, 0.0};
  double fix_t = 0.0;
  Eigen::Vector2d vel{0.0, 0.0};
  bool have_vel = false;

  OrientationDeg cv_theta;  // starts at 0 until motion says otherwise
  double est_theta_deg = 0.0;
  double est_conf = 0.0;
  TemporalGate gate(cfg.gate_window);
  std::int64_t orient_idx = 0;

  for (const auto& [t, kind] : build_timeline(cfg, sc.duration_s)) {
    const PersonState person = person_state_at(sc, t);
    switch (kind) {
      case kPositionEv: {
        Eigen::Vector2d meas{person.x, person.y};
        if (sc.noise.position_sigma_m > 0.0) {
          meas.x() += pos_rng.normal(0.0, sc.noise.position_sigma_m);
          meas.y() += pos_rng.normal(0.0, sc.noise.position_sigma_m);
        }
        if (have_fix) {
          const double dt_fix = t - fix_t;
          cv_theta = cv_orientation(fix, meas, cv_theta, cfg.cv_eps_m);
          if (dt_fix > 0.0) {
            const Eigen::Vector2d raw = (meas - fix) / dt_fix;
            vel = have_vel
                      ? (cfg.vel_ema_alpha * raw + (1.0 - cfg.vel_ema_alpha) * vel).eval()
                      : raw;
            have_vel = true;
          }
        }
        fix = meas;
        fix_t = t;
        have_fix = true;
        break;
      }
      case kOrientationEv: {
        switch (estimator) {
          case SimEstimator::kGroundTruth:
            est_theta_deg = person.theta.deg();
            est_conf = 1.0;
            break;
          case SimEstimator::kCv:
            est_theta_deg = cv_theta.deg();
            est_conf = 1.0;
            break;
          case SimEstimator::kModel: {
            const Sample view = synthesize(
                person.theta, sc.occlusion, sc.noise.skeleton_sigma,
                split_seed(skel_seed, "frame",
                           static_cast<std::uint64_t>(orient_idx)),
                orient_idx);
            const Prediction<double> pred = predict(*model, view.skeleton);
            gate.push(pred.orientation, pred.confidence);
            const GateEntry sel = gate.current_entry();
            est_theta_deg = sel.orientation.deg();
            est_conf = sel.confidence;
            break;
          }
        }
        ++orient_idx;
        break;
      }
      case kControlEv: {
        const GoalPose ideal = goal_for(cfg.task, person, cfg.follow_distance_m);
        PersonState believed;
        if (have_fix) {
          const double ahead = (t - fix_t) + cfg.goal_lead_s;
          believed.x = fix.x() + vel.x() * ahead;
          believed.y = fix.y() + vel.y() * ahead;
        } else {
          believed.x = person.x;
          believed.y = person.y;
        }
        believed.theta = OrientationDeg(est_theta_deg);
        const GoalPose target = goal_for(cfg.task, believed, cfg.follow_distance_m);

        result.frames.push_back(
            {t, person, robot, ideal, est_theta_deg, est_conf});
        const Command cmd = plan_command(robot, target, cfg.controller);
        robot = step_robot(robot, cmd, control_dt);
        break;
      }
    }
  }
  result.ate_m = trajectory_ate(result, 0.0);
  return result;
}

double ate(std::span<const Eigen::Vector2d> actual,
           std::span<const Eigen::Vector2d> reference) {
  if (actual.size() != reference.size()) {
    throw InvalidInputError("trajectories differ in length");
  }
  if (actual.empty()) throw InvalidInputError("trajectories are empty");
  double acc = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    acc += (actual[i] - reference[i]).squaredNorm();
  }
  return std::sqrt(acc / static_cast<double>(actual.size()));
}

double trajectory_ate(const SimResult& result, double t_from) {
  std::vector<Eigen::Vector2d> actual;
  std::vector<Eigen::Vector2d> reference;
  for (const SimFrame& f : result.frames) {
    if (f.t < t_from) continue;
    actual.emplace_back(f.robot.x, f.robot.y);
    reference.emplace_back(f.goal.x, f.goal.y);
  }
  if (actual.empty()) {
    throw InvalidInputError("no frames at or after the requested start time");
  }
  return ate(actual, reference);
}

void write_trajectory_csv(const std::string& path, const SimResult& result) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << "t,px,py,ptheta,rx,ry,rtheta,gx,gy,gtheta,est_theta,conf\n";
  for (const SimFrame& f : result.frames) {
    out << fmt_g9(f.t) << ',' << fmt_g9(f.person.x) << ',' << fmt_g9(f.person.y)
        << ',' << fmt_g9(f.person.theta.deg()) << ',' << fmt_g9(f.robot.x) << ','
        << fmt_g9(f.robot.y) << ',' << fmt_g9(f.robot.heading.deg()) << ','
        << fmt_g9(f.goal.x) << ',' << fmt_g9(f.goal.y) << ','
        << fmt_g9(f.goal.theta.deg()) << ',' << fmt_g9(f.est_theta_deg) << ','
        << fmt_g9(f.confidence) << '\n';
  }
  if (!out) throw IoError("failed writing " + path);
}

}  // namespace horient
