#include "tollsafe/observations.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "tollsafe/error.hpp"

namespace tollsafe {

namespace {

struct FrameSpeedStats {
  double speed_sum = 0.0;
  long count = 0;
};

// Trailing-window congestion flags per frame: a frame is congested when the
// mean instantaneous speed of all in-area vehicles over the preceding window
// falls below the threshold.
std::map<long, bool> congestion_flags(const std::vector<VehicleTrack>& tracks,
                                      const ZoneMap& zones,
                                      const CongestionFilterConfig& config, int fps,
                                      long fmin, long fmax) {
  std::map<long, FrameSpeedStats> per_frame;
  for (const VehicleTrack& t : tracks) {
    for (size_t i = 0; i < t.frames.size(); ++i) {
      const TrajectoryFrame& f = t.frames[i];
      if (!in_study_area({f.x, f.y}, zones)) continue;
      auto& st = per_frame[f.frame];
      st.speed_sum += t.speed[i];
      st.count += 1;
    }
  }
  long window = std::max<long>(1, static_cast<long>(config.window_seconds * fps));
  std::map<long, bool> flags;
  double sum = 0.0;
  long count = 0;
  long tail = fmin;  // first frame still inside the window
  for (long f = fmin; f <= fmax; ++f) {
    auto it = per_frame.find(f);
    if (it != per_frame.end()) {
      sum += it->second.speed_sum;
      count += it->second.count;
    }
    while (f - tail + 1 > window) {
      auto drop = per_frame.find(tail);
      if (drop != per_frame.end()) {
        sum -= drop->second.speed_sum;
        count -= drop->second.count;
      }
      ++tail;
    }
    flags[f] = count > 0 && (sum / count) < config.speed_threshold;
  }
  return flags;
}

RoleCovariates covariates_for(const VehicleTrack& track, size_t idx) {
  RoleCovariates rc;
  rc.avg_speed = track.avg_speed_1s[idx];
  rc.acceleration = track.acceleration[idx];
  rc.angular_speed = track.angular_speed[idx];
  rc.vclass = track.vclass;
  return rc;
}

Vec2 zone_point(const KinematicState& a, const KinematicState& b,
                const KernelConfig& kernel) {
  if (a.speed > 0.0 && b.speed > 0.0) {
    try {
      OverlapRegion r = overlap_region(a, b, kernel);
      if (!r.degenerate)
        return (r.a + r.b + r.c + r.d) * 0.25;
    } catch (const Error&) {
      // fall through to the midpoint
    }
  }
  return (a.centroid() + b.centroid()) * 0.5;
}

}  // namespace

std::vector<InteractionObservation> build_observations(
    std::vector<VehicleTrack>& tracks, const ZoneMap& zones,
    const BuildConfig& config, std::vector<std::string>* skipped) {
  auto note = [&](const std::string& msg) {
    if (skipped) skipped->push_back(msg);
  };

  std::vector<VehicleTrack*> usable;
  for (VehicleTrack& t : tracks) {
    if (t.frames.size() < 2) {
      note("track " + t.vehicle_id + " too short, ignored");
      continue;
    }
    if (!t.derived) derive_kinematics(t, config.fps);
    usable.push_back(&t);
  }
  if (usable.empty()) return {};

  long fmin = std::numeric_limits<long>::max(), fmax = std::numeric_limits<long>::min();
  for (VehicleTrack* t : usable) {
    fmin = std::min(fmin, t->frames.front().frame);
    fmax = std::max(fmax, t->frames.back().frame);
  }
  auto congested = congestion_flags(tracks, zones, config.congestion, config.fps, fmin, fmax);

  const long stride = std::max(1, config.sampling.stride_frames);
  std::vector<InteractionObservation> out;

  struct BestPick {
    bool have = false;
    TtcResult result;
    long frame = 0;
    size_t idx_a = 0, idx_b = 0;
  };

  for (long start = fmin; start <= fmax; start += stride) {
    long end = std::min(fmax, start + stride - 1);
    // candidate evaluations per canonical pair within the stride
    std::map<std::pair<std::string, std::string>, BestPick> best;
    for (long frame = start; frame <= end; ++frame) {
      if (congested[frame]) continue;
      // indices into `tracks`
      auto pairs = pair_candidates(tracks, frame, config.sampling.gating_radius_m);
      for (auto [ia, ib] : pairs) {
        VehicleTrack& ta = tracks[ia];
        VehicleTrack& tb = tracks[ib];
        if (!ta.derived || !tb.derived) continue;
        auto idx_a = ta.index_of_frame(frame);
        auto idx_b = tb.index_of_frame(frame);
        if (!idx_a || !idx_b) continue;
        if (std::isnan(ta.avg_speed_1s[*idx_a]) || std::isnan(tb.avg_speed_1s[*idx_b]))
          continue;  // covariates undefined during the first second
        auto sa = state_at(ta, frame);
        auto sb = state_at(tb, frame);

        TtcResult result;
        try {
          result = modified_ttc(*sa, *sb, config.kernel);
        } catch (const Error& e) {
          note("frame " + std::to_string(frame) + " pair " + ta.vehicle_id + "|" +
               tb.vehicle_id + ": " + e.what());
          continue;
        }
        auto key = ta.vehicle_id < tb.vehicle_id
                       ? std::make_pair(ta.vehicle_id, tb.vehicle_id)
                       : std::make_pair(tb.vehicle_id, ta.vehicle_id);
        BestPick& pick = best[key];
        if (!pick.have || result.ttc < pick.result.ttc) {
          pick.have = true;
          pick.result = result;
          pick.frame = frame;
          pick.idx_a = ia;
          pick.idx_b = ib;
        }
      }
    }

    for (auto& [key, pick] : best) {
      if (!pick.have) continue;
      VehicleTrack& ta = tracks[pick.idx_a];
      VehicleTrack& tb = tracks[pick.idx_b];
      auto sa = state_at(ta, pick.frame);
      auto sb = state_at(tb, pick.frame);

      auto [type, severity] = classify(pick.result, config.thresholds, config.kernel);
      if (type && *type == ConflictType::Unsupported) {
        note("pair " + key.first + "|" + key.second + " frame " +
             std::to_string(pick.frame) + ": unsupported geometry (alpha " +
             std::to_string(pick.result.alpha_deg) + " deg)");
        continue;
      }

      Vec2 zp = zone_point(*sa, *sb, config.kernel);
      if (!in_study_area(zp, zones)) continue;

      InteractionObservation obs;
      obs.group_id = key.first + "|" + key.second;
      obs.frame = pick.frame;
      obs.ttc = pick.result.ttc;
      if (type)
        obs.family = *type;
      else
        obs.family = pick.result.alpha_deg < config.kernel.parallel_cutoff_deg
                         ? ConflictType::RearEnd
                         : ConflictType::Sideswipe;
      obs.outcome = severity;
      if (auto z = assign_zone(zp, zones)) obs.zone = *z;
      obs.zone1 = obs.zone == "Zone 1" ? 1 : 0;
      obs.zone2 = obs.zone == "Zone 2" ? 1 : 0;
      obs.electronic_involved =
          (ta.payment == Payment::Electronic || tb.payment == Payment::Electronic) ? 1 : 0;

      const bool a_leads = pick.result.leader_id == ta.vehicle_id;
      VehicleTrack& lead = a_leads ? ta : tb;
      VehicleTrack& follow = a_leads ? tb : ta;
      obs.leader = covariates_for(lead, *lead.index_of_frame(pick.frame));
      obs.follower = covariates_for(follow, *follow.index_of_frame(pick.frame));
      out.push_back(std::move(obs));
    }
  }

  std::sort(out.begin(), out.end(),
            [](const InteractionObservation& a, const InteractionObservation& b) {
              return std::tie(a.group_id, a.frame) < std::tie(b.group_id, b.frame);
            });
  return out;
}

namespace {

struct Extractor {
  std::string name;
  double (*get)(const InteractionObservation&);
};

const std::vector<Extractor>& field_extractors() {
  static const std::vector<Extractor> extractors = {
      {"ttc", [](const InteractionObservation& o) { return o.ttc; }},
      {"electronic_involved", [](const InteractionObservation& o) { return double(o.electronic_involved); }},
      {"zone1", [](const InteractionObservation& o) { return double(o.zone1); }},
      {"zone2", [](const InteractionObservation& o) { return double(o.zone1 == 0 && o.zone2 == 1); }},
      {"zone3", [](const InteractionObservation& o) { return double(o.zone1 == 0 && o.zone2 == 0); }},
      {"leader_avg_speed", [](const InteractionObservation& o) { return o.leader.avg_speed; }},
      {"leader_acceleration", [](const InteractionObservation& o) { return o.leader.acceleration; }},
      {"leader_angular_speed", [](const InteractionObservation& o) { return o.leader.angular_speed; }},
      {"leader_private_car", [](const InteractionObservation& o) { return o.leader.vclass == VehicleClass::PrivateCar ? 1.0 : 0.0; }},
      {"leader_taxi", [](const InteractionObservation& o) { return o.leader.vclass == VehicleClass::Taxi ? 1.0 : 0.0; }},
      {"leader_goods_vehicle", [](const InteractionObservation& o) { return o.leader.vclass == VehicleClass::GoodsVehicle ? 1.0 : 0.0; }},
      {"leader_bus", [](const InteractionObservation& o) { return o.leader.vclass == VehicleClass::Bus ? 1.0 : 0.0; }},
      {"leader_motorcycle", [](const InteractionObservation& o) { return o.leader.vclass == VehicleClass::Motorcycle ? 1.0 : 0.0; }},
      {"follower_avg_speed", [](const InteractionObservation& o) { return o.follower.avg_speed; }},
      {"follower_acceleration", [](const InteractionObservation& o) { return o.follower.acceleration; }},
      {"follower_angular_speed", [](const InteractionObservation& o) { return o.follower.angular_speed; }},
      {"follower_private_car", [](const InteractionObservation& o) { return o.follower.vclass == VehicleClass::PrivateCar ? 1.0 : 0.0; }},
      {"follower_taxi", [](const InteractionObservation& o) { return o.follower.vclass == VehicleClass::Taxi ? 1.0 : 0.0; }},
      {"follower_goods_vehicle", [](const InteractionObservation& o) { return o.follower.vclass == VehicleClass::GoodsVehicle ? 1.0 : 0.0; }},
      {"follower_bus", [](const InteractionObservation& o) { return o.follower.vclass == VehicleClass::Bus ? 1.0 : 0.0; }},
      {"follower_motorcycle", [](const InteractionObservation& o) { return o.follower.vclass == VehicleClass::Motorcycle ? 1.0 : 0.0; }},
  };
  return extractors;
}

}  // namespace

double observation_field(const InteractionObservation& o, const std::string& name) {
  for (const Extractor& ex : field_extractors())
    if (ex.name == name) return ex.get(o);
  throw config_error("unknown observation field: " + name);
}

std::vector<FamilySummary> summarize_dataset(
    const std::vector<InteractionObservation>& observations) {
  if (observations.empty()) throw data_error("Empty: no observations to summarize");

  std::vector<FamilySummary> out;
  for (ConflictType family : {ConflictType::RearEnd, ConflictType::Sideswipe}) {
    std::vector<const InteractionObservation*> members;
    for (const auto& o : observations)
      if (o.family == family) members.push_back(&o);
    if (members.empty()) continue;

    FamilySummary fs;
    fs.family = family;
    for (const Extractor& ex : field_extractors()) {
      if (ex.name == "ttc") continue;  // not a covariate of the summary table
      CovariateSummary cs;
      cs.name = ex.name;
      double sum = 0.0;
      cs.min = kInfinity;
      cs.max = -kInfinity;
      for (const auto* o : members) {
        double v = ex.get(*o);
        sum += v;
        cs.min = std::min(cs.min, v);
        cs.max = std::max(cs.max, v);
      }
      size_t n = members.size();
      cs.mean = sum / n;
      double ss = 0.0;
      for (const auto* o : members) {
        double d = ex.get(*o) - cs.mean;
        ss += d * d;
      }
      cs.sd = n > 1 ? std::sqrt(ss / (n - 1)) : 0.0;  // sample SD
      fs.covariates.push_back(cs);
    }
    for (const auto* o : members) {
      switch (o->outcome) {
        case ConflictSeverity::None: ++fs.count_none; break;
        case ConflictSeverity::Slight: ++fs.count_slight; break;
        case ConflictSeverity::Severe: ++fs.count_severe; break;
      }
    }
    out.push_back(std::move(fs));
  }
  return out;
}

const std::vector<std::string>& observation_columns() {
  static const std::vector<std::string> cols = {
      "group_id", "frame", "family", "outcome", "ttc", "zone",
      "electronic_involved", "zone1", "zone2",
      "leader_avg_speed", "leader_acceleration", "leader_angular_speed", "leader_class",
      "follower_avg_speed", "follower_acceleration", "follower_angular_speed",
      "follower_class"};
  return cols;
}

void write_observations(const std::vector<InteractionObservation>& observations,
                        const std::string& path) {
  std::ofstream out(path);
  if (!out) throw data_error("cannot write observations: " + path);
  out << std::setprecision(17);
  const auto& cols = observation_columns();
  for (size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << "\n";
  for (const auto& o : observations) {
    out << o.group_id << ',' << o.frame << ',' << to_string(o.family) << ','
        << to_string(o.outcome) << ',';
    if (std::isfinite(o.ttc))
      out << o.ttc;
    else
      out << "inf";
    out << ',' << o.zone << ',' << o.electronic_involved << ',' << o.zone1 << ','
        << o.zone2 << ',' << o.leader.avg_speed << ',' << o.leader.acceleration << ','
        << o.leader.angular_speed << ',' << to_string(o.leader.vclass) << ','
        << o.follower.avg_speed << ',' << o.follower.acceleration << ','
        << o.follower.angular_speed << ',' << to_string(o.follower.vclass) << "\n";
  }
}

std::vector<InteractionObservation> read_observations(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open observations: " + path);
  std::string line;
  if (!std::getline(in, line)) throw data_error("empty observation file: " + path);

  std::vector<InteractionObservation> out;
  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) f.push_back(field);
    if (f.size() != observation_columns().size())
      throw data_error("observations " + path + " line " + std::to_string(line_no) +
                       ": wrong field count");
    InteractionObservation o;
    o.group_id = f[0];
    o.frame = std::stol(f[1]);
    o.family = f[2] == "sideswipe" ? ConflictType::Sideswipe : ConflictType::RearEnd;
    o.outcome = f[3] == "severe"   ? ConflictSeverity::Severe
                : f[3] == "slight" ? ConflictSeverity::Slight
                                   : ConflictSeverity::None;
    o.ttc = f[4] == "inf" ? kInfinity : std::stod(f[4]);
    o.zone = f[5];
    o.electronic_involved = std::stoi(f[6]);
    o.zone1 = std::stoi(f[7]);
    o.zone2 = std::stoi(f[8]);
    o.leader.avg_speed = std::stod(f[9]);
    o.leader.acceleration = std::stod(f[10]);
    o.leader.angular_speed = std::stod(f[11]);
    o.leader.vclass = vehicle_class_from_string(f[12]);
    o.follower.avg_speed = std::stod(f[13]);
    o.follower.acceleration = std::stod(f[14]);
    o.follower.angular_speed = std::stod(f[15]);
    o.follower.vclass = vehicle_class_from_string(f[16]);
    out.push_back(std::move(o));
  }
  return out;
}

std::string render_summary(const std::vector<FamilySummary>& summaries) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(2);
  for (const auto& fs : summaries) {
    os << (fs.family == ConflictType::RearEnd ? "Rear-end" : "Sideswipe")
       << " interaction and conflict\n";
    os << "  " << std::left << std::setw(28) << "Factor" << std::right
       << std::setw(9) << "Mean" << std::setw(9) << "S.D." << std::setw(9) << "Min."
       << std::setw(9) << "Max." << "\n";
    for (const auto& c : fs.covariates) {
      os << "  " << std::left << std::setw(28) << c.name << std::right
         << std::setw(9) << c.mean << std::setw(9) << c.sd << std::setw(9) << c.min
         << std::setw(9) << c.max << "\n";
    }
    size_t total = fs.total();
    auto pct = [&](size_t n) { return total ? 100.0 * n / total : 0.0; };
    os << "  No conflict " << fs.count_none << " (" << pct(fs.count_none) << "%)\n";
    os << "  Slight conflicts " << fs.count_slight << " (" << pct(fs.count_slight)
       << "%)\n";
    os << "  Severe conflicts " << fs.count_severe << " (" << pct(fs.count_severe)
       << "%)\n";
    os << "  Total observations " << total << "\n\n";
  }
  return os.str();
}

}  // namespace tollsafe
