#include "tollsafe/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "tollsafe/error.hpp"

namespace tollsafe {

const char* to_string(VehicleClass c) {
  switch (c) {
    case VehicleClass::PrivateCar: return "private_car";
    case VehicleClass::Taxi: return "taxi";
    case VehicleClass::GoodsVehicle: return "goods_vehicle";
    case VehicleClass::Bus: return "bus";
    case VehicleClass::Motorcycle: return "motorcycle";
  }
  return "private_car";
}

const char* to_string(Payment p) {
  return p == Payment::Electronic ? "electronic" : "manual";
}

VehicleClass vehicle_class_from_string(const std::string& s) {
  if (s == "private_car" || s == "car") return VehicleClass::PrivateCar;
  if (s == "taxi") return VehicleClass::Taxi;
  if (s == "goods_vehicle" || s == "goods") return VehicleClass::GoodsVehicle;
  if (s == "bus") return VehicleClass::Bus;
  if (s == "motorcycle") return VehicleClass::Motorcycle;
  throw data_error("SchemaMismatch: unknown vehicle class '" + s + "'");
}

Payment payment_from_string(const std::string& s) {
  if (s == "manual") return Payment::Manual;
  if (s == "electronic") return Payment::Electronic;
  throw data_error("SchemaMismatch: unknown payment type '" + s + "'");
}

std::optional<size_t> VehicleTrack::index_of_frame(long frame) const {
  auto it = std::lower_bound(frames.begin(), frames.end(), frame,
                             [](const TrajectoryFrame& f, long v) { return f.frame < v; });
  if (it == frames.end() || it->frame != frame) return std::nullopt;
  return static_cast<size_t>(it - frames.begin());
}

namespace {

std::vector<std::string> split(const std::string& line, char delim) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, delim)) out.push_back(field);
  if (!line.empty() && line.back() == delim) out.push_back("");
  return out;
}

double parse_double(const std::string& s, size_t line_no, const std::string& col) {
  try {
    size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw data_error("SchemaMismatch: line " + std::to_string(line_no) +
                     ": cannot parse '" + s + "' in column " + col);
  }
}

}  // namespace

LoadResult load_trajectories(const std::string& path, const LoadConfig& config) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open trajectory file: " + path);

  LoadResult result;
  std::string line;
  if (!std::getline(in, line)) {
    result.warnings.push_back("empty trajectory file: " + path);
    return result;
  }

  auto header = split(line, config.delimiter);
  const char* required[] = {"frame", "vehicle_id", "x",     "y",      "length",
                            "width", "heading",    "class", "payment"};
  std::map<std::string, size_t> col;
  for (const char* field : required) {
    const std::string& name = config.columns.at(field);
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end())
      throw data_error("SchemaMismatch: missing column '" + name + "' in " + path);
    col[field] = static_cast<size_t>(it - header.begin());
  }

  std::map<std::string, VehicleTrack> by_vehicle;
  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto fields = split(line, config.delimiter);
    if (fields.size() < header.size())
      throw data_error("SchemaMismatch: line " + std::to_string(line_no) + ": expected " +
                       std::to_string(header.size()) + " fields, got " +
                       std::to_string(fields.size()));

    const std::string& id = fields[col["vehicle_id"]];
    TrajectoryFrame f;
    f.frame = static_cast<long>(parse_double(fields[col["frame"]], line_no, "frame"));
    f.x = parse_double(fields[col["x"]], line_no, "x");
    f.y = parse_double(fields[col["y"]], line_no, "y");
    f.length = parse_double(fields[col["length"]], line_no, "length");
    f.width = parse_double(fields[col["width"]], line_no, "width");
    f.heading_deg = normalize_heading(parse_double(fields[col["heading"]], line_no, "heading"));
    if (f.length <= 0.0 || f.width <= 0.0)
      throw data_error("SchemaMismatch: line " + std::to_string(line_no) +
                       ": non-positive dimensions");

    VehicleClass vc = vehicle_class_from_string(fields[col["class"]]);
    Payment pay = payment_from_string(fields[col["payment"]]);

    auto [it, inserted] = by_vehicle.try_emplace(id);
    VehicleTrack& track = it->second;
    if (inserted) {
      track.vehicle_id = id;
      track.vclass = vc;
      track.payment = pay;
    } else {
      if (track.vclass != vc || track.payment != pay)
        throw data_error("SchemaMismatch: line " + std::to_string(line_no) +
                         ": class/payment changed for vehicle " + id);
      if (!track.frames.empty() && f.frame <= track.frames.back().frame)
        throw data_error("NonMonotoneFrames: line " + std::to_string(line_no) +
                         ": frame " + std::to_string(f.frame) +
                         " does not increase for vehicle " + id);
    }
    track.frames.push_back(f);
  }

  result.tracks.reserve(by_vehicle.size());
  for (auto& [id, track] : by_vehicle) result.tracks.push_back(std::move(track));
  return result;
}

void derive_kinematics(VehicleTrack& track, int fps) {
  size_t n = track.frames.size();
  if (n < 2) throw data_error("TooShort: track " + track.vehicle_id +
                              " needs at least 2 frames");
  const double nan = std::numeric_limits<double>::quiet_NaN();
  track.speed.assign(n, 0.0);
  track.avg_speed_1s.assign(n, nan);
  track.acceleration.assign(n, 0.0);
  track.angular_speed.assign(n, 0.0);
  track.angular_speed_signed.assign(n, 0.0);

  for (size_t i = 1; i < n; ++i) {
    Vec2 prev{track.frames[i - 1].x, track.frames[i - 1].y};
    Vec2 cur{track.frames[i].x, track.frames[i].y};
    track.speed[i] = norm(cur - prev) * fps;

    double dh = track.frames[i].heading_deg - track.frames[i - 1].heading_deg;
    while (dh > 180.0) dh -= 360.0;
    while (dh < -180.0) dh += 360.0;
    // clockwise is the positive direction
    track.angular_speed_signed[i] = -dh * fps;
    track.angular_speed[i] = std::fabs(dh) * fps;
  }
  track.speed[0] = track.speed[1];
  track.angular_speed_signed[0] = track.angular_speed_signed[1];
  track.angular_speed[0] = track.angular_speed[1];

  for (size_t i = 0; i < n; ++i) {
    if (i == 0)
      track.acceleration[i] = (track.speed[1] - track.speed[0]) * fps;
    else if (i == n - 1)
      track.acceleration[i] = (track.speed[i] - track.speed[i - 1]) * fps;
    else
      track.acceleration[i] = (track.speed[i + 1] - track.speed[i - 1]) * fps / 2.0;
  }

  size_t window = static_cast<size_t>(fps);
  double running = 0.0;
  for (size_t i = 0; i < n; ++i) {
    if (i >= window) {
      if (i == window) {
        for (size_t k = 0; k < window; ++k) running += track.speed[k];
      } else {
        running += track.speed[i - 1] - track.speed[i - 1 - window];
      }
      track.avg_speed_1s[i] = running / static_cast<double>(window);
    }
  }
  track.derived = true;
}

std::optional<KinematicState> state_at(const VehicleTrack& track, long frame) {
  auto idx = track.index_of_frame(frame);
  if (!idx) return std::nullopt;
  const TrajectoryFrame& f = track.frames[*idx];
  KinematicState s;
  s.x = f.x;
  s.y = f.y;
  s.heading_deg = f.heading_deg;
  s.speed = track.derived ? track.speed[*idx] : 0.0;
  s.length = f.length;
  s.width = f.width;
  s.vehicle_id = track.vehicle_id;
  return s;
}

std::vector<std::pair<size_t, size_t>> pair_candidates(
    const std::vector<VehicleTrack>& tracks, long frame, double gating_radius_m) {
  std::vector<std::pair<size_t, Vec2>> present;
  for (size_t i = 0; i < tracks.size(); ++i) {
    if (auto idx = tracks[i].index_of_frame(frame)) {
      const TrajectoryFrame& f = tracks[i].frames[*idx];
      present.emplace_back(i, Vec2{f.x, f.y});
    }
  }
  std::vector<std::pair<size_t, size_t>> pairs;
  for (size_t a = 0; a < present.size(); ++a)
    for (size_t b = a + 1; b < present.size(); ++b)
      if (norm(present[a].second - present[b].second) <= gating_radius_m)
        pairs.emplace_back(present[a].first, present[b].first);
  return pairs;
}

}  // namespace tollsafe
