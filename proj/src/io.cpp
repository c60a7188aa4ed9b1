// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The echomap authors

#include "echomap/io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace echomap {

namespace {

static_assert(std::endian::native == std::endian::little, "little-endian host required");

void put_u16(std::string& out, std::uint16_t v) { out.append(reinterpret_cast<const char*>(&v), 2); }
void put_u32(std::string& out, std::uint32_t v) { out.append(reinterpret_cast<const char*>(&v), 4); }

std::uint16_t get_u16(const std::string& s, std::size_t pos) {
  std::uint16_t v = 0;
  std::memcpy(&v, s.data() + pos, 2);
  return v;
}
std::uint32_t get_u32(const std::string& s, std::size_t pos) {
  std::uint32_t v = 0;
  std::memcpy(&v, s.data() + pos, 4);
  return v;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string interleave_f32(const MultichannelRecording& rec) {
  std::string out;
  const std::size_t n = rec.length();
  out.reserve(n * rec.channel_count() * 4);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& ch : rec.channels) {
      const auto v = static_cast<float>(ch[i]);
      out.append(reinterpret_cast<const char*>(&v), 4);
    }
  }
  return out;
}

MultichannelRecording deinterleave_f32(const char* data, std::size_t bytes, std::size_t channels,
                                       double sample_rate) {
  if (channels == 0) throw std::runtime_error("recording: zero channels");
  const std::size_t frames = bytes / (4 * channels);
  MultichannelRecording rec;
  rec.sample_rate = sample_rate;
  rec.channels.assign(channels, std::vector<double>(frames));
  for (std::size_t i = 0; i < frames; ++i) {
    for (std::size_t m = 0; m < channels; ++m) {
      float v = 0.0f;
      std::memcpy(&v, data + (i * channels + m) * 4, 4);
      rec.channels[m][i] = v;
    }
  }
  return rec;
}

std::string svg_header(double w, double h) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + format_number(w) + "\" height=\"" +
         format_number(h) + "\" viewBox=\"0 0 " + format_number(w) + " " + format_number(h) +
         "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

}  // namespace

void write_wav(const std::filesystem::path& path, const MultichannelRecording& rec) {
  rec.validate();
  const auto channels = static_cast<std::uint16_t>(rec.channel_count());
  const auto data = interleave_f32(rec);
  std::string out;
  out += "RIFF";
  put_u32(out, static_cast<std::uint32_t>(4 + 26 + 12 + 8 + data.size()));
  out += "WAVE";
  out += "fmt ";
  put_u32(out, 18);
  put_u16(out, 3);  // IEEE float
  put_u16(out, channels);
  const auto rate = static_cast<std::uint32_t>(std::lround(rec.sample_rate));
  put_u32(out, rate);
  put_u32(out, rate * channels * 4);
  put_u16(out, static_cast<std::uint16_t>(channels * 4));
  put_u16(out, 32);
  put_u16(out, 0);
  out += "fact";
  put_u32(out, 4);
  put_u32(out, static_cast<std::uint32_t>(rec.length()));
  out += "data";
  put_u32(out, static_cast<std::uint32_t>(data.size()));
  out += data;
  write_text(path, out);
}

MultichannelRecording read_wav(const std::filesystem::path& path) {
  const auto s = read_file(path);
  if (s.size() < 12 || s.compare(0, 4, "RIFF") != 0 || s.compare(8, 4, "WAVE") != 0)
    throw std::runtime_error(path.string() + ": not a RIFF/WAVE file");
  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  std::size_t pos = 12;
  while (pos + 8 <= s.size()) {
    const std::string id = s.substr(pos, 4);
    const std::uint32_t size = get_u32(s, pos + 4);
    const std::size_t body = pos + 8;
    if (body + size > s.size()) throw std::runtime_error(path.string() + ": truncated chunk " + id);
    if (id == "fmt ") {
      format = get_u16(s, body);
      channels = get_u16(s, body + 2);
      rate = get_u32(s, body + 4);
      bits = get_u16(s, body + 14);
      if (format == 0xFFFE && size >= 26) format = get_u16(s, body + 24);
    } else if (id == "data") {
      if (channels == 0) throw std::runtime_error(path.string() + ": data before fmt chunk");
      if (format == 3 && bits == 32) return deinterleave_f32(s.data() + body, size, channels, rate);
      if (format == 1 && bits == 16) {
        MultichannelRecording rec;
        rec.sample_rate = rate;
        const std::size_t frames = size / (2u * channels);
        rec.channels.assign(channels, std::vector<double>(frames));
        for (std::size_t i = 0; i < frames; ++i) {
          for (std::size_t m = 0; m < channels; ++m) {
            std::int16_t v = 0;
            std::memcpy(&v, s.data() + body + (i * channels + m) * 2, 2);
            rec.channels[m][i] = v / 32768.0;
          }
        }
        return rec;
      }
      throw std::runtime_error(path.string() + ": unsupported sample format");
    }
    pos = body + size + (size & 1u);
  }
  throw std::runtime_error(path.string() + ": no data chunk");
}

void write_raw_f32(const std::filesystem::path& path, const MultichannelRecording& rec) {
  rec.validate();
  write_text(path, interleave_f32(rec));
  Json side;
  side["format"] = "float32le";
  side["layout"] = "interleaved";
  side["channels"] = rec.channel_count();
  side["frames"] = rec.length();
  side["sample_rate"] = rec.sample_rate;
  write_json(path.string() + ".json", side);
}

MultichannelRecording read_raw_f32(const std::filesystem::path& path) {
  const auto side = read_json(path.string() + ".json");
  if (side.value("format", "") != "float32le" || side.value("layout", "") != "interleaved")
    throw std::runtime_error(path.string() + ".json: expected interleaved float32le");
  const auto data = read_file(path);
  return deinterleave_f32(data.data(), data.size(), side.at("channels").get<std::size_t>(),
                          side.at("sample_rate").get<double>());
}

MultichannelRecording read_recording(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".wav" ? read_wav(path) : read_raw_f32(path);
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

void write_json(const std::filesystem::path& path, const Json& doc) {
  write_text(path, doc.dump(2) + "\n");
}

Json read_json(const std::filesystem::path& path) { return Json::parse(read_file(path)); }

std::string srp_csv(const SrpResult& srp) {
  std::string out = "azimuth_deg,power\n";
  for (std::size_t i = 0; i < srp.azimuths.size(); ++i)
    out += format_number(srp.azimuths[i] * 180.0 / std::numbers::pi) + "," +
           format_number(srp.power[i]) + "\n";
  return out;
}

std::string rir_csv(const EstimatedRir& rir) {
  std::string out = "tap,value\n";
  for (std::size_t i = 0; i < rir.taps.size(); ++i)
    out += std::to_string(i) + "," + format_number(rir.taps[i]) + "\n";
  return out;
}

std::string dataset_csv(const std::vector<LabeledSample>& samples) {
  std::string out = "toa_delay,beam_power,label,true_toa\n";
  for (const auto& s : samples)
    out += format_number(s.feature.toa_delay) + "," + format_number(s.feature.beam_power) + "," +
           to_string(s.label) + "," + format_number(s.true_toa) + "\n";
  return out;
}

std::string cv_csv(const CvResult& cv) {
  std::string out = "box_c,rbf_width,cv_accuracy\n";
  for (const auto& c : cv.cells)
    out += format_number(c.box_c) + "," + format_number(c.rbf_width) + "," +
           format_number(c.accuracy) + "\n";
  return out;
}

std::string map_csv(const SpatialMap& map) {
  std::string out = "x,y,accepted,pose_index,toa_delay,beam_power\n";
  for (const auto& p : map.points)
    out += format_number(p.x) + "," + format_number(p.y) + "," + (p.accepted ? "1" : "0") + "," +
           std::to_string(p.source_pose) + "," + format_number(p.feature.toa_delay) + "," +
           format_number(p.feature.beam_power) + "\n";
  return out;
}

std::string curve_csv(const AccuracyCurve& curve) {
  std::string out = to_string(curve.variable) + ",trials";
  for (const auto& m : curve.methods) {
    out += "," + m.method + "_toa";
    if (!m.doa_accuracy.empty()) out += "," + m.method + "_doa";
  }
  out += "\n";
  for (std::size_t i = 0; i < curve.values.size(); ++i) {
    out += format_number(curve.values[i]) + "," + std::to_string(curve.trials[i]);
    for (const auto& m : curve.methods) {
      out += "," + format_number(m.toa_accuracy[i]);
      if (!m.doa_accuracy.empty()) out += "," + format_number(m.doa_accuracy[i]);
    }
    out += "\n";
  }
  return out;
}

std::string trials_csv(const std::vector<TrialRecord>& records) {
  std::string out =
      "value,trial,noise_seed,snls_tau,snls_azimuth_deg,baseline_tau,true_tau,true_azimuth_deg,"
      "snls_toa_ok,snls_doa_ok,baseline_toa_ok\n";
  constexpr double deg = 180.0 / std::numbers::pi;
  for (const auto& r : records)
    out += format_number(r.value) + "," + std::to_string(r.trial) + "," +
           std::to_string(r.noise_seed) + "," + format_number(r.snls_tau) + "," +
           format_number(r.snls_azimuth * deg) + "," + format_number(r.baseline_tau) + "," +
           format_number(r.true_tau) + "," + format_number(r.true_azimuth * deg) + "," +
           (r.snls_toa_ok ? "1" : "0") + "," + (r.snls_doa_ok ? "1" : "0") + "," +
           (r.baseline_toa_ok ? "1" : "0") + "\n";
  return out;
}

Json to_json(const ToaEstimate& est, double sample_rate, double speed_of_sound) {
  return {{"tau_samples", est.tau},
          {"range_m", tau_to_range(est.tau, sample_rate, speed_of_sound)},
          {"gain", est.gain},
          {"score", est.score},
          {"confidence", est.confidence},
          {"at_boundary", est.at_boundary},
          {"low_score", est.low_score}};
}

Json to_json(const DoaEstimate& est) {
  return {{"azimuth_rad", est.azimuth},
          {"azimuth_deg", est.azimuth * 180.0 / std::numbers::pi},
          {"power", est.power}};
}

Json to_json(const EchoFeature& f) {
  return {{"toa_delay", f.toa_delay}, {"beam_power", f.beam_power}};
}

Json to_json(const MapMetrics& m) {
  return {{"wall_fraction", m.wall_fraction},
          {"spurious_count", m.spurious_count},
          {"accepted_count", m.accepted_count}};
}

Json to_json(const AccuracyCurve& curve) {
  Json doc;
  doc["variable"] = to_string(curve.variable);
  doc["values"] = curve.values;
  doc["trials"] = curve.trials;
  Json methods = Json::array();
  for (const auto& m : curve.methods) {
    Json j{{"method", m.method}, {"toa_accuracy", m.toa_accuracy}};
    if (!m.doa_accuracy.empty()) j["doa_accuracy"] = m.doa_accuracy;
    methods.push_back(j);
  }
  doc["methods"] = methods;
  return doc;
}

Json to_json(const SvmModel& model) {
  Json sv = Json::array();
  for (const auto& v : model.support_vectors) sv.push_back({v[0], v[1]});
  return {{"kind", "rbf_svm"},
          {"features", {"toa_delay", "beam_power_db"}},
          {"positive_class", "wall"},
          {"box_c", model.box_c},
          {"rbf_width", model.rbf_width},
          {"bias", model.bias},
          {"feat_mean", {model.feat_mean[0], model.feat_mean[1]}},
          {"feat_std", {model.feat_std[0], model.feat_std[1]}},
          {"support_vectors", sv},
          {"dual_coeffs", model.dual_coeffs}};
}

SvmModel svm_from_json(const Json& doc) {
  SvmModel m;
  if (doc.value("kind", "") != "rbf_svm") throw std::runtime_error("model.kind: expected rbf_svm");
  m.box_c = doc.at("box_c").get<double>();
  m.rbf_width = doc.at("rbf_width").get<double>();
  m.bias = doc.at("bias").get<double>();
  m.feat_mean = doc.at("feat_mean").get<std::array<double, 2>>();
  m.feat_std = doc.at("feat_std").get<std::array<double, 2>>();
  m.support_vectors = doc.at("support_vectors").get<std::vector<std::array<double, 2>>>();
  m.dual_coeffs = doc.at("dual_coeffs").get<std::vector<double>>();
  if (m.support_vectors.size() != m.dual_coeffs.size())
    throw std::runtime_error("model.dual_coeffs: length differs from support_vectors");
  if (!(m.feat_std[0] > 0.0 && m.feat_std[1] > 0.0))
    throw std::runtime_error("model.feat_std: must be > 0");
  if (!(m.rbf_width > 0.0)) throw std::runtime_error("model.rbf_width: must be > 0");
  return m;
}

std::string map_svg(const SpatialMap& map) {
  constexpr double kScale = 60.0;
  constexpr double kPad = 40.0;
  const double w = map.room.length * kScale + 2 * kPad;
  const double h = map.room.width * kScale + 2 * kPad;
  auto px = [&](double x) { return format_number(kPad + x * kScale); };
  auto py = [&](double y) { return format_number(h - kPad - y * kScale); };

  std::string out = svg_header(w, h);
  out += "<rect x=\"" + px(0) + "\" y=\"" + py(map.room.width) + "\" width=\"" +
         format_number(map.room.length * kScale) + "\" height=\"" +
         format_number(map.room.width * kScale) +
         "\" fill=\"none\" stroke=\"black\" stroke-width=\"3\"/>\n";
  if (!map.trajectory.poses.empty()) {
    out += "<polyline fill=\"none\" stroke=\"#999\" stroke-dasharray=\"4 3\" points=\"";
    for (const auto& p : map.trajectory.poses) out += px(p.x) + "," + py(p.y) + " ";
    out += "\"/>\n";
  }
  for (const auto& p : map.points) {
    if (p.accepted) {
      out += "<circle cx=\"" + px(p.x) + "\" cy=\"" + py(p.y) + "\" r=\"3\" fill=\"#1f77b4\"/>\n";
    } else {
      const double cx = kPad + p.x * kScale, cy = h - kPad - p.y * kScale;
      out += "<path d=\"M" + format_number(cx - 3) + " " + format_number(cy - 3) + " L" +
             format_number(cx + 3) + " " + format_number(cy + 3) + " M" + format_number(cx - 3) +
             " " + format_number(cy + 3) + " L" + format_number(cx + 3) + " " +
             format_number(cy - 3) + "\" stroke=\"#d62728\" stroke-width=\"1.5\"/>\n";
    }
  }
  out += "<text x=\"" + format_number(kPad) + "\" y=\"20\" font-family=\"sans-serif\" "
         "font-size=\"13\">dots: accepted, crosses: rejected, dashed: trajectory</text>\n";
  out += "</svg>\n";
  return out;
}

std::string curve_svg(const AccuracyCurve& curve) {
  constexpr double kW = 640, kH = 400, kL = 60, kR = 160, kT = 30, kB = 50;
  const double x_min = *std::min_element(curve.values.begin(), curve.values.end());
  double x_max = *std::max_element(curve.values.begin(), curve.values.end());
  if (x_max == x_min) x_max = x_min + 1.0;
  auto px = [&](double x) { return kL + (x - x_min) / (x_max - x_min) * (kW - kL - kR); };
  auto py = [&](double y) { return kH - kB - y * (kH - kT - kB); };

  std::string out = svg_header(kW, kH);
  out += "<line x1=\"" + format_number(kL) + "\" y1=\"" + format_number(py(0)) + "\" x2=\"" +
         format_number(kW - kR) + "\" y2=\"" + format_number(py(0)) + "\" stroke=\"black\"/>\n";
  out += "<line x1=\"" + format_number(kL) + "\" y1=\"" + format_number(py(0)) + "\" x2=\"" +
         format_number(kL) + "\" y2=\"" + format_number(py(1)) + "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double y = 0.25 * i;
    out += "<text x=\"" + format_number(kL - 8) + "\" y=\"" + format_number(py(y) + 4) +
           "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" +
           format_number(y) + "</text>\n";
  }
  for (double v : curve.values) {
    out += "<text x=\"" + format_number(px(v)) + "\" y=\"" + format_number(kH - kB + 16) +
           "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">" +
           format_number(v) + "</text>\n";
  }
  out += "<text x=\"" + format_number((kL + kW - kR) / 2) + "\" y=\"" + format_number(kH - 10) +
         "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">" +
         to_string(curve.variable) + "</text>\n";

  const std::array<const char*, 4> colors{"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
  std::size_t series = 0;
  auto line = [&](const std::vector<double>& ys, const std::string& label) {
    const char* color = colors[series % colors.size()];
    out += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < ys.size(); ++i)
      out += format_number(px(curve.values[i])) + "," + format_number(py(ys[i])) + " ";
    out += "\"/>\n";
    const double ly = kT + 18.0 * static_cast<double>(series);
    out += "<text x=\"" + format_number(kW - kR + 12) + "\" y=\"" + format_number(ly + 4) +
           "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" + color + "\">" + label +
           "</text>\n";
    ++series;
  };
  for (const auto& m : curve.methods) {
    line(m.toa_accuracy, m.method + " TOA");
    if (!m.doa_accuracy.empty()) line(m.doa_accuracy, m.method + " DOA");
  }
  out += "</svg>\n";
  return out;
}

}  // namespace echomap
