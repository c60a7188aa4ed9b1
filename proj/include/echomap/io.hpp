// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The echomap authors

#pragma once

#include "echomap/baseline.hpp"
#include "echomap/classifier.hpp"
#include "echomap/eval.hpp"
#include "echomap/mapper.hpp"
#include "echomap/room_sim.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace echomap {

using Json = nlohmann::ordered_json;

// Multichannel 32-bit IEEE float WAV.
void write_wav(const std::filesystem::path& path, const MultichannelRecording& rec);
// Reads 32-bit float or 16-bit PCM WAV files.
MultichannelRecording read_wav(const std::filesystem::path& path);

// Interleaved little-endian float32 samples plus a JSON sidecar at path + ".json".
void write_raw_f32(const std::filesystem::path& path, const MultichannelRecording& rec);
MultichannelRecording read_raw_f32(const std::filesystem::path& path);

// Reads a recording by extension: .wav, otherwise raw float32 with a sidecar.
MultichannelRecording read_recording(const std::filesystem::path& path);

// Shortest round-trip decimal representation.
std::string format_number(double v);

void write_text(const std::filesystem::path& path, const std::string& text);
void write_json(const std::filesystem::path& path, const Json& doc);
Json read_json(const std::filesystem::path& path);

std::string srp_csv(const SrpResult& srp);
std::string rir_csv(const EstimatedRir& rir);
std::string dataset_csv(const std::vector<LabeledSample>& samples);
std::string cv_csv(const CvResult& cv);
std::string map_csv(const SpatialMap& map);
std::string curve_csv(const AccuracyCurve& curve);
std::string trials_csv(const std::vector<TrialRecord>& records);

Json to_json(const ToaEstimate& est, double sample_rate, double speed_of_sound);
Json to_json(const DoaEstimate& est);
Json to_json(const EchoFeature& f);
Json to_json(const MapMetrics& m);
Json to_json(const AccuracyCurve& curve);
Json to_json(const SvmModel& model);
SvmModel svm_from_json(const Json& doc);

// Room outline, trajectory and points; rejected points drawn as crosses.
std::string map_svg(const SpatialMap& map);
// Accuracy-versus-variable line plot, one series per method and quantity.
std::string curve_svg(const AccuracyCurve& curve);

}  // namespace echomap
