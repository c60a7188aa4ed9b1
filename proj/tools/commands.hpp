// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The echomap authors

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace echomap::cli {

struct CommonOptions {
  std::filesystem::path config;
  std::optional<std::uint64_t> seed;
  int jobs = 1;
  std::filesystem::path out = "out";
};

inline constexpr const char* kToolVersion = "0.1.0";

void cmd_sim(const CommonOptions& opt);
void cmd_estimate(const CommonOptions& opt, const std::filesystem::path& recording);
void cmd_train(const CommonOptions& opt);
void cmd_map(const CommonOptions& opt, const std::optional<std::filesystem::path>& model);
void cmd_eval(const CommonOptions& opt, const std::string& sweep);
void cmd_time(const CommonOptions& opt);

}  // namespace echomap::cli
