// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 The echomap authors

#pragma once

#include "echomap/geometry.hpp"
#include "echomap/toa.hpp"

#include <span>
#include <vector>

namespace echomap {

struct EstimatedRir {
  std::vector<double> taps;
  double sample_rate = 0.0;
};

struct WelchConfig {
  std::size_t segment_len = 2048;
  std::size_t hop = 1024;
  double reg = 1e-3;  // relative to max S_ss
};

// H(w) = S_ys / (S_ss + reg * max S_ss) from Welch-averaged Hann-windowed spectra.
EstimatedRir estimate_rir_dual_channel(std::span<const double> recording, const ProbeSignal& probe,
                                       const WelchConfig& cfg = {});

// Largest |tap| inside the search interval; ties go to the smaller delay.
ToaEstimate peak_pick(const EstimatedRir& rir, const FreqDomainConfig& interval);

}  // namespace echomap
