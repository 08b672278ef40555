#pragma once

#include <algorithm>
#include <cmath>

namespace manet::transport {

struct RttConfig {
  double alpha = 1.0 / 8.0;
  double beta = 1.0 / 4.0;
  double rto_initial = 1.0;
  double rto_min = 1.0;
  double rto_max = 60.0;
};

/// Smoothed RTT / variance estimator driving the retransmission timeout.
class RttEstimator {
 public:
  explicit RttEstimator(RttConfig config = {}) : config_(config), rto_(config.rto_initial) {
    rto_ = std::clamp(rto_, config_.rto_min, config_.rto_max);
  }

  struct Estimate {
    double srtt;
    double rttvar;
    double rto;
  };

  /// Feed one sample taken from a segment that was never retransmitted.
  Estimate update(double sample) {
    if (!has_sample_) {
      srtt_ = sample;
      rttvar_ = sample / 2.0;
      has_sample_ = true;
    } else {
      rttvar_ = (1.0 - config_.beta) * rttvar_ + config_.beta * std::abs(srtt_ - sample);
      srtt_ = (1.0 - config_.alpha) * srtt_ + config_.alpha * sample;
    }
    rto_ = std::clamp(srtt_ + 4.0 * rttvar_, config_.rto_min, config_.rto_max);
    return {srtt_, rttvar_, rto_};
  }

  /// Exponential timer back-off, capped at rto_max.
  void back_off() { rto_ = std::min(rto_ * 2.0, config_.rto_max); }

  bool has_sample() const { return has_sample_; }
  double srtt() const { return srtt_; }
  double rttvar() const { return rttvar_; }
  double rto() const { return rto_; }
  const RttConfig& config() const { return config_; }

 private:
  RttConfig config_;
  bool has_sample_ = false;
  double srtt_ = 0.0;
  double rttvar_ = 0.0;
  double rto_;
};

}  // namespace manet::transport
