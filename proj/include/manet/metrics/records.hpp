#pragma once

#include <optional>
#include <vector>

#include "manet/metrics/types.hpp"

namespace manet::metrics {

/// Per-sequence store of send/arrival times; a later arrival of the same seq
/// (retransmission) replaces the earlier record.
class RecordTable {
 public:
  void put(const PacketRecord& record);
  const PacketRecord* find(Seq seq) const;
  std::size_t size() const { return count_; }

 private:
  std::vector<std::optional<PacketRecord>> by_seq_;
  std::size_t count_ = 0;
};

/// Average inter-packet delay difference over packets st..ed:
/// sum of (A[i+1] - A[i]) - (S[i+1] - S[i]) for i in [st, ed) where both
/// packets have records, divided per `divisor`.
double compute_idd(const RecordTable& records, Seq st, Seq ed,
                   IddDivisor divisor = IddDivisor::Literal);

/// N_p / delta.
double compute_stt(const Interval& interval);
/// N_po / N_p, 0 for an empty interval.
double compute_por(const Interval& interval);
/// Sequence-gap loss ratio, clamped to [0, 1].
double compute_plr(const Interval& interval);

}  // namespace manet::metrics
