#include "manet/metrics/records.hpp"

#include <algorithm>
#include <stdexcept>

namespace manet::metrics {

void RecordTable::put(const PacketRecord& record) {
  if (record.seq >= by_seq_.size()) by_seq_.resize(std::max<std::size_t>(record.seq + 1, by_seq_.size() * 2));
  auto& slot = by_seq_[record.seq];
  if (!slot) ++count_;
  slot = record;
}

const PacketRecord* RecordTable::find(Seq seq) const {
  if (seq >= by_seq_.size() || !by_seq_[seq]) return nullptr;
  return &*by_seq_[seq];
}

double compute_idd(const RecordTable& records, Seq st, Seq ed, IddDivisor divisor) {
  if (st > ed) throw std::invalid_argument("compute_idd: st > ed");
  double sum = 0.0;
  std::uint64_t valid = 0;
  const PacketRecord* prev = records.find(st);
  for (Seq i = st; i < ed; ++i) {
    const PacketRecord* next = records.find(i + 1);
    if (prev && next) {
      sum += (next->arrived - prev->arrived) - (next->sent - prev->sent);
      ++valid;
    }
    prev = next;
  }
  if (divisor == IddDivisor::Literal) return sum / static_cast<double>(ed - st + 1);
  return valid == 0 ? 0.0 : sum / static_cast<double>(valid);
}

double compute_stt(const Interval& interval) {
  return static_cast<double>(interval.n_p) / interval.delta;
}

double compute_por(const Interval& interval) {
  if (interval.n_p == 0) return 0.0;
  return static_cast<double>(interval.n_po) / static_cast<double>(interval.n_p);
}

double compute_plr(const Interval& interval) {
  if (interval.highest <= interval.highest_at_start) return 0.0;
  double expected = static_cast<double>(interval.highest - interval.highest_at_start);
  double ratio = (expected - static_cast<double>(interval.n_p)) / expected;
  return std::clamp(ratio, 0.0, 1.0);
}

}  // namespace manet::metrics
