#pragma once

// Append-only record stream written by the engine and folded by the metrics
// module. One record per event; fields whose meaning depends on the record
// kind are documented next to RecordKind.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "msim/domain.hpp"
#include "msim/time.hpp"

namespace msim {

// detail / aux / value / value2 per kind:
//   Message        detail=MsgKind aux=Segment value=receive time (us) value2=destination Node
//   MtArrival      detail=ServiceKind aux=role
//   MtOutcome      detail=MtOutcome aux=ServiceKind value=setup latency (us, -1 if none)
//                  value2=MtFlags
//   PageAttempt    detail=AttemptResult aux=PagingScope value=cells in scope value2=attempt index
//   PageOutcome    detail=PageResult aux=PageFlags value=cells paged value2=attempts used
//   StateChange    detail=from RanState aux=to RanState value=signaling units of the path
//   RadioGrant     detail=RadioResource aux=RadioUse value=start (us) value2=end (us)
//   RxOn           value=receiver on-time (us) value2=paging occasions listened
//   Interruption   detail=InterruptCause value=stall (us)
//   Leave          detail=LeaveMode value=time to switch (us) value2=from SIM
//   Collision      detail=0 before / 1 after avoidance aux=systematic value=fraction (ppm)
//                  value2=other SIM
//   Misleading     detail=assumed cause (0 moved, 1 poor link) aux=1 if the UE had
//                  declined a page of the failed procedure
//   Terminated     value=remaining service time (us)
//   PushIgnored    -
//   Error          detail=ErrorCode aux=1 for an MT still open when the queue drained
enum class RecordKind : std::uint8_t {
  kMessage,
  kMtArrival,
  kMtOutcome,
  kPageAttempt,
  kPageOutcome,
  kStateChange,
  kRadioGrant,
  kRxOn,
  kInterruption,
  kLeave,
  kCollision,
  kMisleading,
  kTerminated,
  kPushIgnored,
  kError,
};

enum class MtOutcome : std::uint8_t { kDelivered, kUserDeclined, kDiscarded, kFailed };

enum MtFlags : std::uint8_t {
  kMtDirect = 1,       // delivered on an existing connection, no paging
  kMtAttributed = 2,   // a coordination strategy shaped the delivery
  kMtNotified = 4,     // reached through a notification bearer
  kMtHeld = 8,         // buffered by the network while the UE was away
};

enum class AttemptResult : std::uint8_t {
  kAnswered,
  kBusyReply,
  kSilent,         // decoded, user chose not to answer
  kRxBusy,         // receiver held by another SIM
  kCollision,      // paging occasion overlapped another SIM's
  kSuppressed,     // monitoring switched off by a notification strategy
  kOutOfScope,     // UE camped outside the paged cells
  kRadioLoss,
  kTxBusy,         // decoded but no transmitter to answer with
};

enum class PageResult : std::uint8_t { kResponded, kBusy, kFailed, kCancelled };

enum PageFlags : std::uint8_t {
  kPageEscalated = 1,
  kPageRan = 2,
  kPageMultiSimMiss = 4,  // some attempt was lost to multi-SIM unavailability
  kPageDeclined = 8,      // the user heard a page and declined it
  kPageDeclineEscalated = 16,  // the scope widened after a declined page
};

enum class InterruptCause : std::uint8_t { kLeave, kAbsence, kGap, kTuneAway };

std::string_view to_string(RecordKind k);
std::string_view to_string(MtOutcome o);
std::string_view to_string(AttemptResult r);
std::string_view to_string(PageResult r);

inline constexpr std::int8_t kNoSim = -1;
inline constexpr std::uint8_t kNoStrategy = 0;

struct LogRecord {
  SimTime time{0};
  RecordKind kind = RecordKind::kMessage;
  Node node = Node::kUe;
  std::uint16_t network = 0;
  std::uint32_t device = 0;
  std::int8_t sim = kNoSim;
  std::uint8_t strategy = kNoStrategy;
  std::uint8_t size_weight = 0;
  std::uint8_t detail = 0;
  std::uint8_t aux = 0;
  std::int64_t value = 0;
  std::int64_t value2 = 0;
  std::uint64_t mt = 0;  // MT event id, 0 if unrelated

  friend bool operator==(const LogRecord&, const LogRecord&) = default;
};

class EventLog {
 public:
  void append(const LogRecord& r) { records_.push_back(r); }
  const std::vector<LogRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  void reserve(std::size_t n) { records_.reserve(n); }

  // Stable ordering for export: by time, then insertion order.
  void sort_by_time();

  // FNV-1a over a fixed little-endian serialization of every field.
  std::uint64_t digest() const;
  void write_ndjson(std::ostream& os) const;

 private:
  std::vector<LogRecord> records_;
};

std::string record_to_json(const LogRecord& r);

}  // namespace msim
