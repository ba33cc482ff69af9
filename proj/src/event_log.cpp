#include "msim/event_log.hpp"

#include <algorithm>
#include <ostream>

#include <json.hpp>

#include "msim/paging.hpp"
#include "msim/radio.hpp"
#include "msim/strategies.hpp"

namespace msim {

std::string_view to_string(RecordKind k) {
  switch (k) {
    case RecordKind::kMessage: return "Message";
    case RecordKind::kMtArrival: return "MtArrival";
    case RecordKind::kMtOutcome: return "MtOutcome";
    case RecordKind::kPageAttempt: return "PageAttempt";
    case RecordKind::kPageOutcome: return "PageOutcome";
    case RecordKind::kStateChange: return "StateChange";
    case RecordKind::kRadioGrant: return "RadioGrant";
    case RecordKind::kRxOn: return "RxOn";
    case RecordKind::kInterruption: return "Interruption";
    case RecordKind::kLeave: return "Leave";
    case RecordKind::kCollision: return "Collision";
    case RecordKind::kMisleading: return "Misleading";
    case RecordKind::kTerminated: return "Terminated";
    case RecordKind::kPushIgnored: return "PushIgnored";
    case RecordKind::kError: return "Error";
  }
  return "?";
}

std::string_view to_string(MtOutcome o) {
  switch (o) {
    case MtOutcome::kDelivered: return "DELIVERED";
    case MtOutcome::kUserDeclined: return "USER_DECLINED";
    case MtOutcome::kDiscarded: return "DISCARDED";
    case MtOutcome::kFailed: return "FAILED";
  }
  return "?";
}

std::string_view to_string(AttemptResult r) {
  switch (r) {
    case AttemptResult::kAnswered: return "ANSWERED";
    case AttemptResult::kBusyReply: return "BUSY_REPLY";
    case AttemptResult::kSilent: return "SILENT";
    case AttemptResult::kRxBusy: return "RX_BUSY";
    case AttemptResult::kCollision: return "COLLISION";
    case AttemptResult::kSuppressed: return "SUPPRESSED";
    case AttemptResult::kOutOfScope: return "OUT_OF_SCOPE";
    case AttemptResult::kRadioLoss: return "RADIO_LOSS";
    case AttemptResult::kTxBusy: return "TX_BUSY";
  }
  return "?";
}

std::string_view to_string(PageResult r) {
  switch (r) {
    case PageResult::kResponded: return "RESPONDED";
    case PageResult::kBusy: return "BUSY";
    case PageResult::kFailed: return "FAILED";
    case PageResult::kCancelled: return "CANCELLED";
  }
  return "?";
}

void EventLog::sort_by_time() {
  std::stable_sort(records_.begin(), records_.end(),
                   [](const LogRecord& a, const LogRecord& b) { return a.time < b.time; });
}

namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

void mix(std::uint64_t& h, std::uint64_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) {
    h ^= (v >> (8 * i)) & 0xff;
    h *= kFnvPrime;
  }
}

std::string detail_name(const LogRecord& r) {
  switch (r.kind) {
    case RecordKind::kMessage: return std::string(to_string(static_cast<MsgKind>(r.detail)));
    case RecordKind::kMtArrival: return std::string(to_string(static_cast<ServiceKind>(r.detail)));
    case RecordKind::kMtOutcome: return std::string(to_string(static_cast<MtOutcome>(r.detail)));
    case RecordKind::kPageAttempt: return std::string(to_string(static_cast<AttemptResult>(r.detail)));
    case RecordKind::kPageOutcome: return std::string(to_string(static_cast<PageResult>(r.detail)));
    case RecordKind::kStateChange: return std::string(to_string(static_cast<RanState>(r.detail)));
    case RecordKind::kRadioGrant: return std::string(to_string(static_cast<RadioResource>(r.detail)));
    case RecordKind::kLeave: return std::string(to_string(static_cast<LeaveMode>(r.detail)));
    case RecordKind::kError: return std::string(to_string(static_cast<ErrorCode>(r.detail)));
    default: return std::to_string(r.detail);
  }
}

}  // namespace

std::uint64_t EventLog::digest() const {
  std::uint64_t h = kFnvOffset;
  for (const auto& r : records_) {
    mix(h, static_cast<std::uint64_t>(r.time.count()), 8);
    mix(h, static_cast<std::uint64_t>(r.kind), 1);
    mix(h, static_cast<std::uint64_t>(r.node), 1);
    mix(h, r.network, 2);
    mix(h, r.device, 4);
    mix(h, static_cast<std::uint8_t>(r.sim), 1);
    mix(h, r.strategy, 1);
    mix(h, r.size_weight, 1);
    mix(h, r.detail, 1);
    mix(h, r.aux, 1);
    mix(h, static_cast<std::uint64_t>(r.value), 8);
    mix(h, static_cast<std::uint64_t>(r.value2), 8);
    mix(h, r.mt, 8);
  }
  return h;
}

std::string record_to_json(const LogRecord& r) {
  nlohmann::ordered_json j;
  j["t_us"] = r.time.count();
  j["kind"] = to_string(r.kind);
  j["node"] = to_string(r.node);
  j["network"] = r.network;
  j["device"] = r.device;
  j["sim"] = r.sim;
  j["strategy"] = r.strategy;
  j["size_weight"] = r.size_weight;
  j["detail"] = detail_name(r);
  j["aux"] = r.aux;
  j["value"] = r.value;
  j["value2"] = r.value2;
  j["mt"] = r.mt;
  return j.dump();
}

void EventLog::write_ndjson(std::ostream& os) const {
  for (const auto& r : records_) os << record_to_json(r) << '\n';
}

}  // namespace msim
