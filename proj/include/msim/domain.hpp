#pragma once

// Shared vocabulary: identities, per-SIM protocol state, services, user
// policy and control-plane messages.

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "msim/rng.hpp"
#include "msim/time.hpp"

namespace msim {

enum class ErrorCode {
  kConfigInvalid,
  kNotApplicable,
  kIllegalTransition,
  kPagingFailed,
  kRanPagingFailed,
  kNoFeasibleOffset,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

enum class Generation : std::uint8_t { k4G, k5G };
enum class CnState : std::uint8_t { kDeregistered, kIdle, kConnected };
enum class RanState : std::uint8_t { kIdle, kInactive, kConnected };
enum class SimRole : std::uint8_t { kPrimary, kSecondary };
enum class DualSimMode : std::uint8_t { kDsds, kDsda };

std::string_view to_string(Generation g);
std::string_view to_string(CnState s);
std::string_view to_string(RanState s);

// (CONNECTED, IDLE) is only ever transitional; the engine applies CN and RAN
// changes together, so it is legal here but never observed at an event
// boundary.
bool legal_state_pair(CnState cn, RanState ran);

// ---------------------------------------------------------------- services

enum class ServiceKind : std::uint8_t { kVoice, kSms, kData, kEmergency };
enum class Plane : std::uint8_t { kUser, kControl };

inline constexpr std::array<ServiceKind, 4> kAllServiceKinds = {
    ServiceKind::kVoice, ServiceKind::kSms, ServiceKind::kData, ServiceKind::kEmergency};

std::string_view to_string(ServiceKind k);
std::optional<ServiceKind> parse_service_kind(std::string_view s);

struct ServiceType {
  ServiceKind kind = ServiceKind::kData;
  Plane plane = Plane::kUser;
  int priority = 0;
};

// Per-kind plane and priority. Priorities must satisfy
// EMERGENCY > VOICE > SMS > DATA.
class ServiceClasses {
 public:
  ServiceClasses();
  ServiceClasses(int emergency, int voice, int sms, int data);

  const ServiceType& operator[](ServiceKind k) const { return types_[static_cast<std::size_t>(k)]; }
  bool strictly_ordered() const;

 private:
  std::array<ServiceType, 4> types_;
};

// ------------------------------------------------------------------ policy

enum class PolicyAction : std::uint8_t { kAcceptLeave, kNotifyOnly, kRejectBusy, kIgnore };

std::string_view to_string(PolicyAction a);
std::optional<PolicyAction> parse_policy_action(std::string_view s);

// What the device is doing on its other SIMs when a page arrives.
enum class ActivityMatch : std::uint8_t {
  kAny,
  kIdle,
  kBusy,
  kInVoice,
  kInSms,
  kInData,
  kInEmergency,
};

std::string_view to_string(ActivityMatch a);
std::optional<ActivityMatch> parse_activity_match(std::string_view s);

struct PolicyRule {
  std::optional<ServiceKind> incoming;  // nullopt matches any, including unknown
  ActivityMatch activity = ActivityMatch::kAny;
  PolicyAction action = PolicyAction::kAcceptLeave;

  bool is_catch_all() const { return !incoming && activity == ActivityMatch::kAny; }
  bool matches(std::optional<ServiceKind> in, std::optional<ServiceKind> current) const;
};

struct PolicyTable {
  std::vector<PolicyRule> rules;

  bool has_catch_all() const;
  static PolicyTable defaults();
};

// First matching rule wins. `incoming` is nullopt when the page carries no
// cause; `activity` is nullopt when the device is idle on every other SIM.
// Throws kConfigInvalid if no rule matches, which a validated table rules out.
PolicyAction match_policy(const PolicyTable& policy, std::optional<ServiceKind> incoming,
                          std::optional<ServiceKind> activity);

// ---------------------------------------------------------------- identity

struct UeIdentity {
  std::uint64_t imsi = 0;  // 15 decimal digits
  std::uint32_t temporal_cn_id = 0;
  std::uint32_t temporal_ran_id = 0;
  Duration refresh_period = kNever;
};

// Draws a fresh CN temporary id and then a fresh RAN id from the stream, in
// that order. The IMSI is left untouched.
UeIdentity regenerate_temporal_ids(const UeIdentity& identity, RngStream& stream);

// ------------------------------------------------------------ SIM & device

using NetworkId = std::uint16_t;
using CellId = std::uint32_t;
using TaId = std::uint32_t;

struct SimProfile {
  std::uint8_t sim_index = 0;
  NetworkId plmn = 0;
  UeIdentity identity;
  CnState cn_state = CnState::kDeregistered;
  RanState ran_state = RanState::kIdle;
  TaId current_ta = 0;
  std::vector<TaId> ta_list;
  SimRole role = SimRole::kPrimary;

  bool registered() const { return cn_state != CnState::kDeregistered; }
  bool connected() const { return ran_state == RanState::kConnected; }
  bool inactive() const { return ran_state == RanState::kInactive; }
  bool idle() const { return cn_state == CnState::kIdle; }
};

struct UeDevice {
  std::uint32_t device_id = 0;
  std::vector<SimProfile> sims;
  int num_rx = 1;
  int num_tx = 1;
  DualSimMode mode = DualSimMode::kDsds;
  Duration switch_delay = std::chrono::milliseconds(5);
  PolicyTable user_policy = PolicyTable::defaults();
};

// Checks the hardware invariants: at least two SIMs, num_rx in {1,2},
// num_tx == 1, DSDA implies num_rx >= 2.
void validate_device(const UeDevice& device);

// ----------------------------------------------------------------- messages

enum class MsgKind : std::uint8_t {
  kPageCn,
  kPageRan,
  kPagingResponse,
  kBusyIndication,
  kServiceRequest,
  kDownlinkDataNotification,
  kRrcRelease,
  kRrcSuspend,
  kRrcResume,
  kAbsenceNotice,
  kReturnNotice,
  kLeavingNotice,
  kSchedulingGapRequest,
  kSchedulingGapGrant,
  kTauRequest,
  kRauRequest,
  kGutiReassignment,
  kAltUeIdRequest,
  kAltUeIdConfirm,
  kOffsetAssignment,
  kPushNotification,
  kSmsNotification,
  kN3iwfNotification,
  // Procedure plumbing not named by any one solution.
  kRandomAccess,
  kRrcSetup,
  kContextSetup,
  kRrcResumeRequest,
  kRnaUpdate,
  kRegistrationRequest,
  kRegistrationAccept,
  kN3iwfRegistration,
  kPagingRegistration,
  kPagingHold,
  kUeUnreachable,
  kCount
};

std::string_view to_string(MsgKind k);

enum class Node : std::uint8_t { kUe, kRan, kCn, kUpf, kN3iwf, kPagingServer, kSmsc };
std::string_view to_string(Node n);

// Where a message travels. Weight 1 per AS message, 2 per NAS message and 3
// per inter-PLMN or inter-node message.
enum class Segment : std::uint8_t { kRan, kCn, kInter };
std::string_view to_string(Segment s);

inline constexpr int size_weight(Segment s) {
  switch (s) {
    case Segment::kRan: return 1;
    case Segment::kCn: return 2;
    case Segment::kInter: return 3;
  }
  return 0;
}

struct SimMessage {
  MsgKind kind = MsgKind::kPageCn;
  Node origin = Node::kUe;
  Node destination = Node::kRan;
  Segment segment = Segment::kRan;
  std::uint8_t sim_index = 0;
  std::optional<ServiceType> service;
  std::optional<ServiceType> paging_cause;
  SimTime timestamp{0};

  int weight() const { return size_weight(segment); }
};

// Only pages and downlink data notifications may carry a paging cause.
bool may_carry_paging_cause(MsgKind k);

}  // namespace msim
