#include "msim/domain.hpp"

#include <sstream>

namespace msim {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kConfigInvalid: return "CONFIG_INVALID";
    case ErrorCode::kNotApplicable: return "NOT_APPLICABLE";
    case ErrorCode::kIllegalTransition: return "ILLEGAL_TRANSITION";
    case ErrorCode::kPagingFailed: return "PAGING_FAILED";
    case ErrorCode::kRanPagingFailed: return "RAN_PAGING_FAILED";
    case ErrorCode::kNoFeasibleOffset: return "NO_FEASIBLE_OFFSET";
  }
  return "?";
}

std::string_view to_string(Generation g) { return g == Generation::k4G ? "4G" : "5G"; }

std::string_view to_string(CnState s) {
  switch (s) {
    case CnState::kDeregistered: return "DEREGISTERED";
    case CnState::kIdle: return "IDLE";
    case CnState::kConnected: return "CONNECTED";
  }
  return "?";
}

std::string_view to_string(RanState s) {
  switch (s) {
    case RanState::kIdle: return "IDLE";
    case RanState::kInactive: return "INACTIVE";
    case RanState::kConnected: return "CONNECTED";
  }
  return "?";
}

bool legal_state_pair(CnState cn, RanState ran) {
  switch (cn) {
    case CnState::kDeregistered:
    case CnState::kIdle: return ran == RanState::kIdle;
    case CnState::kConnected: return true;
  }
  return false;
}

std::string_view to_string(ServiceKind k) {
  switch (k) {
    case ServiceKind::kVoice: return "VOICE";
    case ServiceKind::kSms: return "SMS";
    case ServiceKind::kData: return "DATA";
    case ServiceKind::kEmergency: return "EMERGENCY";
  }
  return "?";
}

std::optional<ServiceKind> parse_service_kind(std::string_view s) {
  for (ServiceKind k : kAllServiceKinds)
    if (to_string(k) == s) return k;
  return std::nullopt;
}

ServiceClasses::ServiceClasses() : ServiceClasses(40, 30, 20, 10) {}

ServiceClasses::ServiceClasses(int emergency, int voice, int sms, int data) {
  types_[static_cast<std::size_t>(ServiceKind::kVoice)] = {ServiceKind::kVoice, Plane::kUser, voice};
  types_[static_cast<std::size_t>(ServiceKind::kSms)] = {ServiceKind::kSms, Plane::kControl, sms};
  types_[static_cast<std::size_t>(ServiceKind::kData)] = {ServiceKind::kData, Plane::kUser, data};
  types_[static_cast<std::size_t>(ServiceKind::kEmergency)] = {ServiceKind::kEmergency,
                                                               Plane::kControl, emergency};
}

bool ServiceClasses::strictly_ordered() const {
  return (*this)[ServiceKind::kEmergency].priority > (*this)[ServiceKind::kVoice].priority &&
         (*this)[ServiceKind::kVoice].priority > (*this)[ServiceKind::kSms].priority &&
         (*this)[ServiceKind::kSms].priority > (*this)[ServiceKind::kData].priority;
}

std::string_view to_string(PolicyAction a) {
  switch (a) {
    case PolicyAction::kAcceptLeave: return "ACCEPT_LEAVE";
    case PolicyAction::kNotifyOnly: return "NOTIFY_ONLY";
    case PolicyAction::kRejectBusy: return "REJECT_BUSY";
    case PolicyAction::kIgnore: return "IGNORE";
  }
  return "?";
}

std::optional<PolicyAction> parse_policy_action(std::string_view s) {
  for (auto a : {PolicyAction::kAcceptLeave, PolicyAction::kNotifyOnly, PolicyAction::kRejectBusy,
                 PolicyAction::kIgnore})
    if (to_string(a) == s) return a;
  return std::nullopt;
}

std::string_view to_string(ActivityMatch a) {
  switch (a) {
    case ActivityMatch::kAny: return "ANY";
    case ActivityMatch::kIdle: return "IDLE";
    case ActivityMatch::kBusy: return "BUSY";
    case ActivityMatch::kInVoice: return "IN_VOICE";
    case ActivityMatch::kInSms: return "IN_SMS";
    case ActivityMatch::kInData: return "IN_DATA";
    case ActivityMatch::kInEmergency: return "IN_EMERGENCY";
  }
  return "?";
}

std::optional<ActivityMatch> parse_activity_match(std::string_view s) {
  for (auto a : {ActivityMatch::kAny, ActivityMatch::kIdle, ActivityMatch::kBusy,
                 ActivityMatch::kInVoice, ActivityMatch::kInSms, ActivityMatch::kInData,
                 ActivityMatch::kInEmergency})
    if (to_string(a) == s) return a;
  return std::nullopt;
}

bool PolicyRule::matches(std::optional<ServiceKind> in, std::optional<ServiceKind> current) const {
  if (incoming && incoming != in) return false;
  switch (activity) {
    case ActivityMatch::kAny: return true;
    case ActivityMatch::kIdle: return !current;
    case ActivityMatch::kBusy: return current.has_value();
    case ActivityMatch::kInVoice: return current == ServiceKind::kVoice;
    case ActivityMatch::kInSms: return current == ServiceKind::kSms;
    case ActivityMatch::kInData: return current == ServiceKind::kData;
    case ActivityMatch::kInEmergency: return current == ServiceKind::kEmergency;
  }
  return false;
}

bool PolicyTable::has_catch_all() const {
  for (const auto& r : rules)
    if (r.is_catch_all()) return true;
  return false;
}

PolicyTable PolicyTable::defaults() {
  using SK = ServiceKind;
  using AM = ActivityMatch;
  using PA = PolicyAction;
  return PolicyTable{{
      {std::nullopt, AM::kIdle, PA::kAcceptLeave},
      {SK::kEmergency, AM::kAny, PA::kAcceptLeave},
      {std::nullopt, AM::kInEmergency, PA::kRejectBusy},
      {SK::kVoice, AM::kInVoice, PA::kRejectBusy},
      {SK::kVoice, AM::kInData, PA::kAcceptLeave},
      {SK::kVoice, AM::kInSms, PA::kAcceptLeave},
      {SK::kSms, AM::kBusy, PA::kNotifyOnly},
      {SK::kData, AM::kBusy, PA::kRejectBusy},
      // A page without a cause gives the user nothing to act on.
      {std::nullopt, AM::kAny, PA::kIgnore},
  }};
}

PolicyAction match_policy(const PolicyTable& policy, std::optional<ServiceKind> incoming,
                          std::optional<ServiceKind> activity) {
  for (const auto& rule : policy.rules)
    if (rule.matches(incoming, activity)) return rule.action;
  throw Error(ErrorCode::kConfigInvalid, "policy table has no catch-all rule");
}

UeIdentity regenerate_temporal_ids(const UeIdentity& identity, RngStream& stream) {
  UeIdentity next = identity;
  next.temporal_cn_id = stream.next_u32();
  next.temporal_ran_id = stream.next_u32();
  return next;
}

void validate_device(const UeDevice& device) {
  std::ostringstream why;
  if (device.sims.size() < 2) why << "device needs at least two SIMs; ";
  if (device.num_rx < 1 || device.num_rx > 2) why << "num_rx must be 1 or 2; ";
  if (device.num_tx != 1) why << "num_tx must be 1; ";
  if (device.mode == DualSimMode::kDsda && device.num_rx < 2) why << "DSDA requires num_rx >= 2; ";
  if (!device.user_policy.has_catch_all()) why << "policy needs a catch-all rule; ";
  if (device.switch_delay < Duration::zero()) why << "switch_delay must be non-negative; ";
  if (!why.str().empty()) throw Error(ErrorCode::kConfigInvalid, why.str());
}

std::string_view to_string(MsgKind k) {
  switch (k) {
    case MsgKind::kPageCn: return "PageCn";
    case MsgKind::kPageRan: return "PageRan";
    case MsgKind::kPagingResponse: return "PagingResponse";
    case MsgKind::kBusyIndication: return "BusyIndication";
    case MsgKind::kServiceRequest: return "ServiceRequest";
    case MsgKind::kDownlinkDataNotification: return "DownlinkDataNotification";
    case MsgKind::kRrcRelease: return "RrcRelease";
    case MsgKind::kRrcSuspend: return "RrcSuspend";
    case MsgKind::kRrcResume: return "RrcResume";
    case MsgKind::kAbsenceNotice: return "AbsenceNotice";
    case MsgKind::kReturnNotice: return "ReturnNotice";
    case MsgKind::kLeavingNotice: return "LeavingNotice";
    case MsgKind::kSchedulingGapRequest: return "SchedulingGapRequest";
    case MsgKind::kSchedulingGapGrant: return "SchedulingGapGrant";
    case MsgKind::kTauRequest: return "TauRequest";
    case MsgKind::kRauRequest: return "RauRequest";
    case MsgKind::kGutiReassignment: return "GutiReassignment";
    case MsgKind::kAltUeIdRequest: return "AltUeIdRequest";
    case MsgKind::kAltUeIdConfirm: return "AltUeIdConfirm";
    case MsgKind::kOffsetAssignment: return "OffsetAssignment";
    case MsgKind::kPushNotification: return "PushNotification";
    case MsgKind::kSmsNotification: return "SmsNotification";
    case MsgKind::kN3iwfNotification: return "N3iwfNotification";
    case MsgKind::kRandomAccess: return "RandomAccess";
    case MsgKind::kRrcSetup: return "RrcSetup";
    case MsgKind::kContextSetup: return "ContextSetup";
    case MsgKind::kRrcResumeRequest: return "RrcResumeRequest";
    case MsgKind::kRnaUpdate: return "RnaUpdate";
    case MsgKind::kRegistrationRequest: return "RegistrationRequest";
    case MsgKind::kRegistrationAccept: return "RegistrationAccept";
    case MsgKind::kN3iwfRegistration: return "N3iwfRegistration";
    case MsgKind::kPagingRegistration: return "PagingRegistration";
    case MsgKind::kPagingHold: return "PagingHold";
    case MsgKind::kUeUnreachable: return "UeUnreachable";
    case MsgKind::kCount: break;
  }
  return "?";
}

std::string_view to_string(Node n) {
  switch (n) {
    case Node::kUe: return "UE";
    case Node::kRan: return "RAN";
    case Node::kCn: return "CN";
    case Node::kUpf: return "UPF";
    case Node::kN3iwf: return "N3IWF";
    case Node::kPagingServer: return "PAGING_SERVER";
    case Node::kSmsc: return "SMSC";
  }
  return "?";
}

std::string_view to_string(Segment s) {
  switch (s) {
    case Segment::kRan: return "RAN";
    case Segment::kCn: return "CN";
    case Segment::kInter: return "INTER";
  }
  return "?";
}

bool may_carry_paging_cause(MsgKind k) {
  return k == MsgKind::kPageCn || k == MsgKind::kPageRan || k == MsgKind::kDownlinkDataNotification;
}

}  // namespace msim
