#pragma once

// On-the-wire OSPFv2 structures: LSA header/body encoding with the ISO-8473
// (Fletcher) checksum, LS Update packets, the deterministic address scheme,
// and the mapping between model-domain and wire-domain sequence numbers.
// All multi-byte fields are big-endian.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ospfmbt::wire {

constexpr uint16_t kMaxAge = 3600;                // seconds
constexpr uint32_t kInitialSeq = 0x80000001u;     // first post-wrap sequence
constexpr uint32_t kMaxSeqNum = 0x7FFFFFFFu;      // largest sequence number
constexpr uint8_t kLsTypeRouter = 1;
constexpr uint8_t kLsTypeNetwork = 2;
constexpr size_t kLsaHeaderLen = 20;

// Deterministic address scheme shared by encoder, decoder, and comparator.
uint32_t router_ip(int r);                 // router id / p2p interface address
uint32_t net_iface_addr(int r, int net);   // address of r's interface on net
uint32_t net_mask();                       // /24 for every segment
uint32_t subnet_addr(int net);             // network-LSA link-state id

struct WireLink {
  uint32_t link_id = 0;
  uint32_t link_data = 0;
  uint8_t type = 0;  // 1 = point-to-point, 2 = transit network
  uint16_t metric = 1;
  bool operator==(const WireLink& o) const {
    return link_id == o.link_id && link_data == o.link_data && type == o.type &&
           metric == o.metric;
  }
};

struct WireLsa {
  uint16_t ls_age = 0;
  uint8_t options = 0x02;  // E bit
  uint8_t ls_type = kLsTypeRouter;
  uint32_t link_state_id = 0;
  uint32_t advertising_router = 0;
  uint32_t ls_seq = 0;
  uint16_t checksum = 0;  // filled by encode
  uint16_t length = 0;    // filled by encode
  // Router-LSA body:
  std::vector<WireLink> links;
  // Network-LSA body:
  uint32_t netmask = 0;
  std::vector<uint32_t> attached;
  // Any other type: raw body bytes after the header.
  std::vector<uint8_t> opaque;
};

// Serializes one LSA, computing length and checksum.  The checksum covers the
// whole LSA except the ls_age field, per the ISO-8473 rules.
std::vector<uint8_t> encode_lsa(const WireLsa& lsa);

// Computes the checksum field value for a serialized LSA whose checksum bytes
// are zeroed.  `bytes` is the complete LSA including ls_age.
uint16_t lsa_checksum(const std::vector<uint8_t>& bytes);

// True when the stored checksum verifies.
bool lsa_checksum_ok(const std::vector<uint8_t>& bytes);

enum class DecodeError {
  None,
  ShortBuffer,
  BadLength,
  BadChecksum,
  UnknownLsType,
  BadPacket,
};
const char* decode_error_name(DecodeError e);

struct LsaDecodeResult {
  DecodeError error = DecodeError::None;
  WireLsa lsa;
  size_t consumed = 0;
};

// Decodes one LSA from the front of [p, p+len).  ls_type outside 1..11 is
// UnknownLsType; types other than Router/Network keep their body opaque.
LsaDecodeResult decode_lsa(const uint8_t* p, size_t len);

// OSPFv2 LS Update packet (type 4) with a null-authentication header.
struct LsuPacket {
  uint32_t router_id = 0;  // sending router
  uint32_t area_id = 0;
  std::vector<WireLsa> lsas;
};

std::vector<uint8_t> encode_lsu(const LsuPacket& pkt);

struct LsuDecodeResult {
  DecodeError error = DecodeError::None;
  LsuPacket packet;
};

LsuDecodeResult decode_lsu(const std::vector<uint8_t>& bytes);

// RFC 1071 ones'-complement checksum over the OSPF packet, excluding the
// 8-byte authentication field, with the checksum field zeroed.
uint16_t ospf_packet_checksum(const std::vector<uint8_t>& packet);

// --- Model / wire sequence-number mapping -------------------------------
//
// Wire sequence numbers are signed 32-bit quantities: kInitialSeq
// (0x80000001) is the smallest and kMaxSeqNum (0x7FFFFFFF) the largest, so
// ordering and arithmetic go through int32_t, not the raw unsigned image.
//
// A model sequence m maps to wire as wire_base + (m - model_base), except
// that the model's maximum maps to the protocol maximum absolutely.  Throws
// std::out_of_range when the relative image leaves the valid wire range
// [kInitialSeq, kMaxSeqNum).

inline constexpr int kModelMaxSeq = 4;  // model-domain image of kMaxSeqNum

// a < b in sequence-number order (signed comparison of the bit patterns).
bool seq_less(uint32_t a, uint32_t b);

uint32_t model_to_wire_seq(int model_seq, int model_base, uint32_t wire_base);

// Inverse direction used by byte-level harnesses.  The protocol maximum maps
// to the model maximum absolutely; anything else maps relatively and must
// land in [0, kModelMaxSeq).
std::optional<int> wire_to_model_seq(uint32_t wire_seq, int model_base, uint32_t wire_base);

// --- Sequence-number normalization plan ----------------------------------
//
// Given per-router observed own-LSA wire sequence numbers and the per-router
// model-domain targets, computes a common shift such that every router's
// own-LSA can be driven (via one spoofed self-LSA and the resulting
// fight-back) to a wire base T_r that realizes the target alignment:
// afterwards the wire image of model value m for router r is
// T_r + (m - target_r).

struct NormalizationPlan {
  uint32_t common_base = 0;             // C: wire image of model value 0 + max target headroom
  std::vector<uint32_t> targets;        // T_r: wire seq the router must reach
  std::vector<uint32_t> inject_seqs;    // spoofed self-LSA seq: T_r - 1
};

NormalizationPlan normalization_plan(const std::vector<uint32_t>& observed,
                                     const std::vector<int>& target_model_seqs);

std::string ip_to_string(uint32_t ip);

}  // namespace ospfmbt::wire
