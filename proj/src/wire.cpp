#include "ospfmbt/wire.hpp"

#include <sstream>
#include <stdexcept>

namespace ospfmbt::wire {

namespace {

void put8(std::vector<uint8_t>& out, uint8_t v) { out.push_back(v); }
void put16(std::vector<uint8_t>& out, uint16_t v) {
  out.push_back(static_cast<uint8_t>(v >> 8));
  out.push_back(static_cast<uint8_t>(v & 0xFF));
}
void put32(std::vector<uint8_t>& out, uint32_t v) {
  out.push_back(static_cast<uint8_t>(v >> 24));
  out.push_back(static_cast<uint8_t>((v >> 16) & 0xFF));
  out.push_back(static_cast<uint8_t>((v >> 8) & 0xFF));
  out.push_back(static_cast<uint8_t>(v & 0xFF));
}
uint16_t get16(const uint8_t* p) { return static_cast<uint16_t>((p[0] << 8) | p[1]); }
uint32_t get32(const uint8_t* p) {
  return (static_cast<uint32_t>(p[0]) << 24) | (static_cast<uint32_t>(p[1]) << 16) |
         (static_cast<uint32_t>(p[2]) << 8) | static_cast<uint32_t>(p[3]);
}

constexpr size_t kChecksumOffsetInRegion = 14;  // region starts after ls_age

}  // namespace

uint32_t router_ip(int r) { return 0x0A000001u + static_cast<uint32_t>(r); }
uint32_t net_iface_addr(int r, int net) {
  return 0x0AC80000u | (static_cast<uint32_t>(net) << 8) | static_cast<uint32_t>(r + 1);
}
uint32_t net_mask() { return 0xFFFFFF00u; }
uint32_t subnet_addr(int net) { return 0x0AC80000u | (uint32_t(net) << 8); }

std::string ip_to_string(uint32_t ip) {
  std::ostringstream os;
  os << ((ip >> 24) & 0xFF) << "." << ((ip >> 16) & 0xFF) << "." << ((ip >> 8) & 0xFF) << "."
     << (ip & 0xFF);
  return os.str();
}

uint16_t lsa_checksum(const std::vector<uint8_t>& bytes) {
  if (bytes.size() < kLsaHeaderLen) throw std::invalid_argument("LSA too short for checksum");
  // ISO 8473 / Fletcher over the LSA minus the ls_age field, checksum zeroed.
  int64_t c0 = 0, c1 = 0;
  const size_t region_len = bytes.size() - 2;
  for (size_t i = 2; i < bytes.size(); ++i) {
    uint8_t b = bytes[i];
    const size_t ri = i - 2;
    if (ri == kChecksumOffsetInRegion || ri == kChecksumOffsetInRegion + 1) b = 0;
    c0 += b;
    c1 += c0;
  }
  c0 %= 255;
  c1 %= 255;
  int64_t x = (static_cast<int64_t>(region_len - kChecksumOffsetInRegion - 1) * c0 - c1) % 255;
  if (x <= 0) x += 255;
  int64_t y = 510 - c0 - x;
  if (y > 255) y -= 255;
  return static_cast<uint16_t>((x << 8) | (y & 0xFF));
}

bool lsa_checksum_ok(const std::vector<uint8_t>& bytes) {
  if (bytes.size() < kLsaHeaderLen) return false;
  int64_t c0 = 0, c1 = 0;
  for (size_t i = 2; i < bytes.size(); ++i) {
    c0 += bytes[i];
    c1 += c0;
  }
  return (c0 % 255) == 0 && (c1 % 255) == 0;
}

std::vector<uint8_t> encode_lsa(const WireLsa& lsa) {
  std::vector<uint8_t> out;
  put16(out, lsa.ls_age);
  put8(out, lsa.options);
  put8(out, lsa.ls_type);
  put32(out, lsa.link_state_id);
  put32(out, lsa.advertising_router);
  put32(out, lsa.ls_seq);
  put16(out, 0);  // checksum placeholder
  put16(out, 0);  // length placeholder
  if (lsa.ls_type == kLsTypeRouter) {
    put8(out, 0);  // flags
    put8(out, 0);
    put16(out, static_cast<uint16_t>(lsa.links.size()));
    for (const auto& l : lsa.links) {
      put32(out, l.link_id);
      put32(out, l.link_data);
      put8(out, l.type);
      put8(out, 0);  // #TOS
      put16(out, l.metric);
    }
  } else if (lsa.ls_type == kLsTypeNetwork) {
    put32(out, lsa.netmask);
    for (uint32_t r : lsa.attached) put32(out, r);
  } else {
    out.insert(out.end(), lsa.opaque.begin(), lsa.opaque.end());
  }
  const uint16_t length = static_cast<uint16_t>(out.size());
  out[18] = static_cast<uint8_t>(length >> 8);
  out[19] = static_cast<uint8_t>(length & 0xFF);
  const uint16_t cs = lsa_checksum(out);
  out[16] = static_cast<uint8_t>(cs >> 8);
  out[17] = static_cast<uint8_t>(cs & 0xFF);
  return out;
}

const char* decode_error_name(DecodeError e) {
  switch (e) {
    case DecodeError::None: return "none";
    case DecodeError::ShortBuffer: return "short-buffer";
    case DecodeError::BadLength: return "bad-length";
    case DecodeError::BadChecksum: return "bad-checksum";
    case DecodeError::UnknownLsType: return "unknown-ls-type";
    case DecodeError::BadPacket: return "bad-packet";
  }
  return "?";
}

LsaDecodeResult decode_lsa(const uint8_t* p, size_t len) {
  LsaDecodeResult r;
  if (len < kLsaHeaderLen) {
    r.error = DecodeError::ShortBuffer;
    return r;
  }
  const uint16_t length = get16(p + 18);
  if (length < kLsaHeaderLen || length > len) {
    r.error = length < kLsaHeaderLen ? DecodeError::BadLength : DecodeError::ShortBuffer;
    return r;
  }
  std::vector<uint8_t> bytes(p, p + length);
  if (!lsa_checksum_ok(bytes)) {
    r.error = DecodeError::BadChecksum;
    return r;
  }
  WireLsa& lsa = r.lsa;
  lsa.ls_age = get16(p);
  lsa.options = p[2];
  lsa.ls_type = p[3];
  lsa.link_state_id = get32(p + 4);
  lsa.advertising_router = get32(p + 8);
  lsa.ls_seq = get32(p + 12);
  lsa.checksum = get16(p + 16);
  lsa.length = length;
  if (lsa.ls_type < 1 || lsa.ls_type > 11) {
    r.error = DecodeError::UnknownLsType;
    return r;
  }
  if (lsa.ls_type == kLsTypeRouter) {
    if (length < kLsaHeaderLen + 4 || (length - kLsaHeaderLen - 4) % 12 != 0) {
      r.error = DecodeError::BadLength;
      return r;
    }
    const uint16_t nlinks = get16(p + 22);
    if (nlinks != (length - kLsaHeaderLen - 4) / 12) {
      r.error = DecodeError::BadLength;
      return r;
    }
    const uint8_t* q = p + 24;
    for (uint16_t i = 0; i < nlinks; ++i, q += 12) {
      WireLink l;
      l.link_id = get32(q);
      l.link_data = get32(q + 4);
      l.type = q[8];
      l.metric = get16(q + 10);
      lsa.links.push_back(l);
    }
  } else if (lsa.ls_type == kLsTypeNetwork) {
    if (length < kLsaHeaderLen + 8 || (length - kLsaHeaderLen - 4) % 4 != 0) {
      r.error = DecodeError::BadLength;
      return r;
    }
    lsa.netmask = get32(p + 20);
    const uint8_t* q = p + 24;
    for (; q < p + length; q += 4) lsa.attached.push_back(get32(q));
  } else {
    lsa.opaque.assign(p + kLsaHeaderLen, p + length);
  }
  r.consumed = length;
  return r;
}

uint16_t ospf_packet_checksum(const std::vector<uint8_t>& packet) {
  // RFC 1071 over the packet with the checksum field (offset 12) zeroed and
  // the 8-byte authentication field (offsets 16..23) excluded.
  uint32_t sum = 0;
  const size_t n = packet.size();
  for (size_t i = 0; i + 1 < n; i += 2) {
    if (i >= 16 && i < 24) continue;
    uint16_t word = get16(packet.data() + i);
    if (i == 12) word = 0;
    sum += word;
  }
  if (n % 2 == 1 && !(n - 1 >= 16 && n - 1 < 24)) {
    sum += static_cast<uint16_t>(packet[n - 1] << 8);
  }
  while (sum >> 16) sum = (sum & 0xFFFF) + (sum >> 16);
  return static_cast<uint16_t>(~sum & 0xFFFF);
}

std::vector<uint8_t> encode_lsu(const LsuPacket& pkt) {
  std::vector<uint8_t> out;
  put8(out, 2);  // version
  put8(out, 4);  // LS Update
  put16(out, 0);  // packet length placeholder
  put32(out, pkt.router_id);
  put32(out, pkt.area_id);
  put16(out, 0);  // checksum placeholder
  put16(out, 0);  // autype: null
  for (int i = 0; i < 8; ++i) put8(out, 0);  // authentication
  put32(out, static_cast<uint32_t>(pkt.lsas.size()));
  for (const auto& lsa : pkt.lsas) {
    auto bytes = encode_lsa(lsa);
    out.insert(out.end(), bytes.begin(), bytes.end());
  }
  const uint16_t length = static_cast<uint16_t>(out.size());
  out[2] = static_cast<uint8_t>(length >> 8);
  out[3] = static_cast<uint8_t>(length & 0xFF);
  const uint16_t cs = ospf_packet_checksum(out);
  out[12] = static_cast<uint8_t>(cs >> 8);
  out[13] = static_cast<uint8_t>(cs & 0xFF);
  return out;
}

LsuDecodeResult decode_lsu(const std::vector<uint8_t>& bytes) {
  LsuDecodeResult r;
  if (bytes.size() < 28) {
    r.error = DecodeError::ShortBuffer;
    return r;
  }
  if (bytes[0] != 2 || bytes[1] != 4) {
    r.error = DecodeError::BadPacket;
    return r;
  }
  const uint16_t length = get16(bytes.data() + 2);
  if (length != bytes.size()) {
    r.error = DecodeError::BadLength;
    return r;
  }
  if (ospf_packet_checksum(bytes) != get16(bytes.data() + 12)) {
    r.error = DecodeError::BadChecksum;
    return r;
  }
  r.packet.router_id = get32(bytes.data() + 4);
  r.packet.area_id = get32(bytes.data() + 8);
  const uint32_t count = get32(bytes.data() + 24);
  size_t off = 28;
  for (uint32_t i = 0; i < count; ++i) {
    auto lr = decode_lsa(bytes.data() + off, bytes.size() - off);
    if (lr.error != DecodeError::None) {
      r.error = lr.error;
      return r;
    }
    r.packet.lsas.push_back(std::move(lr.lsa));
    off += lr.consumed;
  }
  if (off != bytes.size()) r.error = DecodeError::BadLength;
  return r;
}

bool seq_less(uint32_t a, uint32_t b) {
  return static_cast<int32_t>(a) < static_cast<int32_t>(b);
}

uint32_t model_to_wire_seq(int model_seq, int model_base, uint32_t wire_base) {
  if (model_seq == kModelMaxSeq) return kMaxSeqNum;
  const int64_t w = static_cast<int64_t>(static_cast<int32_t>(wire_base)) +
                    (model_seq - model_base);
  if (w < static_cast<int32_t>(kInitialSeq) || w >= static_cast<int32_t>(kMaxSeqNum)) {
    throw std::out_of_range("relative sequence image leaves the wire domain");
  }
  return static_cast<uint32_t>(static_cast<int32_t>(w));
}

std::optional<int> wire_to_model_seq(uint32_t wire_seq, int model_base, uint32_t wire_base) {
  if (wire_seq == kMaxSeqNum) return kModelMaxSeq;
  const int64_t m = static_cast<int64_t>(model_base) +
                    (static_cast<int64_t>(static_cast<int32_t>(wire_seq)) -
                     static_cast<int64_t>(static_cast<int32_t>(wire_base)));
  if (m < 0 || m >= kModelMaxSeq) return std::nullopt;
  return static_cast<int>(m);
}

NormalizationPlan normalization_plan(const std::vector<uint32_t>& observed,
                                     const std::vector<int>& target_model_seqs) {
  if (observed.size() != target_model_seqs.size()) {
    throw std::invalid_argument("observed/target size mismatch");
  }
  NormalizationPlan plan;
  // The spoofed self-LSA must exceed what the router holds, and the
  // fight-back response (inject + 1) realizes the target; C is the uniform
  // wire image of model value 0 afterwards.  All arithmetic is signed.
  int64_t c = INT32_MIN;
  for (size_t r = 0; r < observed.size(); ++r) {
    const int64_t need =
        static_cast<int64_t>(static_cast<int32_t>(observed[r])) + 2 - target_model_seqs[r];
    if (need > c) c = need;
  }
  for (size_t r = 0; r < observed.size(); ++r) {
    const int64_t t = c + target_model_seqs[r];
    if (t + kModelMaxSeq >= static_cast<int64_t>(static_cast<int32_t>(kMaxSeqNum))) {
      throw std::out_of_range("normalization would exhaust the wire sequence space");
    }
    plan.targets.push_back(static_cast<uint32_t>(static_cast<int32_t>(t)));
    plan.inject_seqs.push_back(static_cast<uint32_t>(static_cast<int32_t>(t - 1)));
  }
  plan.common_base = static_cast<uint32_t>(static_cast<int32_t>(c));
  return plan;
}

}  // namespace ospfmbt::wire
