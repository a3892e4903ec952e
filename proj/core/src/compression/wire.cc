// Copyright 2026 The orbitfl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include <bit>
#include <cmath>
#include <cstring>

#include "orbitfl/compression/codec.h"
#include "orbitfl/domain/error.h"

namespace orbitfl::compression {

namespace {

constexpr std::uint8_t kMagic[4] = {'S', 'F', 'C', 'U'};

void put_u32(std::vector<std::uint8_t> &out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(const std::uint8_t *p) {
  return static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
         static_cast<std::uint32_t>(p[2]) << 16 |
         static_cast<std::uint32_t>(p[3]) << 24;
}

// LSB-first bit packer.
class BitWriter {
 public:
  explicit BitWriter(std::vector<std::uint8_t> &out) : out_(out) {}

  void write(std::uint64_t value, int bits) {
    for (int i = 0; i < bits; ++i) {
      if (fill_ == 0) out_.push_back(0);
      if ((value >> i) & 1u) out_.back() |= static_cast<std::uint8_t>(1u << fill_);
      fill_ = (fill_ + 1) % 8;
    }
  }

 private:
  std::vector<std::uint8_t> &out_;
  int fill_ = 0;
};

class BitReader {
 public:
  explicit BitReader(std::span<const std::uint8_t> in) : in_(in) {}

  std::uint64_t read(int bits) {
    std::uint64_t v = 0;
    for (int i = 0; i < bits; ++i, ++pos_) {
      const std::uint8_t byte = in_[pos_ / 8];
      v |= static_cast<std::uint64_t>((byte >> (pos_ % 8)) & 1u) << i;
    }
    return v;
  }
  std::size_t position() const { return pos_; }

 private:
  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

}  // namespace

std::size_t encoded_size(std::size_t kept, int bit_width) {
  const std::size_t record_bits = 32 + static_cast<std::size_t>(bit_width);
  return kWireHeaderBytes + (kept * record_bits + 7) / 8;
}

std::vector<std::uint8_t> encode_wire(const CompressedUpdate &cu) {
  if (cu.bit_width != 4 && cu.bit_width != 8) {
    throw CodecError("encode_wire: bit width must be 4 or 8");
  }
  const std::uint32_t levels = quantization_levels(cu.bit_width);
  std::vector<std::uint8_t> out;
  out.reserve(encoded_size(cu.kept(), cu.bit_width));
  for (std::uint8_t b : kMagic) out.push_back(b);
  out.push_back(kWireVersion);
  put_u32(out, cu.client_id);
  put_u32(out, cu.round);
  out.push_back(cu.bit_width);
  put_u32(out, cu.dim);
  put_u32(out, static_cast<std::uint32_t>(cu.kept()));
  put_u32(out, std::bit_cast<std::uint32_t>(cu.l2_norm));

  BitWriter bits(out);
  for (const auto &e : cu.entries) {
    if (e.code > levels) throw CodecError("encode_wire: code exceeds level count");
    bits.write(e.index, 32);
    bits.write(e.negative ? 1 : 0, 1);
    bits.write(e.code, cu.bit_width - 1);
  }
  return out;
}

CompressedUpdate decode_wire(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kWireHeaderBytes) throw CodecError("decode_wire: truncated header");
  if (std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw CodecError("decode_wire: bad magic");
  }
  if (bytes[4] != kWireVersion) throw CodecError("decode_wire: unsupported version");

  CompressedUpdate cu;
  const std::uint8_t *p = bytes.data();
  cu.client_id = get_u32(p + 5);
  cu.round = get_u32(p + 9);
  cu.bit_width = p[13];
  cu.dim = get_u32(p + 14);
  const std::uint32_t k = get_u32(p + 18);
  cu.l2_norm = std::bit_cast<float>(get_u32(p + 22));

  if (cu.bit_width != 4 && cu.bit_width != 8) {
    throw CodecError("decode_wire: bit width must be 4 or 8");
  }
  if (k > cu.dim) throw CodecError("decode_wire: kept count exceeds dimension");
  if (!std::isfinite(cu.l2_norm) || cu.l2_norm < 0.0f) {
    throw CodecError("decode_wire: invalid norm");
  }
  const std::size_t expected = encoded_size(k, cu.bit_width);
  if (bytes.size() < expected) throw CodecError("decode_wire: truncated payload");
  if (bytes.size() > expected) throw CodecError("decode_wire: trailing bytes");

  const std::uint32_t levels = quantization_levels(cu.bit_width);
  BitReader bits(bytes.subspan(kWireHeaderBytes));
  cu.entries.reserve(k);
  std::int64_t prev = -1;
  for (std::uint32_t t = 0; t < k; ++t) {
    QuantizedEntry e;
    e.index = static_cast<std::uint32_t>(bits.read(32));
    e.negative = bits.read(1) != 0;
    e.code = static_cast<std::uint32_t>(bits.read(cu.bit_width - 1));
    if (e.index >= cu.dim || static_cast<std::int64_t>(e.index) <= prev) {
      throw CodecError("decode_wire: malformed index sequence");
    }
    if (e.code > levels) throw CodecError("decode_wire: code exceeds level count");
    prev = e.index;
    cu.entries.push_back(e);
  }
  const std::size_t total_bits = (expected - kWireHeaderBytes) * 8;
  if (bits.position() < total_bits && bits.read(static_cast<int>(total_bits - bits.position())) != 0) {
    throw CodecError("decode_wire: nonzero padding");
  }
  return cu;
}

}  // namespace orbitfl::compression
