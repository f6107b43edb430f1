#pragma once

// Versioned binary model container. All integers are little-endian; doubles
// are raw IEEE-754 bits, so a save/load round trip is bit-faithful.
//
// Layout (version 1):
//   magic            4 bytes  "EMGM"
//   version          u32      1
//   class table      u32 count, then count x (u32 length, UTF-8 bytes)
//   feature path     u8       0 = td, 1 = fd
//   feature order    u32 length, bytes
//   normalization    u32 dim, dim x f64 mean, dim x f64 stddev
//   bin selection    u8 present; if 1: u32 source length, bytes;
//                    u32 channels; per channel u32 count, count x u32 index
//   layer dims       u32 input, u32 hidden, u32 output
//   weights          f64[hidden*input] w1 row-major, f64[hidden] b1,
//                    f64[output*hidden] w2 row-major, f64[output] b2
//   checksum         u32 CRC-32 (IEEE, reflected) of all preceding bytes

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "emg/network.hpp"
#include "emg/types.hpp"

namespace emg {

inline constexpr char kModelMagic[4] = {'E', 'M', 'G', 'M'};
inline constexpr std::uint32_t kModelVersion = 1;

inline std::uint32_t crc32(const std::uint8_t* data, std::size_t size) {
  static const auto table = [] {
    std::array<std::uint32_t, 256> t{};
    for (std::uint32_t i = 0; i < 256; ++i) {
      std::uint32_t c = i;
      for (int k = 0; k < 8; ++k)
        c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
      t[i] = c;
    }
    return t;
  }();
  std::uint32_t crc = 0xFFFFFFFFu;
  for (std::size_t i = 0; i < size; ++i)
    crc = table[(crc ^ data[i]) & 0xFFu] ^ (crc >> 8);
  return crc ^ 0xFFFFFFFFu;
}

namespace detail {

struct ByteWriter {
  std::vector<std::uint8_t> bytes;

  void u8(std::uint8_t v) { bytes.push_back(v); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) bytes.push_back((v >> (8 * i)) & 0xFFu);
  }
  void f64(double v) {
    const auto raw = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) bytes.push_back((raw >> (8 * i)) & 0xFFu);
  }
  void str(const std::string& s) {
    u32(static_cast<std::uint32_t>(s.size()));
    bytes.insert(bytes.end(), s.begin(), s.end());
  }
  void f64_array(const std::vector<double>& v) {
    for (double x : v) f64(x);
  }
};

struct ByteReader {
  const std::uint8_t* data;
  std::size_t size;
  std::size_t pos = 0;

  void need(std::size_t n) const {
    if (pos + n > size) throw Error("model file truncated");
  }
  std::uint8_t u8() {
    need(1);
    return data[pos++];
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t{data[pos++]} << (8 * i);
    return v;
  }
  double f64() {
    need(8);
    std::uint64_t raw = 0;
    for (int i = 0; i < 8; ++i) raw |= std::uint64_t{data[pos++]} << (8 * i);
    return std::bit_cast<double>(raw);
  }
  std::string str() {
    const std::uint32_t n = u32();
    need(n);
    std::string s(reinterpret_cast<const char*>(data + pos), n);
    pos += n;
    return s;
  }
  void f64_array(std::vector<double>& v, std::size_t n) {
    v.resize(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = f64();
  }
};

}  // namespace detail

inline std::vector<std::uint8_t> serialize_model(const Network& net) {
  validate(net);
  detail::ByteWriter w;
  w.bytes.insert(w.bytes.end(), kModelMagic, kModelMagic + 4);
  w.u32(kModelVersion);
  w.u32(static_cast<std::uint32_t>(net.class_names.size()));
  for (const std::string& name : net.class_names) w.str(name);
  w.u8(static_cast<std::uint8_t>(net.path));
  w.str(net.feature_order);
  w.u32(net.input_dim);
  w.f64_array(net.norm.mean);
  w.f64_array(net.norm.stddev);
  w.u8(net.bin_selection ? 1 : 0);
  if (net.bin_selection) {
    w.str(net.bin_selection->source);
    w.u32(static_cast<std::uint32_t>(net.bin_selection->channels.size()));
    for (const auto& channel : net.bin_selection->channels) {
      w.u32(static_cast<std::uint32_t>(channel.size()));
      for (std::uint32_t idx : channel) w.u32(idx);
    }
  }
  w.u32(net.input_dim);
  w.u32(net.hidden_dim);
  w.u32(net.output_dim);
  w.f64_array(net.w1);
  w.f64_array(net.b1);
  w.f64_array(net.w2);
  w.f64_array(net.b2);
  w.u32(crc32(w.bytes.data(), w.bytes.size()));
  return w.bytes;
}

inline Network deserialize_model(const std::uint8_t* data, std::size_t size) {
  if (size < 8 || std::memcmp(data, kModelMagic, 4) != 0)
    throw Error("bad magic: not an emgpipe model file (expected EMGM v" +
                std::to_string(kModelVersion) + ")");
  detail::ByteReader r{data, size, 4};
  const std::uint32_t version = r.u32();
  if (version != kModelVersion)
    throw Error("unsupported model version " + std::to_string(version) +
                " (this build reads v" + std::to_string(kModelVersion) + ")");

  Network net;
  const std::uint32_t class_count = r.u32();
  if (class_count == 0 || class_count > 4096)
    throw Error("model file corrupt: implausible class count");
  for (std::uint32_t i = 0; i < class_count; ++i)
    net.class_names.push_back(r.str());
  const std::uint8_t path_tag = r.u8();
  if (path_tag > 1) throw Error("model file corrupt: unknown feature path tag");
  net.path = static_cast<FeaturePath>(path_tag);
  net.feature_order = r.str();
  const std::uint32_t norm_dim = r.u32();
  r.f64_array(net.norm.mean, norm_dim);
  r.f64_array(net.norm.stddev, norm_dim);
  if (r.u8() != 0) {
    BinSelection sel;
    sel.source = r.str();
    const std::uint32_t channels = r.u32();
    sel.channels.resize(channels);
    for (std::uint32_t c = 0; c < channels; ++c) {
      const std::uint32_t count = r.u32();
      sel.channels[c].resize(count);
      for (std::uint32_t i = 0; i < count; ++i) sel.channels[c][i] = r.u32();
    }
    net.bin_selection = std::move(sel);
  }
  net.input_dim = r.u32();
  net.hidden_dim = r.u32();
  net.output_dim = r.u32();
  if (net.input_dim == 0 || net.hidden_dim == 0 || net.output_dim == 0 ||
      net.input_dim > 1u << 20 || net.hidden_dim > 1u << 20 ||
      net.output_dim > 1u << 20)
    throw Error("model file corrupt: implausible layer dimensions");
  if (norm_dim != net.input_dim)
    throw Error("model file corrupt: normalization does not match input");
  r.f64_array(net.w1, std::size_t{net.hidden_dim} * net.input_dim);
  r.f64_array(net.b1, net.hidden_dim);
  r.f64_array(net.w2, std::size_t{net.output_dim} * net.hidden_dim);
  r.f64_array(net.b2, net.output_dim);

  const std::size_t payload_end = r.pos;
  const std::uint32_t stored_crc = r.u32();
  if (r.pos != size) throw Error("model file corrupt: trailing bytes");
  if (crc32(data, payload_end) != stored_crc)
    throw Error("model checksum mismatch");

  if (net.path == FeaturePath::FrequencyDomain && !net.bin_selection)
    throw Error("missing bin selection in frequency-domain model");
  validate(net);
  return net;
}

inline void save_model(const Network& net, const std::filesystem::path& path) {
  const std::vector<std::uint8_t> bytes = serialize_model(net);
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot write model file: " + path.string());
  os.write(reinterpret_cast<const char*>(bytes.data()),
           static_cast<std::streamsize>(bytes.size()));
  if (!os) throw Error("write failed: " + path.string());
}

inline Network load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open model file: " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return deserialize_model(bytes.data(), bytes.size());
}

}  // namespace emg
