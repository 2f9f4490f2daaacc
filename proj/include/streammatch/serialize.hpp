#pragma once

#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <string>
#include <vector>

// Versioned binary blobs for sketch state: a fixed header (magic, version,
// type tag, parameter words) followed by a little-endian u64 payload. Blobs
// from one pass can be reloaded to continue in a later pass.

namespace streammatch {

inline constexpr std::uint32_t kBlobMagic = 0x4b534d53;  // "SMSK"
inline constexpr std::uint16_t kBlobVersion = 1;

enum class SketchKind : std::uint16_t {
  kL0Estimator = 1,
  kL0Sampler = 2,
  kSparseRecovery = 3,
  kTutteRank = 4,
};

class BlobWriter {
 public:
  BlobWriter(SketchKind kind, const std::vector<std::uint64_t>& params) {
    put32(kBlobMagic);
    put16(kBlobVersion);
    put16(static_cast<std::uint16_t>(kind));
    put64(params.size());
    for (auto p : params) put64(p);
  }

  void put64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void put_signed(std::int64_t v) { put64(static_cast<std::uint64_t>(v)); }

  std::vector<std::uint8_t> take() { return std::move(bytes_); }

 private:
  void put16(std::uint16_t v) {
    bytes_.push_back(static_cast<std::uint8_t>(v));
    bytes_.push_back(static_cast<std::uint8_t>(v >> 8));
  }
  void put32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }

  std::vector<std::uint8_t> bytes_;
};

class BlobReader {
 public:
  BlobReader(const std::vector<std::uint8_t>& bytes, SketchKind expect) : bytes_(bytes) {
    if (get32() != kBlobMagic) throw std::runtime_error("sketch blob: bad magic");
    if (get16() != kBlobVersion) throw std::runtime_error("sketch blob: unsupported version");
    if (get16() != static_cast<std::uint16_t>(expect))
      throw std::runtime_error("sketch blob: wrong sketch type");
    std::uint64_t nparams = get64();
    params_.reserve(nparams);
    for (std::uint64_t i = 0; i < nparams; ++i) params_.push_back(get64());
  }

  const std::vector<std::uint64_t>& params() const { return params_; }

  std::uint64_t get64() {
    if (pos_ + 8 > bytes_.size()) throw std::runtime_error("sketch blob: truncated");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes_[pos_ + i]) << (8 * i);
    pos_ += 8;
    return v;
  }
  std::int64_t get_signed() { return static_cast<std::int64_t>(get64()); }

 private:
  std::uint16_t get16() {
    std::uint16_t v = static_cast<std::uint16_t>(bytes_[pos_] | (bytes_[pos_ + 1] << 8));
    pos_ += 2;
    return v;
  }
  std::uint32_t get32() {
    if (pos_ + 4 > bytes_.size()) throw std::runtime_error("sketch blob: truncated");
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes_[pos_ + i]) << (8 * i);
    pos_ += 4;
    return v;
  }

  const std::vector<std::uint8_t>& bytes_;
  std::vector<std::uint64_t> params_;
  std::size_t pos_ = 0;
};

}  // namespace streammatch
