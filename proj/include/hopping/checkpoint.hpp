#pragma once

// Resumable state of an S_n enumeration: one JSON header line followed by
// one JSON line per completed chunk.

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "hopping/linalg.hpp"
#include "hopping/pseudospectra.hpp"

namespace hop {

inline constexpr int kCheckpointVersion = 1;

struct CheckpointHeader {
  int version = kCheckpointVersion;
  std::size_t n = 0;
  cplx lambda{};
  std::uint64_t chunk_size = 0;
  std::uint64_t chunks = 0;
  double rel_tol = 0.0;
  std::size_t dense_below = 0;

  /// Empty when compatible, otherwise a description of the first mismatch.
  std::string mismatch(const CheckpointHeader& other) const;
};

struct ChunkRecord {
  std::uint64_t index = 0;
  std::uint64_t begin = 0;
  std::uint64_t end = 0;
  std::uint64_t evaluated = 0;
  std::uint64_t fallbacks = 0;
  ArgminFront front;
};

struct CheckpointState {
  CheckpointHeader header;
  std::map<std::uint64_t, ChunkRecord> chunks;
};

std::string checkpoint_text(const CheckpointState& state);
/// Throws CheckpointError on malformed content.
CheckpointState parse_checkpoint(const std::string& text);
/// std::nullopt if the file does not exist.
std::optional<CheckpointState> read_checkpoint(const std::string& path);
void write_checkpoint(const std::string& path, const CheckpointState& state);

}  // namespace hop
