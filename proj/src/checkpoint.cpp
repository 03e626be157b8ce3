#include "hopping/checkpoint.hpp"

#include <filesystem>
#include <sstream>

#include <json.hpp>

#include "hopping/errors.hpp"
#include "hopping/io.hpp"

namespace hop {

std::string CheckpointHeader::mismatch(const CheckpointHeader& o) const {
  if (version != o.version) return "version " + std::to_string(o.version) + " != " + std::to_string(version);
  if (n != o.n) return "order n " + std::to_string(o.n) + " != " + std::to_string(n);
  if (lambda != o.lambda) return "lambda " + json_complex(o.lambda) + " != " + json_complex(lambda);
  if (chunk_size != o.chunk_size) return "chunk_size " + std::to_string(o.chunk_size) + " != " + std::to_string(chunk_size);
  if (chunks != o.chunks) return "chunk count " + std::to_string(o.chunks) + " != " + std::to_string(chunks);
  if (rel_tol != o.rel_tol) return "kernel tolerance " + fmt17(o.rel_tol) + " != " + fmt17(rel_tol);
  if (dense_below != o.dense_below)
    return "dense_below " + std::to_string(o.dense_below) + " != " + std::to_string(dense_below);
  return {};
}

std::string checkpoint_text(const CheckpointState& s) {
  const CheckpointHeader& h = s.header;
  std::string out = "{\"type\": \"header\", \"version\": " + std::to_string(h.version) + ", \"n\": " + std::to_string(h.n) +
                    ", \"lambda\": " + json_complex(h.lambda) + ", \"chunk_size\": " + std::to_string(h.chunk_size) +
                    ", \"chunks\": " + std::to_string(h.chunks) + ", \"rel_tol\": " + fmt17(h.rel_tol) +
                    ", \"dense_below\": " + std::to_string(h.dense_below) + "}\n";
  for (const auto& [idx, c] : s.chunks) {
    out += "{\"type\": \"chunk\", \"index\": " + std::to_string(c.index) + ", \"begin\": " + std::to_string(c.begin) +
           ", \"end\": " + std::to_string(c.end) + ", \"evaluated\": " + std::to_string(c.evaluated) +
           ", \"fallbacks\": " + std::to_string(c.fallbacks) + ", \"front\": [";
    const auto& e = c.front.entries();
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (i) out += ", ";
      out += "[" + fmt17(e[i].value) + ", " + std::to_string(e[i].mask) + "]";
    }
    out += "]}\n";
  }
  return out;
}

CheckpointState parse_checkpoint(const std::string& text) {
  using nlohmann::json;
  CheckpointState st;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  try {
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      const json j = json::parse(line);
      const std::string type = j.at("type").get<std::string>();
      if (type == "header") {
        if (have_header) throw CheckpointError("duplicate header");
        CheckpointHeader& h = st.header;
        h.version = j.at("version").get<int>();
        h.n = j.at("n").get<std::size_t>();
        h.lambda = cplx(j.at("lambda").at(0).get<double>(), j.at("lambda").at(1).get<double>());
        h.chunk_size = j.at("chunk_size").get<std::uint64_t>();
        h.chunks = j.at("chunks").get<std::uint64_t>();
        h.rel_tol = j.at("rel_tol").get<double>();
        h.dense_below = j.at("dense_below").get<std::size_t>();
        have_header = true;
      } else if (type == "chunk") {
        if (!have_header) throw CheckpointError("chunk record before header");
        ChunkRecord c;
        c.index = j.at("index").get<std::uint64_t>();
        c.begin = j.at("begin").get<std::uint64_t>();
        c.end = j.at("end").get<std::uint64_t>();
        c.evaluated = j.at("evaluated").get<std::uint64_t>();
        c.fallbacks = j.at("fallbacks").get<std::uint64_t>();
        for (const auto& e : j.at("front")) c.front.offer(e.at(0).get<double>(), e.at(1).get<std::uint64_t>());
        if (c.index >= st.header.chunks) throw CheckpointError("chunk index out of range");
        if (c.begin != c.index * st.header.chunk_size || c.end <= c.begin)
          throw CheckpointError("chunk range inconsistent with chunk size");
        if (!st.chunks.emplace(c.index, std::move(c)).second) throw CheckpointError("duplicate chunk record");
      } else {
        throw CheckpointError("unknown record type \"" + type + "\"");
      }
    }
  } catch (const CheckpointError& e) {
    throw CheckpointError("checkpoint line " + std::to_string(lineno) + ": " + e.what());
  } catch (const std::exception& e) {
    throw CheckpointError("checkpoint line " + std::to_string(lineno) + ": " + e.what());
  }
  if (!have_header) throw CheckpointError("checkpoint has no header record");
  return st;
}

std::optional<CheckpointState> read_checkpoint(const std::string& path) {
  if (!std::filesystem::exists(path)) return std::nullopt;
  return parse_checkpoint(read_file(path));
}

void write_checkpoint(const std::string& path, const CheckpointState& state) {
  write_file_atomic(path, checkpoint_text(state));
}

}  // namespace hop
