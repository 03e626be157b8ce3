#include "hopping/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include <openssl/evp.h>

#include "hopping/errors.hpp"

namespace hop {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string json_quote(std::string_view s) {
  std::string out = "\"";
  for (char ch : s) {
    switch (ch) {
      case '"':
        out += "\\\"";
        break;
      case '\\':
        out += "\\\\";
        break;
      case '\n':
        out += "\\n";
        break;
      case '\t':
        out += "\\t";
        break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", ch);
          out += buf;
        } else {
          out += ch;
        }
    }
  }
  return out + "\"";
}

std::string json_complex(cplx z) { return "[" + fmt17(z.real()) + ", " + fmt17(z.imag()) + "]"; }

void write_file_atomic(const std::string& path, std::string_view content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw std::runtime_error("write to " + tmp.string() + " failed");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw std::runtime_error("cannot rename " + tmp.string() + " to " + path + ": " + ec.message());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string git_blob_sha1(std::string_view content) {
  const std::string header = "blob " + std::to_string(content.size()) + '\0';
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx) throw std::runtime_error("EVP_MD_CTX_new failed");
  const bool ok = EVP_DigestInit_ex(ctx, EVP_sha1(), nullptr) == 1 &&
                  EVP_DigestUpdate(ctx, header.data(), header.size()) == 1 &&
                  EVP_DigestUpdate(ctx, content.data(), content.size()) == 1 && EVP_DigestFinal_ex(ctx, md, &len) == 1;
  EVP_MD_CTX_free(ctx);
  if (!ok) throw std::runtime_error("SHA-1 digest failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

std::string cloud_csv(const PointCloud& cloud) {
  PointCloud sorted = cloud;
  sorted.sort();
  std::string out = "re,im\n";
  out.reserve(out.size() + sorted.points.size() * 48);
  for (const cplx& z : sorted.points) {
    out += fmt17(z.real());
    out += ',';
    out += fmt17(z.imag());
    out += '\n';
  }
  return out;
}

void Manifest::param(std::string key, std::string json_value) { params_.emplace_back(std::move(key), std::move(json_value)); }

void Manifest::tolerance(std::string key, double value) { tolerances_.emplace_back(std::move(key), fmt17(value)); }

void Manifest::seed(std::string key, unsigned long long value) {
  seeds_.emplace_back(std::move(key), std::to_string(value));
}

void Manifest::output(std::string path, std::string_view content) {
  outputs_.emplace_back(std::move(path), git_blob_sha1(content));
}

void Manifest::note(std::string key, std::string json_value) { notes_.emplace_back(std::move(key), std::move(json_value)); }

std::string Manifest::json() const {
  auto object = [](const std::vector<std::pair<std::string, std::string>>& kv, const char* indent) {
    if (kv.empty()) return std::string("{}");
    std::string s = "{\n";
    for (std::size_t i = 0; i < kv.size(); ++i) {
      s += indent;
      s += "  " + json_quote(kv[i].first) + ": " + kv[i].second;
      s += i + 1 < kv.size() ? ",\n" : "\n";
    }
    return s + indent + "}";
  };
  std::string s = "{\n";
  s += "  \"command\": " + json_quote(command_) + ",\n";
  s += "  \"parameters\": " + object(params_, "  ") + ",\n";
  s += "  \"seeds\": " + object(seeds_, "  ") + ",\n";
  s += "  \"kernel_tolerances\": " + object(tolerances_, "  ") + ",\n";
  s += "  \"outputs\": [";
  for (std::size_t i = 0; i < outputs_.size(); ++i) {
    s += i ? ",\n" : "\n";
    s += "    {\"path\": " + json_quote(outputs_[i].first) + ", \"git_blob_sha1\": " + json_quote(outputs_[i].second) + "}";
  }
  s += outputs_.empty() ? "],\n" : "\n  ],\n";
  if (!notes_.empty()) s += "  \"results\": " + object(notes_, "  ") + ",\n";
  s += "  \"threads\": " + std::to_string(threads_) + ",\n";
  s += "  \"wall_time_seconds\": " + fmt17(wall_) + "\n}\n";
  return s;
}

}  // namespace hop
