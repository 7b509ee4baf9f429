#pragma once

// Shared helpers for the command-line tool: file digests, timestamps,
// enum parsing, and report output.

#include <cstdint>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "tug/error.hpp"
#include "tug/synth.hpp"
#include "tug/version.hpp"

namespace tug::cli {

using nlohmann::json;

// Raised when --strict is set and a requested metric is undefined.
struct StrictUndefined : Error {
  using Error::Error;
};

inline std::string fnv1a64_hex(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for digest: " + path.string());
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  char buf[65536];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    const std::streamsize got = in.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      hash ^= static_cast<unsigned char>(buf[i]);
      hash *= 0x100000001b3ULL;
    }
    if (!in) break;
  }
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016llx",
                static_cast<unsigned long long>(hash));
  return hex;
}

inline std::string utc_now_iso8601() {
  const std::time_t now = std::time(nullptr);
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

inline json format_versions() {
  return {{"tugf", kTugfVersion},
          {"tuga", kTugaVersion},
          {"tugn", kTugnVersion},
          {"split", kSplitVersion}};
}

inline json input_entry(const std::filesystem::path& path) {
  return {{"path", path.string()}, {"fnv1a64", fnv1a64_hex(path)}};
}

inline SynthKind parse_kind(const std::string& s) {
  if (s == "fig2a") return SynthKind::Fig2a;
  if (s == "fig2b") return SynthKind::Fig2b;
  if (s == "planted") return SynthKind::Planted;
  if (s == "er-random") return SynthKind::ErRandom;
  throw ValidationError("unknown synth kind: " + s);
}

inline Corruption parse_corruption(const std::string& s) {
  if (s == "none") return Corruption::None;
  if (s == "shuffle-rows") return Corruption::ShuffleRows;
  if (s == "gaussian-overwrite") return Corruption::GaussianOverwrite;
  if (s == "shuffle-nodes") return Corruption::ShuffleNodes;
  throw ValidationError("unknown corruption mode: " + s);
}

inline std::vector<std::size_t> parse_ks(const std::string& s) {
  std::vector<std::size_t> ks;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    ks.push_back(static_cast<std::size_t>(std::stoull(item)));
  }
  if (ks.empty()) throw ValidationError("no K values given");
  return ks;
}

inline void parse_ratios(const std::string& s, double& train, double& valid,
                         double& test) {
  std::stringstream ss(s);
  std::string item;
  std::vector<double> parts;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) parts.push_back(std::stod(item));
  }
  if (parts.size() != 3) {
    throw ValidationError("--ratios expects three comma-separated fractions");
  }
  train = parts[0];
  valid = parts[1];
  test = parts[2];
}

// Pretty JSON to stdout, mirrored to `out_path` when set, or a flat CSV
// (header + one value row) when csv is requested.
inline void emit_report(const json& report, const std::string& out_path,
                        bool csv, const std::vector<std::string>& csv_keys) {
  std::string text;
  if (csv) {
    std::string header, row;
    for (const auto& key : csv_keys) {
      if (!header.empty()) {
        header += ',';
        row += ',';
      }
      header += key;
      const json* node = &report;
      std::stringstream path(key);
      std::string part;
      while (std::getline(path, part, '.')) {
        node = node->contains(part) ? &(*node)[part] : nullptr;
        if (!node) break;
      }
      row += node ? (node->is_string() ? node->get<std::string>()
                                       : node->dump())
                  : "";
    }
    text = header + "\n" + row + "\n";
  } else {
    text = report.dump(2) + "\n";
  }
  std::cout << text;
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw IoError("cannot write report: " + out_path);
    out << text;
  }
}

}  // namespace tug::cli
