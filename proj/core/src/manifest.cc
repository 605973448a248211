// Copyright 2026 The avaeval Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "avaeval/report.h"

#include <array>
#include <chrono>
#include <ctime>
#include <fstream>
#include <memory>
#include <stdexcept>

#include <fmt/format.h>
#include <nlohmann/json.hpp>
#include <openssl/evp.h>

namespace avaeval {
namespace {

using Json = nlohmann::ordered_json;

struct DigestContext {
  DigestContext() : ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free) {
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
      throw std::runtime_error("SHA-256 initialization failed");
    }
  }

  void Update(const void* data, std::size_t size) {
    if (EVP_DigestUpdate(ctx.get(), data, size) != 1) {
      throw std::runtime_error("SHA-256 update failed");
    }
  }

  std::string HexDigest() {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    if (EVP_DigestFinal_ex(ctx.get(), digest.data(), &len) != 1) {
      throw std::runtime_error("SHA-256 finalization failed");
    }
    std::string hex;
    hex.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
    return hex;
  }

  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx;
};

Json ConfigToJson(const EvalConfig& config) {
  Json j;
  j["iou_threshold"] = config.iou_threshold;
  j["interpolation"] = std::string(InterpolationName(config.interpolation));
  j["score_floor"] = config.score_floor;
  j["retain_curves"] = config.retain_curves;
  return j;
}

}  // namespace

std::string Sha256Hex(std::string_view data) {
  DigestContext ctx;
  ctx.Update(data.data(), data.size());
  return ctx.HexDigest();
}

InputDigest DigestFile(std::string role, const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(fmt::format("cannot read '{}'", path.string()));
  DigestContext ctx;
  InputDigest digest;
  digest.role = std::move(role);
  digest.path = path.string();
  std::array<char, 1 << 16> buffer;
  while (in) {
    in.read(buffer.data(), buffer.size());
    const auto got = in.gcount();
    if (got > 0) {
      ctx.Update(buffer.data(), static_cast<std::size_t>(got));
      digest.bytes += static_cast<std::uint64_t>(got);
    }
  }
  if (in.bad()) {
    throw std::runtime_error(fmt::format("read error on '{}'", path.string()));
  }
  digest.sha256 = ctx.HexDigest();
  return digest;
}

std::string UtcTimestampNow() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::array<char, 32> buffer{};
  std::strftime(buffer.data(), buffer.size(), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buffer.data();
}

std::string ManifestToJson(const RunManifest& m) {
  Json j;
  j["tool_version"] = m.tool_version;
  j["created_utc"] = m.created_utc;
  Json inputs = Json::array();
  for (const InputDigest& d : m.inputs) {
    Json item;
    item["role"] = d.role;
    item["path"] = d.path;
    item["bytes"] = d.bytes;
    item["sha256"] = d.sha256;
    inputs.push_back(std::move(item));
  }
  j["inputs"] = std::move(inputs);
  j["config"] = ConfigToJson(m.config);
  Json results;
  results["map"] = m.map_value ? Json(*m.map_value) : Json(nullptr);
  results["evaluable_classes"] = m.evaluable_classes;
  results["total_gt"] = m.total_gt;
  results["total_det"] = m.total_det;
  results["total_tp"] = m.total_tp;
  results["gt_rejected_rows"] = m.gt_rejected;
  results["det_rejected_rows"] = m.det_rejected;
  results["gt_duplicates"] = m.gt_duplicates;
  j["results"] = std::move(results);
  return j.dump(2) + "\n";
}

RunManifest ManifestFromJson(std::string_view text) {
  RunManifest m;
  try {
    const Json j = Json::parse(text);
    m.tool_version = j.at("tool_version").get<std::string>();
    m.created_utc = j.at("created_utc").get<std::string>();
    for (const Json& item : j.at("inputs")) {
      m.inputs.push_back(InputDigest{item.at("role").get<std::string>(),
                                     item.at("path").get<std::string>(),
                                     item.at("bytes").get<std::uint64_t>(),
                                     item.at("sha256").get<std::string>()});
    }
    const Json& c = j.at("config");
    m.config.iou_threshold = c.at("iou_threshold").get<double>();
    const auto mode = ParseInterpolation(c.at("interpolation").get<std::string>());
    if (!mode) throw std::runtime_error("unknown interpolation mode");
    m.config.interpolation = *mode;
    m.config.score_floor = c.at("score_floor").get<double>();
    m.config.retain_curves = c.at("retain_curves").get<bool>();
    const Json& r = j.at("results");
    if (!r.at("map").is_null()) m.map_value = r.at("map").get<double>();
    m.evaluable_classes = r.at("evaluable_classes").get<std::int64_t>();
    m.total_gt = r.at("total_gt").get<std::int64_t>();
    m.total_det = r.at("total_det").get<std::int64_t>();
    m.total_tp = r.at("total_tp").get<std::int64_t>();
    m.gt_rejected = r.at("gt_rejected_rows").get<std::int64_t>();
    m.det_rejected = r.at("det_rejected_rows").get<std::int64_t>();
    m.gt_duplicates = r.at("gt_duplicates").get<std::int64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(fmt::format("invalid manifest: {}", e.what()));
  }
  return m;
}

}  // namespace avaeval
