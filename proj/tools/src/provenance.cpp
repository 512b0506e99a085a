#include <array>
#include <cstdio>

#include <openssl/evp.h>

#include "hurwitz/cli.hpp"

namespace hurwitz::cli {

std::string git_blob_hash(const std::string& content) {
  std::string blob = "blob " + std::to_string(content.size());
  blob.push_back('\0');
  blob += content;
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(blob.data(), blob.size(), md.data(), &len, EVP_sha1(), nullptr) != 1)
    throw std::runtime_error("SHA-1 digest failed");
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    hex += buf;
  }
  return hex;
}

nlohmann::json provenance(const nlohmann::json& resolved_config, const std::string& input_content) {
  return {{"config", resolved_config},
          {"input_hash", git_blob_hash(input_content)},
          {"tool", "hurwitz 0.1.0"}};
}

}  // namespace hurwitz::cli
