#include "content_hash.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <memory>
#include <sstream>

#include <openssl/evp.h>

#include "scrnn/error.hpp"

namespace scrnn::cli {

namespace {

std::array<unsigned char, 20> sha1(const std::string& bytes) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  std::array<unsigned char, 20> out{};
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha1(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), out.data(), &len) != 1 || len != out.size()) {
    throw Error(ErrorCategory::internal, "sha1 digest failed");
  }
  return out;
}

std::string hex(const std::array<unsigned char, 20>& d) {
  static const char* digits = "0123456789abcdef";
  std::string s;
  for (unsigned char c : d) {
    s.push_back(digits[c >> 4]);
    s.push_back(digits[c & 15]);
  }
  return s;
}

std::string read_all(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw DataError("cannot read " + p.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::array<unsigned char, 20> blob(const std::string& bytes) {
  std::string obj = "blob " + std::to_string(bytes.size());
  obj.push_back('\0');
  obj += bytes;
  return sha1(obj);
}

}  // namespace

std::string git_blob_hash(const std::string& bytes) { return hex(blob(bytes)); }

std::string git_content_hash(const std::vector<std::filesystem::path>& files) {
  if (files.size() == 1) return git_blob_hash(read_all(files.front()));
  std::vector<std::pair<std::string, std::filesystem::path>> entries;
  for (const auto& f : files) entries.emplace_back(f.filename().string(), f);
  std::sort(entries.begin(), entries.end());
  std::string body;
  for (const auto& [name, path] : entries) {
    body += "100644 " + name;
    body.push_back('\0');
    const auto d = blob(read_all(path));
    body.append(reinterpret_cast<const char*>(d.data()), d.size());
  }
  std::string obj = "tree " + std::to_string(body.size());
  obj.push_back('\0');
  obj += body;
  return hex(sha1(obj));
}

}  // namespace scrnn::cli
