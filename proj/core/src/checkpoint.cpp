#include "scrnn/checkpoint.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "scrnn/csv.hpp"
#include "scrnn/error.hpp"

namespace scrnn {

namespace {

constexpr const char* kMagic = "scrnn-checkpoint 1";

[[noreturn]] void fail(const std::string& source, std::size_t line, const std::string& what) {
  throw DataError(source + ": line " + std::to_string(line) + ": " + what);
}

}  // namespace

std::string serialize_checkpoint(const Checkpoint& ckpt) {
  const ParameterSet& p = ckpt.params;
  p.validate();
  if (ckpt.config_json.find('\n') != std::string::npos) {
    throw ArgumentError("checkpoint config must be single-line JSON");
  }
  std::string out = std::string(kMagic) + "\n";
  out += "shape " + std::to_string(p.shape.joints) + " " + std::to_string(p.shape.observed) + " " +
         std::to_string(p.shape.hidden) + " " + std::to_string(p.shape.attention) + "\n";
  out += "config " + ckpt.config_json + "\n";
  char cell[64];
  visit_weights(p.weights, [&](std::string_view name, const Matrix& m) {
    out += "param " + std::string(name) + " " + std::to_string(m.rows()) + " " +
           std::to_string(m.cols()) + "\n";
    for (std::size_t r = 0; r < m.rows(); ++r) {
      for (std::size_t c = 0; c < m.cols(); ++c) {
        if (c) out.push_back(' ');
        const int n = std::snprintf(cell, sizeof cell, "%a", m(r, c));
        out.append(cell, static_cast<std::size_t>(n));
      }
      out.push_back('\n');
    }
  });
  out += "end\n";
  return out;
}

Checkpoint parse_checkpoint(const std::string& text, const std::string& source) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  auto next = [&]() -> std::string& {
    if (!std::getline(in, line)) fail(source, line_no + 1, "unexpected end of checkpoint");
    ++line_no;
    return line;
  };

  if (next() != kMagic) fail(source, line_no, "not a scrnn checkpoint (bad header)");

  Checkpoint ckpt;
  {
    std::istringstream ls(next());
    std::string tag;
    ModelShape& s = ckpt.params.shape;
    if (!(ls >> tag >> s.joints >> s.observed >> s.hidden >> s.attention) || tag != "shape") {
      fail(source, line_no, "expected 'shape K T n a'");
    }
  }
  {
    const std::string& l = next();
    if (l.rfind("config ", 0) != 0) fail(source, line_no, "expected 'config <json>'");
    ckpt.config_json = l.substr(7);
  }

  std::map<std::string, Matrix> read;
  while (true) {
    const std::string header = next();
    if (header == "end") break;
    std::istringstream hs(header);
    std::string tag, name;
    std::size_t rows = 0, cols = 0;
    if (!(hs >> tag >> name >> rows >> cols) || tag != "param" || rows == 0 || cols == 0) {
      fail(source, line_no, "expected 'param <name> <rows> <cols>'");
    }
    if (read.contains(name)) fail(source, line_no, "duplicate parameter '" + name + "'");
    Matrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
      const std::string& row = next();
      const char* p = row.c_str();
      for (std::size_t c = 0; c < cols; ++c) {
        char* end = nullptr;
        m(r, c) = std::strtod(p, &end);
        if (end == p) fail(source, line_no, "parameter '" + name + "' has too few values");
        p = end;
      }
      while (*p == ' ') ++p;
      if (*p != '\0') fail(source, line_no, "parameter '" + name + "' has too many values");
    }
    read.emplace(name, std::move(m));
  }

  if (ckpt.params.shape.projected()) ckpt.params.weights.P_out = Matrix(1, 1);
  visit_weights(ckpt.params.weights, [&](std::string_view name, Matrix& m) {
    auto it = read.find(std::string(name));
    if (it == read.end()) throw DataError(source + ": missing parameter '" + std::string(name) + "'");
    m = std::move(it->second);
    read.erase(it);
  });
  if (!read.empty()) throw DataError(source + ": unexpected parameter '" + read.begin()->first + "'");
  ckpt.params.validate();
  return ckpt;
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
  write_file_atomic(path, serialize_checkpoint(ckpt));
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open checkpoint " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_checkpoint(buf.str(), path.string());
}

}  // namespace scrnn
