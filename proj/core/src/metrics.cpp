#include "scrnn/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "scrnn/error.hpp"

namespace scrnn {

std::vector<int> horizons_to_frames(const std::vector<double>& horizons_ms, double frame_interval_ms) {
  if (!(frame_interval_ms > 0.0)) throw ParameterError("frame interval must be positive");
  std::vector<int> frames;
  frames.reserve(horizons_ms.size());
  for (double ms : horizons_ms) {
    if (!(ms > 0.0)) throw ParameterError("horizons must be positive, got " + std::to_string(ms));
    frames.push_back(std::max(1, static_cast<int>(std::lround(ms / frame_interval_ms))));
  }
  return frames;
}

std::vector<double> mean_angle_error(const SkeletonSequence& pred, const SkeletonSequence& truth,
                                     const std::vector<int>& horizon_frames) {
  if (pred.dim() != truth.dim()) {
    throw ShapeError("prediction has " + std::to_string(pred.dim()) + " values per frame, truth has " +
                     std::to_string(truth.dim()));
  }
  std::vector<double> out;
  out.reserve(horizon_frames.size());
  for (int h : horizon_frames) {
    if (h < 1 || static_cast<std::size_t>(h) > pred.length() ||
        static_cast<std::size_t>(h) > truth.length()) {
      throw DataError("horizon frame " + std::to_string(h) + " beyond sequences of " +
                      std::to_string(pred.length()) + " predicted / " +
                      std::to_string(truth.length()) + " ground-truth frames");
    }
    const auto& p = pred.frame(static_cast<std::size_t>(h));
    const auto& t = truth.frame(static_cast<std::size_t>(h));
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) s += (p[i] - t[i]) * (p[i] - t[i]);
    out.push_back(std::sqrt(s));
  }
  return out;
}

std::vector<double> mean_angle_error(const std::vector<SkeletonSequence>& pred,
                                     const std::vector<SkeletonSequence>& truth,
                                     const std::vector<int>& horizon_frames) {
  if (pred.size() != truth.size() || pred.empty()) {
    throw ShapeError("batch MAE needs equally many (>0) predicted and ground-truth sequences, got " +
                     std::to_string(pred.size()) + " and " + std::to_string(truth.size()));
  }
  std::vector<double> acc(horizon_frames.size(), 0.0);
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const auto e = mean_angle_error(pred[i], truth[i], horizon_frames);
    for (std::size_t h = 0; h < acc.size(); ++h) acc[h] += e[h];
  }
  for (double& v : acc) v /= static_cast<double>(pred.size());
  return acc;
}

namespace {

std::string fmt(double v, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  return buf;
}

std::string fmt_ms(double ms) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", ms);
  return buf;
}

}  // namespace

std::string MaeTable::to_markdown(int precision) const {
  std::ostringstream os;
  os << "| tag |";
  for (double ms : horizons_ms) os << ' ' << fmt_ms(ms) << "ms |";
  os << "\n|---|";
  for (std::size_t i = 0; i < horizons_ms.size(); ++i) os << "---|";
  os << '\n';
  for (const auto& row : rows) {
    os << "| " << row.tag << " |";
    for (double v : row.values) os << ' ' << fmt(v, precision) << " |";
    os << '\n';
  }
  return os.str();
}

std::string MaeTable::to_csv() const {
  std::ostringstream os;
  os << "tag";
  for (double ms : horizons_ms) os << ',' << fmt_ms(ms);
  os << '\n';
  char buf[64];
  for (const auto& row : rows) {
    os << row.tag;
    for (double v : row.values) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      os << ',' << buf;
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace scrnn
