#include "pinnlab/checkpoint.hpp"

#include <charconv>
#include <fstream>
#include <json.hpp>

#include "pinnlab/errors.hpp"

namespace pinnlab {

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
  check_params(ckpt.params, ckpt.config);
  nlohmann::json header = {
      {"format", "pinnlab-checkpoint"},
      {"version", 1},
      {"widths", ckpt.config.widths},
      {"lower", ckpt.config.lower},
      {"upper", ckpt.config.upper},
      {"seed", ckpt.seed},
      {"epoch", ckpt.epoch},
      {"count", ckpt.params.size()},
  };
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write checkpoint " + path.string());
  out << header.dump() << '\n';
  for (double v : ckpt.params.values) out << format_double(v) << '\n';
  if (!out) throw UsageError("failed writing checkpoint " + path.string());
}

Checkpoint read_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("checkpoint not found: " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw UsageError("empty checkpoint: " + path.string());

  Checkpoint ckpt;
  std::size_t count = 0;
  try {
    const auto header = nlohmann::json::parse(line);
    if (header.at("format") != "pinnlab-checkpoint") throw UsageError("not a pinnlab checkpoint");
    ckpt.config.widths = header.at("widths").get<std::vector<int>>();
    ckpt.config.lower = header.at("lower").get<std::array<double, 2>>();
    ckpt.config.upper = header.at("upper").get<std::array<double, 2>>();
    ckpt.seed = header.at("seed").get<std::uint64_t>();
    ckpt.epoch = header.at("epoch").get<std::int64_t>();
    count = header.at("count").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("bad checkpoint header in " + path.string() + ": " + e.what());
  }

  ckpt.params.values.reserve(count);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    double v = 0.0;
    const auto res = std::from_chars(line.data(), line.data() + line.size(), v);
    if (res.ec != std::errc{} || res.ptr != line.data() + line.size()) {
      throw UsageError("bad parameter value '" + line + "' in " + path.string());
    }
    ckpt.params.values.push_back(v);
  }
  if (ckpt.params.size() != count) throw UsageError("checkpoint parameter count mismatch in " + path.string());
  check_params(ckpt.params, ckpt.config);
  return ckpt;
}

}  // namespace pinnlab
