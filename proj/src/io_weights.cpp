#include <array>
#include <fstream>
#include <vector>

#include <fmt/format.h>

#include "byte_io.hpp"
#include "pnm/io.hpp"

namespace pnm::io {
namespace {

constexpr std::array<std::uint8_t, 4> kMagic{'P', 'N', 'M', 'W'};
constexpr std::uint64_t kMaxPixels = std::uint64_t{1} << 30;

}  // namespace

void write_weight_map(const WeightMapF& map, std::ostream& out) {
  const auto& config = map.config();
  config.validate();
  out.write(reinterpret_cast<const char*>(kMagic.data()), kMagic.size());
  detail::put_u8(out, kWeightFormatVersion);
  detail::put_u32(out, static_cast<std::uint32_t>(map.width()));
  detail::put_u32(out, static_cast<std::uint32_t>(map.height()));
  detail::put_u16(out, static_cast<std::uint16_t>(config.d));
  detail::put_u8(out, static_cast<std::uint8_t>(config.transform));
  detail::put_u8(out, static_cast<std::uint8_t>(config.border));

  const float* w = map.weights().data();
  for (Index i = 0; i < map.size(); ++i) detail::put_f32(out, w[i]);

  const bool* flags = map.excluded().data();
  std::uint8_t byte = 0;
  for (Index i = 0; i < map.size(); ++i) {
    if (flags[i]) byte |= static_cast<std::uint8_t>(1u << (i % 8));
    if (i % 8 == 7) {
      detail::put_u8(out, byte);
      byte = 0;
    }
  }
  if (map.size() % 8 != 0) detail::put_u8(out, byte);
  if (!out) throw Error(ErrorKind::Io, "weight map write failed");
}

void write_weight_map(const WeightMapF& map, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot create " + path.string());
  write_weight_map(map, out);
  out.close();
  if (!out) throw Error(ErrorKind::Io, "failed writing " + path.string());
}

WeightMapF read_weight_map(std::istream& in) {
  constexpr const char* kShortHeader = "weight map: truncated header";
  std::array<std::uint8_t, 4> magic{};
  detail::get_bytes(in, magic, kShortHeader);
  if (magic != kMagic) {
    throw Error(ErrorKind::MagicMismatch, "weight map: bad magic, expected PNMW");
  }
  const auto version = detail::get_u8(in, kShortHeader);
  if (version != kWeightFormatVersion) {
    throw Error(ErrorKind::VersionMismatch,
                fmt::format("weight map: unsupported version {}", version));
  }
  const auto width = detail::get_u32(in, kShortHeader);
  const auto height = detail::get_u32(in, kShortHeader);
  PnmConfig config;
  config.d = detail::get_u16(in, kShortHeader);
  const auto transform = detail::get_u8(in, kShortHeader);
  const auto border = detail::get_u8(in, kShortHeader);

  if (width == 0 || height == 0 ||
      static_cast<std::uint64_t>(width) * height > kMaxPixels) {
    throw Error(ErrorKind::CorruptFile,
                fmt::format("weight map: bad dimensions {}x{}", width, height));
  }
  if (transform < 1 || transform > 3 || border > 1) {
    throw Error(ErrorKind::CorruptFile,
                fmt::format("weight map: bad transform/border codes {}/{}",
                            transform, border));
  }
  config.transform = static_cast<Transform>(transform);
  config.border = static_cast<BorderPolicy>(border);
  try {
    config.validate();
  } catch (const Error& e) {
    throw Error(ErrorKind::CorruptFile, std::string("weight map: ") + e.what());
  }

  const std::size_t count = static_cast<std::size_t>(width) * height;
  const std::size_t flag_bytes = (count + 7) / 8;
  std::vector<std::uint8_t> payload(count * 4 + flag_bytes);
  in.read(reinterpret_cast<char*>(payload.data()),
          static_cast<std::streamsize>(payload.size()));
  if (static_cast<std::size_t>(in.gcount()) != payload.size()) {
    throw Error(ErrorKind::Truncated,
                fmt::format("weight map: payload has {} of {} bytes",
                            in.gcount(), payload.size()));
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw Error(ErrorKind::CorruptFile, "weight map: trailing bytes after payload");
  }

  WeightMapF::Weights weights(static_cast<Index>(height), static_cast<Index>(width));
  FlagArray excluded(static_cast<Index>(height), static_cast<Index>(width));
  float* w = weights.data();
  bool* flags = excluded.data();
  const std::uint8_t* bits = payload.data() + count * 4;
  for (std::size_t i = 0; i < count; ++i) {
    w[i] = std::bit_cast<float>(detail::load_u32(payload.data() + 4 * i));
    flags[i] = (bits[i / 8] >> (i % 8)) & 1u;
  }
  return WeightMapF(std::move(weights), std::move(excluded), config);
}

WeightMapF read_weight_map(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  return read_weight_map(in);
}

}  // namespace pnm::io
