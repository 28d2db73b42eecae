#include <array>
#include <csetjmp>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <png.h>

#include "byte_io.hpp"
#include "pnm/io.hpp"

namespace pnm::io {
namespace {

constexpr std::array<char, 4> kSidecarMagic{'P', 'N', 'M', 'L'};
constexpr std::uint8_t kSidecarVersion = 1;
constexpr std::uint64_t kMaxPixels = std::uint64_t{1} << 30;

void on_png_error(png_structp png, png_const_charp message) {
  auto* text = static_cast<std::string*>(png_get_error_ptr(png));
  if (text) *text = message;
  png_longjmp(png, 1);
}

void on_png_warning(png_structp, png_const_charp) {}

void on_png_read(png_structp png, png_bytep data, png_size_t length) {
  auto* in = static_cast<std::istream*>(png_get_io_ptr(png));
  in->read(reinterpret_cast<char*>(data), static_cast<std::streamsize>(length));
  if (static_cast<png_size_t>(in->gcount()) != length) {
    png_error(png, "unexpected end of PNG data");
  }
}

void on_png_write(png_structp png, png_bytep data, png_size_t length) {
  auto* out = static_cast<std::ostream*>(png_get_io_ptr(png));
  out->write(reinterpret_cast<const char*>(data),
             static_cast<std::streamsize>(length));
  if (!*out) png_error(png, "write failed");
}

void on_png_flush(png_structp png) {
  static_cast<std::ostream*>(png_get_io_ptr(png))->flush();
}

struct PngReadHandle {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~PngReadHandle() { png_destroy_read_struct(&png, &info, nullptr); }
};

struct PngWriteHandle {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~PngWriteHandle() { png_destroy_write_struct(&png, &info); }
};

LabelMask decode_png(std::istream& in, const MaskReadOptions& options) {
  // Everything touched after setjmp is declared before it.
  std::string message;
  PngReadHandle h;
  std::vector<png_byte> pixels;
  std::vector<png_bytep> rows;
  png_uint_32 width = 0;
  png_uint_32 height = 0;
  int bit_depth = 0;
  int color_type = 0;
  bool unsupported = false;

  h.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &message, on_png_error,
                                 on_png_warning);
  if (!h.png) throw Error(ErrorKind::Io, "cannot allocate PNG reader");
  h.info = png_create_info_struct(h.png);
  if (!h.info) throw Error(ErrorKind::Io, "cannot allocate PNG info");

  if (setjmp(png_jmpbuf(h.png))) {
    throw Error(ErrorKind::CorruptFile, "corrupt PNG: " + message);
  }
  png_set_read_fn(h.png, &in, on_png_read);
  png_read_info(h.png, h.info);
  width = png_get_image_width(h.png, h.info);
  height = png_get_image_height(h.png, h.info);
  bit_depth = png_get_bit_depth(h.png, h.info);
  color_type = png_get_color_type(h.png, h.info);

  if (color_type == PNG_COLOR_TYPE_PALETTE) {
    // Sub-byte indices are unpacked without scaling.
    if (bit_depth < 8) png_set_packing(h.png);
  } else if (color_type != PNG_COLOR_TYPE_GRAY || bit_depth != 8) {
    unsupported = true;
  }
  if (!unsupported) {
    png_set_interlace_handling(h.png);
    png_read_update_info(h.png, h.info);
    if (png_get_rowbytes(h.png, h.info) != width ||
        static_cast<std::uint64_t>(width) * height > kMaxPixels) {
      unsupported = true;
    }
  }
  if (!unsupported) {
    pixels.resize(static_cast<std::size_t>(width) * height);
    rows.resize(height);
    for (png_uint_32 r = 0; r < height; ++r) rows[r] = pixels.data() + r * width;
    png_read_image(h.png, rows.data());
    png_read_end(h.png, nullptr);
  }

  if (unsupported) {
    throw Error(ErrorKind::UnsupportedFormat,
                fmt::format("unsupported PNG: bit depth {} color type {}; "
                            "expected 8-bit grayscale or paletted",
                            bit_depth, color_type));
  }
  LabelArray labels(static_cast<Index>(height), static_cast<Index>(width));
  std::copy(pixels.begin(), pixels.end(), labels.data());
  return LabelMask(std::move(labels), options.ignore_label);
}

LabelMask decode_sidecar(std::istream& in, const MaskReadOptions& options) {
  std::array<std::uint8_t, 4> magic{};
  detail::get_bytes(in, magic, "sidecar: truncated header");
  const auto version = detail::get_u8(in, "sidecar: truncated header");
  if (version != kSidecarVersion) {
    throw Error(ErrorKind::VersionMismatch,
                fmt::format("sidecar: unsupported version {}", version));
  }
  const auto width = detail::get_u32(in, "sidecar: truncated header");
  const auto height = detail::get_u32(in, "sidecar: truncated header");
  const auto bytes = detail::get_u8(in, "sidecar: truncated header");
  if (width == 0 || height == 0 ||
      static_cast<std::uint64_t>(width) * height > kMaxPixels) {
    throw Error(ErrorKind::CorruptFile,
                fmt::format("sidecar: bad dimensions {}x{}", width, height));
  }
  if (bytes != 1 && bytes != 2) {
    throw Error(ErrorKind::UnsupportedFormat,
                fmt::format("sidecar: {} bytes per label", bytes));
  }
  const std::size_t count = static_cast<std::size_t>(width) * height;
  std::vector<std::uint8_t> raw(count * bytes);
  in.read(reinterpret_cast<char*>(raw.data()),
          static_cast<std::streamsize>(raw.size()));
  if (static_cast<std::size_t>(in.gcount()) != raw.size()) {
    throw Error(ErrorKind::Truncated, "sidecar: truncated label payload");
  }
  LabelArray labels(static_cast<Index>(height), static_cast<Index>(width));
  ClassId* out = labels.data();
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = bytes == 1 ? raw[i]
                        : static_cast<ClassId>(raw[2 * i] | (raw[2 * i + 1] << 8));
  }
  return LabelMask(std::move(labels), options.ignore_label);
}

}  // namespace

LabelMask read_label_mask(std::istream& in, const MaskReadOptions& options) {
  std::array<char, 4> head{};
  in.read(head.data(), head.size());
  if (in.gcount() != static_cast<std::streamsize>(head.size())) {
    throw Error(ErrorKind::Truncated, "mask file shorter than its signature");
  }
  in.seekg(-static_cast<std::streamoff>(head.size()), std::ios::cur);
  if (!in) throw Error(ErrorKind::Io, "mask stream is not seekable");

  if (static_cast<unsigned char>(head[0]) == 0x89 && head[1] == 'P' &&
      head[2] == 'N' && head[3] == 'G') {
    return decode_png(in, options);
  }
  if (head == kSidecarMagic) return decode_sidecar(in, options);
  throw Error(ErrorKind::UnsupportedFormat,
              "mask is neither PNG nor a PNML sidecar");
}

LabelMask read_label_mask(const std::filesystem::path& path,
                          const MaskReadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  return read_label_mask(in, options);
}

void write_gray_png(const Raster<std::uint8_t>& image, std::ostream& out) {
  std::string message;
  PngWriteHandle h;
  std::vector<png_bytep> rows(static_cast<std::size_t>(image.rows()));
  for (Index r = 0; r < image.rows(); ++r) {
    rows[static_cast<std::size_t>(r)] =
        const_cast<png_bytep>(image.data() + r * image.cols());
  }

  h.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &message, on_png_error,
                                  on_png_warning);
  if (!h.png) throw Error(ErrorKind::Io, "cannot allocate PNG writer");
  h.info = png_create_info_struct(h.png);
  if (!h.info) throw Error(ErrorKind::Io, "cannot allocate PNG info");
  if (setjmp(png_jmpbuf(h.png))) {
    throw Error(ErrorKind::Io, "PNG write failed: " + message);
  }
  png_set_write_fn(h.png, &out, on_png_write, on_png_flush);
  png_set_IHDR(h.png, h.info, static_cast<png_uint_32>(image.cols()),
               static_cast<png_uint_32>(image.rows()), 8, PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(h.png, h.info);
  png_write_image(h.png, rows.data());
  png_write_end(h.png, nullptr);
  if (!out) throw Error(ErrorKind::Io, "PNG write failed");
}

void write_gray_png(const Raster<std::uint8_t>& image,
                    const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot create " + path.string());
  write_gray_png(image, out);
  out.close();
  if (!out) throw Error(ErrorKind::Io, "failed writing " + path.string());
}

void write_label_mask_png(const LabelMask& mask, std::ostream& out) {
  if ((mask.labels() > 255).any()) {
    throw Error(ErrorKind::InvalidArgument,
                "labels above 255 need the raw sidecar format");
  }
  write_gray_png(mask.labels().cast<std::uint8_t>(), out);
}

void write_label_mask_png(const LabelMask& mask,
                          const std::filesystem::path& path) {
  if ((mask.labels() > 255).any()) {
    throw Error(ErrorKind::InvalidArgument,
                "labels above 255 need the raw sidecar format");
  }
  write_gray_png(mask.labels().cast<std::uint8_t>(), path);
}

void write_label_mask_raw(const LabelMask& mask, std::ostream& out) {
  const bool wide = (mask.labels() > 255).any();
  out.write(kSidecarMagic.data(), kSidecarMagic.size());
  detail::put_u8(out, kSidecarVersion);
  detail::put_u32(out, static_cast<std::uint32_t>(mask.width()));
  detail::put_u32(out, static_cast<std::uint32_t>(mask.height()));
  detail::put_u8(out, wide ? 2 : 1);
  const ClassId* p = mask.labels().data();
  for (Index i = 0; i < mask.size(); ++i) {
    if (wide) {
      detail::put_u16(out, p[i]);
    } else {
      detail::put_u8(out, static_cast<std::uint8_t>(p[i]));
    }
  }
  if (!out) throw Error(ErrorKind::Io, "sidecar write failed");
}

}  // namespace pnm::io
