#include "silcal/imgproc/mask_io.hpp"

#include <png.h>

#include <cctype>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <vector>

#include "silcal/common/errors.hpp"

namespace silcal::imgproc {
namespace {

bool has_suffix(const std::string& s, const char* suffix) {
  const std::size_t n = std::strlen(suffix);
  if (s.size() < n) return false;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::tolower(static_cast<unsigned char>(s[s.size() - n + i])) !=
        suffix[i])
      return false;
  }
  return true;
}

struct FileCloser {
  std::FILE* fp = nullptr;
  ~FileCloser() {
    if (fp) std::fclose(fp);
  }
};

struct PngReadGuard {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~PngReadGuard() {
    if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
  }
};

struct PngWriteGuard {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~PngWriteGuard() {
    if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
  }
};

Image<std::uint8_t> read_gray8_png(const std::string& path) {
  FileCloser file{std::fopen(path.c_str(), "rb")};
  if (!file.fp) throw ImageIoError("cannot open " + path);
  png_byte header[8];
  if (std::fread(header, 1, 8, file.fp) != 8 || png_sig_cmp(header, 0, 8))
    throw ImageIoError(path + " is not a PNG file");

  PngReadGuard g;
  g.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr,
                                 nullptr);
  if (!g.png) throw ImageIoError("libpng initialisation failed");
  g.info = png_create_info_struct(g.png);
  if (!g.info) throw ImageIoError("libpng initialisation failed");
  if (setjmp(png_jmpbuf(g.png)))
    throw ImageIoError("libpng failed while reading " + path);

  png_init_io(g.png, file.fp);
  png_set_sig_bytes(g.png, 8);
  png_read_info(g.png, g.info);

  const png_uint_32 width = png_get_image_width(g.png, g.info);
  const png_uint_32 height = png_get_image_height(g.png, g.info);
  const int color_type = png_get_color_type(g.png, g.info);
  const int bit_depth = png_get_bit_depth(g.png, g.info);
  if (color_type == PNG_COLOR_TYPE_PALETTE)
    throw ImageIoError(path + ": indexed-palette PNG is not a mask format");
  if (color_type != PNG_COLOR_TYPE_GRAY) {
    const int channels = png_get_channels(g.png, g.info);
    throw ImageIoError(path + ": expected 1 channel, got " +
                       std::to_string(channels));
  }
  if (width == 0 || height == 0 || width > 100000 || height > 100000)
    throw ImageIoError(path + ": unreasonable image dimensions");

  if (bit_depth < 8) png_set_expand_gray_1_2_4_to_8(g.png);
  if (bit_depth == 16) png_set_strip_16(g.png);
  png_read_update_info(g.png, g.info);
  if (png_get_rowbytes(g.png, g.info) != width)
    throw ImageIoError(path + ": unexpected row stride");

  Image<std::uint8_t> img(static_cast<int>(height), static_cast<int>(width));
  std::vector<png_bytep> rows(height);
  for (png_uint_32 r = 0; r < height; ++r)
    rows[r] = reinterpret_cast<png_bytep>(img.row(static_cast<int>(r)));
  png_read_image(g.png, rows.data());
  png_read_end(g.png, nullptr);
  return img;
}

void write_png(const std::string& path, int height, int width, int bit_depth,
               int color_type, const std::vector<png_bytep>& rows) {
  FileCloser file{std::fopen(path.c_str(), "wb")};
  if (!file.fp) throw ImageIoError("cannot write " + path);
  PngWriteGuard g;
  g.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr,
                                  nullptr);
  if (!g.png) throw ImageIoError("libpng initialisation failed");
  g.info = png_create_info_struct(g.png);
  if (!g.info) throw ImageIoError("libpng initialisation failed");
  if (setjmp(png_jmpbuf(g.png)))
    throw ImageIoError("libpng failed while writing " + path);
  png_init_io(g.png, file.fp);
  png_set_IHDR(g.png, g.info, static_cast<png_uint_32>(width),
               static_cast<png_uint_32>(height), bit_depth, color_type,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(g.png, g.info);
  if (bit_depth == 16) png_set_swap(g.png);  // bytes in memory are host order
  png_write_image(g.png, const_cast<png_bytep*>(rows.data()));
  png_write_end(g.png, nullptr);
}

BinaryMask load_mask_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ImageIoError("cannot open " + path);
  auto next_token = [&in, &path]() {
    std::string tok;
    char c;
    while (in.get(c)) {
      if (c == '#') {  // comment runs to end of line
        while (in.get(c) && c != '\n') {
        }
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(c))) {
        if (!tok.empty()) return tok;
        continue;
      }
      tok.push_back(c);
    }
    if (tok.empty()) throw ImageIoError(path + ": truncated PGM header");
    return tok;
  };
  const std::string magic = next_token();
  if (magic != "P5")
    throw ImageIoError(path + ": expected binary PGM (P5), got " + magic);
  const int width = std::stoi(next_token());
  const int height = std::stoi(next_token());
  const int maxval = std::stoi(next_token());
  if (width <= 0 || height <= 0)
    throw ImageIoError(path + ": bad PGM dimensions");
  if (maxval <= 0 || maxval > 255)
    throw ImageIoError(path + ": only 8-bit PGM supported (maxval " +
                       std::to_string(maxval) + ")");
  BinaryMask mask(height, width);
  std::vector<std::uint8_t> row(static_cast<std::size_t>(width));
  for (int r = 0; r < height; ++r) {
    in.read(reinterpret_cast<char*>(row.data()), width);
    if (!in) throw ImageIoError(path + ": truncated PGM pixel data");
    for (int c = 0; c < width; ++c) mask.at(r, c) = row[c] > 127 ? 1 : 0;
  }
  return mask;
}

void save_mask_pgm(const BinaryMask& mask, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ImageIoError("cannot write " + path);
  out << "P5\n" << mask.width() << ' ' << mask.height() << "\n255\n";
  std::vector<std::uint8_t> row(static_cast<std::size_t>(mask.width()));
  for (int r = 0; r < mask.height(); ++r) {
    for (int c = 0; c < mask.width(); ++c)
      row[c] = mask.at(r, c) ? 255 : 0;
    out.write(reinterpret_cast<const char*>(row.data()), mask.width());
  }
  if (!out) throw ImageIoError("failed while writing " + path);
}

}  // namespace

BinaryMask load_mask(const std::string& path) {
  if (has_suffix(path, ".pgm")) return load_mask_pgm(path);
  const Image<std::uint8_t> gray = read_gray8_png(path);
  BinaryMask mask(gray.height(), gray.width());
  for (int r = 0; r < gray.height(); ++r)
    for (int c = 0; c < gray.width(); ++c)
      mask.at(r, c) = gray.at(r, c) > 127 ? 1 : 0;
  return mask;
}

void save_mask(const BinaryMask& mask, const std::string& path) {
  if (mask.empty()) throw ImageIoError("refusing to save an empty image");
  if (has_suffix(path, ".pgm")) {
    save_mask_pgm(mask, path);
    return;
  }
  Image<std::uint8_t> gray(mask.height(), mask.width());
  for (int r = 0; r < mask.height(); ++r)
    for (int c = 0; c < mask.width(); ++c)
      gray.at(r, c) = mask.at(r, c) ? 255 : 0;
  save_gray8_png(gray, path);
}

void save_gray8_png(const Image<std::uint8_t>& img, const std::string& path) {
  if (img.empty()) throw ImageIoError("refusing to save an empty image");
  std::vector<png_bytep> rows(static_cast<std::size_t>(img.height()));
  for (int r = 0; r < img.height(); ++r)
    rows[static_cast<std::size_t>(r)] =
        const_cast<png_bytep>(reinterpret_cast<const png_byte*>(img.row(r)));
  write_png(path, img.height(), img.width(), 8, PNG_COLOR_TYPE_GRAY, rows);
}

void save_gray16_png(const Image<std::uint16_t>& img, const std::string& path) {
  if (img.empty()) throw ImageIoError("refusing to save an empty image");
  std::vector<png_bytep> rows(static_cast<std::size_t>(img.height()));
  for (int r = 0; r < img.height(); ++r)
    rows[static_cast<std::size_t>(r)] =
        const_cast<png_bytep>(reinterpret_cast<const png_byte*>(img.row(r)));
  write_png(path, img.height(), img.width(), 16, PNG_COLOR_TYPE_GRAY, rows);
}

void save_rgb_png(const RgbImage& img, const std::string& path) {
  if (img.empty()) throw ImageIoError("refusing to save an empty image");
  std::vector<png_bytep> rows(static_cast<std::size_t>(img.height()));
  for (int r = 0; r < img.height(); ++r)
    rows[static_cast<std::size_t>(r)] =
        const_cast<png_bytep>(reinterpret_cast<const png_byte*>(img.row(r)));
  write_png(path, img.height(), img.width(), 8, PNG_COLOR_TYPE_RGB, rows);
}

}  // namespace silcal::imgproc
