#pragma once

#include "spx/core.hpp"

#include <png.h>

#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace spx {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

// Next PNM token, skipping whitespace and '#' comments.
inline std::string pnm_token(std::istream& in)
{
  int c = in.get();
  while (c != EOF && (std::isspace(c) || c == '#')) {
    if (c == '#')
      while (c != EOF && c != '\n') c = in.get();
    c = in.get();
  }
  std::string tok;
  while (c != EOF && !std::isspace(c)) {
    tok.push_back(static_cast<char>(c));
    c = in.get();
  }
  return tok;
}

inline long pnm_int(std::istream& in, const char* what)
{
  const std::string tok = pnm_token(in);
  if (tok.empty())
    throw IoError(std::string("PNM: missing ") + what + " at byte offset " +
                  std::to_string(static_cast<long>(in.tellg())));
  try {
    return std::stol(tok);
  } catch (const std::exception&) {
    throw IoError(std::string("PNM: bad ") + what + " token '" + tok + "'");
  }
}

struct PnmData {
  std::string magic;
  int width = 0, height = 0, maxval = 0;
  std::vector<long> samples;  // row-major, channel-interleaved
  int channels = 1;
};

inline PnmData read_pnm(const std::string& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  PnmData d;
  d.magic = pnm_token(in);
  if (d.magic != "P2" && d.magic != "P5" && d.magic != "P3" && d.magic != "P6")
    throw IoError(path + ": unsupported PNM magic '" + d.magic + "'");
  d.channels = (d.magic == "P3" || d.magic == "P6") ? 3 : 1;
  d.width = static_cast<int>(pnm_int(in, "width"));
  d.height = static_cast<int>(pnm_int(in, "height"));
  d.maxval = static_cast<int>(pnm_int(in, "maxval"));
  if (d.width < 1 || d.height < 1 || d.maxval < 1 || d.maxval > 65535)
    throw IoError(path + ": bad PNM header");
  const long count = static_cast<long>(d.width) * d.height * d.channels;
  d.samples.resize(static_cast<size_t>(count));
  if (d.magic == "P2" || d.magic == "P3") {
    for (long i = 0; i < count; ++i) d.samples[static_cast<size_t>(i)] = pnm_int(in, "sample");
  } else {
    const int bytes = d.maxval > 255 ? 2 : 1;
    std::vector<unsigned char> raw(static_cast<size_t>(count) * bytes);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (in.gcount() != static_cast<std::streamsize>(raw.size())) {
      const long offset = in.tellg() == std::streampos(-1)
                              ? static_cast<long>(std::filesystem::file_size(path))
                              : static_cast<long>(in.tellg());
      throw IoError(path + ": truncated at byte offset " + std::to_string(offset));
    }
    for (long i = 0; i < count; ++i)
      d.samples[static_cast<size_t>(i)] =
          bytes == 1 ? raw[static_cast<size_t>(i)]
                     : (raw[static_cast<size_t>(2 * i)] << 8) | raw[static_cast<size_t>(2 * i + 1)];
  }
  return d;
}

struct PngData {
  int width = 0, height = 0, channels = 1;
  std::vector<long> samples;  // interleaved
};

inline PngData read_png(const std::string& path)
{
  std::FILE* fp = std::fopen(path.c_str(), "rb");
  if (!fp) throw IoError("cannot open " + path);
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png_create_info_struct(png);
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    std::fclose(fp);
    throw IoError(path + ": PNG decode failed");
  }
  png_init_io(png, fp);
  png_read_info(png, info);
  const int bit_depth = png_get_bit_depth(png, info);
  const int color_type = png_get_color_type(png, info);
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  png_set_strip_alpha(png);
  if (bit_depth == 16) png_set_swap(png);  // little-endian 16-bit samples below
  png_read_update_info(png, info);

  PngData d;
  d.width = static_cast<int>(png_get_image_width(png, info));
  d.height = static_cast<int>(png_get_image_height(png, info));
  const int out_channels = static_cast<int>(png_get_channels(png, info));
  const int out_depth = png_get_bit_depth(png, info);
  d.channels = out_channels;
  std::vector<std::vector<unsigned char>> rows(static_cast<size_t>(d.height));
  std::vector<png_bytep> row_ptrs(static_cast<size_t>(d.height));
  const size_t rowbytes = png_get_rowbytes(png, info);
  for (int y = 0; y < d.height; ++y) {
    rows[static_cast<size_t>(y)].resize(rowbytes);
    row_ptrs[static_cast<size_t>(y)] = rows[static_cast<size_t>(y)].data();
  }
  png_read_image(png, row_ptrs.data());
  png_destroy_read_struct(&png, &info, nullptr);
  std::fclose(fp);

  d.samples.resize(static_cast<size_t>(d.width) * d.height * d.channels);
  size_t i = 0;
  for (int y = 0; y < d.height; ++y) {
    const unsigned char* row = rows[static_cast<size_t>(y)].data();
    for (int x = 0; x < d.width * d.channels; ++x)
      d.samples[i++] = out_depth == 16
                           ? static_cast<long>(row[2 * x]) | (static_cast<long>(row[2 * x + 1]) << 8)
                           : static_cast<long>(row[x]);
  }
  return d;
}

inline void write_png_gray16(const std::string& path, const LabelArray& labels)
{
  std::FILE* fp = std::fopen(path.c_str(), "wb");
  if (!fp) throw IoError("cannot open " + path + " for writing");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png_create_info_struct(png);
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
    throw IoError(path + ": PNG encode failed");
  }
  png_init_io(png, fp);
  const int w = static_cast<int>(labels.cols());
  const int h = static_cast<int>(labels.rows());
  png_set_IHDR(png, info, static_cast<png_uint_32>(w), static_cast<png_uint_32>(h), 16,
               PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  std::vector<unsigned char> row(static_cast<size_t>(w) * 2);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const int v = labels(y, x);
      row[static_cast<size_t>(2 * x)] = static_cast<unsigned char>((v >> 8) & 0xff);
      row[static_cast<size_t>(2 * x + 1)] = static_cast<unsigned char>(v & 0xff);
    }
    png_write_row(png, row.data());
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  std::fclose(fp);
}

inline std::string lower_extension(const std::string& path)
{
  std::string ext = std::filesystem::path(path).extension().string();
  for (char& c : ext) c = static_cast<char>(std::tolower(c));
  return ext;
}

}  // namespace detail

/// Label maps from 16-bit PGM (P2/P5), gray PNG (8/16-bit), or integer CSV.
/// Labels are taken exactly as stored, no renumbering.
inline LabelMap read_label_map(const std::string& path)
{
  const std::string ext = detail::lower_extension(path);
  if (ext == ".csv") {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::vector<std::vector<int>> rows;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      std::vector<int> row;
      std::stringstream ss(line);
      std::string cell;
      while (std::getline(ss, cell, ','))
        try {
          row.push_back(std::stoi(cell));
        } catch (const std::exception&) {
          throw IoError(path + ": bad integer '" + cell + "' on row " +
                        std::to_string(lineno));
        }
      if (!rows.empty() && row.size() != rows.front().size())
        throw IoError(path + ": ragged CSV on row " + std::to_string(lineno));
      rows.push_back(std::move(row));
    }
    if (rows.empty()) throw IoError(path + ": empty CSV");
    LabelArray labels(static_cast<long>(rows.size()), static_cast<long>(rows.front().size()));
    for (size_t y = 0; y < rows.size(); ++y)
      for (size_t x = 0; x < rows[y].size(); ++x)
        labels(static_cast<long>(y), static_cast<long>(x)) = rows[y][x];
    return LabelMap(std::move(labels));
  }
  if (ext == ".png") {
    const detail::PngData d = detail::read_png(path);
    if (d.channels != 1) throw IoError(path + ": label PNG must be grayscale");
    LabelArray labels(d.height, d.width);
    for (int y = 0; y < d.height; ++y)
      for (int x = 0; x < d.width; ++x)
        labels(y, x) = static_cast<int>(d.samples[static_cast<size_t>(y) * d.width + x]);
    return LabelMap(std::move(labels));
  }
  const detail::PnmData d = detail::read_pnm(path);
  if (d.channels != 1) throw IoError(path + ": label map must be a PGM, not PPM");
  LabelArray labels(d.height, d.width);
  for (int y = 0; y < d.height; ++y)
    for (int x = 0; x < d.width; ++x)
      labels(y, x) = static_cast<int>(d.samples[static_cast<size_t>(y) * d.width + x]);
  return LabelMap(std::move(labels));
}

/// Images from PPM (P3/P6), PGM (P2/P5), or PNG. Intensities as stored.
inline Image read_image(const std::string& path)
{
  const std::string ext = detail::lower_extension(path);
  int w = 0, h = 0, ch = 0;
  const std::vector<long>* samples = nullptr;
  detail::PnmData pnm;
  detail::PngData png;
  if (ext == ".png") {
    png = detail::read_png(path);
    if (png.channels != 1 && png.channels != 3)
      throw IoError(path + ": unsupported channel count");
    w = png.width;
    h = png.height;
    ch = png.channels;
    samples = &png.samples;
  } else {
    pnm = detail::read_pnm(path);
    w = pnm.width;
    h = pnm.height;
    ch = pnm.channels;
    samples = &pnm.samples;
  }
  Image img(w, h, ch);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      for (int c = 0; c < ch; ++c)
        img.planes[static_cast<size_t>(c)](y, x) =
            static_cast<double>((*samples)[(static_cast<size_t>(y) * w + x) * ch + c]);
  return img;
}

/// Write a label map as 16-bit PGM (P2 or P5 by `binary`), PNG, or CSV,
/// chosen by extension.
inline void write_label_map(const std::string& path, const LabelMap& map,
                            bool binary = true)
{
  const std::string ext = detail::lower_extension(path);
  const int w = map.width(), h = map.height();
  if (ext == ".csv") {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) out << (x ? "," : "") << map.labels(y, x);
      out << "\n";
    }
    return;
  }
  if (ext == ".png") {
    const int max_label = map.labels.maxCoeff();
    if (max_label > 65535) throw IoError(path + ": label exceeds 16-bit PNG range");
    detail::write_png_gray16(path, map.labels);
    return;
  }
  const int max_label = map.labels.maxCoeff();
  if (max_label > 65535) throw IoError(path + ": label exceeds PGM range");
  const int maxval = std::max(1, max_label);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  if (binary) {
    out << "P5\n" << w << " " << h << "\n" << maxval << "\n";
    const int bytes = maxval > 255 ? 2 : 1;
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        const int v = map.labels(y, x);
        if (bytes == 2) out.put(static_cast<char>((v >> 8) & 0xff));
        out.put(static_cast<char>(v & 0xff));
      }
  } else {
    out << "P2\n" << w << " " << h << "\n" << maxval << "\n";
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) out << (x ? " " : "") << map.labels(y, x);
      out << "\n";
    }
  }
}

/// Write an image as PGM/PPM (binary), intensities rounded and clamped to
/// [0, 255].
inline void write_image(const std::string& path, const Image& img)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  const int w = img.width(), h = img.height();
  out << (img.channels() == 3 ? "P6" : "P5") << "\n" << w << " " << h << "\n255\n";
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      for (int c = 0; c < img.channels(); ++c) {
        const double v = std::clamp(img.planes[static_cast<size_t>(c)](y, x), 0.0, 255.0);
        out.put(static_cast<char>(static_cast<int>(std::lround(v))));
      }
}

}  // namespace spx
