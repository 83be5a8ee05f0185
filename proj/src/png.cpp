#include "gvb/png.hpp"

#include <zlib.h>

#include <cstdlib>
#include <cstring>
#include <fstream>

#include "gvb/errors.hpp"

namespace gvb {

namespace {

constexpr std::uint8_t kSignature[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

std::uint32_t get_u32(const std::uint8_t* p) {
  return (std::uint32_t{p[0]} << 24) | (std::uint32_t{p[1]} << 16) | (std::uint32_t{p[2]} << 8) |
         std::uint32_t{p[3]};
}

void chunk(std::vector<std::uint8_t>& out, const char type[4], const std::vector<std::uint8_t>& data) {
  put_u32(out, static_cast<std::uint32_t>(data.size()));
  const std::size_t start = out.size();
  out.insert(out.end(), type, type + 4);
  out.insert(out.end(), data.begin(), data.end());
  const uLong crc = crc32(0L, out.data() + start, static_cast<uInt>(out.size() - start));
  put_u32(out, static_cast<std::uint32_t>(crc));
}

int paeth(int a, int b, int c) {
  const int p = a + b - c;
  const int pa = std::abs(p - a), pb = std::abs(p - b), pc = std::abs(p - c);
  if (pa <= pb && pa <= pc) return a;
  if (pb <= pc) return b;
  return c;
}

}  // namespace

std::vector<std::uint8_t> encode_png(const Raster& r) {
  if (r.width <= 0 || r.height <= 0 ||
      r.rgb.size() != static_cast<std::size_t>(r.width) * r.height * 3)
    throw ParameterError("encode_png: malformed raster");
  const std::size_t stride = static_cast<std::size_t>(r.width) * 3;
  std::vector<std::uint8_t> raw;
  raw.reserve((stride + 1) * r.height);
  for (int y = 0; y < r.height; ++y) {
    raw.push_back(0);
    raw.insert(raw.end(), r.rgb.begin() + y * stride, r.rgb.begin() + (y + 1) * stride);
  }
  uLongf packed_size = compressBound(static_cast<uLong>(raw.size()));
  std::vector<std::uint8_t> packed(packed_size);
  if (compress2(packed.data(), &packed_size, raw.data(), static_cast<uLong>(raw.size()), 6) != Z_OK)
    throw std::runtime_error("encode_png: deflate failed");
  packed.resize(packed_size);

  std::vector<std::uint8_t> out(kSignature, kSignature + 8);
  std::vector<std::uint8_t> ihdr;
  put_u32(ihdr, static_cast<std::uint32_t>(r.width));
  put_u32(ihdr, static_cast<std::uint32_t>(r.height));
  ihdr.insert(ihdr.end(), {8, 2, 0, 0, 0});
  chunk(out, "IHDR", ihdr);
  chunk(out, "IDAT", packed);
  chunk(out, "IEND", {});
  return out;
}

Raster decode_png(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 8 || std::memcmp(bytes.data(), kSignature, 8) != 0)
    throw ParameterError("decode_png: not a PNG");
  Raster r;
  std::vector<std::uint8_t> idat;
  std::size_t pos = 8;
  bool seen_header = false;
  while (pos + 12 <= bytes.size()) {
    const std::uint32_t len = get_u32(&bytes[pos]);
    if (pos + 12 + len > bytes.size()) throw ParameterError("decode_png: truncated chunk");
    const std::string type(reinterpret_cast<const char*>(&bytes[pos + 4]), 4);
    const std::uint8_t* data = &bytes[pos + 8];
    const uLong crc = crc32(0L, &bytes[pos + 4], static_cast<uInt>(len + 4));
    if (crc != get_u32(&bytes[pos + 8 + len])) throw ParameterError("decode_png: CRC mismatch");
    if (type == "IHDR") {
      if (len != 13) throw ParameterError("decode_png: bad IHDR");
      r.width = static_cast<int>(get_u32(data));
      r.height = static_cast<int>(get_u32(data + 4));
      if (data[8] != 8 || data[9] != 2 || data[12] != 0)
        throw ParameterError("decode_png: only 8-bit RGB non-interlaced images are supported");
      seen_header = true;
    } else if (type == "IDAT") {
      idat.insert(idat.end(), data, data + len);
    } else if (type == "IEND") {
      break;
    }
    pos += 12 + len;
  }
  if (!seen_header) throw ParameterError("decode_png: missing IHDR");
  const std::size_t stride = static_cast<std::size_t>(r.width) * 3;
  uLongf raw_size = static_cast<uLongf>((stride + 1) * r.height);
  std::vector<std::uint8_t> raw(raw_size);
  if (uncompress(raw.data(), &raw_size, idat.data(), static_cast<uLong>(idat.size())) != Z_OK ||
      raw_size != raw.size())
    throw ParameterError("decode_png: bad image data");
  r.rgb.assign(stride * r.height, 0);
  for (int y = 0; y < r.height; ++y) {
    const std::uint8_t filter = raw[y * (stride + 1)];
    const std::uint8_t* src = &raw[y * (stride + 1) + 1];
    std::uint8_t* dst = &r.rgb[y * stride];
    const std::uint8_t* up = y > 0 ? &r.rgb[(y - 1) * stride] : nullptr;
    for (std::size_t i = 0; i < stride; ++i) {
      const int a = i >= 3 ? dst[i - 3] : 0;
      const int b = up ? up[i] : 0;
      const int c = (up && i >= 3) ? up[i - 3] : 0;
      int v = src[i];
      switch (filter) {
        case 0: break;
        case 1: v += a; break;
        case 2: v += b; break;
        case 3: v += (a + b) / 2; break;
        case 4: v += paeth(a, b, c); break;
        default: throw ParameterError("decode_png: unknown filter");
      }
      dst[i] = static_cast<std::uint8_t>(v & 0xff);
    }
  }
  return r;
}

void write_file(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw std::runtime_error("write failed: " + path.string());
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
  if (!f) throw std::runtime_error("write failed: " + path.string());
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read " + path.string());
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

}  // namespace gvb
