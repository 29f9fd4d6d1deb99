#include "core/formats.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>

#include "core/error.hpp"

namespace ott {

namespace {

[[noreturn]] void parse_fail(const std::string& path, std::size_t line, const std::string& what) {
  fail(ErrorCode::ParseError, path + ":" + std::to_string(line) + ": " + what);
}

struct LineReader {
  std::ifstream in;
  std::string path;
  std::size_t line_no = 0;

  explicit LineReader(const std::string& p) : in(p, std::ios::binary), path(p) {
    if (!in) fail(ErrorCode::IoError, "cannot open '" + p + "'");
  }

  // Next content line, with comments and blanks skipped.
  bool next(std::string& line) {
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      const auto first = line.find_first_not_of(" \t");
      if (first == std::string::npos) continue;
      if (line[first] == '#') continue;
      return true;
    }
    return false;
  }
};

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  for (std::string& f : fields) {
    const auto b = f.find_first_not_of(" \t");
    const auto e = f.find_last_not_of(" \t");
    f = b == std::string::npos ? std::string() : f.substr(b, e - b + 1);
  }
  return fields;
}

double field_double(const std::string& text, const std::string& path, std::size_t line) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    parse_fail(path, line, "bad number '" + text + "'");
  }
  return out;
}

int64_t field_int(const std::string& text, const std::string& path, std::size_t line) {
  int64_t out = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    parse_fail(path, line, "bad integer '" + text + "'");
  }
  return out;
}

// Little-endian binary primitives.
void put_u16(std::string& out, uint16_t v) {
  out.push_back(char(v & 0xff));
  out.push_back(char(v >> 8));
}
void put_u32(std::string& out, uint32_t v) {
  for (int s = 0; s < 32; s += 8) out.push_back(char((v >> s) & 0xff));
}
void put_f32(std::string& out, float v) {
  const uint32_t bits = std::bit_cast<uint32_t>(v);
  put_u32(out, bits);
}

struct BinReader {
  std::string data;
  std::size_t pos = 0;
  std::string path;

  void need(std::size_t n, const char* what) {
    if (pos + n > data.size()) {
      fail(ErrorCode::ParseError, path + ": truncated header (" + what + ")");
    }
  }
  uint16_t u16(const char* what) {
    need(2, what);
    const uint16_t v = uint16_t(uint8_t(data[pos])) | uint16_t(uint8_t(data[pos + 1])) << 8;
    pos += 2;
    return v;
  }
  uint32_t u32(const char* what) {
    need(4, what);
    uint32_t v = 0;
    for (int k = 0; k < 4; ++k) v |= uint32_t(uint8_t(data[pos + k])) << (8 * k);
    pos += 4;
    return v;
  }
  float f32() {
    uint32_t v = 0;
    for (int k = 0; k < 4; ++k) v |= uint32_t(uint8_t(data[pos + k])) << (8 * k);
    pos += 4;
    return std::bit_cast<float>(v);
  }
};

BinReader slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoError, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return BinReader{buf.str(), 0, path};
}

void dump(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::IoError, "cannot write '" + path + "'");
  out.write(bytes.data(), std::streamsize(bytes.size()));
  if (!out) fail(ErrorCode::IoError, "write failed for '" + path + "'");
}

}  // namespace

std::string format_number(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::vector<Detection> read_detections(const std::string& path) {
  LineReader reader(path);
  std::vector<Detection> dets;
  std::string line;
  int64_t prev_frame = 0;
  bool have_prev = false;
  while (reader.next(line)) {
    const auto fields = split_fields(line);
    if (fields.size() != 7) {
      parse_fail(path, reader.line_no, "expected 7 comma-separated fields");
    }
    Detection d;
    d.frame = field_int(fields[0], path, reader.line_no);
    d.box.x1 = field_double(fields[1], path, reader.line_no);
    d.box.y1 = field_double(fields[2], path, reader.line_no);
    d.box.x2 = field_double(fields[3], path, reader.line_no);
    d.box.y2 = field_double(fields[4], path, reader.line_no);
    d.confidence = field_double(fields[5], path, reader.line_no);
    d.class_id = field_int(fields[6], path, reader.line_no);
    if (!d.box.valid()) parse_fail(path, reader.line_no, "degenerate bounding box");
    if (!(d.confidence >= 0.0 && d.confidence <= 1.0)) {
      parse_fail(path, reader.line_no, "confidence outside [0,1]");
    }
    if (have_prev && d.frame < prev_frame) {
      parse_fail(path, reader.line_no, "frames must be nondecreasing");
    }
    prev_frame = d.frame;
    have_prev = true;
    d.embedding_row = dets.size();
    dets.push_back(d);
  }
  return dets;
}

void write_detections(const std::string& path, const std::vector<Detection>& dets) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::IoError, "cannot write '" + path + "'");
  out << "# frame,x1,y1,x2,y2,confidence,class_id\n";
  for (const Detection& d : dets) {
    out << d.frame << ',' << format_number(d.box.x1) << ',' << format_number(d.box.y1)
        << ',' << format_number(d.box.x2) << ',' << format_number(d.box.y2) << ','
        << format_number(d.confidence) << ',' << d.class_id << '\n';
  }
  if (!out) fail(ErrorCode::IoError, "write failed for '" + path + "'");
}

std::vector<Embedding> read_embeddings(const std::string& path) {
  BinReader r = slurp(path);
  r.need(4, "magic");
  if (r.data.compare(0, 4, "S3EM") != 0) {
    fail(ErrorCode::ParseError, path + ": bad magic, expected S3EM");
  }
  r.pos = 4;
  const uint16_t version = r.u16("version");
  if (version != 1) {
    fail(ErrorCode::ParseError, path + ": unsupported version " + std::to_string(version));
  }
  const uint32_t count = r.u32("count");
  const uint32_t dim = r.u32("dim");
  const std::size_t expected = std::size_t(count) * dim * 4;
  const std::size_t remaining = r.data.size() - r.pos;
  if (remaining < expected) {
    fail(ErrorCode::CountMismatch,
         path + ": payload truncated, header promises " + std::to_string(count) + "x" +
             std::to_string(dim) + " floats but " + std::to_string(remaining / 4) +
             " remain");
  }
  if (remaining > expected) {
    fail(ErrorCode::ParseError, path + ": trailing bytes after payload");
  }
  std::vector<Embedding> embs(count, Embedding(dim));
  for (uint32_t i = 0; i < count; ++i) {
    for (uint32_t k = 0; k < dim; ++k) {
      const float v = r.f32();
      if (!std::isfinite(v)) {
        fail(ErrorCode::ParseError, path + ": non-finite embedding value");
      }
      embs[i][k] = double(v);
    }
  }
  return embs;
}

void write_embeddings(const std::string& path, const std::vector<Embedding>& embs) {
  const std::size_t dim = embs.empty() ? 0 : embs.front().size();
  std::string bytes;
  bytes.reserve(14 + embs.size() * dim * 4);
  bytes += "S3EM";
  put_u16(bytes, 1);
  put_u32(bytes, uint32_t(embs.size()));
  put_u32(bytes, uint32_t(dim));
  for (const Embedding& e : embs) {
    if (e.size() != dim) {
      fail(ErrorCode::DimensionMismatch, "write_embeddings: ragged embedding rows");
    }
    for (double v : e) put_f32(bytes, float(v));
  }
  dump(path, bytes);
}

MotionField read_grid(const std::string& path) {
  BinReader r = slurp(path);
  r.need(4, "magic");
  if (r.data.compare(0, 4, "S3GR") != 0) {
    fail(ErrorCode::ParseError, path + ": bad magic, expected S3GR");
  }
  r.pos = 4;
  const uint16_t version = r.u16("version");
  if (version != 1) {
    fail(ErrorCode::ParseError, path + ": unsupported version " + std::to_string(version));
  }
  const uint32_t width = r.u32("width");
  const uint32_t height = r.u32("height");
  const uint32_t channels = r.u32("channels");
  if (channels != 1 && channels != 2) {
    fail(ErrorCode::ParseError, path + ": channels must be 1 or 2");
  }
  const std::size_t values = std::size_t(width) * height * channels;
  if (r.data.size() - r.pos != values * 4) {
    fail(ErrorCode::ParseError, path + ": payload size does not match header");
  }
  MotionField grid;
  grid.width = int(width);
  grid.height = int(height);
  grid.channels = int(channels);
  grid.values.resize(values);
  for (std::size_t i = 0; i < values; ++i) {
    grid.values[i] = r.f32();
    if (!std::isfinite(grid.values[i])) {
      fail(ErrorCode::ParseError, path + ": non-finite grid value");
    }
  }
  return grid;
}

void write_grid(const std::string& path, const MotionField& grid) {
  std::string bytes;
  bytes.reserve(18 + grid.values.size() * 4);
  bytes += "S3GR";
  put_u16(bytes, 1);
  put_u32(bytes, uint32_t(grid.width));
  put_u32(bytes, uint32_t(grid.height));
  put_u32(bytes, uint32_t(grid.channels));
  if (grid.values.size() != std::size_t(grid.width) * grid.height * grid.channels) {
    fail(ErrorCode::DimensionMismatch, "write_grid: value count does not match header");
  }
  for (float v : grid.values) put_f32(bytes, v);
  dump(path, bytes);
}

TrackOutput read_tracks(const std::string& path) {
  LineReader reader(path);
  TrackOutput tracks;
  std::string line;
  std::set<std::pair<int64_t, int64_t>> seen;  // (frame, id)
  while (reader.next(line)) {
    const auto fields = split_fields(line);
    if (fields.size() != 6) {
      parse_fail(path, reader.line_no, "expected 6 comma-separated fields");
    }
    TrackRecord r;
    r.frame = field_int(fields[0], path, reader.line_no);
    r.track_id = field_int(fields[1], path, reader.line_no);
    r.box.x1 = field_double(fields[2], path, reader.line_no);
    r.box.y1 = field_double(fields[3], path, reader.line_no);
    r.box.x2 = field_double(fields[4], path, reader.line_no);
    r.box.y2 = field_double(fields[5], path, reader.line_no);
    if (r.track_id <= 0) parse_fail(path, reader.line_no, "track ids must be positive");
    if (!r.box.valid()) parse_fail(path, reader.line_no, "degenerate bounding box");
    if (!seen.insert({r.frame, r.track_id}).second) {
      parse_fail(path, reader.line_no, "duplicate track id within a frame");
    }
    tracks.push_back(r);
  }
  return tracks;
}

void write_tracks(const std::string& path, const TrackOutput& tracks) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::IoError, "cannot write '" + path + "'");
  out << "# frame,track_id,x1,y1,x2,y2\n";
  for (const TrackRecord& r : tracks) {
    out << r.frame << ',' << r.track_id << ',' << format_number(r.box.x1) << ','
        << format_number(r.box.y1) << ',' << format_number(r.box.x2) << ','
        << format_number(r.box.y2) << '\n';
  }
  if (!out) fail(ErrorCode::IoError, "write failed for '" + path + "'");
}

std::vector<std::pair<std::size_t, std::size_t>> read_labels(const std::string& path) {
  LineReader reader(path);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::string line;
  while (reader.next(line)) {
    const auto fields = split_fields(line);
    if (fields.size() != 2) parse_fail(path, reader.line_no, "expected ref_idx,tgt_idx");
    const int64_t a = field_int(fields[0], path, reader.line_no);
    const int64_t b = field_int(fields[1], path, reader.line_no);
    if (a < 0 || b < 0) parse_fail(path, reader.line_no, "indices must be nonnegative");
    pairs.emplace_back(std::size_t(a), std::size_t(b));
  }
  return pairs;
}

void write_labels(const std::string& path,
                  const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::IoError, "cannot write '" + path + "'");
  out << "# ref_idx,tgt_idx\n";
  for (const auto& [a, b] : pairs) out << a << ',' << b << '\n';
  if (!out) fail(ErrorCode::IoError, "write failed for '" + path + "'");
}

void write_report(const std::string& path,
                  const std::vector<std::pair<std::string, std::string>>& entries) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::IoError, "cannot write '" + path + "'");
  for (const auto& [key, value] : entries) out << key << '=' << value << '\n';
  if (!out) fail(ErrorCode::IoError, "write failed for '" + path + "'");
}

MotionField mask_to_grid(const OcclusionMask& mask) {
  MotionField grid = MotionField::disparity(mask.width, mask.height);
  for (std::size_t i = 0; i < mask.bits.size(); ++i) {
    grid.values[i] = mask.bits[i] ? 1.0f : 0.0f;
  }
  return grid;
}

OcclusionMask grid_to_mask(const MotionField& grid) {
  if (grid.channels != 1) {
    fail(ErrorCode::DimensionMismatch, "grid_to_mask: mask grids must be 1-channel");
  }
  OcclusionMask mask;
  mask.width = grid.width;
  mask.height = grid.height;
  mask.bits.resize(grid.values.size());
  for (std::size_t i = 0; i < grid.values.size(); ++i) {
    const float v = grid.values[i];
    if (v != 0.0f && v != 1.0f) {
      fail(ErrorCode::ParseError, "grid_to_mask: mask values must be 0 or 1");
    }
    mask.bits[i] = v == 1.0f ? 1 : 0;
  }
  return mask;
}

}  // namespace ott
