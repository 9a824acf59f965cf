#include "artic/frame_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <string>

#include "artic/errors.hpp"

namespace artic {

static_assert(std::endian::native == std::endian::little,
              "binary formats assume a little-endian host");

namespace {

class Writer {
 public:
  explicit Writer(const std::filesystem::path& path) : out_(path, std::ios::binary | std::ios::trunc) {
    if (!out_) throw Error("cannot open '" + path.string() + "' for writing");
  }
  template <typename T>
  void put(T v) {
    out_.write(reinterpret_cast<const char*>(&v), sizeof(T));
  }
  void magic(const char (&m)[5]) { out_.write(m, 4); }
  void finish(const std::filesystem::path& path) {
    out_.flush();
    if (!out_) throw Error("failed writing '" + path.string() + "'");
  }

 private:
  std::ofstream out_;
};

class Reader {
 public:
  Reader(const std::filesystem::path& path, const char* format) : path_(path), format_(format) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open '" + path.string() + "'");
    data_.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }
  void expect_magic(const char (&m)[5], std::uint32_t version) {
    if (data_.size() < 8 || std::memcmp(data_.data(), m, 4) != 0) {
      throw FormatError("'" + path_.string() + "': wrong magic for " + format_ + " file (expected \"" +
                        std::string(m, 4) + "\")");
    }
    pos_ = 4;
    const auto v = get<std::uint32_t>();
    if (v != version) {
      throw FormatError("'" + path_.string() + "': " + format_ + " version " + std::to_string(v) +
                        " unsupported (expected " + std::to_string(version) + ")");
    }
  }
  template <typename T>
  T get() {
    if (pos_ + sizeof(T) > data_.size()) {
      throw FormatError("'" + path_.string() + "': truncated " + format_ + " file");
    }
    T v;
    std::memcpy(&v, data_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }
  void expect_end() const {
    if (pos_ != data_.size()) throw FormatError("'" + path_.string() + "': trailing bytes");
  }

 private:
  std::filesystem::path path_;
  std::string format_;
  std::string data_;
  std::size_t pos_ = 0;
};

}  // namespace

void write_frame(const std::filesystem::path& path, const PointCloudFrame& frame) {
  frame.check();
  Writer w(path);
  w.magic("A4DF");
  w.put<std::uint32_t>(kFrameVersion);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(frame.size()));
  for (std::size_t i = 0; i < frame.size(); ++i) {
    for (int d = 0; d < 3; ++d) w.put<float>(static_cast<float>(frame.xyz[i][d]));
    for (int d = 0; d < 3; ++d) w.put<float>(static_cast<float>(frame.rgb[i][d]));
    w.put<std::uint16_t>(static_cast<std::uint16_t>(frame.semantic[i]));
    w.put<std::uint16_t>(0);
    w.put<std::uint32_t>(frame.instance[i]);
  }
  w.finish(path);
}

PointCloudFrame read_frame(const std::filesystem::path& path) {
  Reader r(path, "A4DF frame");
  r.expect_magic("A4DF", kFrameVersion);
  const auto n = r.get<std::uint32_t>();
  PointCloudFrame f;
  f.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    Vec3 p, c;
    for (int d = 0; d < 3; ++d) p[d] = r.get<float>();
    for (int d = 0; d < 3; ++d) c[d] = r.get<float>();
    const auto sem = r.get<std::uint16_t>();
    r.get<std::uint16_t>();
    const auto inst = r.get<std::uint32_t>();
    if (sem >= kNumClasses) throw FormatError("'" + path.string() + "': bad semantic label");
    f.push_back(p, c, static_cast<SemanticClass>(sem), inst);
  }
  r.expect_end();
  return f;
}

void write_prediction(const std::filesystem::path& path, const SegmentationResult& result) {
  result.check();
  Writer w(path);
  w.magic("A4DP");
  w.put<std::uint32_t>(kPredictionVersion);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(result.frames));
  w.put<std::uint32_t>(static_cast<std::uint32_t>(result.points));
  for (std::size_t i = 0; i < result.size(); ++i) {
    w.put<std::uint16_t>(static_cast<std::uint16_t>(result.semantic[i]));
    w.put<std::uint32_t>(result.instance[i]);
  }
  w.finish(path);
}

SegmentationResult read_prediction(const std::filesystem::path& path) {
  Reader r(path, "A4DP prediction");
  r.expect_magic("A4DP", kPredictionVersion);
  SegmentationResult out;
  out.frames = r.get<std::uint32_t>();
  out.points = r.get<std::uint32_t>();
  const auto n = out.frames * out.points;
  out.semantic.reserve(n);
  out.instance.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto sem = r.get<std::uint16_t>();
    if (sem >= kNumClasses) throw FormatError("'" + path.string() + "': bad semantic label");
    out.semantic.push_back(static_cast<SemanticClass>(sem));
    out.instance.push_back(r.get<std::uint32_t>());
  }
  r.expect_end();
  return out;
}

}  // namespace artic
