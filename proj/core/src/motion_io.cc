#include "bpm/motion_io.h"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "bpm/error.h"
#include "bpm/json_io.h"

namespace bpm {
namespace {

constexpr char kMotionMagic[4] = {'M', 'O', 'F', 'G'};
constexpr char kMatrixMagic[4] = {'M', 'O', 'F', 'T'};
constexpr size_t kHeaderSize = 4 + 2 + 4 + 4 + 2;

template <typename T>
void put(std::string& out, T value) {
  char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  out.append(bytes, sizeof(T));
}

class Reader {
 public:
  explicit Reader(const std::string& bytes) : bytes_(bytes) {}

  template <typename T>
  T get() {
    if (pos_ + sizeof(T) > bytes_.size()) {
      throw ParseError("byte " + std::to_string(pos_), "unexpected end of data");
    }
    char raw[sizeof(T)];
    std::memcpy(raw, bytes_.data() + pos_, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(raw, raw + sizeof(T));
    pos_ += sizeof(T);
    T value;
    std::memcpy(&value, raw, sizeof(T));
    return value;
  }

  size_t remaining() const { return bytes_.size() - pos_; }

 private:
  const std::string& bytes_;
  size_t pos_ = 0;
};

struct Header {
  double fps;
  uint32_t rows;
  uint16_t width;
};

void put_header(std::string& out, const char (&magic)[4], double fps, uint32_t rows,
                uint16_t width) {
  out.append(magic, 4);
  put<uint16_t>(out, kFormatVersion);
  put<float>(out, static_cast<float>(fps));
  put<uint32_t>(out, rows);
  put<uint16_t>(out, width);
}

Header get_header(Reader& in, const std::string& bytes, const char (&magic)[4]) {
  if (bytes.size() < kHeaderSize || std::memcmp(bytes.data(), magic, 4) != 0) {
    throw ParseError("header", std::string("expected magic ") + std::string(magic, 4));
  }
  for (int i = 0; i < 4; ++i) in.get<char>();
  const auto version = in.get<uint16_t>();
  if (version != kFormatVersion) {
    throw ParseError("header", "unsupported version " + std::to_string(version));
  }
  Header h;
  h.fps = in.get<float>();
  h.rows = in.get<uint32_t>();
  h.width = in.get<uint16_t>();
  return h;
}

Eigen::Quaterniond get_quat(Reader& in) {
  const double w = in.get<float>();
  const double x = in.get<float>();
  const double y = in.get<float>();
  const double z = in.get<float>();
  // float32 storage loses the unit norm beyond ~1e-7; renormalize on load.
  return Eigen::Quaterniond(w, x, y, z).normalized();
}

void put_quat(std::string& out, const Eigen::Quaterniond& q) {
  put<float>(out, static_cast<float>(q.w()));
  put<float>(out, static_cast<float>(q.x()));
  put<float>(out, static_cast<float>(q.y()));
  put<float>(out, static_cast<float>(q.z()));
}

}  // namespace

std::string encode_motion_binary(const MotionSequence& motion) {
  std::string out;
  out.reserve(kHeaderSize + motion.frames.size() * kMotionRowWidth * 4);
  put_header(out, kMotionMagic, motion.fps, static_cast<uint32_t>(motion.frames.size()),
             static_cast<uint16_t>(kNumJoints));
  for (const auto& f : motion.frames) {
    for (int i = 0; i < 3; ++i) put<float>(out, static_cast<float>(f.root_position[i]));
    put_quat(out, f.root_orientation);
    for (const auto& q : f.joint_rotations) put_quat(out, q);
  }
  return out;
}

MotionSequence decode_motion_binary(const std::string& bytes, const Skeleton& skeleton,
                                    const std::string& id) {
  Reader in(bytes);
  const Header h = get_header(in, bytes, kMotionMagic);
  if (h.width != kNumJoints) {
    throw ParseError("header", "expected " + std::to_string(kNumJoints) + " joints, got " +
                                   std::to_string(h.width));
  }
  if (in.remaining() != static_cast<size_t>(h.rows) * kMotionRowWidth * 4) {
    throw ParseError("payload", "size does not match frame count " + std::to_string(h.rows));
  }
  MotionSequence m;
  m.id = id;
  m.fps = h.fps;
  m.skeleton = skeleton;
  m.frames.resize(h.rows);
  for (auto& f : m.frames) {
    for (int i = 0; i < 3; ++i) f.root_position[i] = in.get<float>();
    f.root_orientation = get_quat(in);
    for (auto& q : f.joint_rotations) q = get_quat(in);
  }
  return m;
}

std::string encode_matrix_binary(const Eigen::MatrixXd& rows, double fps) {
  if (rows.cols() > 0xFFFF) throw Error("matrix width exceeds 65535 columns");
  std::string out;
  put_header(out, kMatrixMagic, fps, static_cast<uint32_t>(rows.rows()),
             static_cast<uint16_t>(rows.cols()));
  for (Eigen::Index r = 0; r < rows.rows(); ++r) {
    for (Eigen::Index c = 0; c < rows.cols(); ++c) put<float>(out, static_cast<float>(rows(r, c)));
  }
  return out;
}

Eigen::MatrixXd decode_matrix_binary(const std::string& bytes, double* fps) {
  Reader in(bytes);
  const Header h = get_header(in, bytes, kMatrixMagic);
  if (in.remaining() != static_cast<size_t>(h.rows) * h.width * 4) {
    throw ParseError("payload", "size does not match " + std::to_string(h.rows) + "x" +
                                    std::to_string(h.width));
  }
  if (fps) *fps = h.fps;
  Eigen::MatrixXd out(h.rows, h.width);
  for (uint32_t r = 0; r < h.rows; ++r) {
    for (uint16_t c = 0; c < h.width; ++c) out(r, c) = in.get<float>();
  }
  return out;
}

std::string encode_features_binary(const FeatureSequence& features) {
  Eigen::MatrixXd rows(features.frame_count(), FeatureLayout::kWidth);
  for (int t = 0; t < features.frame_count(); ++t) rows.row(t) = features.frames[t].transpose();
  return encode_matrix_binary(rows, 20.0);
}

FeatureSequence decode_features_binary(const std::string& bytes) {
  const Eigen::MatrixXd rows = decode_matrix_binary(bytes);
  if (rows.cols() != FeatureLayout::kWidth) {
    throw ParseError("header", "expected " + std::to_string(FeatureLayout::kWidth) +
                                   " channels, got " + std::to_string(rows.cols()));
  }
  FeatureSequence out;
  out.frames.resize(rows.rows());
  for (Eigen::Index t = 0; t < rows.rows(); ++t) out.frames[t] = rows.row(t).transpose();
  return out;
}

std::filesystem::path sidecar_path(const std::filesystem::path& motion_file) {
  std::filesystem::path p = motion_file;
  p += ".json";
  return p;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("short write to " + path.string());
}

void write_motion(const std::filesystem::path& path, const MotionSequence& motion) {
  write_file(path, encode_motion_binary(motion));
  nlohmann::json sidecar = {{"id", motion.id}, {"skeleton", skeleton_to_json(motion.skeleton)}};
  write_file(sidecar_path(path), sidecar.dump(2) + "\n");
}

MotionSequence read_motion(const std::filesystem::path& path) {
  Skeleton skeleton = Skeleton::standard();
  std::string id = path.stem().string();
  const auto side = sidecar_path(path);
  if (std::filesystem::exists(side)) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(read_file(side));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(side.string(), e.what());
    }
    if (j.contains("id")) id = j.at("id").get<std::string>();
    if (j.contains("skeleton")) skeleton = skeleton_from_json(j.at("skeleton"));
  }
  MotionSequence m = decode_motion_binary(read_file(path), skeleton, id);
  m.validate();
  return m;
}

void write_features(const std::filesystem::path& path, const FeatureSequence& features) {
  write_file(path, encode_features_binary(features));
}

FeatureSequence read_features(const std::filesystem::path& path) {
  return decode_features_binary(read_file(path));
}

void write_matrix(const std::filesystem::path& path, const Eigen::MatrixXd& rows) {
  write_file(path, encode_matrix_binary(rows));
}

Eigen::MatrixXd read_matrix(const std::filesystem::path& path) {
  return decode_matrix_binary(read_file(path));
}

std::vector<std::filesystem::path> list_motion_files(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw Error("not a directory: " + dir.string());
  std::vector<std::filesystem::path> out;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".mofg") out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace bpm
