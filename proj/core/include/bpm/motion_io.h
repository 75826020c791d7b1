#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "bpm/features.h"
#include "bpm/motion.h"

namespace bpm {

// Binary layout shared by motion, feature and embedding files:
//
//   magic      4 bytes   "MOFG" (motion) or "MOFT" (feature / matrix)
//   version    u16       kFormatVersion
//   fps        f32
//   rows       u32       frame count (or matrix rows)
//   width      u16       joint count (motion) or channels per row
//   payload    f32[...]  little-endian, row-major
//
// A motion row is root position (3), root quaternion w-x-y-z (4) and the 21
// local joint quaternions w-x-y-z, i.e. 91 floats. The motion id and skeleton
// live in a JSON sidecar next to the binary file (`<file>.json`).
inline constexpr uint16_t kFormatVersion = 1;
inline constexpr int kMotionRowWidth = 3 + 4 + 4 * kNumBodyJoints;

std::string encode_motion_binary(const MotionSequence& motion);
// Skeleton and id are taken from the arguments; the binary holds neither.
MotionSequence decode_motion_binary(const std::string& bytes, const Skeleton& skeleton,
                                    const std::string& id);

std::string encode_matrix_binary(const Eigen::MatrixXd& rows, double fps = 0.0);
Eigen::MatrixXd decode_matrix_binary(const std::string& bytes, double* fps = nullptr);

std::string encode_features_binary(const FeatureSequence& features);
FeatureSequence decode_features_binary(const std::string& bytes);

std::filesystem::path sidecar_path(const std::filesystem::path& motion_file);

void write_motion(const std::filesystem::path& path, const MotionSequence& motion);
MotionSequence read_motion(const std::filesystem::path& path);

void write_features(const std::filesystem::path& path, const FeatureSequence& features);
FeatureSequence read_features(const std::filesystem::path& path);

void write_matrix(const std::filesystem::path& path, const Eigen::MatrixXd& rows);
Eigen::MatrixXd read_matrix(const std::filesystem::path& path);

// Every `*.mofg` file in `dir`, sorted by file name.
std::vector<std::filesystem::path> list_motion_files(const std::filesystem::path& dir);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& bytes);

}  // namespace bpm
