// Copyright 2026 The plenhance Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <openssl/evp.h>

#include <filesystem>
#include <iomanip>
#include <sstream>

#include "plenhance/io.hpp"
#include "plenhance/projection.hpp"

using namespace plenhance;
namespace fs = std::filesystem;

namespace {

const fs::path kDir = PLENHANCE_GOLDEN_DIR;

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) {
    os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  }
  return os.str();
}

std::string golden(const char* name, const char* sha) {
  const std::string bytes = io::read_file(kDir / name);
  CHECK(sha256_hex(bytes) == sha);
  return bytes;
}

}  // namespace

TEST_CASE("golden points") {
  const std::string bytes = golden(
      "points.plpc", "13cc83a143dcfa759aa738c6273d06e96ec65d9047e47b68875a894d825f3e76");
  const PointCloud cloud = io::decode_points(bytes);
  const PointCloud want({{0.0F, 0.0F, 10.0F},
                         {-1.5F, 0.25F, 7.75F},
                         {3.0F, -2.0F, 12.5F},
                         {1e-3F, 1e3F, -4.0F}});
  CHECK(cloud == want);
  CHECK(io::encode_points(cloud) == bytes);
}

TEST_CASE("golden labels") {
  const std::string bytes = golden(
      "labels.pllb", "5181821ed8ab7240ac442522ae8300994b9fc00a3537b6e14aeeb46a61a8b070");
  const LabelVector labels = io::decode_labels(bytes);
  CHECK(labels == LabelVector({0, -1, 4, 2, -1}, 5));
  CHECK(io::encode_labels(labels) == bytes);
}

TEST_CASE("golden masks") {
  const std::string bytes = golden(
      "masks.json", "c9f2a1870865d4c87761d07c90d3258ea9f3b77f641be0b7bc083d77cd128e5d");
  const MaskSet masks = io::read_masks(kDir / "masks.json");
  REQUIRE(masks.size() == 3);
  CHECK(masks.image_height() == 3);
  CHECK(masks.image_width() == 4);
  CHECK(masks[0].id() == 0);
  CHECK(std::vector<std::uint8_t>(masks[0].bitmap().begin(), masks[0].bitmap().end()) ==
        std::vector<std::uint8_t>{0, 1, 1, 0, 0, 0, 1, 0, 0, 0, 0, 0});
  CHECK(masks[1].id() == 7);
  CHECK(masks[1].area() == 12);
  CHECK(masks[2].id() == 3);
  CHECK(masks[2].area() == 0);
  CHECK(io::masks_to_json(masks).dump() + "\n" == bytes);
}

TEST_CASE("golden calibration") {
  const std::string bytes = golden(
      "calib.json", "3b1dbfc0b0e6f10a9b601dec5b5d328e1da9fd2e78f4c259ece8c6fad1e9b1b9");
  const CameraModel cam = io::read_calibration(kDir / "calib.json");
  CHECK(cam.projection() ==
        std::array<double, 12>{100, 0, 50, -60, 0, 100, 50, 30, 0, 0, 1, 0});
  CHECK(cam.image_height() == 100);
  CHECK(cam.image_width() == 100);
  // (0, 0, 10): a = 500 - 60, b = 500 + 30, d = 10.
  CHECK(project_point({0, 0, 10}, cam) == Pixel{44, 53});
  CHECK(io::calibration_to_json(cam).dump() + "\n" == bytes);
}

TEST_CASE("file writers reproduce golden bytes") {
  const fs::path dir = fs::temp_directory_path() / "plenhance_golden_rt";
  fs::create_directories(dir);
  io::write_points(dir / "p", io::read_points(kDir / "points.plpc"));
  io::write_labels(dir / "l", io::read_labels(kDir / "labels.pllb"));
  io::write_masks(dir / "m", io::read_masks(kDir / "masks.json"));
  io::write_calibration(dir / "c", io::read_calibration(kDir / "calib.json"));
  CHECK(io::read_file(dir / "p") == io::read_file(kDir / "points.plpc"));
  CHECK(io::read_file(dir / "l") == io::read_file(kDir / "labels.pllb"));
  CHECK(io::read_file(dir / "m") == io::read_file(kDir / "masks.json"));
  CHECK(io::read_file(dir / "c") == io::read_file(kDir / "calib.json"));
  fs::remove_all(dir);
}
