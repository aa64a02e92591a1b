/*
 Copyright 2026 The crosspaint authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      http://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#pragma once

#include "crosspaint/roaug.hpp"
#include "crosspaint/viaug.hpp"

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace crosspaint::stage {

/// Wire format for external stage plug-ins (stdin/stdout of a subprocess):
///
///   message  := u32-LE total_length, payload
///   payload  := u32-LE header_length, header (UTF-8 JSON), blobs
///
/// The header's "blobs" array lists the name and byte length of each binary
/// blob, in payload order. Frames travel as a PNG blob ("rgb"), an optional
/// depth blob ("depth", DPTH format) and an optional mask PNG ("mask"), with
/// camera and pose metadata in the header. Requests carry an "op" field
/// ("mask", "translate", "inpaint", "synthesize"); responses either mirror the
/// op with result blobs or carry {"error": "..."}.
struct StageMessage {
    nlohmann::json header = nlohmann::json::object();
    std::vector<std::pair<std::string, std::vector<std::uint8_t>>> blobs;

    const std::vector<std::uint8_t>* blob(const std::string& name) const;
};

std::vector<std::uint8_t> encode_message(const StageMessage& msg);
StageMessage decode_message(const std::vector<std::uint8_t>& payload);

/// Stream helpers; read_message returns false on clean EOF and throws on a
/// truncated message.
void write_message(std::ostream& out, const StageMessage& msg);
bool read_message(std::istream& in, StageMessage& msg);

/// Frame <-> message payload helpers shared by both endpoints.
void pack_frame(StageMessage& msg, const raster::Frame& frame);
raster::Frame unpack_frame(const StageMessage& msg);

/// Runs an external plug-in executable and exchanges one message per request
/// over its stdin/stdout.
class ExternalStageProcess {
public:
    explicit ExternalStageProcess(std::vector<std::string> argv);
    ~ExternalStageProcess();
    ExternalStageProcess(const ExternalStageProcess&) = delete;
    ExternalStageProcess& operator=(const ExternalStageProcess&) = delete;

    StageMessage request(const StageMessage& msg);

private:
    int pid_ = -1;
    int to_child_ = -1;
    int from_child_ = -1;
};

/// Segmenter backed by an external plug-in.
class ExternalSegmenter : public roaug::Segmenter {
public:
    explicit ExternalSegmenter(std::vector<std::string> argv) : proc_(std::move(argv)) {}
    img::MaskImage mask(const raster::Frame& frame) override;

private:
    ExternalStageProcess proc_;
};

/// ViewSynthesizer backed by an external plug-in.
class ExternalViewSynthesizer : public viaug::ViewSynthesizer {
public:
    explicit ExternalViewSynthesizer(std::vector<std::string> argv)
        : proc_(std::move(argv)) {}
    raster::Frame synthesize(const raster::Frame& frame,
                             const geom::RigidTransform& perturbation,
                             viaug::HoleMap* holes = nullptr) override;

private:
    ExternalStageProcess proc_;
};

}  // namespace crosspaint::stage
