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

#include "crosspaint/stage_protocol.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace crosspaint::stage {

using json = nlohmann::json;

namespace {

void put_u32_le(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v & 0xFF));
    out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xFF));
    out.push_back(static_cast<std::uint8_t>((v >> 16) & 0xFF));
    out.push_back(static_cast<std::uint8_t>(v >> 24));
}

std::uint32_t get_u32_le(const std::uint8_t* p) {
    return std::uint32_t(p[0]) | (std::uint32_t(p[1]) << 8) | (std::uint32_t(p[2]) << 16) |
           (std::uint32_t(p[3]) << 24);
}

json pose_json(const geom::Pose& p) {
    const auto v = p.to_seven();
    return json(std::vector<double>(v.begin(), v.end()));
}

geom::Pose pose_from(const json& j) {
    const auto v = j.get<std::vector<double>>();
    std::array<double, 7> a;
    std::copy(v.begin(), v.end(), a.begin());
    return geom::Pose::from_seven(a);
}

ssize_t read_full(int fd, std::uint8_t* buf, std::size_t n) {
    std::size_t got = 0;
    while (got < n) {
        const ssize_t r = ::read(fd, buf + got, n - got);
        if (r < 0) {
            throw std::runtime_error("stage protocol: read failed");
        }
        if (r == 0) {
            break;
        }
        got += static_cast<std::size_t>(r);
    }
    return static_cast<ssize_t>(got);
}

void write_full(int fd, const std::uint8_t* buf, std::size_t n) {
    std::size_t sent = 0;
    while (sent < n) {
        const ssize_t r = ::write(fd, buf + sent, n - sent);
        if (r <= 0) {
            throw std::runtime_error("stage protocol: write failed");
        }
        sent += static_cast<std::size_t>(r);
    }
}

}  // namespace

const std::vector<std::uint8_t>* StageMessage::blob(const std::string& name) const {
    for (const auto& [n, data] : blobs) {
        if (n == name) {
            return &data;
        }
    }
    return nullptr;
}

std::vector<std::uint8_t> encode_message(const StageMessage& msg) {
    json header = msg.header;
    json blob_list = json::array();
    for (const auto& [name, data] : msg.blobs) {
        blob_list.push_back(json{{"name", name}, {"size", data.size()}});
    }
    header["blobs"] = blob_list;
    const std::string header_text = header.dump();

    std::vector<std::uint8_t> payload;
    put_u32_le(payload, static_cast<std::uint32_t>(header_text.size()));
    payload.insert(payload.end(), header_text.begin(), header_text.end());
    for (const auto& [name, data] : msg.blobs) {
        payload.insert(payload.end(), data.begin(), data.end());
    }
    return payload;
}

StageMessage decode_message(const std::vector<std::uint8_t>& payload) {
    if (payload.size() < 4) {
        throw std::runtime_error("stage protocol: payload too short");
    }
    const std::uint32_t header_len = get_u32_le(payload.data());
    if (4 + header_len > payload.size()) {
        throw std::runtime_error("stage protocol: header exceeds payload");
    }
    StageMessage msg;
    msg.header = json::parse(payload.begin() + 4, payload.begin() + 4 + header_len);
    std::size_t pos = 4 + header_len;
    if (msg.header.contains("blobs")) {
        for (const auto& b : msg.header.at("blobs")) {
            const std::size_t size = b.at("size");
            if (pos + size > payload.size()) {
                throw std::runtime_error("stage protocol: blob exceeds payload");
            }
            msg.blobs.emplace_back(
                b.at("name").get<std::string>(),
                std::vector<std::uint8_t>(payload.begin() + pos, payload.begin() + pos + size));
            pos += size;
        }
        msg.header.erase("blobs");
    }
    return msg;
}

void write_message(std::ostream& out, const StageMessage& msg) {
    const auto payload = encode_message(msg);
    std::vector<std::uint8_t> framed;
    put_u32_le(framed, static_cast<std::uint32_t>(payload.size()));
    framed.insert(framed.end(), payload.begin(), payload.end());
    out.write(reinterpret_cast<const char*>(framed.data()),
              static_cast<std::streamsize>(framed.size()));
    out.flush();
}

bool read_message(std::istream& in, StageMessage& msg) {
    std::uint8_t len_buf[4];
    in.read(reinterpret_cast<char*>(len_buf), 4);
    if (in.gcount() == 0 && in.eof()) {
        return false;
    }
    if (in.gcount() != 4) {
        throw std::runtime_error("stage protocol: truncated length prefix");
    }
    const std::uint32_t len = get_u32_le(len_buf);
    std::vector<std::uint8_t> payload(len);
    in.read(reinterpret_cast<char*>(payload.data()), len);
    if (static_cast<std::uint32_t>(in.gcount()) != len) {
        throw std::runtime_error("stage protocol: truncated payload");
    }
    msg = decode_message(payload);
    return true;
}

void pack_frame(StageMessage& msg, const raster::Frame& frame) {
    msg.header["camera"] = json{{"width", frame.intrinsics.width},
                                {"height", frame.intrinsics.height},
                                {"fov_v_deg", frame.intrinsics.fov_v_deg},
                                {"pose", pose_json(frame.extrinsics.pose)}};
    msg.header["gripper_pose"] = pose_json(frame.gripper_pose);
    msg.blobs.emplace_back("rgb", img::encode_png(frame.rgb));
    msg.blobs.emplace_back("depth", img::encode_depth(frame.depth));
    msg.blobs.emplace_back("mask", img::encode_png(frame.mask));
}

raster::Frame unpack_frame(const StageMessage& msg) {
    raster::Frame frame;
    const json& cj = msg.header.at("camera");
    frame.intrinsics =
        cam::CameraIntrinsics::make(cj.at("width"), cj.at("height"), cj.at("fov_v_deg"));
    frame.extrinsics.pose = pose_from(cj.at("pose"));
    frame.gripper_pose = pose_from(msg.header.at("gripper_pose"));
    if (const auto* rgb = msg.blob("rgb")) {
        frame.rgb = img::decode_png(*rgb);
    }
    if (const auto* depth = msg.blob("depth")) {
        frame.depth = img::decode_depth(*depth);
    }
    if (const auto* mask = msg.blob("mask")) {
        frame.mask = img::decode_png_mask(*mask);
    }
    return frame;
}

ExternalStageProcess::ExternalStageProcess(std::vector<std::string> argv) {
    if (argv.empty()) {
        throw std::invalid_argument("external stage: empty argv");
    }
    int in_pipe[2], out_pipe[2];
    if (pipe(in_pipe) != 0 || pipe(out_pipe) != 0) {
        throw std::runtime_error("external stage: pipe() failed");
    }
    const pid_t pid = fork();
    if (pid < 0) {
        throw std::runtime_error("external stage: fork() failed");
    }
    if (pid == 0) {
        dup2(in_pipe[0], STDIN_FILENO);
        dup2(out_pipe[1], STDOUT_FILENO);
        close(in_pipe[0]);
        close(in_pipe[1]);
        close(out_pipe[0]);
        close(out_pipe[1]);
        std::vector<char*> cargv;
        for (auto& a : argv) {
            cargv.push_back(a.data());
        }
        cargv.push_back(nullptr);
        execvp(cargv[0], cargv.data());
        _exit(127);
    }
    pid_ = pid;
    to_child_ = in_pipe[1];
    from_child_ = out_pipe[0];
    close(in_pipe[0]);
    close(out_pipe[1]);
}

ExternalStageProcess::~ExternalStageProcess() {
    if (to_child_ >= 0) {
        close(to_child_);
    }
    if (from_child_ >= 0) {
        close(from_child_);
    }
    if (pid_ > 0) {
        int status = 0;
        waitpid(pid_, &status, 0);
    }
}

StageMessage ExternalStageProcess::request(const StageMessage& msg) {
    const auto payload = encode_message(msg);
    std::vector<std::uint8_t> framed;
    put_u32_le(framed, static_cast<std::uint32_t>(payload.size()));
    framed.insert(framed.end(), payload.begin(), payload.end());
    write_full(to_child_, framed.data(), framed.size());

    std::uint8_t len_buf[4];
    if (read_full(from_child_, len_buf, 4) != 4) {
        throw std::runtime_error("external stage: plug-in closed the pipe");
    }
    const std::uint32_t len = get_u32_le(len_buf);
    std::vector<std::uint8_t> response(len);
    if (read_full(from_child_, response.data(), len) != static_cast<ssize_t>(len)) {
        throw std::runtime_error("external stage: truncated response");
    }
    StageMessage out = decode_message(response);
    if (out.header.contains("error")) {
        throw std::runtime_error("external stage error: " +
                                 out.header.at("error").get<std::string>());
    }
    return out;
}

img::MaskImage ExternalSegmenter::mask(const raster::Frame& frame) {
    StageMessage req;
    req.header["op"] = "mask";
    pack_frame(req, frame);
    const StageMessage resp = proc_.request(req);
    const auto* blob = resp.blob("mask");
    if (!blob) {
        throw std::runtime_error("external segmenter: response missing mask blob");
    }
    return img::decode_png_mask(*blob);
}

raster::Frame ExternalViewSynthesizer::synthesize(const raster::Frame& frame,
                                                  const geom::RigidTransform& perturbation,
                                                  viaug::HoleMap* holes) {
    StageMessage req;
    req.header["op"] = "synthesize";
    const auto seven = perturbation.to_seven();
    req.header["perturbation"] = std::vector<double>(seven.begin(), seven.end());
    pack_frame(req, frame);
    const StageMessage resp = proc_.request(req);

    raster::Frame out = unpack_frame(resp);
    out.gripper_pose = frame.gripper_pose;
    out.action = frame.action;
    if (holes) {
        if (const auto* hole_blob = resp.blob("holes")) {
            *holes = img::decode_png_mask(*hole_blob);
        } else {
            *holes = viaug::HoleMap(frame.rgb.width, frame.rgb.height, false);
        }
    }
    return out;
}

}  // namespace crosspaint::stage
