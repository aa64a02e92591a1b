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

// Minimal external stage plug-in used by the protocol tests: answers "mask"
// with a non-black-pixel mask and "synthesize" by echoing the frame with the
// perturbed camera pose.

#include "crosspaint/stage_protocol.hpp"

#include <iostream>

using namespace crosspaint;

int main() {
    stage::StageMessage req;
    while (stage::read_message(std::cin, req)) {
        stage::StageMessage resp;
        try {
            const std::string op = req.header.at("op");
            if (op == "mask") {
                const raster::Frame frame = stage::unpack_frame(req);
                img::MaskImage mask(frame.rgb.width, frame.rgb.height);
                for (int y = 0; y < frame.rgb.height; ++y) {
                    for (int x = 0; x < frame.rgb.width; ++x) {
                        const bool lit = frame.rgb.at(x, y, 0) || frame.rgb.at(x, y, 1) ||
                                         frame.rgb.at(x, y, 2);
                        mask.set(x, y, lit);
                    }
                }
                resp.header["op"] = "mask";
                resp.blobs.emplace_back("mask", img::encode_png(mask));
            } else if (op == "synthesize") {
                raster::Frame frame = stage::unpack_frame(req);
                const auto pv =
                    req.header.at("perturbation").get<std::vector<double>>();
                std::array<double, 7> seven{};
                std::copy(pv.begin(), pv.end(), seven.begin());
                frame.extrinsics.pose =
                    frame.extrinsics.pose * geom::Pose::from_seven(seven);
                resp.header["op"] = "synthesize";
                stage::pack_frame(resp, frame);
                resp.blobs.emplace_back(
                    "holes",
                    img::encode_png(img::MaskImage(frame.rgb.width, frame.rgb.height)));
            } else {
                resp.header["error"] = "unknown op: " + op;
            }
        } catch (const std::exception& e) {
            resp.header = {{"error", e.what()}};
            resp.blobs.clear();
        }
        stage::write_message(std::cout, resp);
    }
    return 0;
}
