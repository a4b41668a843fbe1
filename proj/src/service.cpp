#include "atp/service.hpp"

#include <fstream>
#include <sstream>

#include <httplib.h>
#include <json.hpp>

#include "atp/image_io.hpp"
#include "atp/pipeline.hpp"

namespace atp {

using nlohmann::ordered_json;

std::string tool_version() { return "0.1.0"; }

namespace {

ordered_json report_to_json(const VerifyReport& report) {
    ordered_json j;
    j["bit_error"] = report.bit_error;
    j["threshold"] = report.threshold;
    j["authorized"] = report.authorized;
    j["message_hex"] = report.message_extracted.to_hex();
    if (!report.reason.empty()) j["reason"] = report.reason;
    return j;
}

ordered_json verdict_to_json(const RequestVerdict& verdict) {
    ordered_json j;
    j["schema_version"] = 1;
    j["accepted"] = verdict.accepted;
    j["images"] = ordered_json::array();
    for (const VerifyReport& r : verdict.images) j["images"].push_back(report_to_json(r));
    return j;
}

VerifyReport policy_rejection(std::string reason, double threshold) {
    VerifyReport report;
    report.bit_error = 1.0;
    report.threshold = threshold;
    report.authorized = false;
    report.reason = std::move(reason);
    return report;
}

ImageTensor decode_any(const std::string& content) {
    std::vector<uint8_t> bytes(content.begin(), content.end());
    if (bytes.size() >= 8 && bytes[0] == 0x89 && bytes[1] == 'P') return decode_png(bytes);
    if (bytes.size() >= 2 && bytes[0] == 0xFF && bytes[1] == 0xD8) return decode_jpeg(bytes);
    throw std::runtime_error("unrecognized image format");
}

}  // namespace

std::string verify_report_json(const VerifyReport& report) {
    return report_to_json(report).dump();
}

std::string request_verdict_json(const RequestVerdict& verdict) {
    return verdict_to_json(verdict).dump();
}

GateConfig load_gate_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("gate config: cannot open " + path);
    nlohmann::json j = nlohmann::json::parse(in);

    GateConfig config;
    std::string listen = j.value("listen", config.host + ":" + std::to_string(config.port));
    if (const char* env = std::getenv("ATP_LISTEN")) listen = env;
    std::size_t colon = listen.rfind(':');
    if (colon == std::string::npos) throw std::runtime_error("gate config: listen must be host:port");
    config.host = listen.substr(0, colon);
    config.port = std::stoi(listen.substr(colon + 1));
    config.threshold = j.value("threshold", kDefaultBitErrorThreshold);
    config.max_image_bytes = j.value("max_image_bytes", config.max_image_bytes);

    if (j.contains("keys")) {
        for (auto& [id, entry] : j["keys"].items()) {
            GateConfig::KeyEntry key_entry;
            key_entry.key.secret = parse_secret_hex(entry.at("secret_hex").get<std::string>());
            key_entry.key.p = entry.value("p", key_entry.key.p);
            key_entry.key.block = entry.value("N", key_entry.key.block);
            key_entry.key.message_len = entry.value("L", key_entry.key.message_len);
            key_entry.key.delta = entry.value("delta", key_entry.key.delta);
            key_entry.key.validate();
            key_entry.expected = AuthMessage::from_hex(entry.at("message_hex").get<std::string>(),
                                                       key_entry.key.message_len);
            config.keys.emplace(id, std::move(key_entry));
        }
    }
    return config;
}

void attach_gate_routes(httplib::Server& server, const GateConfig& config) {
    server.set_payload_max_length(config.max_image_bytes * 8 + (1 << 20));

    server.Get("/v1/healthz", [&config](const httplib::Request&, httplib::Response& res) {
        ordered_json j;
        j["status"] = "ok";
        j["version"] = tool_version();
        j["degraded"] = config.keys.empty();
        res.set_content(j.dump(), "application/json");
    });

    server.Post("/v1/verify", [&config](const httplib::Request& req, httplib::Response& res) {
        if (!req.has_file("key_id")) {
            res.status = 400;
            res.set_content(R"({"error":"missing key_id"})", "application/json");
            return;
        }
        auto entry = config.keys.find(req.get_file_value("key_id").content);
        if (entry == config.keys.end()) {
            res.status = 404;
            res.set_content(R"({"error":"unknown key_id"})", "application/json");
            return;
        }

        std::vector<httplib::MultipartFormData> uploads = req.get_file_values("images");
        if (uploads.empty()) uploads = req.get_file_values("images[]");
        if (uploads.empty()) {
            res.status = 400;
            res.set_content(R"({"error":"no images"})", "application/json");
            return;
        }

        const AtpKey& key = entry->second.key;
        const AuthMessage& expected = entry->second.expected;
        RequestVerdict verdict;
        verdict.accepted = true;
        bool oversize = false;
        for (const auto& upload : uploads) {
            if (upload.content.size() > config.max_image_bytes) {
                oversize = true;
                break;
            }
            VerifyReport report;
            try {
                ImageTensor img = decode_any(upload.content);
                report = verify_image(img, key, expected, config.threshold);
            } catch (const std::exception&) {
                report = policy_rejection("undecodable image", config.threshold);
            }
            verdict.images.push_back(std::move(report));
            verdict.accepted = verdict.accepted && verdict.images.back().authorized;
        }
        if (oversize) {
            res.status = 413;
            res.set_content(R"({"error":"image exceeds size cap"})", "application/json");
            return;
        }
        res.set_content(verdict_to_json(verdict).dump(), "application/json");
    });

    server.Post("/v1/protect", [&config](const httplib::Request& req, httplib::Response& res) {
        if (!req.has_file("key_id")) {
            res.status = 400;
            res.set_content(R"({"error":"missing key_id"})", "application/json");
            return;
        }
        auto entry = config.keys.find(req.get_file_value("key_id").content);
        if (entry == config.keys.end()) {
            res.status = 404;
            res.set_content(R"({"error":"unknown key_id"})", "application/json");
            return;
        }
        if (!req.has_file("image")) {
            res.status = 422;
            res.set_content(R"({"error":"missing image"})", "application/json");
            return;
        }
        const auto upload = req.get_file_value("image");
        if (upload.content.size() > config.max_image_bytes) {
            res.status = 413;
            res.set_content(R"({"error":"image exceeds size cap"})", "application/json");
            return;
        }

        ProtectParams params;
        auto field = [&req](const char* name) -> std::string {
            return req.has_file(name) ? req.get_file_value(name).content : std::string();
        };
        try {
            if (std::string v = field("epsilon"); !v.empty()) params.epsilon = std::stod(v);
            if (std::string v = field("alpha"); !v.empty()) params.alpha = std::stod(v);
            if (std::string v = field("steps"); !v.empty()) params.steps = std::stoi(v);
            if (std::string v = field("seed"); !v.empty()) params.seed = std::stoull(v);
        } catch (const std::exception&) {
            res.status = 422;
            res.set_content(R"({"error":"bad pgd parameters"})", "application/json");
            return;
        }

        const AtpKey& key = entry->second.key;
        try {
            ImageTensor img = decode_any(upload.content);
            if (img.height % key.block != 0 || img.width % key.block != 0) {
                res.status = 422;
                res.set_content(R"({"error":"dimensions not divisible by block size"})",
                                "application/json");
                return;
            }
            ProtectResult result = protect_image(img, key, entry->second.expected, params);
            ImageTensor saved = quantize8(result.image);
            // Self-check before responding: the stored message must survive
            // the 8-bit round trip exactly.
            VerifyReport check = verify_image(saved, key, entry->second.expected, config.threshold);
            if (check.bit_error != 0.0) {
                res.status = 500;
                res.set_content(R"({"error":"self-check extraction failed"})", "application/json");
                return;
            }
            std::vector<uint8_t> png = encode_png(saved);
            res.set_content(std::string(png.begin(), png.end()), "image/png");
        } catch (const std::invalid_argument& e) {
            res.status = 422;
            res.set_content(std::string(R"({"error":")") + e.what() + R"("})",
                            "application/json");
        } catch (const std::exception&) {
            res.status = 422;
            res.set_content(R"({"error":"undecodable image"})", "application/json");
        }
    });
}

}  // namespace atp
